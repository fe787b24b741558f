//! Best rational approximation with a bounded denominator, via continued
//! fractions with semiconvergent truncation. Used to decide whether an
//! eigenvalue ratio is (close to) rational.

/// Closest fraction `num/den` to `x` among all fractions with
/// `1 <= den <= qmax`, in lowest terms. Ties prefer the smaller denominator.
pub fn best_rational(x: f64, qmax: u64) -> (i64, u64) {
    assert!(qmax >= 1);
    if !x.is_finite() || x.abs() >= 9.0e15 {
        // outside exactly-representable integer territory; callers treat the
        // huge error as "irrational"
        return (if x > 0.0 { i64::MAX } else { i64::MIN }, 1);
    }

    let neg = x < 0.0;
    let mut v = x.abs();

    // convergent recurrence h_k = a_k h_{k-1} + h_{k-2}
    let (mut h2, mut k2) = (0i64, 1u64); // h_{-2}/k_{-2}
    let (mut h1, mut k1) = (1i64, 0u64); // h_{-1}/k_{-1}
    let mut result: Option<(i64, u64)> = None;

    for _ in 0..64 {
        let a = v.floor();
        if a >= 9.0e15 {
            break;
        }
        let a_int = a as i64;
        let h = a_int
            .checked_mul(h1)
            .and_then(|t| t.checked_add(h2));
        let k = (a as u64).checked_mul(k1).and_then(|t| t.checked_add(k2));
        let (Some(h), Some(k)) = (h, k) else { break };

        if k > qmax {
            // semiconvergent: largest partial step that keeps den <= qmax
            let t = (qmax - k2) / k1.max(1);
            if t >= 1 {
                let sh = (t as i64) * h1 + h2;
                let sk = t * k1 + k2;
                let prev = (h1, k1);
                let err_semi = (x.abs() - sh as f64 / sk as f64).abs();
                let err_prev = (x.abs() - prev.0 as f64 / prev.1 as f64).abs();
                result = Some(if err_semi < err_prev { (sh, sk) } else { prev });
            } else {
                result = Some((h1, k1));
            }
            break;
        }

        h2 = h1;
        k2 = k1;
        h1 = h;
        k1 = k;

        let frac = v - a;
        if frac <= 0.0 || !(1.0 / frac).is_finite() {
            break; // exact rational reached
        }
        v = 1.0 / frac;
    }

    let (num, den) = result.unwrap_or((h1, k1.max(1)));
    (if neg { -num } else { num }, den)
}

//! Real roots of polynomials up to degree three, with multiplicities.
//!
//! Closed-form solving (quadratic formula, trigonometric/Cardano cubic)
//! followed by Newton polishing of simple roots. Multiplicity is decided by
//! clustering nearby roots, so a double root recovered as two values a few
//! ulps apart is reported once with multiplicity two.

/// One real root with its multiplicity.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u32,
}

/// Result of a root computation for `c[0] + c[1] p + c[2] p^2 + c[3] p^3`.
#[derive(Clone, PartialEq, Debug)]
pub enum PolyRoots {
    /// Every coefficient is below the degeneracy tolerance.
    AllZero,
    Roots {
        /// Real roots in ascending order; multiplicities sum to at most
        /// `degree`.
        roots: Vec<Root>,
        /// Effective degree after dropping negligible leading coefficients.
        degree: u32,
    },
}

impl PolyRoots {
    pub fn roots(&self) -> &[Root] {
        match self {
            PolyRoots::AllZero => &[],
            PolyRoots::Roots { roots, .. } => roots,
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match self {
            PolyRoots::AllZero => None,
            PolyRoots::Roots { degree, .. } => Some(*degree),
        }
    }
}

fn eval(c: &[f64; 4], x: f64) -> f64 {
    ((c[3] * x + c[2]) * x + c[1]) * x + c[0]
}

fn eval_deriv(c: &[f64; 4], x: f64) -> f64 {
    (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1]
}

/// Newton-polishes a simple root; skipped near multiple roots where the
/// derivative degenerates and Newton would stall or wander.
fn polish(c: &[f64; 4], mut r: f64, scale: f64) -> f64 {
    for _ in 0..3 {
        let d = eval_deriv(c, r);
        if d.abs() <= 1e-8 * scale * (1.0 + r.abs()).powi(2) {
            break;
        }
        let step = eval(c, r) / d;
        if !step.is_finite() {
            break;
        }
        r -= step;
    }
    r
}

fn solve_quadratic(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    // a p^2 + b p + c with the usual stable formulation.
    let (a, b, c) = (c2, c1, c0);
    let disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    if disc < 0.0 {
        if disc.abs() <= 1e-12 * scale.max(1e-300) {
            let r = -b / (2.0 * a);
            return vec![r, r];
        }
        return Vec::new();
    }
    if disc == 0.0 {
        let r = -b / (2.0 * a);
        return vec![r, r];
    }
    if b == 0.0 {
        // disc >= 0 here, so -c/a >= 0
        let r = (-c / a).max(0.0).sqrt();
        return vec![-r, r];
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let r1 = q / a;
    let r2 = if q != 0.0 { c / q } else { 0.0 };
    vec![r1, r2]
}

fn solve_cubic_monic(a: f64, b: f64, c: f64) -> Vec<f64> {
    // p^3 + a p^2 + b p + c, shifted to t^3 + P t + Q with p = t - a/3.
    let shift = a / 3.0;
    let pp = b - a * a / 3.0;
    let qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    let scale_p = pp.abs();
    let scale_q = qq.abs();
    if scale_p <= 1e-13 * (1.0 + a * a) && scale_q <= 1e-13 * (1.0 + a.abs()).powi(3) {
        let r = -shift;
        return vec![r, r, r];
    }

    let disc = -4.0 * pp * pp * pp - 27.0 * qq * qq;
    let disc_scale = 4.0 * scale_p.powi(3) + 27.0 * scale_q * scale_q;

    let ts: Vec<f64> = if disc.abs() <= 1e-12 * disc_scale {
        if scale_p <= 1e-13 * (1.0 + a * a) {
            vec![0.0, 0.0, 0.0]
        } else {
            // double root at -3Q/(2P), simple root at 3Q/P
            vec![3.0 * qq / pp, -1.5 * qq / pp, -1.5 * qq / pp]
        }
    } else if disc > 0.0 {
        // three distinct real roots
        let m = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (2.0 * pp)) * (-3.0 / pp).sqrt();
        let phi = arg.clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .collect()
    } else {
        // one real root; use the larger-magnitude cube root to avoid
        // cancellation.
        let half_q = qq / 2.0;
        let rad = (half_q * half_q + pp * pp * pp / 27.0).sqrt();
        let u = if half_q >= 0.0 { -half_q - rad } else { -half_q + rad };
        let uc = u.cbrt();
        let t = if uc != 0.0 { uc - pp / (3.0 * uc) } else { 0.0 };
        vec![t]
    };

    ts.into_iter().map(|t| t - shift).collect()
}

/// Real roots of the (at most cubic) polynomial with coefficient list
/// `c[0] + c[1] p + c[2] p^2 + c[3] p^3`.
///
/// * `tol_coeff` — absolute threshold below which all four coefficients
///   count as vanished (`AllZero`);
/// * `tol_cluster` — relative gap under which nearby roots merge into one
///   root of higher multiplicity.
pub fn real_roots(c: &[f64; 4], tol_coeff: f64, tol_cluster: f64) -> PolyRoots {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale <= tol_coeff {
        return PolyRoots::AllZero;
    }

    // Effective degree: negligible leading coefficients (relative to the
    // largest one) are dropped rather than producing huge spurious roots.
    let mut degree = 0u32;
    for (i, v) in c.iter().enumerate() {
        if v.abs() > 1e-12 * scale {
            degree = i as u32;
        }
    }

    let raw: Vec<f64> = match degree {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => solve_quadratic(c[0], c[1], c[2]),
        _ => solve_cubic_monic(c[2] / c[3], c[1] / c[3], c[0] / c[3]),
    };

    let mut polished: Vec<f64> = raw.into_iter().map(|r| polish(c, r, scale)).collect();
    polished.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut roots: Vec<Root> = Vec::new();
    for r in polished {
        match roots.last_mut() {
            Some(last) if (r - last.value).abs() <= tol_cluster * last.value.abs().max(1.0) => {
                // running mean keeps the cluster representative centered
                let n = last.multiplicity as f64;
                last.value = (last.value * n + r) / (n + 1.0);
                last.multiplicity += 1;
            }
            _ => roots.push(Root { value: r, multiplicity: 1 }),
        }
    }

    PolyRoots::Roots { roots, degree }
}

//! Fixtures shared by the benchmark suite: the pencil equation the other
//! suites lean on, and a dense-coefficient equation that stresses raw
//! polynomial evaluation.

use singode::{CubicField, Poly2, SingularOde};

/// `x y'' = y'^3 - y'`: three admissible slopes at the origin, integer
/// eigenvalue ratios, the default classification workload.
pub fn pencil() -> SingularOde {
    SingularOde::new(
        Poly2::var_x(),
        CubicField::new([
            Poly2::zero(),
            Poly2::constant(-1.0),
            Poly2::zero(),
            Poly2::constant(1.0),
        ]),
    )
}

/// Every coefficient a dense degree-4 polynomial with a fixed, arbitrary
/// integer pattern; no structure for the evaluator to skip.
pub fn dense_ode() -> SingularOde {
    let poly = |salt: u32| {
        Poly2::from_triples((0..=4u32).flat_map(move |i| {
            (0..=(4 - i)).map(move |j| {
                let c = ((i * 7 + j * 3 + salt) % 5) as f64 - 2.0;
                (i, j, if c == 0.0 { 1.0 } else { c })
            })
        }))
    };
    SingularOde::new(poly(0), CubicField::new([poly(1), poly(2), poly(3), poly(4)]))
}

//! The equation lifted to a polynomial vector field on `(x, y, p)` space:
//!
//! ```text
//! x' = Delta(x, y)
//! y' = p * Delta(x, y)
//! p' = M(x, y, p)
//! ```
//!
//! Solutions of the original equation are projections of integral curves of
//! this field, reparametrized by `dx/dt = Delta`. Points where the field
//! vanishes with `Delta = 0` are exactly the (point, admissible-direction)
//! pairs of the plane analysis; the linearization there carries the
//! transversal spectrum.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{cubic_eval, PlanePoint, SingularOde};
use crate::poly::Var;

/// A point of the lifted phase space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetPoint {
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

impl JetPoint {
    pub fn new(x: f64, y: f64, p: f64) -> Self {
        Self { x, y, p }
    }

    pub fn plane(&self) -> PlanePoint {
        PlanePoint::new(self.x, self.y)
    }
}

/// Value of the lifted field at a jet point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldValue {
    pub dx: f64,
    pub dy: f64,
    pub dp: f64,
}

impl FieldValue {
    pub fn norm_inf(&self) -> f64 {
        self.dx.abs().max(self.dy.abs()).max(self.dp.abs())
    }
}

pub fn field_eval(ode: &SingularOde, j: JetPoint) -> FieldValue {
    let q = j.plane();
    let delta = ode.delta_at(q);
    let m = cubic_eval(&ode.m, q, j.p);
    FieldValue { dx: delta, dy: j.p * delta, dp: m }
}

/// Exact Jacobian of the lifted field, rows in `(x, y, p)` order:
///
/// ```text
/// [ Delta_x       Delta_y       0     ]
/// [ p Delta_x     p Delta_y     Delta ]
/// [ M_x           M_y           M_p   ]
/// ```
pub fn jacobian(ode: &SingularOde, j: JetPoint) -> [[f64; 3]; 3] {
    let q = j.plane();
    let delta = ode.delta_at(q);
    let dx = ode.delta.diff(Var::X).eval(q.x, q.y);
    let dy = ode.delta.diff(Var::Y).eval(q.x, q.y);

    let mut mx = 0.0;
    let mut my = 0.0;
    let mut mp = 0.0;
    for (i, mu) in ode.m.mu.iter().enumerate() {
        let pk = j.p.powi(i as i32);
        mx += mu.diff(Var::X).eval(q.x, q.y) * pk;
        my += mu.diff(Var::Y).eval(q.x, q.y) * pk;
        if i > 0 {
            mp += i as f64 * mu.eval(q.x, q.y) * j.p.powi(i as i32 - 1);
        }
    }

    [[dx, dy, 0.0], [j.p * dx, j.p * dy, delta], [mx, my, mp]]
}

/// Spectrum of the linearization at a zero of the lifted field. The kernel
/// direction along the singular locus always contributes the eigenvalue `0`;
/// the other two are
///
/// ```text
/// lambda1 = Delta_x + p Delta_y      (transversal to the locus)
/// lambda2 = M_p                      (vertical, along the p axis)
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// Always `0` up to the deflation residual.
    pub zero: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// `|det J / c1|`: how far the smallest eigenvalue is from exact zero,
    /// relative to the quadratic cofactor.
    pub residual_zero: f64,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("field does not vanish at the point (|f| = {norm:.3e})")]
    NotSingularPoint { norm: f64 },
    #[error("complex eigenvalue pair (discriminant = {disc:.3e})")]
    ComplexPair { disc: f64 },
}

/// Computes the spectrum from the Jacobian by deflating the characteristic
/// cubic: with `c2 = tr J`, `c1` the sum of principal 2x2 minors and
/// `c0 = det J`, a genuine singular point has `c0 = 0` and the nonzero part
/// of the spectrum solves `t^2 - c2 t + c1 = 0`. The roots are matched
/// against the structural values `(Delta_x + p Delta_y, M_p)` so that
/// `lambda1` is always the locus-transversal eigenvalue.
pub fn spectrum_at_singular(
    ode: &SingularOde,
    j: JetPoint,
    tol_field: f64,
) -> Result<Spectrum, SpectrumError> {
    let f = field_eval(ode, j);
    let norm = f.norm_inf();
    if norm > tol_field {
        return Err(SpectrumError::NotSingularPoint { norm });
    }

    let a = jacobian(ode, j);
    let c2 = a[0][0] + a[1][1] + a[2][2];
    let minor = |r1: usize, r2: usize| a[r1][r1] * a[r2][r2] - a[r1][r2] * a[r2][r1];
    let c1 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let c0 = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);

    let scale = c2.abs().max(c1.abs()).max(1.0);
    let mut disc = c2 * c2 - 4.0 * c1;
    if disc < 0.0 {
        if disc > -1e-12 * scale * scale {
            disc = 0.0;
        } else {
            return Err(SpectrumError::ComplexPair { disc });
        }
    }
    let sq = disc.sqrt();
    let (r1, r2) = if c2 >= 0.0 {
        let big = 0.5 * (c2 + sq);
        (big, if big != 0.0 { c1 / big } else { 0.5 * (c2 - sq) })
    } else {
        let big = 0.5 * (c2 - sq);
        (big, if big != 0.0 { c1 / big } else { 0.5 * (c2 + sq) })
    };

    // Match the quadratic roots to the structural eigenvalues so that
    // reordering is stable under perturbation.
    let (sx, sy) = ode.delta_gradient(j.plane());
    let s1 = sx + j.p * sy;
    let s2 = a[2][2];
    let direct = (r1 - s1).abs() + (r2 - s2).abs();
    let swapped = (r2 - s1).abs() + (r1 - s2).abs();
    let (lambda1, lambda2) = if direct <= swapped { (r1, r2) } else { (r2, r1) };

    let residual_zero = if c1.abs() > 0.0 { (c0 / c1).abs() } else { c0.abs() };
    Ok(Spectrum { zero: 0.0, lambda1, lambda2, residual_zero })
}

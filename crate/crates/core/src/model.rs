//! Equation model: the singular ODE `Delta(x, y) * dp/dx = M(x, y, p)` with
//! `p = dy/dx` and `M` cubic in `p`, plus the metric-to-equation conversion
//! for geodesic flows and the reciprocal (axis-swapped) form used to handle
//! the vertical direction `p = infinity`.

use serde::{Deserialize, Serialize};

use crate::poly::{Poly2, Var};

/// Point of the `(x, y)` plane.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    /// Panics on non-finite coordinates; parse layers validate first.
    pub fn new(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "plane point must be finite");
        Self { x, y }
    }

    pub fn swap(&self) -> Self {
        Self { x: self.y, y: self.x }
    }
}

/// Tangential direction at a plane point, stored homogeneously as `(u, v)`
/// with `u^2 + v^2 = 1` and the first nonzero component positive. The slope
/// is `p = v / u`; `u = 0` encodes the vertical direction `p = infinity`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Direction {
    u: f64,
    v: f64,
}

impl Direction {
    pub fn from_slope(p: f64) -> Self {
        assert!(p.is_finite(), "use Direction::infinite() for the vertical direction");
        let n = p.hypot(1.0);
        Self { u: 1.0 / n, v: p / n }
    }

    pub fn infinite() -> Self {
        Self { u: 0.0, v: 1.0 }
    }

    pub fn from_components(u: f64, v: f64) -> Self {
        let n = u.hypot(v);
        assert!(n > 0.0 && n.is_finite(), "direction needs a nonzero finite vector");
        let (mut u, mut v) = (u / n, v / n);
        let lead = if u != 0.0 { u } else { v };
        if lead < 0.0 {
            u = -u;
            v = -v;
        }
        Self { u, v }
    }

    pub fn components(&self) -> (f64, f64) {
        (self.u, self.v)
    }

    pub fn is_infinite(&self) -> bool {
        self.u == 0.0
    }

    /// Slope `v/u`; `f64::INFINITY` for the vertical direction.
    pub fn slope(&self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.v / self.u
        }
    }

    /// The direction seen after the axis swap `(x, y) -> (y, x)`:
    /// slope `p` maps to `1/p`, so vertical and horizontal trade places.
    pub fn swap(&self) -> Self {
        if self.v == 0.0 {
            Self::infinite()
        } else if self.u == 0.0 {
            Self::from_slope(0.0)
        } else {
            Self::from_components(self.v, self.u)
        }
    }
}

/// Right-hand side `M(x, y, p) = mu_0 + mu_1 p + mu_2 p^2 + mu_3 p^3`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CubicField {
    pub mu: [Poly2; 4],
}

impl CubicField {
    pub fn new(mu: [Poly2; 4]) -> Self {
        Self { mu }
    }

    /// Coefficient values at a plane point, constant term first.
    pub fn coeffs_at(&self, q: PlanePoint) -> [f64; 4] {
        [
            self.mu[0].eval(q.x, q.y),
            self.mu[1].eval(q.x, q.y),
            self.mu[2].eval(q.x, q.y),
            self.mu[3].eval(q.x, q.y),
        ]
    }
}

/// Evaluates `M(x, y, p)` by Horner's rule in `p`.
pub fn cubic_eval(m: &CubicField, q: PlanePoint, p: f64) -> f64 {
    let [m0, m1, m2, m3] = m.coeffs_at(q);
    ((m3 * p + m2) * p + m1) * p + m0
}

/// Reciprocal cubic `M*(x, y, p) = sum_i mu_i p^(3-i)`: the coefficient list
/// reversed. Applying it twice returns the original field.
pub fn reciprocal_cubic(m: &CubicField) -> CubicField {
    let [m0, m1, m2, m3] = m.mu.clone();
    CubicField::new([m3, m2, m1, m0])
}

/// The full equation `Delta(x, y) * dp/dx = M(x, y, p)`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SingularOde {
    pub delta: Poly2,
    pub m: CubicField,
}

impl SingularOde {
    pub fn new(delta: Poly2, m: CubicField) -> Self {
        Self { delta, m }
    }

    pub fn delta_at(&self, q: PlanePoint) -> f64 {
        self.delta.eval(q.x, q.y)
    }

    pub fn delta_gradient(&self, q: PlanePoint) -> (f64, f64) {
        (
            self.delta.diff(Var::X).eval(q.x, q.y),
            self.delta.diff(Var::Y).eval(q.x, q.y),
        )
    }
}

/// Swaps the roles of `x` and `y`. The transformed equation is
/// `Delta(y, x) * dp/dx = -M*(y, x, p)`, so the vertical direction of the
/// original becomes the horizontal direction of the swap.
pub fn swap_axes(ode: &SingularOde) -> SingularOde {
    let rec = reciprocal_cubic(&ode.m);
    let mu = rec.mu.map(|p| p.swap_vars().scale(-1.0));
    SingularOde::new(ode.delta.swap_vars(), CubicField::new(mu))
}

/// Riemannian metric `ds^2 = a dx^2 + 2b dx dy + c dy^2` with polynomial
/// coefficients.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Metric {
    pub a: Poly2,
    pub b: Poly2,
    pub c: Poly2,
}

/// Converts a metric to the geodesic equation in the form
/// `Delta * dp/dx = M(x, y, p)` with `Delta = ac - b^2` and
///
/// ```text
/// mu_0 = a(a_y - 2 b_x) + a_x b
/// mu_1 = b(3 a_y - 2 b_x) + a_x c - 2 a c_x
/// mu_2 = b(2 b_y - 3 c_x) + 2 a_y c - a c_y
/// mu_3 = c(2 b_y - c_x) - b c_y
/// ```
pub fn geodesic_from_metric(metric: &Metric) -> SingularOde {
    let Metric { a, b, c } = metric;
    let (ax, ay) = (a.diff(Var::X), a.diff(Var::Y));
    let (bx, by) = (b.diff(Var::X), b.diff(Var::Y));
    let (cx, cy) = (c.diff(Var::X), c.diff(Var::Y));

    let delta = &(a * c) - &(b * b);
    let mu0 = &(a * &(&ay - &bx.scale(2.0))) + &(&ax * b);
    let mu1 = &(&(b * &(&ay.scale(3.0) - &bx.scale(2.0))) + &(&ax * c)) - &(a * &cx).scale(2.0);
    let mu2 = &(&(b * &(&by.scale(2.0) - &cx.scale(3.0))) + &(&ay * c).scale(2.0)) - &(a * &cy);
    let mu3 = &(c * &(&by.scale(2.0) - &cx)) - &(b * &cy);

    SingularOde::new(delta, CubicField::new([mu0, mu1, mu2, mu3]))
}

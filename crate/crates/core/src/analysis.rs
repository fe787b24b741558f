//! Local analysis at points of the singular locus `Delta = 0`: admissible
//! tangential directions, transversal eigenvalue data, resonance detection,
//! and the per-direction classification of the local solution set.

use serde::Serialize;
use thiserror::Error;

use crate::model::{swap_axes, Direction, PlanePoint, SingularOde};
use crate::rational::best_rational;
use crate::roots::{real_roots, PolyRoots};

/// Tolerances used across the analysis operations. Every threshold that a
/// verdict depends on lives here rather than being hard-coded at the use
/// site, so callers can tighten or relax the analysis uniformly.
#[derive(Clone, Debug, Serialize)]
pub struct AnalysisOpts {
    /// |Delta(q)| at or below this counts as "on the singular locus".
    pub tol_locus: f64,
    /// Gradient norm at or below this makes a locus point degenerate.
    pub tol_gradient: f64,
    /// Absolute threshold under which all direction-cubic coefficients
    /// count as vanished.
    pub tol_coeff: f64,
    /// Relative gap under which direction roots merge (multiplicity).
    pub tol_root_cluster: f64,
    /// |lambda| at or below this is a degenerate / non-transversal
    /// eigenvalue.
    pub tol_eigen: f64,
    /// Relative tolerance for detecting a rational eigenvalue ratio.
    pub tol_rational: f64,
    /// Largest denominator considered when testing rationality.
    pub qmax: u64,
}

impl Default for AnalysisOpts {
    fn default() -> Self {
        Self {
            tol_locus: 1e-10,
            tol_gradient: 1e-10,
            tol_coeff: 1e-10,
            tol_root_cluster: 1e-7,
            tol_eigen: 1e-9,
            tol_rational: 1e-9,
            qmax: 64,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("point is not on the singular locus (Delta = {delta:.3e})")]
    NotOnLocus { delta: f64 },
    #[error("locus is non-transversal to the direction (lambda1 = {lambda1:.3e})")]
    NonTransversal { lambda1: f64 },
    #[error("degenerate direction eigenvalue (lambda2 = {lambda2:.3e})")]
    DegenerateEigen { lambda2: f64 },
    #[error("operation requires a finite direction; swap axes for the vertical one")]
    VerticalDirection,
}

/// True iff `|Delta(q)| <= opts.tol_locus`.
pub fn on_singular_locus(ode: &SingularOde, q: PlanePoint, opts: &AnalysisOpts) -> bool {
    ode.delta_at(q).abs() <= opts.tol_locus
}

/// Gradient of `Delta` at a locus point and whether the locus is regular
/// (gradient bounded away from zero) there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusRegularity {
    pub gradient: (f64, f64),
    pub regular: bool,
}

pub fn locus_regularity(
    ode: &SingularOde,
    q: PlanePoint,
    opts: &AnalysisOpts,
) -> Result<LocusRegularity, AnalysisError> {
    if !on_singular_locus(ode, q, opts) {
        return Err(AnalysisError::NotOnLocus { delta: ode.delta_at(q) });
    }
    let gradient = ode.delta_gradient(q);
    let norm = gradient.0.hypot(gradient.1);
    Ok(LocusRegularity { gradient, regular: norm > opts.tol_gradient })
}

/// One admissible direction: a root of the direction cubic `M(q, p)` (or the
/// vertical direction when the cubic is degree-deficient), with the root's
/// multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissibleDirection {
    pub direction: Direction,
    pub multiplicity: u32,
}

/// All admissible directions at a locus point.
#[derive(Clone, Debug, PartialEq)]
pub enum AdmissibleDirections {
    /// Every coefficient of `M(q, .)` vanishes: the direction cubic is
    /// identically zero and no direction is distinguished.
    AllDegenerate,
    /// Finite directions in ascending slope order; the vertical direction,
    /// when admissible, comes last.
    Directions(Vec<AdmissibleDirection>),
}

impl AdmissibleDirections {
    pub fn directions(&self) -> &[AdmissibleDirection] {
        match self {
            AdmissibleDirections::AllDegenerate => &[],
            AdmissibleDirections::Directions(d) => d,
        }
    }
}

/// Solutions issuing from `q` can only be tangent to a root direction of the
/// cubic `M(q, p)`; the vertical direction is admissible exactly when the
/// cubic drops degree, with multiplicity `3 - degree`.
pub fn admissible_directions(
    ode: &SingularOde,
    q: PlanePoint,
    opts: &AnalysisOpts,
) -> Result<AdmissibleDirections, AnalysisError> {
    if !on_singular_locus(ode, q, opts) {
        return Err(AnalysisError::NotOnLocus { delta: ode.delta_at(q) });
    }
    let mu = ode.m.coeffs_at(q);
    match real_roots(&mu, opts.tol_coeff, opts.tol_root_cluster) {
        PolyRoots::AllZero => Ok(AdmissibleDirections::AllDegenerate),
        PolyRoots::Roots { roots, degree } => {
            let mut out: Vec<AdmissibleDirection> = roots
                .iter()
                .map(|r| AdmissibleDirection {
                    direction: Direction::from_slope(r.value),
                    multiplicity: r.multiplicity,
                })
                .collect();
            let inf_mult = 3 - degree;
            if inf_mult > 0 {
                out.push(AdmissibleDirection {
                    direction: Direction::infinite(),
                    multiplicity: inf_mult,
                });
            }
            Ok(AdmissibleDirections::Directions(out))
        }
    }
}

/// How the eigenvalue ratio `lambda = lambda2 / lambda1` relates to the
/// rationals, as decided by the best bounded-denominator approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Rationality {
    /// `lambda` is within tolerance of the integer `n`.
    Integer(i64),
    /// `lambda` is within tolerance of `1/n` for an integer `|n| >= 2`.
    ReciprocalInteger(i64),
    /// `lambda` is within tolerance of `num/den` in lowest terms.
    Rational(i64, u64),
    /// No fraction with denominator up to `qmax` comes within tolerance.
    Irrational,
}

/// A positive-integer pair annihilating the spectrum:
/// `p * lambda1 + q * lambda2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Resonance {
    pub p: u32,
    pub q: u32,
    pub order: u32,
}

/// Transversal spectrum data at `(q, direction)`:
/// `lambda1 = Delta_x + p Delta_y`, `lambda2 = M_p`, both evaluated at the
/// point, and their ratio with its arithmetic classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenData {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda: f64,
    pub rationality: Rationality,
    pub resonance: Option<Resonance>,
}

fn classify_ratio(lambda: f64, opts: &AnalysisOpts) -> (Rationality, Option<(i64, u64)>) {
    let (num, den) = best_rational(lambda, opts.qmax);
    let approx = num as f64 / den as f64;
    if (lambda - approx).abs() > opts.tol_rational * lambda.abs().max(1.0) {
        return (Rationality::Irrational, None);
    }
    let rat = if den == 1 {
        Rationality::Integer(num)
    } else if num.abs() == 1 {
        Rationality::ReciprocalInteger(num.signum() * den as i64)
    } else {
        Rationality::Rational(num, den)
    };
    (rat, Some((num, den)))
}

/// Raw eigenvalues of the transversal linearization at a locus point with a
/// finite admissible direction of slope `p`.
pub fn eigen_values(ode: &SingularOde, q: PlanePoint, p: f64) -> (f64, f64) {
    let (dx, dy) = ode.delta_gradient(q);
    let lambda1 = dx + p * dy;
    let mu = ode.m.coeffs_at(q);
    let lambda2 = mu[1] + 2.0 * mu[2] * p + 3.0 * mu[3] * p * p;
    (lambda1, lambda2)
}

pub fn eigen_data(
    ode: &SingularOde,
    q: PlanePoint,
    dir: Direction,
    opts: &AnalysisOpts,
) -> Result<EigenData, AnalysisError> {
    if dir.is_infinite() {
        return Err(AnalysisError::VerticalDirection);
    }
    let (lambda1, lambda2) = eigen_values(ode, q, dir.slope());
    if lambda1.abs() <= opts.tol_eigen {
        return Err(AnalysisError::NonTransversal { lambda1 });
    }
    if lambda2.abs() <= opts.tol_eigen {
        return Err(AnalysisError::DegenerateEigen { lambda2 });
    }
    let lambda = lambda2 / lambda1;
    let (rationality, frac) = classify_ratio(lambda, opts);
    let resonance = match frac {
        Some((num, den)) if lambda < 0.0 && num != 0 => {
            let p = num.unsigned_abs() as u32;
            let q = den as u32;
            Some(Resonance { p, q, order: p + q })
        }
        _ => None,
    };
    Ok(EigenData { lambda1, lambda2, lambda, rationality, resonance })
}

/// Smallest-order pair `(p, q)` of positive integers with
/// `|p*lambda1 + q*lambda2| <= tol * (p|lambda1| + q|lambda2|)`, searching
/// orders `p + q <= max_order`. Resonances require opposite signs; `None`
/// when the eigenvalues agree in sign (or one vanishes).
pub fn resonance_find(lambda1: f64, lambda2: f64, max_order: u32, tol: f64) -> Option<Resonance> {
    if lambda1 == 0.0 || lambda2 == 0.0 || (lambda1 > 0.0) == (lambda2 > 0.0) {
        return None;
    }
    for order in 2..=max_order {
        for p in 1..order {
            let q = order - p;
            let combo = p as f64 * lambda1 + q as f64 * lambda2;
            let scale = p as f64 * lambda1.abs() + q as f64 * lambda2.abs();
            if combo.abs() <= tol * scale {
                return Some(Resonance { p, q, order });
            }
        }
    }
    None
}

/// Finite-smoothness bound for normalizing a hyperbolic spectrum: a change
/// of coordinates of class `C^k` needs the spectrum free of resonances up to
/// order `N(k) = 2 * floor((2k + 1) * m1 / m2) + 2`, where `m1 >= m2` are the
/// eigenvalue magnitudes.
pub fn samovol_order(k: u32, lambda1: f64, lambda2: f64) -> u64 {
    assert!(
        lambda1 != 0.0 && lambda2 != 0.0,
        "smoothness order needs a nondegenerate spectrum"
    );
    let m1 = lambda1.abs().max(lambda2.abs());
    let m2 = lambda1.abs().min(lambda2.abs());
    2 * ((2 * k + 1) as f64 * m1 / m2).floor() as u64 + 2
}

/// Per-direction verdict for the local solution set at a locus point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// `Delta(q) != 0`: nothing singular happens at `q`.
    NotSingular,
    /// `dDelta(q) = 0`: the locus itself degenerates; transversal theory
    /// does not apply (and oscillation is not ruled out here).
    DegenerateLocus,
    /// The queried slope is not a root of the direction cubic: no solution
    /// issues from `q` tangent to it.
    NotAdmissible,
    /// The direction is a multiple root of the cubic (or the cubic vanishes
    /// identically); the transversal spectrum degenerates.
    MultipleRoot,
    /// `lambda1 = 0`: the direction is tangent to the locus.
    NonTransversal,
    /// `lambda < 0` irrational: exactly one smooth solution passes through.
    Saddle,
    /// `lambda > 0`, neither an integer nor a reciprocal integer: a
    /// one-parameter power family issues to each side.
    NodeNonResonant,
    /// `lambda = n` a positive integer: power family of exponent `n` with a
    /// possible logarithmic correction.
    NodePositiveResonant,
    /// `lambda = 1/n`: power family; the logarithmic coefficient provably
    /// vanishes for this ratio.
    NodeReciprocalResonant,
    /// `lambda < 0` rational: resonant spectrum, only finite smoothness is
    /// available and no family prediction is made.
    NegativeRationalResonant,
}

/// Shape of the predicted local solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// A single smooth solution through the point.
    Unique,
    /// One-parameter family `y = F(x, c |x|^lambda)`.
    PowerLaw,
    /// One-parameter family `y = F(x, x^n (c + eps ln|x|))`.
    LogResonant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyForm {
    pub kind: FamilyKind,
    pub exponent: f64,
    pub log_possible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub multiplicity: Option<u32>,
    pub eigen: Option<EigenData>,
    pub family_form: Option<FamilyForm>,
    pub smoothness_note: Option<String>,
}

impl Classification {
    fn bare(verdict: Verdict) -> Self {
        Self { verdict, multiplicity: None, eigen: None, family_form: None, smoothness_note: None }
    }
}

/// Classifies the local solution set at `(q, dir)`. Genericity failures come
/// back as verdicts, not errors: `NotSingular`, `DegenerateLocus`,
/// `MultipleRoot` and `NonTransversal` all mean the transversal-spectrum
/// theory does not apply at this input.
///
/// The vertical direction is classified by swapping axes (the equation for
/// `x(y)` has the reciprocal cubic, up to sign, as its right-hand side); the
/// reported eigen data then refers to the swapped frame.
pub fn classify(
    ode: &SingularOde,
    q: PlanePoint,
    dir: Direction,
    opts: &AnalysisOpts,
) -> Classification {
    if !on_singular_locus(ode, q, opts) {
        return Classification::bare(Verdict::NotSingular);
    }
    let grad = ode.delta_gradient(q);
    if grad.0.hypot(grad.1) <= opts.tol_gradient {
        return Classification::bare(Verdict::DegenerateLocus);
    }
    if dir.is_infinite() {
        return classify(&swap_axes(ode), q.swap(), dir.swap(), opts);
    }

    let mu = ode.m.coeffs_at(q);
    let p_slope = dir.slope();
    let (multiplicity, admissible) =
        match real_roots(&mu, opts.tol_coeff, opts.tol_root_cluster) {
            PolyRoots::AllZero => {
                let mut c = Classification::bare(Verdict::MultipleRoot);
                c.smoothness_note =
                    Some("direction cubic vanishes identically at the point".into());
                return c;
            }
            PolyRoots::Roots { roots, .. } => {
                let hit = roots.iter().find(|r| {
                    (r.value - p_slope).abs()
                        <= opts.tol_root_cluster * p_slope.abs().max(1.0)
                });
                match hit {
                    Some(r) => (r.multiplicity, true),
                    None => (0, false),
                }
            }
        };
    if !admissible {
        return Classification::bare(Verdict::NotAdmissible);
    }
    if multiplicity > 1 {
        let mut c = Classification::bare(Verdict::MultipleRoot);
        c.multiplicity = Some(multiplicity);
        return c;
    }

    let eigen = match eigen_data(ode, q, dir, opts) {
        Ok(e) => e,
        Err(AnalysisError::NonTransversal { .. }) => {
            let mut c = Classification::bare(Verdict::NonTransversal);
            c.multiplicity = Some(multiplicity);
            return c;
        }
        Err(AnalysisError::DegenerateEigen { .. }) => {
            // M_p = 0 at a root is the multiple-root criterion in disguise
            let mut c = Classification::bare(Verdict::MultipleRoot);
            c.multiplicity = Some(multiplicity.max(2));
            return c;
        }
        Err(_) => unreachable!("finite direction checked above"),
    };

    let lambda = eigen.lambda;
    let mut out = Classification {
        verdict: Verdict::Saddle,
        multiplicity: Some(multiplicity),
        eigen: Some(eigen),
        family_form: None,
        smoothness_note: None,
    };

    if lambda < 0.0 {
        match eigen.resonance {
            None => {
                out.verdict = Verdict::Saddle;
                out.family_form = Some(FamilyForm {
                    kind: FamilyKind::Unique,
                    exponent: lambda,
                    log_possible: false,
                });
                out.smoothness_note = Some(format!(
                    "no rational resonance at denominator bound {}; C^1 linearization needs resonance-freeness to order {}",
                    opts.qmax,
                    samovol_order(1, eigen.lambda1, eigen.lambda2)
                ));
            }
            Some(res) => {
                out.verdict = Verdict::NegativeRationalResonant;
                out.smoothness_note = Some(format!(
                    "resonance {}*lambda1 + {}*lambda2 = 0 of order {}; normalizing coordinates are at most C^{} smooth",
                    res.p,
                    res.q,
                    res.order,
                    res.p.saturating_sub(1)
                ));
            }
        }
    } else {
        match eigen.rationality {
            Rationality::Integer(n) if n >= 1 => {
                out.verdict = Verdict::NodePositiveResonant;
                out.family_form = Some(FamilyForm {
                    kind: FamilyKind::LogResonant,
                    exponent: n as f64,
                    log_possible: true,
                });
                out.smoothness_note =
                    Some("integer eigenvalue ratio admits a logarithmic correction".into());
            }
            Rationality::ReciprocalInteger(n) if n >= 2 => {
                out.verdict = Verdict::NodeReciprocalResonant;
                out.family_form = Some(FamilyForm {
                    kind: FamilyKind::PowerLaw,
                    exponent: lambda,
                    log_possible: false,
                });
                out.smoothness_note = Some(
                    "reciprocal-integer ratio: the logarithmic coefficient vanishes".into(),
                );
            }
            _ => {
                out.verdict = Verdict::NodeNonResonant;
                out.family_form = Some(FamilyForm {
                    kind: FamilyKind::PowerLaw,
                    exponent: lambda,
                    log_possible: false,
                });
            }
        }
    }
    out
}

/// Outcome of the coefficient test at a locus point: when any `mu_i(q)` is
/// nonzero the direction cubic is a nonzero polynomial and no solution can
/// oscillate while issuing from `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OscillationExclusion {
    Excluded,
    NotExcluded,
}

pub fn oscillation_excluded(
    ode: &SingularOde,
    q: PlanePoint,
    opts: &AnalysisOpts,
) -> Result<OscillationExclusion, AnalysisError> {
    if !on_singular_locus(ode, q, opts) {
        return Err(AnalysisError::NotOnLocus { delta: ode.delta_at(q) });
    }
    let mu = ode.m.coeffs_at(q);
    let max = mu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(if max > opts.tol_coeff {
        OscillationExclusion::Excluded
    } else {
        OscillationExclusion::NotExcluded
    })
}

/// For geodesic equations the necessary condition for oscillation at a locus
/// point is a vanishing gradient of `Delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeodesicOscillation {
    /// `dDelta(q) = 0`: oscillation is not ruled out by this test.
    ConditionHolds,
    /// `dDelta(q) != 0`: no oscillating geodesics at `q`.
    ConditionFails,
}

pub fn geodesic_oscillation_necessary(
    metric: &crate::model::Metric,
    q: PlanePoint,
    opts: &AnalysisOpts,
) -> Result<GeodesicOscillation, AnalysisError> {
    let ode = crate::model::geodesic_from_metric(metric);
    let reg = locus_regularity(&ode, q, opts)?;
    Ok(if reg.regular {
        GeodesicOscillation::ConditionFails
    } else {
        GeodesicOscillation::ConditionHolds
    })
}

// ---------------------------------------------------------------------------
// JSON-facing report assembly
// ---------------------------------------------------------------------------

/// Slope rendered as a JSON number, or the string `"inf"` for the vertical
/// direction (JSON has no infinity literal).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SlopeRepr {
    Finite(f64),
    Symbol(&'static str),
}

impl From<Direction> for SlopeRepr {
    fn from(d: Direction) -> Self {
        if d.is_infinite() {
            SlopeRepr::Symbol("inf")
        } else {
            SlopeRepr::Finite(d.slope())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionReport {
    pub p: SlopeRepr,
    pub multiplicity: u32,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub lambda: Option<f64>,
    pub verdict: String,
    pub family_form: Option<FamilyForm>,
    pub smoothness_note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: [f64; 2],
    pub delta: f64,
    pub on_locus: bool,
    pub delta_gradient: [f64; 2],
    pub point_verdict: String,
    pub all_directions_degenerate: bool,
    pub directions: Vec<DirectionReport>,
    pub oscillation: String,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::NotSingular => "not_singular",
        Verdict::DegenerateLocus => "degenerate_locus",
        Verdict::NotAdmissible => "not_admissible",
        Verdict::MultipleRoot => "multiple_root",
        Verdict::NonTransversal => "non_transversal",
        Verdict::Saddle => "saddle",
        Verdict::NodeNonResonant => "node_non_resonant",
        Verdict::NodePositiveResonant => "node_positive_resonant",
        Verdict::NodeReciprocalResonant => "node_reciprocal_resonant",
        Verdict::NegativeRationalResonant => "negative_rational_resonant",
    }
}

/// Full per-point report: locus membership, gradient, every admissible
/// direction with its classification, and the oscillation-exclusion verdict.
pub fn point_report(ode: &SingularOde, q: PlanePoint, opts: &AnalysisOpts) -> PointReport {
    let delta = ode.delta_at(q);
    let gradient = ode.delta_gradient(q);
    let on_locus = on_singular_locus(ode, q, opts);

    if !on_locus {
        return PointReport {
            point: [q.x, q.y],
            delta,
            on_locus,
            delta_gradient: [gradient.0, gradient.1],
            point_verdict: "not_singular".into(),
            all_directions_degenerate: false,
            directions: Vec::new(),
            oscillation: "excluded".into(),
        };
    }

    let regular = gradient.0.hypot(gradient.1) > opts.tol_gradient;
    let dirs = admissible_directions(ode, q, opts).expect("checked on-locus above");
    let all_degenerate = matches!(dirs, AdmissibleDirections::AllDegenerate);

    let mut reports = Vec::new();
    for ad in dirs.directions() {
        let c = classify(ode, q, ad.direction, opts);
        reports.push(DirectionReport {
            p: ad.direction.into(),
            multiplicity: ad.multiplicity,
            lambda1: c.eigen.map(|e| e.lambda1),
            lambda2: c.eigen.map(|e| e.lambda2),
            lambda: c.eigen.map(|e| e.lambda),
            verdict: verdict_name(c.verdict).into(),
            family_form: c.family_form,
            smoothness_note: c.smoothness_note,
        });
    }

    let oscillation = match oscillation_excluded(ode, q, opts).expect("on locus") {
        OscillationExclusion::Excluded => "excluded",
        OscillationExclusion::NotExcluded => "not_excluded",
    };

    PointReport {
        point: [q.x, q.y],
        delta,
        on_locus,
        delta_gradient: [gradient.0, gradient.1],
        point_verdict: if regular { "singular" } else { "degenerate_locus" }.into(),
        all_directions_degenerate: all_degenerate,
        directions: reports,
        oscillation: oscillation.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CubicField;
    use crate::poly::Poly2;

    /// x p' = alpha p (p^2 - 1)
    fn ex4(alpha: f64) -> SingularOde {
        SingularOde::new(
            Poly2::var_x(),
            CubicField::new([
                Poly2::zero(),
                Poly2::constant(-alpha),
                Poly2::zero(),
                Poly2::constant(alpha),
            ]),
        )
    }

    /// x p' = alpha p + x^2
    fn ex5(alpha: f64) -> SingularOde {
        SingularOde::new(
            Poly2::var_x(),
            CubicField::new([
                Poly2::term(2, 0, 1.0),
                Poly2::constant(alpha),
                Poly2::zero(),
                Poly2::zero(),
            ]),
        )
    }

    /// 2 y p' = p^2
    fn ex1() -> SingularOde {
        SingularOde::new(
            Poly2::term(0, 1, 2.0),
            CubicField::new([Poly2::zero(), Poly2::zero(), Poly2::constant(1.0), Poly2::zero()]),
        )
    }

    /// x^4 p' = 2 x^3 p - (2 x^2 + 1) y
    fn ex2() -> SingularOde {
        SingularOde::new(
            Poly2::term(4, 0, 1.0),
            CubicField::new([
                Poly2::from_triples([(2, 1, -2.0), (0, 1, -1.0)]),
                Poly2::term(3, 0, 2.0),
                Poly2::zero(),
                Poly2::zero(),
            ]),
        )
    }

    /// x^2 p' = x p - 2 y
    fn ex3() -> SingularOde {
        SingularOde::new(
            Poly2::term(2, 0, 1.0),
            CubicField::new([
                Poly2::term(0, 1, -2.0),
                Poly2::var_x(),
                Poly2::zero(),
                Poly2::zero(),
            ]),
        )
    }

    fn origin() -> PlanePoint {
        PlanePoint::new(0.0, 0.0)
    }

    fn slopes(dirs: &AdmissibleDirections) -> Vec<(f64, u32)> {
        dirs.directions()
            .iter()
            .map(|d| (d.direction.slope(), d.multiplicity))
            .collect()
    }

    #[test]
    fn locus_membership() {
        let opts = AnalysisOpts::default();
        let ode = ex4(1.0);
        assert!(on_singular_locus(&ode, origin(), &opts));
        assert!(on_singular_locus(&ode, PlanePoint::new(0.0, 3.0), &opts));
        assert!(!on_singular_locus(&ode, PlanePoint::new(0.1, 0.0), &opts));
    }

    #[test]
    fn regularity_of_linear_and_quartic_locus() {
        let opts = AnalysisOpts::default();
        let r = locus_regularity(&ex4(1.0), origin(), &opts).unwrap();
        assert!(r.regular);
        assert_eq!(r.gradient, (1.0, 0.0));

        let r = locus_regularity(&ex2(), origin(), &opts).unwrap();
        assert!(!r.regular, "x^4 has a flat zero at the origin");

        assert!(matches!(
            locus_regularity(&ex4(1.0), PlanePoint::new(0.5, 0.0), &opts),
            Err(AnalysisError::NotOnLocus { .. })
        ));
    }

    #[test]
    fn directions_cubic_with_three_simple_roots() {
        let opts = AnalysisOpts::default();
        let dirs = admissible_directions(&ex4(2.0), origin(), &opts).unwrap();
        let got = slopes(&dirs);
        assert_eq!(got.len(), 3);
        for ((p, m), want) in got.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((p - want).abs() < 1e-12);
            assert_eq!(*m, 1);
        }
    }

    #[test]
    fn directions_degree_one_gives_double_vertical() {
        // alpha p + x^2 at the origin: finite root 0 (simple), vertical
        // direction with multiplicity 2
        let opts = AnalysisOpts::default();
        let dirs = admissible_directions(&ex5(2.0), origin(), &opts).unwrap();
        let ds = dirs.directions();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[0].direction.slope(), 0.0);
        assert_eq!(ds[0].multiplicity, 1);
        assert!(ds[1].direction.is_infinite());
        assert_eq!(ds[1].multiplicity, 2);
    }

    #[test]
    fn directions_square_gives_double_zero_single_vertical() {
        let opts = AnalysisOpts::default();
        let dirs = admissible_directions(&ex1(), origin(), &opts).unwrap();
        let ds = dirs.directions();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[0].direction.slope(), 0.0);
        assert_eq!(ds[0].multiplicity, 2);
        assert!(ds[1].direction.is_infinite());
        assert_eq!(ds[1].multiplicity, 1);
    }

    #[test]
    fn directions_all_degenerate_at_flat_point() {
        let opts = AnalysisOpts::default();
        let dirs = admissible_directions(&ex2(), origin(), &opts).unwrap();
        assert_eq!(dirs, AdmissibleDirections::AllDegenerate);
    }

    #[test]
    fn eigen_data_for_cubic_directions() {
        let opts = AnalysisOpts::default();
        let a = std::f64::consts::SQRT_2;
        let ode = ex4(a);

        let e0 = eigen_data(&ode, origin(), Direction::from_slope(0.0), &opts).unwrap();
        assert!((e0.lambda1 - 1.0).abs() < 1e-15);
        assert!((e0.lambda2 + a).abs() < 1e-15);
        assert!((e0.lambda + a).abs() < 1e-15);
        assert_eq!(e0.rationality, Rationality::Irrational);
        assert_eq!(e0.resonance, None);

        let e1 = eigen_data(&ode, origin(), Direction::from_slope(1.0), &opts).unwrap();
        assert!((e1.lambda2 - 2.0 * a).abs() < 1e-14);
        assert_eq!(e1.rationality, Rationality::Irrational);
    }

    #[test]
    fn eigen_data_resonances() {
        let opts = AnalysisOpts::default();
        // alpha = 1: lambda = -1 at p = 0 -> resonance (1,1), order 2
        let e = eigen_data(&ex4(1.0), origin(), Direction::from_slope(0.0), &opts).unwrap();
        assert_eq!(e.rationality, Rationality::Integer(-1));
        assert_eq!(e.resonance, Some(Resonance { p: 1, q: 1, order: 2 }));
    }

    #[test]
    fn resonance_find_frozen_pairs() {
        let r = resonance_find(1.0, -2.0, 16, 1e-12).unwrap();
        assert_eq!((r.p, r.q, r.order), (2, 1, 3));

        let r = resonance_find(3.0, -1.0, 16, 1e-12).unwrap();
        assert_eq!((r.p, r.q, r.order), (1, 3, 4));

        assert_eq!(resonance_find(1.0, 2.0, 16, 1e-12), None);
        assert_eq!(resonance_find(1.0, -std::f64::consts::SQRT_2, 16, 1e-12), None);
    }

    #[test]
    fn samovol_order_frozen_values() {
        assert_eq!(samovol_order(1, 1.0, -std::f64::consts::SQRT_2), 10);
        assert_eq!(samovol_order(1, 1.0, -1.0), 8);
        assert_eq!(samovol_order(2, 1.0, 3.0), 32);
    }

    #[test]
    fn classify_saddle_and_nodes_for_irrational_ratio() {
        let opts = AnalysisOpts::default();
        let a = std::f64::consts::SQRT_2;
        let ode = ex4(a);

        let c = classify(&ode, origin(), Direction::from_slope(0.0), &opts);
        assert_eq!(c.verdict, Verdict::Saddle);
        assert_eq!(c.family_form.unwrap().kind, FamilyKind::Unique);

        let c = classify(&ode, origin(), Direction::from_slope(1.0), &opts);
        assert_eq!(c.verdict, Verdict::NodeNonResonant);
        let ff = c.family_form.unwrap();
        assert_eq!(ff.kind, FamilyKind::PowerLaw);
        assert!((ff.exponent - 2.0 * a).abs() < 1e-12);
        assert!(!ff.log_possible);
    }

    #[test]
    fn classify_resonant_cases() {
        let opts = AnalysisOpts::default();

        let c = classify(&ex4(1.0), origin(), Direction::from_slope(0.0), &opts);
        assert_eq!(c.verdict, Verdict::NegativeRationalResonant);
        assert_eq!(c.eigen.unwrap().resonance.unwrap().order, 2);

        let c = classify(&ex4(1.0), origin(), Direction::from_slope(1.0), &opts);
        assert_eq!(c.verdict, Verdict::NodePositiveResonant);
        let ff = c.family_form.unwrap();
        assert_eq!(ff.kind, FamilyKind::LogResonant);
        assert_eq!(ff.exponent, 2.0);
        assert!(ff.log_possible);

        let c = classify(&ex5(2.0), origin(), Direction::from_slope(0.0), &opts);
        assert_eq!(c.verdict, Verdict::NodePositiveResonant);
    }

    #[test]
    fn classify_reciprocal_integer_ratio() {
        // x p' = 0.5 p: lambda = 1/2 at p = 0
        let ode = SingularOde::new(
            Poly2::var_x(),
            CubicField::new([
                Poly2::zero(),
                Poly2::constant(0.5),
                Poly2::zero(),
                Poly2::zero(),
            ]),
        );
        let c = classify(&ode, origin(), Direction::from_slope(0.0), &AnalysisOpts::default());
        assert_eq!(c.verdict, Verdict::NodeReciprocalResonant);
        let ff = c.family_form.unwrap();
        assert!(!ff.log_possible, "log coefficient vanishes at reciprocal ratios");
        assert!((ff.exponent - 0.5).abs() < 1e-15);
    }

    #[test]
    fn classify_genericity_failures() {
        let opts = AnalysisOpts::default();

        let c = classify(&ex4(1.0), PlanePoint::new(0.3, 0.0), Direction::from_slope(0.0), &opts);
        assert_eq!(c.verdict, Verdict::NotSingular);

        let c = classify(&ex2(), origin(), Direction::from_slope(0.0), &opts);
        assert_eq!(c.verdict, Verdict::DegenerateLocus);

        let c = classify(&ex1(), origin(), Direction::from_slope(0.0), &opts);
        assert_eq!(c.verdict, Verdict::MultipleRoot);
        assert_eq!(c.multiplicity, Some(2));

        let c = classify(&ex4(1.0), origin(), Direction::from_slope(0.5), &opts);
        assert_eq!(c.verdict, Verdict::NotAdmissible);
    }

    #[test]
    fn classify_vertical_direction_via_axis_swap() {
        // 2 y p' = p^2 at the origin; vertical direction has multiplicity 1
        // and swaps to slope 0 of the reciprocal equation with
        // lambda1 = 2, lambda2 = -1 -> lambda = -1/2.
        let opts = AnalysisOpts::default();
        let c = classify(&ex1(), origin(), Direction::infinite(), &opts);
        assert_eq!(c.verdict, Verdict::NegativeRationalResonant);
        let e = c.eigen.unwrap();
        assert!((e.lambda1 - 2.0).abs() < 1e-15);
        assert!((e.lambda2 + 1.0).abs() < 1e-15);
        assert_eq!(e.resonance, Some(Resonance { p: 1, q: 2, order: 3 }));
    }

    #[test]
    fn classify_non_transversal_vertical_direction() {
        // x p' = 2p + x^2: vertical direction is tangent to the locus x = 0;
        // it is also a double root, which takes precedence.
        let opts = AnalysisOpts::default();
        let c = classify(&ex5(2.0), origin(), Direction::infinite(), &opts);
        assert_eq!(c.verdict, Verdict::MultipleRoot);
    }

    #[test]
    fn oscillation_exclusion_by_nonvanishing_coefficients() {
        let opts = AnalysisOpts::default();
        for y0 in [-1.0, 0.0, 0.7] {
            let q = PlanePoint::new(0.0, y0);
            assert_eq!(
                oscillation_excluded(&ex4(1.5), q, &opts).unwrap(),
                OscillationExclusion::Excluded
            );
            assert_eq!(
                oscillation_excluded(&ex5(2.0), q, &opts).unwrap(),
                OscillationExclusion::Excluded
            );
        }
        assert_eq!(
            oscillation_excluded(&ex2(), origin(), &opts).unwrap(),
            OscillationExclusion::NotExcluded
        );
        assert_eq!(
            oscillation_excluded(&ex3(), origin(), &opts).unwrap(),
            OscillationExclusion::NotExcluded
        );
    }

    #[test]
    fn geodesic_gradient_test() {
        use crate::model::Metric;
        let opts = AnalysisOpts::default();

        // c = y: locus y = 0 with gradient (0, 1)
        let m = Metric { a: Poly2::constant(1.0), b: Poly2::zero(), c: Poly2::var_y() };
        assert_eq!(
            geodesic_oscillation_necessary(&m, origin(), &opts).unwrap(),
            GeodesicOscillation::ConditionFails
        );

        // c = y^2: gradient vanishes on the locus
        let m2 = Metric { a: Poly2::constant(1.0), b: Poly2::zero(), c: Poly2::term(0, 2, 1.0) };
        assert_eq!(
            geodesic_oscillation_necessary(&m2, origin(), &opts).unwrap(),
            GeodesicOscillation::ConditionHolds
        );

        // Euclidean plane: no locus at all
        let m3 = Metric {
            a: Poly2::constant(1.0),
            b: Poly2::zero(),
            c: Poly2::constant(1.0),
        };
        assert!(matches!(
            geodesic_oscillation_necessary(&m3, origin(), &opts),
            Err(AnalysisError::NotOnLocus { .. })
        ));
    }

    #[test]
    fn point_report_shape() {
        let opts = AnalysisOpts::default();
        let rep = point_report(&ex4(1.0), origin(), &opts);
        assert!(rep.on_locus);
        assert_eq!(rep.point_verdict, "singular");
        assert_eq!(rep.directions.len(), 3);
        assert_eq!(rep.oscillation, "excluded");
        let verdicts: Vec<&str> = rep.directions.iter().map(|d| d.verdict.as_str()).collect();
        assert_eq!(
            verdicts,
            vec!["node_positive_resonant", "negative_rational_resonant", "node_positive_resonant"]
        );

        let rep = point_report(&ex4(1.0), PlanePoint::new(1.0, 0.0), &opts);
        assert_eq!(rep.point_verdict, "not_singular");
        assert!(rep.directions.is_empty());

        let rep = point_report(&ex2(), origin(), &opts);
        assert_eq!(rep.point_verdict, "degenerate_locus");
        assert!(rep.all_directions_degenerate);
        assert_eq!(rep.oscillation, "not_excluded");
    }
}

//! Tracing solution families out of singular points and measuring their
//! asymptotics: eigenvector seeding, exponent and log-coefficient fits,
//! and a windowed oscillation detector.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{classify, AnalysisOpts, Verdict};
use crate::field::{jacobian, JetPoint};
use crate::integrate::{integrate, IntegrateOpts, TimeDirection, Trajectory};
use crate::model::{Direction, PlanePoint, SingularOde};

/// Which side of the singular locus a trajectory lives on, named by the sign
/// of `Delta` there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusSide {
    Plus,
    Minus,
}

impl LocusSide {
    pub fn sign(self) -> f64 {
        match self {
            LocusSide::Plus => 1.0,
            LocusSide::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceOpts {
    pub integrate: IntegrateOpts,
    pub analysis: AnalysisOpts,
    /// Base seeding distance from the singular point, before division by the
    /// spectrum magnitude (strong eigenvalues shrink the region where the
    /// linearization is trustworthy).
    pub seed_distance: f64,
}

impl Default for TraceOpts {
    fn default() -> Self {
        Self {
            integrate: IntegrateOpts::default(),
            analysis: AnalysisOpts::default(),
            seed_distance: 1e-3,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TraceError {
    #[error("classification {verdict:?} predicts no traceable family")]
    NotTraceable { verdict: Verdict },
    #[error("tracing needs a finite direction; swap axes for the vertical one")]
    VerticalDirection,
    #[error("seed fell on the wrong side of the locus (Delta = {delta:.3e})")]
    SeedRejected { delta: f64 },
    #[error("need {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("trajectories must share one locus side")]
    MixedSides,
}

fn traceable(v: Verdict) -> bool {
    matches!(
        v,
        Verdict::Saddle
            | Verdict::NodeNonResonant
            | Verdict::NodePositiveResonant
            | Verdict::NodeReciprocalResonant
    )
}

struct SeedFrame {
    t0: JetPoint,
    w1: [f64; 3],
    lambda1: f64,
    lambda2: f64,
}

fn seed_frame(
    ode: &SingularOde,
    q0: PlanePoint,
    dir: Direction,
    opts: &TraceOpts,
) -> Result<SeedFrame, TraceError> {
    if dir.is_infinite() {
        return Err(TraceError::VerticalDirection);
    }
    let c = classify(ode, q0, dir, &opts.analysis);
    if !traceable(c.verdict) {
        return Err(TraceError::NotTraceable { verdict: c.verdict });
    }
    let eigen = c.eigen.expect("traceable verdicts carry eigen data");
    let p_i = dir.slope();
    let t0 = JetPoint::new(q0.x, q0.y, p_i);

    // Eigenvector of the locus-transversal eigenvalue: (1, p, w) with
    // w = (M_x + p M_y) / (lambda1 - lambda2).
    let a = jacobian(ode, t0);
    let w = (a[2][0] + p_i * a[2][1]) / (eigen.lambda1 - eigen.lambda2);
    let norm = (1.0 + p_i * p_i + w * w).sqrt();
    Ok(SeedFrame {
        t0,
        w1: [1.0 / norm, p_i / norm, w / norm],
        lambda1: eigen.lambda1,
        lambda2: eigen.lambda2,
    })
}

/// Start state for a trace out of `(q0, dir)`: a point at the scaled seeding
/// distance from `T0 = (q0, p_i)` along the locus-transversal eigenvector,
/// oriented onto the requested side, then displaced by `offset` along the
/// vertical axis. Offsets select members of a node family; the map from
/// offset to family member is affine, so two seeds bracket every member
/// between them.
pub fn seed_state(
    ode: &SingularOde,
    q0: PlanePoint,
    dir: Direction,
    side: LocusSide,
    offset: f64,
    opts: &TraceOpts,
) -> Result<JetPoint, TraceError> {
    let frame = seed_frame(ode, q0, dir, opts)?;
    let sigma = side.sign() * frame.lambda1.signum();
    let h = opts.seed_distance / frame.lambda1.abs().max(frame.lambda2.abs()).max(1.0);
    let seed = JetPoint::new(
        frame.t0.x + h * sigma * frame.w1[0],
        frame.t0.y + h * sigma * frame.w1[1],
        frame.t0.p + h * sigma * frame.w1[2] + offset,
    );
    let delta = ode.delta_at(seed.plane());
    if delta * side.sign() <= 0.0 {
        return Err(TraceError::SeedRejected { delta });
    }
    Ok(seed)
}

/// Traces one trajectory per offset away from the singular point; reversing
/// any of them gives an approximation of a solution issuing from `q0`
/// tangent to `dir`. Requires a Saddle or Node classification.
///
/// Integration time runs in the direction that grows `|Delta|` (sign of
/// `lambda1`), with the step capped so the exponential rates stay resolved,
/// and with the locus re-approach guard armed: a genuine solution graph
/// meets the locus only at `q0` itself.
pub fn trace_from_singular(
    ode: &SingularOde,
    q0: PlanePoint,
    dir: Direction,
    side: LocusSide,
    offsets: &[f64],
    opts: &TraceOpts,
) -> Result<Vec<Trajectory>, TraceError> {
    let frame = seed_frame(ode, q0, dir, opts)?;
    let time_direction = if frame.lambda1 > 0.0 {
        TimeDirection::Forward
    } else {
        TimeDirection::Backward
    };
    let rate = frame.lambda1.abs().max(frame.lambda2.abs()).max(1.0);
    let mut int_opts = opts.integrate.clone();
    int_opts.locus_guard = true;
    int_opts.max_dt = int_opts.max_dt.min(0.1 / rate);

    let mut out = Vec::with_capacity(offsets.len());
    for &offset in offsets {
        let seed = seed_state(ode, q0, dir, side, offset, opts)?;
        let mut traj = integrate(ode, seed, time_direction, &int_opts);
        traj.side = Some(side);
        traj.seed_offset = Some(offset);
        out.push(traj);
    }
    Ok(out)
}

/// Window over which asymptotic fits run, in terms of the distance
/// `s = |x - x0|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum FitWindow {
    /// Fractions of the trajectory's own maximal distance from the point.
    Relative(f64, f64),
    /// Literal bounds on `s`.
    Absolute(f64, f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct FitOpts {
    pub window: FitWindow,
    /// Minimum in-window samples per trajectory.
    pub min_samples: usize,
    /// Minimum number of trajectories entering the estimate.
    pub min_trajectories: usize,
}

impl Default for FitOpts {
    fn default() -> Self {
        // Too close to the point amplifies seeding bias, too far leaves the
        // asymptotic regime.
        Self { window: FitWindow::Relative(1e-2, 1e-1), min_samples: 20, min_trajectories: 2 }
    }
}

/// Fitted asymptotics of a traced family on one side of the locus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyEstimate {
    pub side: LocusSide,
    /// Power of `|x - x0|` in the slope deviation `p - p_i`.
    pub exponent_hat: f64,
    /// Coefficient of the `ln|x - x0|` correction (zero when not fitted).
    pub log_coefficient_hat: f64,
    /// Pooled root-mean-square residual of the underlying least-squares
    /// fits; always nonnegative.
    pub fit_residual: f64,
}

fn common_side(trajs: &[Trajectory]) -> Result<LocusSide, TraceError> {
    let mut side = None;
    for t in trajs {
        match (side, t.side) {
            (_, None) => return Err(TraceError::MixedSides),
            (None, s) => side = s,
            (Some(a), Some(b)) if a == b => {}
            _ => return Err(TraceError::MixedSides),
        }
    }
    side.ok_or(TraceError::InsufficientSamples { needed: 1, got: 0 })
}

fn window_bounds(traj: &Trajectory, x0: f64, window: FitWindow) -> (f64, f64) {
    match window {
        FitWindow::Absolute(lo, hi) => (lo, hi),
        FitWindow::Relative(lo, hi) => {
            let extent = traj
                .samples
                .iter()
                .map(|s| (s.x - x0).abs())
                .fold(0.0f64, f64::max);
            (lo * extent, hi * extent)
        }
    }
}

fn in_window(traj: &Trajectory, x0: f64, window: FitWindow) -> Vec<(f64, f64)> {
    let (lo, hi) = window_bounds(traj, x0, window);
    traj.samples
        .iter()
        .filter_map(|s| {
            let d = (s.x - x0).abs();
            (d >= lo && d <= hi && d > 0.0).then_some((d, s.p))
        })
        .collect()
}

/// Least squares for `y = a + b x`; returns `(b, a, rms_residual)`.
fn linfit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in pts {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss = pts.iter().map(|(x, y)| (y - (a + b * x)).powi(2)).sum::<f64>();
    (b, a, (ss / n).sqrt())
}

/// Estimates the power-law exponent of a one-parameter family: the slope of
/// `ln|p - p_i|` against `ln|x - x0|`, averaged over the trajectories.
/// Members contributing fewer than `min_samples` usable window points are
/// skipped; at least `min_trajectories` must survive.
pub fn estimate_exponent(
    trajs: &[Trajectory],
    q0: PlanePoint,
    dir: Direction,
    fit: &FitOpts,
) -> Result<FamilyEstimate, TraceError> {
    if dir.is_infinite() {
        return Err(TraceError::VerticalDirection);
    }
    let side = common_side(trajs)?;
    if trajs.len() < fit.min_trajectories {
        return Err(TraceError::InsufficientSamples {
            needed: fit.min_trajectories,
            got: trajs.len(),
        });
    }
    let p_i = dir.slope();
    let mut slopes = Vec::new();
    let mut pooled_ss = 0.0;
    let mut pooled_n = 0usize;
    for traj in trajs {
        let pts: Vec<(f64, f64)> = in_window(traj, q0.x, fit.window)
            .into_iter()
            .filter(|(_, p)| (p - p_i).abs() > 0.0)
            .map(|(d, p)| (d.ln(), (p - p_i).abs().ln()))
            .collect();
        // A member with too few usable points carries no exponent
        // information; the zero-offset member riding the invariant line
        // loses every point to the deviation filter.
        if pts.len() < fit.min_samples {
            continue;
        }
        let (slope, _, rms) = linfit(&pts);
        slopes.push(slope);
        pooled_ss += rms * rms * pts.len() as f64;
        pooled_n += pts.len();
    }
    if slopes.len() < fit.min_trajectories {
        return Err(TraceError::InsufficientSamples {
            needed: fit.min_trajectories,
            got: slopes.len(),
        });
    }
    Ok(FamilyEstimate {
        side,
        exponent_hat: slopes.iter().sum::<f64>() / slopes.len() as f64,
        log_coefficient_hat: 0.0,
        fit_residual: (pooled_ss / pooled_n as f64).sqrt(),
    })
}

/// Measures the logarithmic correction of an integer-ratio family: the slope
/// of `(p - p_i)/|x - x0|^n` against `ln|x - x0|` estimates the log
/// coefficient (the fit intercept is the family parameter and is not
/// aggregated across trajectories).
pub fn detect_log_term(
    trajs: &[Trajectory],
    q0: PlanePoint,
    dir: Direction,
    n: u32,
    fit: &FitOpts,
) -> Result<FamilyEstimate, TraceError> {
    if dir.is_infinite() {
        return Err(TraceError::VerticalDirection);
    }
    let side = common_side(trajs)?;
    if trajs.len() < fit.min_trajectories {
        return Err(TraceError::InsufficientSamples {
            needed: fit.min_trajectories,
            got: trajs.len(),
        });
    }
    let p_i = dir.slope();
    let mut slopes = Vec::new();
    let mut pooled_ss = 0.0;
    let mut pooled_n = 0usize;
    for traj in trajs {
        let pts: Vec<(f64, f64)> = in_window(traj, q0.x, fit.window)
            .into_iter()
            .map(|(d, p)| (d.ln(), (p - p_i) / d.powi(n as i32)))
            .collect();
        // Skip members without information: too few window samples, or the
        // exceptional member whose deviation vanishes identically (it has
        // parameter and log coefficient both zero, unlike the generic ones).
        if pts.len() < fit.min_samples || pts.iter().all(|&(_, v)| v == 0.0) {
            continue;
        }
        let (slope, _, rms) = linfit(&pts);
        slopes.push(slope);
        pooled_ss += rms * rms * pts.len() as f64;
        pooled_n += pts.len();
    }
    if slopes.len() < fit.min_trajectories {
        return Err(TraceError::InsufficientSamples {
            needed: fit.min_trajectories,
            got: slopes.len(),
        });
    }
    Ok(FamilyEstimate {
        side,
        exponent_hat: n as f64,
        log_coefficient_hat: slopes.iter().sum::<f64>() / slopes.len() as f64,
        fit_residual: (pooled_ss / pooled_n as f64).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OscillationVerdict {
    /// Slope settles: it varies less than `tol_proper` across the innermost
    /// windows.
    Proper,
    /// Strict slope extrema keep arriving at a non-decreasing per-window
    /// rate over at least `min_run` consecutive windows.
    Oscillating,
    /// Neither criterion fires (thresholds are heuristic; this outcome is
    /// first-class).
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct OscOpts {
    /// Geometric window ratio in `(0, 1)`.
    pub gamma: f64,
    /// Extrema a window needs before it counts toward an oscillation run.
    pub min_extrema: u32,
    /// Consecutive qualifying windows needed for the oscillating verdict.
    pub min_run: usize,
    /// Slope-variation bound for the proper verdict.
    pub tol_proper: f64,
}

impl Default for OscOpts {
    fn default() -> Self {
        Self { gamma: 0.5, min_extrema: 2, min_run: 3, tol_proper: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OscillationReport {
    /// Strict local extrema of `p` per geometric window, outermost first.
    pub extrema_counts: Vec<u32>,
    pub verdict: OscillationVerdict,
    /// Mean slope over the innermost populated window; present only for the
    /// proper verdict.
    pub p_limit_hat: Option<f64>,
    /// Length of the longest qualifying window run.
    pub longest_run: usize,
}

/// Windowed oscillation detector on raw `(distance, slope)` samples. The
/// approach interval is split into geometric windows
/// `s in (r * gamma^(k+1), r * gamma^k]` with `r` the largest sampled
/// distance, and strict local extrema of the slope sequence (ordered by
/// decreasing distance) are counted per window.
pub fn oscillation_detect_samples(points: &[(f64, f64)], opts: &OscOpts) -> OscillationReport {
    assert!(opts.gamma > 0.0 && opts.gamma < 1.0, "window ratio must be in (0, 1)");
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(s, p)| s.is_finite() && *s > 0.0 && p.is_finite())
        .collect();
    pts.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite distances"));
    pts.dedup_by(|a, b| a.0 == b.0);

    if pts.len() < 3 {
        return OscillationReport {
            extrema_counts: Vec::new(),
            verdict: OscillationVerdict::Inconclusive,
            p_limit_hat: None,
            longest_run: 0,
        };
    }

    let r = pts[0].0;
    let ln_gamma = opts.gamma.ln();
    let win = |s: f64| ((s / r).ln() / ln_gamma).floor().max(0.0) as usize;
    let n_windows = win(pts[pts.len() - 1].0) + 1;

    let mut extrema_counts = vec![0u32; n_windows];
    let mut sample_counts = vec![0usize; n_windows];
    for (s, _) in &pts {
        sample_counts[win(*s)] += 1;
    }
    for j in 1..pts.len() - 1 {
        let left = pts[j].1 - pts[j - 1].1;
        let right = pts[j + 1].1 - pts[j].1;
        if left * right < 0.0 {
            extrema_counts[win(pts[j].0)] += 1;
        }
    }

    // Longest inward run of windows with enough extrema, the count never
    // dropping as the windows shrink.
    let mut longest_run = 0usize;
    let mut run = 0usize;
    let mut prev = 0u32;
    for &c in &extrema_counts {
        if c >= opts.min_extrema && (run == 0 || c >= prev) {
            run += 1;
        } else if c >= opts.min_extrema {
            run = 1;
        } else {
            run = 0;
        }
        prev = c;
        longest_run = longest_run.max(run);
    }

    if longest_run >= opts.min_run {
        return OscillationReport {
            extrema_counts,
            verdict: OscillationVerdict::Oscillating,
            p_limit_hat: None,
            longest_run,
        };
    }

    // Proper: slope variation over the innermost populated windows.
    let populated: Vec<usize> =
        (0..n_windows).filter(|&k| sample_counts[k] > 0).collect();
    if populated.len() >= opts.min_run {
        let tail = &populated[populated.len() - opts.min_run..];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (s, p) in &pts {
            if tail.contains(&win(*s)) {
                lo = lo.min(*p);
                hi = hi.max(*p);
            }
        }
        if hi - lo < opts.tol_proper {
            let innermost = *populated.last().expect("nonempty");
            let inner: Vec<f64> = pts
                .iter()
                .filter(|(s, _)| win(*s) == innermost)
                .map(|(_, p)| *p)
                .collect();
            let mean = inner.iter().sum::<f64>() / inner.len() as f64;
            return OscillationReport {
                extrema_counts,
                verdict: OscillationVerdict::Proper,
                p_limit_hat: Some(mean),
                longest_run,
            };
        }
    }

    OscillationReport {
        extrema_counts,
        verdict: OscillationVerdict::Inconclusive,
        p_limit_hat: None,
        longest_run,
    }
}

/// Detector entry point for a traced trajectory: distances are measured from
/// `q0` along the x axis (the trajectory must stay on one side of it).
pub fn oscillation_detect(
    traj: &Trajectory,
    q0: PlanePoint,
    opts: &OscOpts,
) -> OscillationReport {
    let pts: Vec<(f64, f64)> =
        traj.samples.iter().map(|s| ((s.x - q0.x).abs(), s.p)).collect();
    oscillation_detect_samples(&pts, opts)
}

/// Renders a trajectory as CSV: one metadata comment line, a `t,x,y,p`
/// header, and 17-significant-digit rows, so equal trajectories always print
/// byte-identically.
pub fn trajectory_csv(traj: &Trajectory, label: &str) -> String {
    let side = match traj.side {
        Some(LocusSide::Plus) => "plus",
        Some(LocusSide::Minus) => "minus",
        None => "none",
    };
    let dir = match traj.time_direction {
        TimeDirection::Forward => "forward",
        TimeDirection::Backward => "backward",
    };
    let mut out = String::new();
    out.push_str(&format!(
        "# {label}; start={:.16e},{:.16e},{:.16e}; direction={dir}; side={side}; offset={}; termination={:?}\n",
        traj.start.x,
        traj.start.y,
        traj.start.p,
        traj.seed_offset.map_or("none".to_string(), |o| format!("{o:.16e}")),
        traj.termination,
    ));
    out.push_str("t,x,y,p\n");
    for s in &traj.samples {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", s.t, s.x, s.y, s.p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{Termination, TrajectorySample};
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

    fn synthetic(side: LocusSide, f: impl Fn(f64) -> f64) -> Trajectory {
        // Geometric x-grid over three decades, outermost last so that t is
        // strictly monotone like a genuine outward trace.
        let n = 1200;
        let samples: Vec<TrajectorySample> = (0..=n)
            .map(|j| {
                let x = 1e-3 * 10f64.powf(3.0 * j as f64 / n as f64);
                TrajectorySample { t: j as f64, x, y: 0.0, p: f(x) }
            })
            .collect();
        let start = samples[0].jet();
        Trajectory {
            samples,
            termination: Termination::BoxExit,
            start,
            time_direction: TimeDirection::Forward,
            side: Some(side),
            seed_offset: None,
        }
    }

    #[test]
    fn exponent_recovers_exact_power_law() {
        let pi = std::f64::consts::PI;
        let p_i = 0.3;
        let trajs = vec![
            synthetic(LocusSide::Plus, |x| p_i + x.powf(pi)),
            synthetic(LocusSide::Plus, |x| p_i - 2.0 * x.powf(pi)),
        ];
        let est = estimate_exponent(
            &trajs,
            PlanePoint::new(0.0, 0.0),
            Direction::from_slope(p_i),
            &FitOpts::default(),
        )
        .unwrap();
        assert!((est.exponent_hat - pi).abs() < 1e-6, "got {}", est.exponent_hat);
        assert_eq!(est.side, LocusSide::Plus);
        assert!(est.fit_residual >= 0.0);
        assert!(est.fit_residual < 1e-9);
    }

    #[test]
    fn log_term_slope_is_the_log_coefficient() {
        let q0 = PlanePoint::new(0.0, 0.0);
        let dir = Direction::from_slope(0.0);

        let trajs = vec![
            synthetic(LocusSide::Plus, |x| x * x * x.ln()),
            synthetic(LocusSide::Plus, |x| x * x * (5.0 + x.ln())),
        ];
        let est = detect_log_term(&trajs, q0, dir, 2, &FitOpts::default()).unwrap();
        assert!((est.log_coefficient_hat - 1.0).abs() < 1e-6, "got {}", est.log_coefficient_hat);
        assert_eq!(est.exponent_hat, 2.0);

        // Pure power family: no log term.
        let trajs = vec![
            synthetic(LocusSide::Minus, |x| -0.5 * x * x),
            synthetic(LocusSide::Minus, |x| 3.0 * x * x),
        ];
        let est = detect_log_term(&trajs, q0, dir, 2, &FitOpts::default()).unwrap();
        assert!(est.log_coefficient_hat.abs() < 1e-9);
    }

    #[test]
    fn estimators_validate_their_inputs() {
        let q0 = PlanePoint::new(0.0, 0.0);
        let dir = Direction::from_slope(0.0);
        let fit = FitOpts::default();

        let one = vec![synthetic(LocusSide::Plus, |x| x * x)];
        assert!(matches!(
            estimate_exponent(&one, q0, dir, &fit),
            Err(TraceError::InsufficientSamples { needed: 2, got: 1 })
        ));

        let mixed = vec![
            synthetic(LocusSide::Plus, |x| x * x),
            synthetic(LocusSide::Minus, |x| x * x),
        ];
        assert!(matches!(
            estimate_exponent(&mixed, q0, dir, &fit),
            Err(TraceError::MixedSides)
        ));

        assert!(matches!(
            estimate_exponent(&mixed, q0, Direction::infinite(), &fit),
            Err(TraceError::VerticalDirection)
        ));
    }

    #[test]
    fn oscillation_detector_on_closed_forms() {
        // Slope of x^2 * cos(1/x) type solutions: extrema pile up at
        // frequency 1/x; sample uniformly in 1/x to resolve them.
        let mut pts = Vec::new();
        let mut u = 1.0f64;
        while u <= 1.0e4 {
            let x = 1.0 / u;
            pts.push((x, 2.0 * x * (1.0 / x).cos() + (1.0 / x).sin()));
            u += 0.05;
        }
        let rep = oscillation_detect_samples(&pts, &OscOpts::default());
        assert_eq!(rep.verdict, OscillationVerdict::Oscillating);
        assert!(rep.p_limit_hat.is_none());
        assert!(rep.longest_run >= 3);

        // Monotone slope p = 2x: settles to 0.
        let pts: Vec<(f64, f64)> = (0..4000)
            .map(|j| {
                let x = 1e-4 * 10f64.powf(4.0 * j as f64 / 4000.0);
                (x, 2.0 * x)
            })
            .collect();
        let rep = oscillation_detect_samples(&pts, &OscOpts::default());
        assert_eq!(rep.verdict, OscillationVerdict::Proper);
        let lim = rep.p_limit_hat.unwrap();
        assert!(lim.abs() < 1e-3, "limit estimate {lim}");

        // Too little data.
        let rep = oscillation_detect_samples(&[(0.5, 1.0), (0.25, 0.5)], &OscOpts::default());
        assert_eq!(rep.verdict, OscillationVerdict::Inconclusive);
    }

    #[test]
    fn log_periodic_oscillation_needs_matched_windows() {
        // Slope 2 cos(ln x): extrema spaced pi apart in ln x, so windows
        // must be at least that wide to ever hold one.
        let pts: Vec<(f64, f64)> = (0..120_000)
            .map(|j| {
                let x = 2e-6 * (1e6f64).powf(j as f64 / 120_000.0);
                (x, 2.0 * (x.ln()).cos())
            })
            .collect();
        let opts = OscOpts {
            gamma: (-std::f64::consts::PI).exp(),
            min_extrema: 1,
            ..OscOpts::default()
        };
        let rep = oscillation_detect_samples(&pts, &opts);
        assert_eq!(rep.verdict, OscillationVerdict::Oscillating);

        // The default half-width windows cannot certify it.
        let rep = oscillation_detect_samples(&pts, &OscOpts::default());
        assert_ne!(rep.verdict, OscillationVerdict::Oscillating);
    }

    #[test]
    fn seeds_respect_side_and_fail_loudly() {
        let ode = ex4(1.0);
        let q0 = PlanePoint::new(0.0, 0.0);
        let opts = TraceOpts::default();

        let plus = seed_state(&ode, q0, Direction::from_slope(1.0), LocusSide::Plus, 0.0, &opts)
            .unwrap();
        assert!(plus.x > 0.0);
        assert!((plus.y - plus.x).abs() < 1e-15, "eigenvector is (1, p, 0)");
        assert_eq!(plus.p, 1.0);

        let minus =
            seed_state(&ode, q0, Direction::from_slope(1.0), LocusSide::Minus, 2e-4, &opts)
                .unwrap();
        assert!(minus.x < 0.0);
        assert!((minus.p - 1.0002).abs() < 1e-12);

        // Not traceable: negative rational resonance at p = 0.
        assert!(matches!(
            seed_state(&ode, q0, Direction::from_slope(0.0), LocusSide::Plus, 0.0, &opts),
            Err(TraceError::NotTraceable { verdict: Verdict::NegativeRationalResonant })
        ));
        // Multiple root through a degree-deficient cubic.
        assert!(matches!(
            seed_state(&ode, q0, Direction::infinite(), LocusSide::Plus, 0.0, &opts),
            Err(TraceError::VerticalDirection)
        ));
    }

    #[test]
    fn traced_node_member_stays_on_its_invariant_line() {
        let ode = ex4(1.0);
        let q0 = PlanePoint::new(0.0, 0.0);
        let opts = TraceOpts::default();
        let trajs = trace_from_singular(
            &ode,
            q0,
            Direction::from_slope(1.0),
            LocusSide::Plus,
            &[0.0],
            &opts,
        )
        .unwrap();
        assert_eq!(trajs.len(), 1);
        let traj = &trajs[0];
        assert_eq!(traj.termination, Termination::BoxExit);
        assert_eq!(traj.side, Some(LocusSide::Plus));
        assert_eq!(traj.seed_offset, Some(0.0));
        for s in &traj.samples {
            assert_eq!(s.p, 1.0, "offset zero seeds the p = 1 equilibrium line");
        }

        let none = trace_from_singular(
            &ode,
            q0,
            Direction::from_slope(1.0),
            LocusSide::Plus,
            &[],
            &opts,
        )
        .unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn csv_rendering_is_stable() {
        let traj = Trajectory {
            samples: vec![
                TrajectorySample { t: 0.0, x: 0.5, y: -0.25, p: 1.0 },
                TrajectorySample { t: 0.125, x: 0.75, y: 0.0, p: 0.5 },
            ],
            termination: Termination::BoxExit,
            start: JetPoint::new(0.5, -0.25, 1.0),
            time_direction: TimeDirection::Forward,
            side: Some(LocusSide::Plus),
            seed_offset: Some(0.0),
        };
        let a = trajectory_csv(&traj, "case");
        let b = trajectory_csv(&traj, "case");
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert!(lines.next().unwrap().starts_with("# case; start=5.0000000000000000e-1"));
        assert_eq!(lines.next().unwrap(), "t,x,y,p");
        assert_eq!(
            lines.next().unwrap(),
            "0.0000000000000000e0,5.0000000000000000e-1,-2.5000000000000000e-1,1.0000000000000000e0"
        );
    }
}

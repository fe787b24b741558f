//! Adaptive explicit integration of the lifted field with embedded
//! Dormand-Prince 4(5) error control and the termination conditions the
//! tracing layer needs: phase-space box exit, proximity to designated
//! singular points, and re-approach of the singular locus.

use serde::Serialize;

use crate::field::{field_eval, JetPoint};
use crate::model::SingularOde;
use crate::trace::LocusSide;

/// Axis-aligned integration box; leaving it terminates the trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxLimits {
    pub x: (f64, f64),
    pub y: (f64, f64),
    /// Bound on |p|; slopes beyond it are treated as blow-up.
    pub p_abs: f64,
}

impl BoxLimits {
    pub fn centered(cx: f64, cy: f64, half_width: f64, p_abs: f64) -> Self {
        Self { x: (cx - half_width, cx + half_width), y: (cy - half_width, cy + half_width), p_abs }
    }

    pub fn contains(&self, j: JetPoint) -> bool {
        j.x >= self.x.0
            && j.x <= self.x.1
            && j.y >= self.y.0
            && j.y <= self.y.1
            && j.p.abs() <= self.p_abs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TimeDirection {
    Forward,
    Backward,
}

impl TimeDirection {
    pub fn sign(self) -> f64 {
        match self {
            TimeDirection::Forward => 1.0,
            TimeDirection::Backward => -1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegrateOpts {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Largest step in internal time.
    pub max_dt: f64,
    /// Bound on |t|; hitting it is the `TimeLimit` termination.
    pub t_end: f64,
    pub limits: BoxLimits,
    /// Field sup-norm at or below this terminates with `FieldStall`.
    pub stall_norm: f64,
    /// Terminate when the state comes within `stop_radius` of any of these.
    pub stop_points: Vec<JetPoint>,
    pub stop_radius: f64,
    /// Watch the sign of `Delta` along the trajectory and terminate when it
    /// flips or collapses to zero (the locus is invariant for the exact
    /// flow, so either event means the continuation has lost meaning).
    pub locus_guard: bool,
    pub locus_touch_tol: f64,
}

impl Default for IntegrateOpts {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 200_000,
            max_dt: 0.1,
            t_end: 1e4,
            limits: BoxLimits::centered(0.0, 0.0, 2.0, 100.0),
            stall_norm: 1e-14,
            stop_points: Vec::new(),
            stop_radius: 1e-6,
            locus_guard: false,
            locus_touch_tol: 1e-12,
        }
    }
}

/// Why the integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    /// State left `limits`.
    BoxExit,
    /// `max_steps` accepted steps taken.
    StepLimit,
    /// |t| reached `t_end`.
    TimeLimit,
    /// Came within `stop_radius` of a designated singular point.
    SingularApproach,
    /// `Delta` changed sign or dropped to `locus_touch_tol` along the way.
    LocusRecross,
    /// Field sup-norm fell to `stall_norm`: an equilibrium was reached.
    FieldStall,
    /// Error control pushed the step below representable resolution; the
    /// samples up to the last accepted state remain valid.
    StepSizeUnderflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

impl TrajectorySample {
    pub fn jet(&self) -> JetPoint {
        JetPoint::new(self.x, self.y, self.p)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
    pub start: JetPoint,
    pub time_direction: TimeDirection,
    /// Which side of the locus the trajectory was seeded on, when it came
    /// from the tracing layer.
    pub side: Option<LocusSide>,
    /// Seed offset within a traced family, when applicable.
    pub seed_offset: Option<f64>,
}

impl Trajectory {
    pub fn last(&self) -> TrajectorySample {
        *self.samples.last().expect("trajectory always holds the start sample")
    }
}

// Dormand-Prince 4(5) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [f64; 3];

fn eval(ode: &SingularOde, s: State) -> State {
    let f = field_eval(ode, JetPoint::new(s[0], s[1], s[2]));
    [f.dx, f.dy, f.dp]
}

fn norm_inf(s: State) -> f64 {
    s[0].abs().max(s[1].abs()).max(s[2].abs())
}

fn dist(a: State, b: JetPoint) -> f64 {
    let d = [a[0] - b.x, a[1] - b.y, a[2] - b.p];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Integrates the lifted field from `start` until one of the termination
/// conditions fires. Every accepted step is recorded; the start state is
/// sample zero.
pub fn integrate(
    ode: &SingularOde,
    start: JetPoint,
    dir: TimeDirection,
    opts: &IntegrateOpts,
) -> Trajectory {
    let mut samples = vec![TrajectorySample { t: 0.0, x: start.x, y: start.y, p: start.p }];
    let mut state: State = [start.x, start.y, start.p];
    let mut t = 0.0f64;
    let sign = dir.sign();
    let delta_sign0 = ode.delta_at(start.plane()).signum();

    let finish = |samples: Vec<TrajectorySample>, termination: Termination| Trajectory {
        samples,
        termination,
        start,
        time_direction: dir,
        side: None,
        seed_offset: None,
    };

    let f0 = eval(ode, state);
    if norm_inf(f0) <= opts.stall_norm {
        return finish(samples, Termination::FieldStall);
    }
    if !opts.limits.contains(start) {
        return finish(samples, Termination::BoxExit);
    }
    for sp in &opts.stop_points {
        if dist(state, *sp) <= opts.stop_radius {
            return finish(samples, Termination::SingularApproach);
        }
    }

    let mut h = sign * opts.max_dt.min(1e-3);
    let mut steps = 0usize;

    loop {
        if steps >= opts.max_steps {
            return finish(samples, Termination::StepLimit);
        }
        // Do not step past the time horizon.
        if h.abs() > opts.t_end - t.abs() {
            h = sign * (opts.t_end - t.abs());
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            let term = if t.abs() >= opts.t_end * (1.0 - 1e-12) {
                Termination::TimeLimit
            } else {
                Termination::StepSizeUnderflow
            };
            return finish(samples, term);
        }

        // One embedded step.
        let mut k = [[0.0f64; 3]; 7];
        k[0] = eval(ode, state);
        for stage in 0..6 {
            let mut y = state;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for d in 0..3 {
                        y[d] += h * a * kj[d];
                    }
                }
            }
            k[stage + 1] = eval(ode, y);
        }
        let mut y5 = state;
        let mut err_vec = [0.0f64; 3];
        for (j, kj) in k.iter().enumerate() {
            for d in 0..3 {
                y5[d] += h * B5[j] * kj[d];
                err_vec[d] += h * (B5[j] - B4[j]) * kj[d];
            }
        }
        let mut err = 0.0f64;
        for d in 0..3 {
            let scale = opts.atol + opts.rtol * state[d].abs().max(y5[d].abs());
            let e = err_vec[d] / scale;
            err += e * e;
        }
        err = (err / 3.0).sqrt();

        if err <= 1.0 {
            // Accept.
            t += h;
            state = y5;
            steps += 1;
            samples.push(TrajectorySample { t, x: state[0], y: state[1], p: state[2] });
            let jet = JetPoint::new(state[0], state[1], state[2]);

            if !opts.limits.contains(jet) {
                return finish(samples, Termination::BoxExit);
            }
            for sp in &opts.stop_points {
                if dist(state, *sp) <= opts.stop_radius {
                    return finish(samples, Termination::SingularApproach);
                }
            }
            if opts.locus_guard {
                let delta = ode.delta_at(jet.plane());
                if delta.abs() <= opts.locus_touch_tol
                    || (delta_sign0 != 0.0 && delta.signum() != delta_sign0)
                {
                    return finish(samples, Termination::LocusRecross);
                }
            }
            if norm_inf(eval(ode, state)) <= opts.stall_norm {
                return finish(samples, Termination::FieldStall);
            }
            if t.abs() >= opts.t_end * (1.0 - 1e-12) {
                return finish(samples, Termination::TimeLimit);
            }
        }

        // Step-size controller (applies to both accepted and rejected steps).
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h.abs() > opts.max_dt {
            h = sign * opts.max_dt;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CubicField;
    use crate::poly::Poly2;

    /// x p' = p (p^2 - 1)
    fn ex4_unit() -> SingularOde {
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

    #[test]
    fn exponential_line_solution_is_exact() {
        // On the invariant line (x, x, 1) the lifted flow is
        // x(t) = x0 e^t, y = x, p = 1 identically.
        let ode = ex4_unit();
        let opts = IntegrateOpts::default();
        let traj = integrate(&ode, JetPoint::new(0.5, 0.5, 1.0), TimeDirection::Forward, &opts);
        assert_eq!(traj.termination, Termination::BoxExit);
        assert!(traj.samples.len() > 10);
        for s in &traj.samples {
            assert_eq!(s.p, 1.0, "p' vanishes identically on the line");
            assert_eq!(s.y, s.x, "y and x receive bitwise-equal increments");
            let exact = 0.5 * s.t.exp();
            assert!(
                (s.x - exact).abs() <= 1e-8 * exact.abs(),
                "t = {}: x = {} vs {}",
                s.t,
                s.x,
                exact
            );
        }
        assert!(traj.last().x > 2.0);
    }

    #[test]
    fn equilibrium_stalls_immediately() {
        let ode = ex4_unit();
        let opts = IntegrateOpts::default();
        // (0, 0.3, 0) is a zero of the lifted field.
        let traj = integrate(&ode, JetPoint::new(0.0, 0.3, 0.0), TimeDirection::Forward, &opts);
        assert_eq!(traj.termination, Termination::FieldStall);
        assert_eq!(traj.samples.len(), 1);
    }

    #[test]
    fn backward_flow_terminates_on_locus_touch() {
        let ode = ex4_unit();
        let opts = IntegrateOpts { locus_guard: true, ..IntegrateOpts::default() };
        let traj = integrate(&ode, JetPoint::new(0.5, 0.0, 0.0), TimeDirection::Backward, &opts);
        assert_eq!(traj.termination, Termination::LocusRecross);
        let last = traj.last();
        assert!(last.x.abs() <= 1e-12, "terminated at x = {:e}", last.x);
        assert!(last.t < -20.0, "decades of exponential decay before the touch");
    }

    #[test]
    fn stop_points_trigger_singular_approach() {
        let ode = ex4_unit();
        let opts = IntegrateOpts {
            stop_points: vec![JetPoint::new(0.0, 0.0, 0.0)],
            stop_radius: 1e-3,
            ..IntegrateOpts::default()
        };
        let traj = integrate(&ode, JetPoint::new(0.5, 0.0, 0.0), TimeDirection::Backward, &opts);
        assert_eq!(traj.termination, Termination::SingularApproach);
        let last = traj.last();
        assert!(last.x <= 1e-3 + 1e-9);
        assert!(last.x > 1e-5, "stopped at the radius, not at the locus");
    }

    #[test]
    fn step_and_time_limits() {
        let ode = ex4_unit();
        let opts = IntegrateOpts { max_steps: 5, ..IntegrateOpts::default() };
        let traj = integrate(&ode, JetPoint::new(0.5, 0.0, 0.0), TimeDirection::Forward, &opts);
        assert_eq!(traj.termination, Termination::StepLimit);
        assert_eq!(traj.samples.len(), 6);

        let opts = IntegrateOpts { t_end: 1.0, ..IntegrateOpts::default() };
        let traj = integrate(&ode, JetPoint::new(0.5, 0.0, 0.0), TimeDirection::Forward, &opts);
        assert_eq!(traj.termination, Termination::TimeLimit);
        let last = traj.last();
        assert!((last.t - 1.0).abs() < 1e-9);
        // x(1) = 0.5 e
        assert!((last.x - 0.5 * 1.0f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn accuracy_tracks_tolerance() {
        // Halving rtol must not increase the endpoint error (nonlinear
        // p-dynamics so the error is not trivially zero):
        // x p' = p(p^2 - 1), p(0) != 0, +-1.
        let ode = ex4_unit();
        let start = JetPoint::new(1.0, 0.0, 0.5);
        // Exact slope branch through (x0, p0): p = 1/sqrt(1 + c x^2),
        // c = (1/p0^2 - 1)/x0^2 = 3.
        let exact_p = |x: f64| 1.0 / (1.0 + 3.0 * x * x).sqrt();

        let mut errs = Vec::new();
        for rtol in [1e-6, 1e-9, 1e-12] {
            let opts = IntegrateOpts {
                rtol,
                atol: rtol * 1e-2,
                t_end: 0.4,
                limits: BoxLimits::centered(0.0, 0.0, 50.0, 100.0),
                ..IntegrateOpts::default()
            };
            let traj = integrate(&ode, start, TimeDirection::Forward, &opts);
            assert_eq!(traj.termination, Termination::TimeLimit);
            let last = traj.last();
            errs.push((last.p - exact_p(last.x)).abs() / exact_p(last.x));
        }
        assert!(errs[0] < 1e-5);
        assert!(errs[1] < 1e-8);
        assert!(errs[2] < 1e-10);
        assert!(errs[2] <= errs[0]);
    }
}

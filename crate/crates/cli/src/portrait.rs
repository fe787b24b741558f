//! Portrait data assembly: the sampled direction field at a fixed slope,
//! the singular locus as marching-squares segments, and solution pencils
//! traced out of the locus point nearest the window center.

use serde::Serialize;
use singode::{
    on_singular_locus, point_report, trace_from_singular, AnalysisOpts, BoxLimits, Direction,
    LocusSide, PlanePoint, SingularOde, TraceOpts,
};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Arrow {
    pub x: f64,
    pub y: f64,
    /// Velocity components `(Delta, p * Delta)` at the sample.
    pub vx: f64,
    pub vy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TracePath {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PortraitData {
    pub window: [f64; 4],
    pub slope: f64,
    pub arrows: Vec<Arrow>,
    pub locus_segments: Vec<[[f64; 2]; 2]>,
    /// Locus point the solution pencils are traced from, when one exists.
    pub anchor: Option<[f64; 2]>,
    pub traces: Vec<TracePath>,
}

/// Direction-field samples on an `n x n` lattice. Samples where the field
/// vanishes produce no arrow, so the zero equation yields an empty list.
pub fn sample_arrows(ode: &SingularOde, window: [f64; 4], n: usize, slope: f64) -> Vec<Arrow> {
    let [x0, x1, y0, y1] = window;
    let mut arrows = Vec::new();
    for iy in 0..n {
        for ix in 0..n {
            let x = x0 + (x1 - x0) * (ix as f64 + 0.5) / n as f64;
            let y = y0 + (y1 - y0) * (iy as f64 + 0.5) / n as f64;
            let d = ode.delta_at(PlanePoint::new(x, y));
            let (vx, vy) = (d, slope * d);
            if vx != 0.0 || vy != 0.0 {
                arrows.push(Arrow { x, y, vx, vy });
            }
        }
    }
    arrows
}

/// Zero-level segments of `Delta` on a `g x g` marching-squares grid.
pub fn locus_segments(ode: &SingularOde, window: [f64; 4], g: usize) -> Vec<[[f64; 2]; 2]> {
    let [x0, x1, y0, y1] = window;
    let xs: Vec<f64> = (0..=g).map(|i| x0 + (x1 - x0) * i as f64 / g as f64).collect();
    let ys: Vec<f64> = (0..=g).map(|j| y0 + (y1 - y0) * j as f64 / g as f64).collect();
    let vals: Vec<Vec<f64>> = ys
        .iter()
        .map(|&y| xs.iter().map(|&x| ode.delta_at(PlanePoint::new(x, y))).collect())
        .collect();

    // Crossing on the edge from a to b, by linear interpolation.
    let cross = |a: (f64, f64, f64), b: (f64, f64, f64)| -> Option<[f64; 2]> {
        let (ax, ay, av) = a;
        let (bx, by, bv) = b;
        if av == 0.0 && bv == 0.0 {
            return None;
        }
        if av * bv > 0.0 && av != 0.0 && bv != 0.0 {
            return None;
        }
        let t = av / (av - bv);
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return None;
        }
        Some([ax + t * (bx - ax), ay + t * (by - ay)])
    };

    let mut segments = Vec::new();
    for j in 0..g {
        for i in 0..g {
            let c00 = (xs[i], ys[j], vals[j][i]);
            let c10 = (xs[i + 1], ys[j], vals[j][i + 1]);
            let c01 = (xs[i], ys[j + 1], vals[j + 1][i]);
            let c11 = (xs[i + 1], ys[j + 1], vals[j + 1][i + 1]);
            let mut hits = Vec::new();
            for (a, b) in [(c00, c10), (c10, c11), (c11, c01), (c01, c00)] {
                if let Some(p) = cross(a, b) {
                    hits.push(p);
                }
            }
            hits.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
            match hits.len() {
                2 => segments.push([hits[0], hits[1]]),
                4 => {
                    // Ambiguous saddle cell: split by the center sign so the
                    // two segments separate consistently.
                    let cx = 0.5 * (xs[i] + xs[i + 1]);
                    let cy = 0.5 * (ys[j] + ys[j + 1]);
                    let center = ode.delta_at(PlanePoint::new(cx, cy));
                    if center * vals[j][i] >= 0.0 {
                        segments.push([hits[0], hits[3]]);
                        segments.push([hits[1], hits[2]]);
                    } else {
                        segments.push([hits[0], hits[1]]);
                        segments.push([hits[2], hits[3]]);
                    }
                }
                _ => {}
            }
        }
    }
    segments
}

/// Newton refinement onto the locus along the gradient; `None` when the
/// iteration leaves the window or stalls on a flat gradient.
pub fn refine_to_locus(
    ode: &SingularOde,
    mut q: PlanePoint,
    opts: &AnalysisOpts,
) -> Option<PlanePoint> {
    for _ in 0..50 {
        let d = ode.delta_at(q);
        if on_singular_locus(ode, q, opts) {
            return Some(q);
        }
        let (gx, gy) = ode.delta_gradient(q);
        let g2 = gx * gx + gy * gy;
        if g2 < 1e-30 {
            return None;
        }
        q = PlanePoint::new(q.x - d * gx / g2, q.y - d * gy / g2);
        if !q.x.is_finite() || !q.y.is_finite() {
            return None;
        }
    }
    None
}

/// Traces solution pencils out of `anchor`: every traceable direction on
/// both sides, the exact member plus two vertically displaced ones.
pub fn trace_pencils(
    ode: &SingularOde,
    anchor: PlanePoint,
    window: [f64; 4],
    opts: &AnalysisOpts,
) -> Vec<TracePath> {
    let [x0, x1, y0, y1] = window;
    let mut trace_opts = TraceOpts::default();
    trace_opts.analysis = opts.clone();
    // Clamp trajectories to the drawn region (plus slack so curves reach
    // the frame) and keep slopes plottable.
    trace_opts.integrate.limits = BoxLimits {
        x: (x0 - 0.1 * (x1 - x0), x1 + 0.1 * (x1 - x0)),
        y: (y0 - 0.1 * (y1 - y0), y1 + 0.1 * (y1 - y0)),
        p_abs: 1e3,
    };

    let report = point_report(ode, anchor, opts);
    let mut paths = Vec::new();
    for dir_report in &report.directions {
        let slope = match dir_report.p {
            singode::SlopeRepr::Finite(p) => p,
            singode::SlopeRepr::Symbol(_) => continue,
        };
        let traceable = matches!(
            dir_report.verdict.as_str(),
            "saddle" | "node_non_resonant" | "node_positive_resonant" | "node_reciprocal_resonant"
        );
        if !traceable {
            continue;
        }
        let offsets: &[f64] = if dir_report.verdict == "saddle" {
            &[0.0]
        } else {
            &[0.0, 5e-5, -5e-5]
        };
        let dir = Direction::from_slope(slope);
        for side in [LocusSide::Plus, LocusSide::Minus] {
            let Ok(trajs) = trace_from_singular(ode, anchor, dir, side, offsets, &trace_opts)
            else {
                continue;
            };
            for (k, traj) in trajs.iter().enumerate() {
                let mut points = vec![(anchor.x, anchor.y)];
                points.extend(traj.samples.iter().map(|s| (s.x, s.y)));
                paths.push(TracePath {
                    label: format!(
                        "p={slope};side={};offset={}",
                        match side {
                            LocusSide::Plus => "plus",
                            LocusSide::Minus => "minus",
                        },
                        offsets[k]
                    ),
                    points,
                });
            }
        }
    }
    paths
}

/// Full portrait: arrows, locus, and pencils from the locus point nearest
/// the window center.
pub fn build(
    ode: &SingularOde,
    window: [f64; 4],
    samples: usize,
    slope: f64,
    opts: &AnalysisOpts,
) -> PortraitData {
    let arrows = sample_arrows(ode, window, samples, slope);
    let segments = locus_segments(ode, window, 160);

    let [x0, x1, y0, y1] = window;
    let center = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let mut best: Option<(f64, PlanePoint)> = None;
    for seg in &segments {
        for pt in seg {
            let d2 = (pt[0] - center.0).powi(2) + (pt[1] - center.1).powi(2);
            if best.is_none() || d2 < best.unwrap().0 {
                best = Some((d2, PlanePoint::new(pt[0], pt[1])));
            }
        }
    }
    let anchor = best.and_then(|(_, q)| refine_to_locus(ode, q, opts));
    let traces = match anchor {
        Some(q) => trace_pencils(ode, q, window, opts),
        None => Vec::new(),
    };

    PortraitData {
        window,
        slope,
        arrows,
        locus_segments: segments,
        anchor: anchor.map(|q| [q.x, q.y]),
        traces,
    }
}

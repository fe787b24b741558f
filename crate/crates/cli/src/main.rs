//! Command-line front end: analyze singular points, trace solution
//! families, render field portraits, and run the built-in verification
//! suite. All outputs are byte-deterministic for fixed inputs and flags.

mod portrait;
mod svg;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use singode::{
    corpus_list, detect_log_term, estimate_exponent, load_equation, point_report, run_verify,
    trace_from_singular, trajectory_csv, AnalysisOpts, CheckLine, Direction, FamilyEstimate,
    FamilyForm, FamilyKind, FitOpts, LoadedEquation, LocusSide, PlanePoint, PointReport,
    SingularOde, SlopeRepr, Termination, TraceError, TraceOpts,
};

#[derive(Parser)]
#[command(
    name = "singode",
    version,
    about = "Singular-point analysis and solution tracing for quasilinear second-order ODEs",
    after_help = "Equations live in JSON files: either {\"delta\": POLY, \"mu\": [POLY, POLY, POLY, POLY]} \
for Delta(x,y) y'' = mu0 + mu1 y' + mu2 y'^2 + mu3 y'^3, or {\"metric\": {\"a\": POLY, \"b\": POLY, \"c\": POLY}} \
for geodesics of a ds^2 = a dx^2 + 2b dx dy + c dy^2 metric. POLY is a list of [i, j, coeff] \
monomial triples standing for coeff * x^i * y^j."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the singular point(s) of an equation at a plane point, and
    /// optionally over a lattice.
    Analyze(AnalyzeArgs),
    /// Trace the solution family out of a singular point along an
    /// admissible direction; writes one CSV per offset plus a JSON summary.
    Trace(TraceArgs),
    /// Render the direction field, singular locus, and traced pencils over
    /// a window as SVG or CSV.
    Portrait(PortraitArgs),
    /// Run the built-in corpus checks; nonzero exit on any failure.
    Verify(VerifyArgs),
}

/// Analysis tolerance overrides, echoed into every report.
#[derive(Args, Clone)]
struct ToleranceFlags {
    /// |Delta| at or below this counts as on the singular locus
    #[arg(long, default_value_t = 1e-10)]
    tol_locus: f64,
    /// gradient norm at or below this makes a locus point degenerate
    #[arg(long, default_value_t = 1e-10)]
    tol_gradient: f64,
    /// direction-cubic coefficients below this count as vanished
    #[arg(long, default_value_t = 1e-10)]
    tol_coeff: f64,
    /// relative gap under which direction roots merge
    #[arg(long, default_value_t = 1e-7)]
    tol_root_cluster: f64,
    /// |lambda| at or below this is a non-transversal eigenvalue
    #[arg(long, default_value_t = 1e-9)]
    tol_eigen: f64,
    /// relative tolerance for rational eigenvalue ratios
    #[arg(long, default_value_t = 1e-9)]
    tol_rational: f64,
    /// largest denominator tried for rational ratios
    #[arg(long, default_value_t = 64)]
    qmax: u64,
}

impl ToleranceFlags {
    fn to_opts(&self) -> AnalysisOpts {
        AnalysisOpts {
            tol_locus: self.tol_locus,
            tol_gradient: self.tol_gradient,
            tol_coeff: self.tol_coeff,
            tol_root_cluster: self.tol_root_cluster,
            tol_eigen: self.tol_eigen,
            tol_rational: self.tol_rational,
            qmax: self.qmax,
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Equation file (JSON)
    #[arg(long)]
    input: String,
    /// Plane point "X,Y"
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Lattice "X0,X1,Y0,Y1,NX,NY": map the point verdict and list locus
    /// crossings
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Write the JSON report here instead of standard output
    #[arg(long)]
    out: Option<String>,
    #[command(flatten)]
    tol: ToleranceFlags,
}

#[derive(Args)]
struct TraceArgs {
    /// Equation file (JSON)
    #[arg(long)]
    input: String,
    /// Singular point "X,Y"
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Direction slope, or "inf" for the vertical direction
    #[arg(long, allow_hyphen_values = true)]
    dir: String,
    /// Side of the locus to trace on (sign of Delta)
    #[arg(long, value_parser = ["plus", "minus"])]
    side: String,
    /// Comma-separated vertical seed offsets; one trajectory per offset
    #[arg(long, allow_hyphen_values = true, default_value = "0.0")]
    offsets: String,
    /// Output prefix: writes PREFIX.K.csv and PREFIX.summary.json
    #[arg(long)]
    out: String,
    /// Relative integration tolerance
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    /// Absolute integration tolerance
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
    /// Integration stops when |x| or |y| exceeds this
    #[arg(long, default_value_t = 2.0)]
    box_half_width: f64,
    /// Integration stops when |y'| exceeds this
    #[arg(long, default_value_t = 100.0)]
    p_abs: f64,
    /// Accepted-step limit
    #[arg(long, default_value_t = 200_000)]
    max_steps: usize,
    /// Internal-time horizon
    #[arg(long, default_value_t = 1e4)]
    t_end: f64,
    /// Seeding distance from the singular point before eigenvalue scaling
    #[arg(long, default_value_t = 1e-3)]
    seed_distance: f64,
    /// Absolute fit window "LO,HI" on |x - x0| for the family estimates
    /// (default: fractions 0.01..0.1 of each trajectory's own extent)
    #[arg(long, allow_hyphen_values = true)]
    fit_window: Option<String>,
    #[command(flatten)]
    tol: ToleranceFlags,
}

#[derive(Args)]
struct PortraitArgs {
    /// Equation file (JSON)
    #[arg(long)]
    input: String,
    /// Window "X0,X1,Y0,Y1"
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Arrow lattice resolution per axis
    #[arg(long, default_value_t = 21)]
    samples: usize,
    /// Slope at which the direction field (Delta, p*Delta) is drawn
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    slope: f64,
    /// Output file; format chosen by extension (.svg or .csv)
    #[arg(long)]
    out: String,
    #[command(flatten)]
    tol: ToleranceFlags,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check a single corpus entry instead of all of them
    #[arg(long)]
    example: Option<String>,
    #[command(flatten)]
    tol: ToleranceFlags,
}

/// Failure channel with its process exit code: 1 = checks failed,
/// 2 = parse/usage, 3 = numerical, 4 = classification forbids tracing.
enum Failure {
    Checks(String),
    Usage(String),
    Numerical(String),
    Untraceable(String),
}

impl Failure {
    fn emit(&self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Checks(m) => (1, m),
            Failure::Usage(m) => (2, m),
            Failure::Numerical(m) => (3, m),
            Failure::Untraceable(m) => (4, m),
        };
        eprintln!("singode: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Portrait(args) => cmd_portrait(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.emit(),
    }
}

// ---------------------------------------------------------------------------
// flag parsing helpers
// ---------------------------------------------------------------------------

fn parse_floats(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{what}: bad number {s:?}")))?;
            if !v.is_finite() {
                return Err(Failure::Usage(format!("{what}: {s:?} is not finite")));
            }
            Ok(v)
        })
        .collect()
}

fn parse_point(text: &str) -> Result<PlanePoint, Failure> {
    match parse_floats(text, "--point")?.as_slice() {
        &[x, y] => Ok(PlanePoint::new(x, y)),
        _ => Err(Failure::Usage(format!("--point expects \"X,Y\", got {text:?}"))),
    }
}

fn parse_window(text: &str) -> Result<[f64; 4], Failure> {
    let v = parse_floats(text, "--window")?;
    let [x0, x1, y0, y1] = v[..] else {
        return Err(Failure::Usage(format!("--window expects \"X0,X1,Y0,Y1\", got {text:?}")));
    };
    if x0 >= x1 || y0 >= y1 {
        return Err(Failure::Usage(format!("--window [{x0},{x1}]x[{y0},{y1}] is empty")));
    }
    Ok([x0, x1, y0, y1])
}

fn parse_dir(text: &str) -> Result<Direction, Failure> {
    if text.trim() == "inf" {
        return Ok(Direction::infinite());
    }
    let v = parse_floats(text, "--dir")?;
    match v.as_slice() {
        &[p] => Ok(Direction::from_slope(p)),
        _ => Err(Failure::Usage(format!("--dir expects a slope or \"inf\", got {text:?}"))),
    }
}

fn load(input: &str) -> Result<LoadedEquation, Failure> {
    load_equation(input).map_err(|e| Failure::Usage(format!("{input}: {e}")))
}

fn write_output(path: &str, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EquationEcho<'a> {
    from_metric: bool,
    delta: &'a singode::Poly2,
    mu: &'a [singode::Poly2; 4],
}

#[derive(Serialize)]
struct GridOutput {
    window: [f64; 4],
    shape: [usize; 2],
    /// Point verdicts in row-major order: index = iy * nx + ix.
    verdicts: Vec<String>,
    locus_crossings: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    command: &'static str,
    input: &'a str,
    point: [f64; 2],
    options: &'a AnalysisOpts,
    equation: EquationEcho<'a>,
    report: PointReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridOutput>,
}

fn grid_scan(ode: &SingularOde, spec: &str, opts: &AnalysisOpts) -> Result<GridOutput, Failure> {
    let v = parse_floats(spec, "--grid")?;
    let [x0, x1, y0, y1, nxf, nyf] = v[..] else {
        return Err(Failure::Usage(format!(
            "--grid expects \"X0,X1,Y0,Y1,NX,NY\", got {spec:?}"
        )));
    };
    let (nx, ny) = (nxf as usize, nyf as usize);
    if x0 >= x1 || y0 >= y1 || nxf.fract() != 0.0 || nyf.fract() != 0.0 {
        return Err(Failure::Usage("--grid needs a nonempty window and integer counts".into()));
    }
    if !(2..=2048).contains(&nx) || !(2..=2048).contains(&ny) {
        return Err(Failure::Usage("--grid counts must be in [2, 2048]".into()));
    }

    let xs: Vec<f64> = (0..nx).map(|i| x0 + (x1 - x0) * i as f64 / (nx - 1) as f64).collect();
    let ys: Vec<f64> = (0..ny).map(|j| y0 + (y1 - y0) * j as f64 / (ny - 1) as f64).collect();
    let mut verdicts = Vec::with_capacity(nx * ny);
    let mut deltas = vec![0.0f64; nx * ny];
    for (j, &y) in ys.iter().enumerate() {
        for (i, &x) in xs.iter().enumerate() {
            let q = PlanePoint::new(x, y);
            deltas[j * nx + i] = ode.delta_at(q);
            verdicts.push(point_report(ode, q, opts).point_verdict);
        }
    }

    // Sign changes along lattice edges, refined onto the locus.
    let mut crossings: Vec<[f64; 2]> = Vec::new();
    let mut push_crossing = |a: PlanePoint, da: f64, b: PlanePoint, db: f64| {
        if da * db < 0.0 {
            let t = da / (da - db);
            let guess = PlanePoint::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            if let Some(q) = portrait::refine_to_locus(ode, guess, opts) {
                crossings.push([q.x, q.y]);
            }
        }
    };
    for (j, &y) in ys.iter().enumerate() {
        for i in 0..nx - 1 {
            let (a, b) = (PlanePoint::new(xs[i], y), PlanePoint::new(xs[i + 1], y));
            push_crossing(a, deltas[j * nx + i], b, deltas[j * nx + i + 1]);
        }
    }
    for (i, &x) in xs.iter().enumerate() {
        for j in 0..ny - 1 {
            let (a, b) = (PlanePoint::new(x, ys[j]), PlanePoint::new(x, ys[j + 1]));
            push_crossing(a, deltas[j * nx + i], b, deltas[(j + 1) * nx + i]);
        }
    }
    crossings.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    crossings.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-7 && (a[1] - b[1]).abs() < 1e-7);

    Ok(GridOutput { window: [x0, x1, y0, y1], shape: [nx, ny], verdicts, locus_crossings: crossings })
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let loaded = load(&args.input)?;
    let q = parse_point(&args.point)?;
    let opts = args.tol.to_opts();

    let report = point_report(&loaded.ode, q, &opts);
    let grid = match &args.grid {
        Some(spec) => Some(grid_scan(&loaded.ode, spec, &opts)?),
        None => None,
    };
    let out = AnalyzeOutput {
        command: "analyze",
        input: &args.input,
        point: [q.x, q.y],
        options: &opts,
        equation: EquationEcho {
            from_metric: loaded.metric.is_some(),
            delta: &loaded.ode.delta,
            mu: &loaded.ode.m.mu,
        },
        report,
        grid,
    };
    let text = serde_json::to_string_pretty(&out).expect("report serializes");
    match &args.out {
        Some(path) => write_output(path, &(text + "\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TrajectoryEcho {
    file: String,
    offset: f64,
    termination: Termination,
    samples: usize,
    last: [f64; 4],
}

#[derive(Serialize)]
struct TraceOutput<'a> {
    command: &'static str,
    input: &'a str,
    point: [f64; 2],
    dir: SlopeRepr,
    side: &'a str,
    offsets: &'a [f64],
    verdict: String,
    lambda1: Option<f64>,
    lambda2: Option<f64>,
    lambda: Option<f64>,
    family_form: Option<FamilyForm>,
    trajectories: Vec<TrajectoryEcho>,
    exponent_estimate: Option<FamilyEstimate>,
    log_estimate: Option<FamilyEstimate>,
    options: &'a TraceOpts,
}

fn cmd_trace(args: TraceArgs) -> Result<(), Failure> {
    let loaded = load(&args.input)?;
    let q = parse_point(&args.point)?;
    let dir = parse_dir(&args.dir)?;
    let offsets = parse_floats(&args.offsets, "--offsets")?;
    if offsets.is_empty() {
        return Err(Failure::Usage("--offsets must list at least one value".into()));
    }
    let side = match args.side.as_str() {
        "plus" => LocusSide::Plus,
        _ => LocusSide::Minus,
    };

    let mut opts = TraceOpts::default();
    opts.analysis = args.tol.to_opts();
    opts.integrate.rtol = args.rtol;
    opts.integrate.atol = args.atol;
    opts.integrate.limits =
        singode::BoxLimits::centered(q.x, q.y, args.box_half_width, args.p_abs);
    opts.integrate.max_steps = args.max_steps;
    opts.integrate.t_end = args.t_end;
    opts.seed_distance = args.seed_distance;

    let classification = singode::classify(&loaded.ode, q, dir, &opts.analysis);
    let trajs = trace_from_singular(&loaded.ode, q, dir, side, &offsets, &opts).map_err(
        |e| match e {
            TraceError::NotTraceable { .. } | TraceError::VerticalDirection => {
                Failure::Untraceable(e.to_string())
            }
            other => Failure::Numerical(other.to_string()),
        },
    )?;

    let mut files = Vec::with_capacity(trajs.len());
    for (k, traj) in trajs.iter().enumerate() {
        let path = format!("{}.{k}.csv", args.out);
        write_output(&path, &trajectory_csv(traj, &format!("traj{k}")))?;
        let last = traj.last();
        files.push(TrajectoryEcho {
            file: path,
            offset: offsets[k],
            termination: traj.termination,
            samples: traj.samples.len(),
            last: [last.t, last.x, last.y, last.p],
        });
    }

    let mut fit = FitOpts::default();
    if let Some(spec) = &args.fit_window {
        let v = parse_floats(spec, "--fit-window")?;
        let [lo, hi] = v[..] else {
            return Err(Failure::Usage(format!("--fit-window expects \"LO,HI\", got {spec:?}")));
        };
        if !(0.0 < lo && lo < hi) {
            return Err(Failure::Usage("--fit-window needs 0 < LO < HI".into()));
        }
        fit.window = singode::FitWindow::Absolute(lo, hi);
    }
    let exponent_estimate = estimate_exponent(&trajs, q, dir, &fit).ok();
    let log_estimate = classification
        .family_form
        .as_ref()
        .filter(|f| f.kind == FamilyKind::LogResonant)
        .map(|f| f.exponent.round() as u32)
        .filter(|&n| n >= 1)
        .and_then(|n| detect_log_term(&trajs, q, dir, n, &fit).ok());

    let eigen = classification.eigen.as_ref();
    let out = TraceOutput {
        command: "trace",
        input: &args.input,
        point: [q.x, q.y],
        dir: dir.into(),
        side: &args.side,
        offsets: &offsets,
        verdict: singode::verdict_name(classification.verdict).into(),
        lambda1: eigen.map(|e| e.lambda1),
        lambda2: eigen.map(|e| e.lambda2),
        lambda: eigen.map(|e| e.lambda),
        family_form: classification.family_form.clone(),
        trajectories: files,
        exponent_estimate,
        log_estimate,
        options: &opts,
    };
    let text = serde_json::to_string_pretty(&out).expect("summary serializes");
    write_output(&format!("{}.summary.json", args.out), &(text.clone() + "\n"))?;
    println!("{text}");
    Ok(())
}

// ---------------------------------------------------------------------------
// portrait
// ---------------------------------------------------------------------------

fn render_svg(data: &portrait::PortraitData) -> String {
    let [x0, x1, y0, y1] = data.window;
    let (w, h, margin) = (800.0, 800.0, 50.0);
    let sx = (w - 2.0 * margin) / (x1 - x0);
    let sy = (h - 2.0 * margin) / (y1 - y0);
    let px = |x: f64| margin + (x - x0) * sx;
    let py = |y: f64| h - margin - (y - y0) * sy;

    let mut svg = svg::Svg::new(w, h);
    svg.rect_background("#ffffff");

    // Axes, when visible.
    if x0 < 0.0 && x1 > 0.0 {
        svg.line(px(0.0), py(y0), px(0.0), py(y1), "#cccccc", 1.0);
    }
    if y0 < 0.0 && y1 > 0.0 {
        svg.line(px(x0), py(0.0), px(x1), py(0.0), "#cccccc", 1.0);
    }

    // Direction field: unit arrows of fixed pixel length, oriented by the
    // sign of Delta; a dot marks the head.
    let cell = (w - 2.0 * margin) / (data.arrows.len() as f64).sqrt().max(1.0);
    let len = 0.38 * cell;
    for a in &data.arrows {
        let norm = (a.vx * a.vx + a.vy * a.vy).sqrt();
        if norm == 0.0 {
            continue;
        }
        // Screen-space direction (note the y flip).
        let (ux, uy) = (a.vx / norm, -a.vy / norm);
        let (cx, cy) = (px(a.x), py(a.y));
        svg.line(cx - ux * len, cy - uy * len, cx + ux * len, cy + uy * len, "#607080", 1.0);
        svg.circle(cx + ux * len, cy + uy * len, 1.6, "#607080");
    }

    for seg in &data.locus_segments {
        svg.line(px(seg[0][0]), py(seg[0][1]), px(seg[1][0]), py(seg[1][1]), "#c62828", 2.0);
    }

    for path in &data.traces {
        let pts: Vec<(f64, f64)> = path.points.iter().map(|&(x, y)| (px(x), py(y))).collect();
        svg.polyline(&pts, "#1565c0", 1.4);
    }

    if let Some([ax, ay]) = data.anchor {
        svg.circle(px(ax), py(ay), 4.0, "#c62828");
    }

    svg.text(
        margin,
        margin * 0.6,
        14.0,
        "#333333",
        &format!(
            "x in [{x0}, {x1}], y in [{y0}, {y1}], field at slope p = {}",
            data.slope
        ),
    );
    svg.text(
        margin,
        h - margin * 0.35,
        12.0,
        "#333333",
        "red: singular locus; blue: traced solutions; gray: direction field",
    );
    svg.finish()
}

fn render_csv(data: &portrait::PortraitData) -> String {
    let mut out = String::new();
    let [x0, x1, y0, y1] = data.window;
    let _ = writeln!(
        out,
        "# singode portrait; window=[{x0},{x1}]x[{y0},{y1}]; slope={}; arrows={}; locus_segments={}; traces={}",
        data.slope,
        data.arrows.len(),
        data.locus_segments.len(),
        data.traces.len(),
    );
    let _ = writeln!(out, "kind,id,a,b,c,d");
    for (i, a) in data.arrows.iter().enumerate() {
        let _ = writeln!(out, "arrow,{i},{:.9e},{:.9e},{:.9e},{:.9e}", a.x, a.y, a.vx, a.vy);
    }
    for (i, s) in data.locus_segments.iter().enumerate() {
        let _ = writeln!(
            out,
            "locus,{i},{:.9e},{:.9e},{:.9e},{:.9e}",
            s[0][0], s[0][1], s[1][0], s[1][1]
        );
    }
    if let Some([ax, ay]) = data.anchor {
        let _ = writeln!(out, "anchor,0,{ax:.9e},{ay:.9e},,");
    }
    for (k, path) in data.traces.iter().enumerate() {
        for &(x, y) in &path.points {
            let _ = writeln!(out, "trace,{k},{x:.9e},{y:.9e},,");
        }
    }
    out
}

fn cmd_portrait(args: PortraitArgs) -> Result<(), Failure> {
    let loaded = load(&args.input)?;
    let window = parse_window(&args.window)?;
    if !(2..=256).contains(&args.samples) {
        return Err(Failure::Usage("--samples must be in [2, 256]".into()));
    }
    let opts = args.tol.to_opts();
    let mut data = portrait::build(&loaded.ode, window, args.samples, args.slope, &opts);

    // Keep figures bounded: at most 400 vertices per traced path.
    for path in &mut data.traces {
        let n = path.points.len();
        if n > 400 {
            let stride = n.div_ceil(400);
            let mut kept: Vec<(f64, f64)> =
                path.points.iter().copied().step_by(stride).collect();
            if *kept.last().unwrap() != path.points[n - 1] {
                kept.push(path.points[n - 1]);
            }
            path.points = kept;
        }
    }

    let rendered = if args.out.ends_with(".svg") {
        render_svg(&data)
    } else if args.out.ends_with(".csv") {
        render_csv(&data)
    } else {
        return Err(Failure::Usage(format!(
            "--out must end in .svg or .csv, got {:?}",
            args.out
        )));
    };
    write_output(&args.out, &rendered)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifySummary {
    command: &'static str,
    entries: usize,
    checks: usize,
    failures: usize,
    lines: Vec<CheckLine>,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let opts = args.tol.to_opts();
    let all = corpus_list();
    let selected: Vec<_> = match &args.example {
        Some(id) => {
            let hit: Vec<_> = all.into_iter().filter(|e| e.id == id.as_str()).collect();
            if hit.is_empty() {
                return Err(Failure::Usage(format!("unknown corpus entry {id:?}")));
            }
            hit
        }
        None => all,
    };

    let mut lines = Vec::new();
    for e in &selected {
        lines.extend(run_verify(e, &opts));
    }
    for l in &lines {
        println!(
            "{:<12} {:<24} {:>14.6e} {:>10.1e} {}",
            l.entry,
            l.check,
            l.value,
            l.threshold,
            if l.pass { "PASS" } else { "FAIL" }
        );
    }
    let failures = lines.iter().filter(|l| !l.pass).count();
    let summary = VerifySummary {
        command: "verify",
        entries: selected.len(),
        checks: lines.len(),
        failures,
        lines,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    if failures > 0 {
        return Err(Failure::Checks(format!("{failures} check(s) failed")));
    }
    Ok(())
}

//! Analysis of singular points of second-order ODEs of the form
//! `Delta(x, y) * y'' = M(x, y, y')`, where `M` is cubic in `y'` and both
//! `Delta` and the coefficients of `M` are real bivariate polynomials.
//!
//! The crate answers three questions about a point on the singular locus
//! `Delta = 0`:
//!
//! * which tangential directions can solutions issue with (admissible
//!   directions, including the vertical one),
//! * what the local solution set looks like for each direction
//!   (single smooth solution, one-parameter family with a power-law or
//!   log-corrected profile, or a resonance obstruction),
//! * whether oscillating solutions can be ruled out at the point.
//!
//! Predictions are verified numerically: the equation lifts to a 3-D vector
//! field on `(x, y, p)`-space whose trajectories are traced with an embedded
//! Runge-Kutta scheme, and the traced families are fitted for their growth
//! exponent and logarithmic correction.

pub mod analysis;
pub mod corpus;
pub mod field;
pub mod input;
pub mod integrate;
pub mod model;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod trace;

pub use analysis::{
    admissible_directions, classify, eigen_data, eigen_values, geodesic_oscillation_necessary,
    locus_regularity, on_singular_locus, oscillation_excluded, point_report, resonance_find,
    samovol_order, verdict_name, AdmissibleDirection, AdmissibleDirections, AnalysisError,
    AnalysisOpts, Classification, DirectionReport, EigenData, FamilyForm, FamilyKind,
    GeodesicOscillation, LocusRegularity, OscillationExclusion, PointReport, Rationality,
    Resonance, SlopeRepr, Verdict,
};
pub use corpus::{
    corpus_list, residual_check, run_verify, sample_xs, CheckLine, ClosedForm, ClosedFormFamily,
    CorpusEntry, DirectionsExpectation, ExpectedDirection, PointExpectation,
};
pub use field::{field_eval, jacobian, spectrum_at_singular, FieldValue, JetPoint, Spectrum, SpectrumError};
pub use input::{equation_from_json, equation_to_json, load_equation, InputError, LoadedEquation};
pub use integrate::{
    integrate, BoxLimits, IntegrateOpts, Termination, TimeDirection, Trajectory, TrajectorySample,
};
pub use model::{
    cubic_eval, geodesic_from_metric, reciprocal_cubic, swap_axes, CubicField, Direction, Metric,
    PlanePoint, SingularOde,
};
pub use poly::Poly2;
pub use trace::{
    detect_log_term, estimate_exponent, oscillation_detect, oscillation_detect_samples,
    seed_state, trace_from_singular, trajectory_csv, FamilyEstimate, FitOpts, FitWindow,
    LocusSide, OscOpts, OscillationReport, OscillationVerdict, TraceError, TraceOpts,
};

//! Equation files: JSON with either the equation's own data
//! (`{"delta": [[i,j,c],...], "mu": [[...],[...],[...],[...]]}`) or a metric
//! (`{"metric": {"a": [...], "b": [...], "c": [...]}}`) that is converted to
//! its geodesic equation on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{geodesic_from_metric, CubicField, Metric, SingularOde};
use crate::poly::Poly2;

#[derive(Error, Debug)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid equation file: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquationFile {
    delta: Poly2,
    mu: [Poly2; 4],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricInner {
    a: Poly2,
    b: Poly2,
    c: Poly2,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricFile {
    metric: MetricInner,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyFile {
    Equation(EquationFile),
    Metric(MetricFile),
}

/// An equation as loaded from a file, remembering the metric it came from
/// when the file used the metric form.
#[derive(Clone, Debug)]
pub struct LoadedEquation {
    pub ode: SingularOde,
    pub metric: Option<Metric>,
}

pub fn equation_from_json(text: &str) -> Result<LoadedEquation, InputError> {
    let any: AnyFile = serde_json::from_str(text)?;
    Ok(match any {
        AnyFile::Equation(e) => LoadedEquation {
            ode: SingularOde::new(e.delta, CubicField::new(e.mu)),
            metric: None,
        },
        AnyFile::Metric(m) => {
            let metric = Metric { a: m.metric.a, b: m.metric.b, c: m.metric.c };
            LoadedEquation { ode: geodesic_from_metric(&metric), metric: Some(metric) }
        }
    })
}

pub fn load_equation(path: &str) -> Result<LoadedEquation, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.to_string(), source })?;
    equation_from_json(&text)
}

#[derive(Serialize)]
struct EquationOut<'a> {
    delta: &'a Poly2,
    mu: &'a [Poly2; 4],
}

/// Serializes an equation in the `delta`/`mu` form with graded-lex term
/// order, so equal equations always print identically.
pub fn equation_to_json(ode: &SingularOde) -> String {
    serde_json::to_string(&EquationOut { delta: &ode.delta, mu: &ode.m.mu })
        .expect("plain data serializes")
}

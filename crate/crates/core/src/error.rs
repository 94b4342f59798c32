use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Neighbouring frames rotate by too much for an unambiguous spin lift.
    #[error("spin lift ambiguous between nodes {from} and {to}: rotation angle {angle:.4} rad exceeds {limit:.4} rad (grid too coarse)")]
    LiftAmbiguity {
        from: usize,
        to: usize,
        angle: f64,
        limit: f64,
    },

    #[error("immersion degenerate at node {node} (u = {u}, v = {v}): |x_u x x_v| = {cross:e}")]
    DegenerateImmersion {
        node: usize,
        u: f64,
        v: f64,
        cross: f64,
    },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("normal vector is not unit length: |N| = {0}")]
    NonUnitNormal(f64),

    #[error("spinor field too close to zero: min |phi| = {min:e}, max |phi| = {max:e}")]
    ZeroLength { min: f64, max: f64 },

    #[error("integration path passes within {distance:e} of excluded point {point}")]
    SingularPath { point: String, distance: f64 },

    #[error("period forms are not exact: loop residual {loop_residual:e} exceeds 10x discretization estimate {estimate:e}{}", if *.periodic { " (periodic chart)" } else { "" })]
    NotExact {
        loop_residual: f64,
        estimate: f64,
        periodic: bool,
    },

    #[error("conformal factor must be positive, found {value} at node {node}")]
    NonPositiveFactor { node: usize, value: f64 },

    #[error("no analytic derivatives available for chart `{0}`")]
    NoAnalyticDerivatives(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

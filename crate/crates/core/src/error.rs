use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes of the geometric operations.
///
/// Every variant carries a stable name (see [`Error::name`]) that the CLI
/// prints verbatim on stderr.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frames {index} and {next} are {angle:.4} rad apart (limit {limit:.4})", next = index + 1)]
    Density { index: usize, angle: f64, limit: f64 },

    #[error("frame {index} is not covered: {reason} (residual {residual:.3e})")]
    Cover {
        index: usize,
        residual: f64,
        reason: &'static str,
    },

    #[error("derivative order {order} not supported (max 3)")]
    Order { order: usize },

    #[error("curve vanishes at t = {t} (norm {norm:.3e})")]
    ZeroVector { t: f64, norm: f64 },

    #[error("chart coordinate {value:.3e} not positive at t = {t}")]
    Chart { t: f64, value: f64 },

    #[error("speed {speed:.3e} too small at t = {t}")]
    Immersion { t: f64, speed: f64 },

    #[error("derivative vectors dependent at t = {t} (pivot {pivot:.3e})")]
    Degeneracy { t: f64, pivot: f64 },

    #[error("subdiagonal entry {entry} is {value:.3e} <= 0 at t = {t}")]
    Jacobi { t: f64, entry: usize, value: f64 },

    #[error("curve is not locally convex at t = {t} (det {det:.3e})")]
    Convexity { t: f64, det: f64 },

    #[error("condition (L) fails at sample {index} (t = {t}): {what} = {value:.3e}")]
    ConditionL {
        index: usize,
        t: f64,
        what: &'static str,
        value: f64,
    },

    #[error("intersections near t = {t} cannot be resolved: {reason}")]
    Resolution { t: f64, reason: &'static str },

    #[error("matrix is not in the expected Bruhat cell at t = {t}: {reason}")]
    Cell { t: f64, reason: String },

    #[error("no closed hemisphere contains the curve (best margin {margin:.3e})")]
    EmptyFeasible { margin: f64 },

    #[error("curve passes within {distance:.3e} of the projection pole at t = {t}")]
    Pole { t: f64, distance: f64 },

    #[error("{what} = {value} out of range ({expected})")]
    Range {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{0}")]
    Schema(String),

    #[error("{0}")]
    Precondition(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Density { .. } => "DensityError",
            Error::Cover { .. } => "CoverError",
            Error::Order { .. } => "OrderError",
            Error::ZeroVector { .. } => "ZeroVectorError",
            Error::Chart { .. } => "ChartError",
            Error::Immersion { .. } => "ImmersionError",
            Error::Degeneracy { .. } => "DegeneracyError",
            Error::Jacobi { .. } => "JacobiError",
            Error::Convexity { .. } => "ConvexityError",
            Error::ConditionL { .. } => "ConditionLError",
            Error::Resolution { .. } => "ResolutionError",
            Error::Cell { .. } => "CellError",
            Error::EmptyFeasible { .. } => "EmptyFeasibleError",
            Error::Pole { .. } => "PoleError",
            Error::Range { .. } => "RangeError",
            Error::Schema(_) => "SchemaError",
            Error::Precondition(_) => "PreconditionError",
        }
    }
}

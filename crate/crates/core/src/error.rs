use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse {input:?} as a real number: {reason}")]
    Parse { input: String, reason: String },

    #[error("integral of x^s e^(-x^2+tx) diverges at the origin for s = {s}")]
    DivergentIntegral { s: f64 },

    #[error("quadrature did not reach tolerance {requested:e}; achieved error estimate {achieved:e}")]
    Convergence { requested: f64, achieved: f64 },

    /// Rounding has consumed the working precision. Retry with more bits.
    #[error("precision exhausted in {context} at {precision_bits} bits")]
    PrecisionExhausted {
        context: String,
        precision_bits: u32,
    },

    #[error("singular initial data: t*mu_0 = 2*mu_1")]
    SingularInitialization,

    #[error("orbit hits the singular set y_n^2 = alpha^2/4 at n = {n}")]
    SingularOrbit { n: usize },

    #[error("pole: {0} vanishes")]
    Pole(&'static str),

    #[error("ladder transformation denominator vanishes at n = {n}")]
    LadderSingularity { n: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("index {index} out of range for table of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    Stiffness { t: f64, h: f64 },
}

impl Error {
    /// Stable machine-readable code for tabular error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
            Error::DivergentIntegral { .. } => "divergent_integral",
            Error::Convergence { .. } => "convergence",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::SingularInitialization => "singular_initialization",
            Error::SingularOrbit { .. } => "singular_orbit",
            Error::Pole(_) => "pole",
            Error::LadderSingularity { .. } => "ladder_singularity",
            Error::Hypothesis(_) => "hypothesis",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::Stiffness { .. } => "stiffness",
        }
    }

    /// True for failures that more working precision (or a larger iteration
    /// budget) would cure, as opposed to invalid inputs.
    pub fn is_numerical_exhaustion(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. } | Error::Convergence { .. } | Error::Stiffness { .. }
        )
    }

    pub(crate) fn exhausted(context: impl Into<String>, precision_bits: u32) -> Self {
        Error::PrecisionExhausted {
            context: context.into(),
            precision_bits,
        }
    }
}

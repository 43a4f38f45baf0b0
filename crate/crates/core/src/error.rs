use thiserror::Error;

/// Everything that can go wrong in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero vector cannot be used as a root or divisor")]
    ZeroRoot,

    #[error("polynomial is not divisible by the linear form (remainder norm {remainder_norm:e})")]
    NotDivisible { remainder_norm: f64 },

    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("non-finite value produced in float mode")]
    NonFinite,

    #[error("reflection closure exceeded {cap} elements; the system is not finite")]
    ClosureExplosion { cap: usize },

    #[error("invalid rank or parameter: {0}")]
    InvalidRank(String),

    #[error("expected {expected} multiplicity values (one per orbit), got {found}")]
    KappaCount { expected: usize, found: usize },

    #[error("negative multiplicity {value} requires the unchecked-kappa flag")]
    NegativeKappa { value: String },

    #[error("root system failed validation: {0}")]
    InvalidSystem(String),

    #[error("triangular system is singular at step {step} (negative multiplicity outside the validated regime)")]
    SingularSystem { step: u32 },

    #[error("polynomial is not Dunkl polyharmonic of order {order}")]
    NotPolyharmonic { order: u32 },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is not h-harmonic")]
    NotHarmonic,

    #[error("exact mode unavailable: {0}")]
    ExactModeUnavailable(String),

    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("positive part vanishes on every sampled sphere; growth exponent undefined")]
    AllZero,

    #[error("hypothesis violated: s = {s} < 2(p-1) = {bound}")]
    HypothesisViolated { s: u32, bound: u32 },

    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("unknown variable x{index} (dimension {dim})")]
    UnknownVariable { index: usize, dim: usize },

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroRoot => "zero_root",
            Error::NotDivisible { .. } => "not_divisible",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NonFinite => "non_finite",
            Error::ClosureExplosion { .. } => "closure_explosion",
            Error::InvalidRank(_) => "invalid_rank",
            Error::KappaCount { .. } => "kappa_count",
            Error::NegativeKappa { .. } => "negative_kappa",
            Error::InvalidSystem(_) => "invalid_system",
            Error::SingularSystem { .. } => "singular_system",
            Error::NotPolyharmonic { .. } => "not_polyharmonic",
            Error::NotHomogeneous => "not_homogeneous",
            Error::NotHarmonic => "not_harmonic",
            Error::ExactModeUnavailable(_) => "exact_mode_unavailable",
            Error::InvalidRadius(_) => "invalid_radius",
            Error::Domain(_) => "domain_error",
            Error::AllZero => "all_zero",
            Error::HypothesisViolated { .. } => "hypothesis_violated",
            Error::Syntax { .. } => "syntax_error",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::Input(_) => "invalid_input",
        }
    }
}

impl Error {
    /// Malformed requests (as opposed to well-formed ones whose
    /// mathematical preconditions fail).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownVariable { .. }
                | Error::Input(_)
                | Error::KappaCount { .. }
                | Error::InvalidRank(_)
                | Error::NegativeKappa { .. }
                | Error::IndexOutOfRange { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

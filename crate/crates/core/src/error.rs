use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate leading term: leading coefficient vanishes after folding")]
    DegenerateLeadingTerm,

    #[error("unfoldable top action: term at S = {action} has phase {phase} incompatible with the leading phase")]
    UnfoldableTopAction { action: f64, phase: f64 },

    #[error("order cap exceeded: regularity sum still {sum} at level {cap}")]
    OrderCapExceeded { cap: usize, sum: f64 },

    #[error("regularity violated: sum of |a_j| is {0}, separators require < 1")]
    NotRegular(f64),

    #[error("bracket violation on ({lo}, {hi}): endpoint values do not change sign")]
    BracketViolation { lo: f64, hi: f64 },

    #[error("refinement stall on ({lo}, {hi}): tolerance below representable spacing")]
    RefinementStall { lo: f64, hi: f64 },

    #[error("separator failure at level {level} on ({lo}, {hi}): {reason}")]
    SeparatorFailure {
        level: usize,
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this failure class: 1 for usage, parse and I/O
    /// problems, 2 for solver contract failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Io(_)
            | Error::InvalidParameter(_)
            | Error::InvalidConfig(_) => 1,
            _ => 2,
        }
    }
}

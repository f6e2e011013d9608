use thiserror::Error;

/// Errors shared across the whole library.
#[derive(Debug, Error)]
pub enum Error {
    /// A `.scx` file (or in-memory text) could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A precondition on an operation was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A search ran out of its evaluation budget. When `certified_above`
    /// is `Some(k)`, every support of size `<= k` was fully excluded, so
    /// the girth (or analogous minimum) is provably greater than `k`.
    #[error("budget of {budget} homology evaluations exceeded{}", match certified_above {
        Some(k) => format!(" (certified: minimum > {k})"),
        None => String::new(),
    })]
    Infeasible {
        budget: u64,
        certified_above: Option<u32>,
    },

    /// An iterative solve did not reach the requested tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { residual: f64, iterations: u64 },

    /// An internal invariant failed; this signals a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

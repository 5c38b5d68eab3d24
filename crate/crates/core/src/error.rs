use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Which side of a reduction identity an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lhs => f.write_str("lhs"),
            Side::Rhs => f.write_str("rhs"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    Domain {
        function: &'static str,
        value: f64,
    },
    /// Order below 2.
    InvalidOrder(u32),
    /// Argument vector of the wrong length for its order.
    ArgCount {
        expected: usize,
        found: usize,
    },
    /// Argument entry that is negative, zero where forbidden, or not finite.
    InvalidArgument {
        index: usize,
        value: f64,
    },
    /// Reflection index outside `1..=n-1`.
    ReflectionIndex {
        index: usize,
        max: usize,
    },
    InvalidBox(&'static str),
    InvalidConfig(&'static str),
    DimensionTooLarge {
        dim: usize,
        max: usize,
    },
    /// The integrand returned NaN or an infinity.
    NonFinite {
        point: Vec<f64>,
        value: f64,
    },
    /// A term of a multi-term sum failed; `index` is 0 for the direct term
    /// and `p` for the p-th reflection.
    Term {
        index: usize,
        source: Box<Error>,
    },
    UnknownIntegrand(String),
    Arity {
        id: &'static str,
        arity: usize,
        min: usize,
        max: usize,
    },
    AlphaOutOfRange {
        id: &'static str,
        alpha: f64,
        bound: f64,
    },
    Reduction {
        side: Side,
        source: Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { function, value } => {
                write!(f, "{function}: argument {value} outside domain")
            }
            Error::InvalidOrder(n) => write!(f, "order must be an integer >= 2, got {n}"),
            Error::ArgCount { expected, found } => {
                write!(f, "expected {expected} arguments, found {found}")
            }
            Error::InvalidArgument { index, value } => {
                write!(f, "argument {} is invalid: {value}", index + 1)
            }
            Error::ReflectionIndex { index, max } => {
                write!(f, "reflection index {index} outside 1..={max}")
            }
            Error::InvalidBox(msg) => write!(f, "invalid box: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid quadrature config: {msg}"),
            Error::DimensionTooLarge { dim, max } => {
                write!(f, "dimension {dim} exceeds supported maximum {max}")
            }
            Error::NonFinite { point, value } => {
                write!(f, "integrand returned {value} at point {point:?}")
            }
            Error::Term { index, source } => write!(f, "term {index}: {source}"),
            Error::UnknownIntegrand(id) => write!(f, "unknown integrand `{id}`"),
            Error::Arity {
                id,
                arity,
                min,
                max,
            } => {
                write!(
                    f,
                    "integrand `{id}` supports arity {min}..={max}, got {arity}"
                )
            }
            Error::AlphaOutOfRange { id, alpha, bound } => {
                write!(f, "alpha {alpha} outside [0, {bound}) for integrand `{id}`")
            }
            Error::Reduction { side, source } => write!(f, "{side}: {source}"),
        }
    }
}

impl core::error::Error for Error {}

use crate::quad::RingTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(RingTag, RingTag),

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(String, String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a sum of two squares")]
    NotSumOfTwoSquares(u64),

    #[error("unsupported prime p = {p}: {reason}")]
    UnsupportedPrime { p: u64, reason: String },

    #[error("no ideal generator with relative norm associate to {target} found in the coefficient box |re|,|im| <= {bound}")]
    GeneratorNotFound { target: String, bound: i64 },

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("construction stage '{stage}' failed: {detail}")]
    Construction { stage: &'static str, detail: String },

    #[error("enumeration needs {needed} determinant evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("matrix or module is rank deficient")]
    RankDeficient,

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown code '{0}'; valid names: golden, 2x2:<p>, 3x3, 4x4, 6x6, 2x2:17-broken")]
    UnknownCode(String),

    #[error("unknown constellation '{0}'; valid names: qam4, qam8, qam16, qam64, hex4, hex8, hex16")]
    UnknownConstellation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

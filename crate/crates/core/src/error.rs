use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("{0} is not a valid field parameter")]
    InvalidFieldParameter(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("discriminant {disc} exceeds the supported bound {bound}")]
    DiscriminantTooLarge { disc: i64, bound: i64 },
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("class number for discriminant {disc} does not round to an integer (got {value})")]
    ClassNumberRounding { disc: i64, value: f64 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("point does not satisfy the incidence relation x0*y1 = x1*y0")]
    Incidence,
    #[error("point lies on the singular line t0 = t1 = 0")]
    SingularLine,
    #[error("point is not in the open set t0*t1*t2*t3 != 0")]
    NotInOpen,
    #[error("point is not on the surface")]
    NotOnSurface,
    #[error("coprimality condition violated")]
    NotCoprime,
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("points are defined over different fields")]
    FieldMismatch,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("cutoff {b} exceeds the ceiling {ceiling}")]
    CeilingExceeded { b: f64, ceiling: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Jacobi parameters alpha={alpha}, beta={beta}: both must exceed -1")]
    InvalidParams { alpha: f64, beta: f64 },
    #[error("non-integrable quadrature exponents a={a}, b={b}")]
    NonIntegrable { a: f64, b: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("quadrature order {order} too low, need at least {required}")]
    QuadratureTooLow { order: usize, required: usize },
    #[error("quadrature exponents ({a}, {b}) do not match the basis weight")]
    QuadratureMismatch { a: f64, b: f64 },
    #[error("symmetry violated by {residual:e}; quadrature is insufficient")]
    SymmetryViolation { residual: f64 },
    #[error("sequence support reaches index {index}, outside the table")]
    SupportOutOfRange { index: i64 },
    #[error("kernel tables are incompatible: {0}")]
    Incompatible(&'static str),
    #[error("riccati expression is not constant (relative residual {residual:e})")]
    NonConstantRiccati { residual: f64 },
    #[error("polynomial b vanishes or changes sign inside (-1, 1) near x={x}")]
    BNotPositive { x: f64 },
    #[error("b must satisfy b(1)=0 and b'(1)!=0 (b(1)={b1}, b'(1)={db1})")]
    EndpointCondition { b1: f64, db1: f64 },
    #[error("the exceptional weight needs alpha > 0, got {alpha}")]
    AlphaTooSmall { alpha: f64 },
    #[error("row limits did not converge (Cauchy defect {defect:e})")]
    NonConvergentRows { defect: f64 },
    #[error("evaluation at a singular point t={t}")]
    SingularPoint { t: f64 },
    #[error("the two evolution methods disagree by {disagreement:e}")]
    MethodDisagreement { disagreement: f64 },
    #[error("empty admissible index range")]
    EmptyRange,
    #[error("the eigen decomposition did not converge")]
    NoConvergence,
}

pub type Result<T> = core::result::Result<T, Error>;

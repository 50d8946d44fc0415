use thiserror::Error;

/// Errors raised by the numerical and geometric routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error("grid too large: {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: f64, limit: usize },

    #[error("band limit {requested} exceeds the grid's supported band {supported}")]
    BandLimit { requested: usize, supported: usize },

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("eigensolver did not converge after {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("ill-conditioned linear map (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("body is not valid: {0}")]
    InvalidBody(String),

    #[error("support function is not convex: curvature margin {margin:.3e} along plane {plane}")]
    NotConvex { margin: f64, plane: usize },

    #[error("odd-degree energy {0:.3e} cannot be inverted by the Radon transform")]
    OddComponent(f64),

    #[error("nonpositive value {value:.3e} at grid point {index}")]
    Nonpositive { value: f64, index: usize },

    #[error("closed form {closed:.17e} and quadrature {quadrature:.17e} disagree for {what}")]
    QuadratureMismatch {
        what: String,
        closed: f64,
        quadrature: f64,
    },

    #[error("constant {c_hat:.10} lies outside the stability band [{lower:.10}, {upper:.10}]")]
    SandwichViolation { c_hat: f64, lower: f64, upper: f64 },

    #[error("body too far from the ball: sup deviation {0:.4} exceeds 0.15")]
    TooFarFromBall(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

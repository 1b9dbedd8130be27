use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Triangulation input does not match the JSON schema.
    #[error("format error: {0}")]
    Format(String),

    /// Triangulation input parses but its combinatorics are inconsistent.
    #[error("combinatorics error: {0}")]
    Combinatorics(String),

    /// A shape parameter sits on (or numerically at) 0, 1 or infinity.
    #[error("degenerate shape in tetrahedron {tet}: z = {z}")]
    DegenerateShape { tet: usize, z: String },

    #[error("Newton iteration did not converge (best residual {best_residual:.3e})")]
    NoConvergence { best_residual: f64 },

    /// Converged, but some tetrahedron is not positively oriented.
    #[error("solution is not geometric: tetrahedron {tet} has Im z = {im:.3e}")]
    NonGeometric { tet: usize, im: f64 },

    #[error("fixed points are undefined for the identity")]
    IdentityInput,

    #[error("cone angle {angle} is outside (0, pi]")]
    AngleOutOfRange { angle: f64 },

    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "cone smoothing is infeasible for alpha = {alpha}, eps = {eps}{}",
        feasible_eps.map(|e| format!(" (largest feasible eps: {e:.6e})")).unwrap_or_default()
    )]
    InfeasibleSmoothing {
        alpha: f64,
        eps: f64,
        feasible_eps: Option<f64>,
    },

    /// Curvature requested exactly at a knot of a piecewise profile.
    #[error("x = {x} is a knot point; evaluate one-sided")]
    KnotPoint { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

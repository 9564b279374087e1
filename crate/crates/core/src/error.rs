use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Variants are named after the condition that was violated so the command
/// line front end can report them verbatim (see [`GeometryError::name`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("vector is not timelike")]
    NotTimelike,
    #[error("timelike vectors lie in opposite timelike cones")]
    OppositeCones,
    #[error("curve velocity is not spacelike at parameter {at}")]
    NotSpacelikeVelocity { at: f64 },
    #[error("curve acceleration is not spacelike at parameter {at}")]
    NonSpacelikeAcceleration { at: f64 },
    #[error("curvature {kappa:e} is below the resolvable threshold at parameter {at}")]
    VanishingCurvature { at: f64, kappa: f64 },
    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },
    #[error("parameter ({u}, {v}) is singular or excluded")]
    SingularPoint { u: f64, v: f64 },
    #[error("surface is not spacelike: {0}")]
    NotSpacelike(String),
    #[error("tangential projection of the axis vanishes (angle is zero)")]
    DegenerateProjection,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("ruled surface is not regular: {0}")]
    NotRegular(String),
    #[error("curve leaves the de Sitter sphere (Lorentz square {square} at parameter {at})")]
    NotOnDeSitter { at: f64, square: f64 },
    #[error("inverse of the turning function did not converge for value {0}")]
    InverseFailure(f64),
    #[error("no eigenvector of the axis problem is timelike")]
    NoTimelikeEigenvector,
    #[error("curve is not a helix (max deviation of torsion/curvature {deviation:e})")]
    NotAHelix { deviation: f64 },
    #[error("torsion dominates curvature (tau^2 >= kappa^2) at parameter {at}")]
    TorsionDominates { at: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl GeometryError {
    /// Stable variant name used in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Self::NotTimelike => "NotTimelike",
            Self::OppositeCones => "OppositeCones",
            Self::NotSpacelikeVelocity { .. } => "NotSpacelikeVelocity",
            Self::NonSpacelikeAcceleration { .. } => "NonSpacelikeAcceleration",
            Self::VanishingCurvature { .. } => "VanishingCurvature",
            Self::QuadratureFailure { .. } => "QuadratureFailure",
            Self::SingularPoint { .. } => "SingularPoint",
            Self::NotSpacelike(_) => "NotSpacelike",
            Self::DegenerateProjection => "DegenerateProjection",
            Self::DomainError(_) => "DomainError",
            Self::NotRegular(_) => "NotRegular",
            Self::NotOnDeSitter { .. } => "NotOnDeSitter",
            Self::InverseFailure(_) => "InverseFailure",
            Self::NoTimelikeEigenvector => "NoTimelikeEigenvector",
            Self::NotAHelix { .. } => "NotAHelix",
            Self::TorsionDominates { .. } => "TorsionDominates",
            Self::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeometryError>;

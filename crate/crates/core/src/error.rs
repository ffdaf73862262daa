use thiserror::Error;

/// Errors raised by the topology and model layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),
    #[error("edge {0} cannot be flipped: both sides lie in one triangle")]
    UnflippableEdge(usize),
    #[error("edge {0} is out of range")]
    NoSuchEdge(usize),
    #[error("curve lives on a different triangulation")]
    TriangulationMismatch,
    #[error("mapping class and curve live on different surfaces")]
    SurfaceMismatch,
    #[error("coordinate vector is not admissible: {0}")]
    NotAdmissible(String),
    #[error("curve is not connected")]
    NotConnected,
    #[error("curve is not essential")]
    NotEssential,
    #[error("invalid subsurface: {0}")]
    InvalidSubsurface(String),
    #[error("collection does not meet the subsurface essentially")]
    NotInProjectionDomain,
    #[error("collection does not fill: {0}")]
    NotFilling(String),
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("subsurface is refuted as a witness for this ball")]
    NotAWitness,
    #[error("unknown export format `{0}`")]
    UnknownFormat(String),
    #[error("no Alexander system is registered for this surface")]
    NoAlexanderSystem,
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

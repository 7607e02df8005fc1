use thiserror::Error;

use crate::building::Chamber;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("generator index {index} out of range for rank {rank}")]
    InvalidGenerator { index: usize, rank: usize },

    #[error("elements belong to different Coxeter systems")]
    MixedSystems,

    #[error("Coxeter group is infinite or exceeds {limit} elements")]
    InfiniteGroup { limit: usize },

    #[error("search radius {radius} does not contain an element of length {needed}")]
    RadiusTooSmall { radius: usize, needed: usize },

    #[error("invalid building: {0}")]
    InvalidBuilding(String),

    #[error("chamber {0} out of range")]
    InvalidChamber(Chamber),

    #[error("simplex is not a {0}")]
    WrongSimplexKind(&'static str),

    #[error("the link of a chamber is empty")]
    ChamberLink,

    #[error("partial chart is not a W-isometry: {0}")]
    NotIsometry(String),

    #[error("isometry extension failed at element {element}: no consistent chamber")]
    ExtensionFailed { element: usize },

    #[error("building has panels with fewer than {needed} chambers (found {found})")]
    ThicknessTooSmall { needed: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("roots do not share a wall")]
    WallsDiffer,

    #[error("construction produced an invalid result: {0}")]
    Construction(String),

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("geometry is not a generalized {gon}-gon: {reason}")]
    NotPolygon { gon: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "invalid_matrix",
            Error::InvalidGenerator { .. } => "invalid_generator",
            Error::MixedSystems => "mixed_systems",
            Error::InfiniteGroup { .. } => "infinite_group",
            Error::RadiusTooSmall { .. } => "radius_too_small",
            Error::InvalidBuilding(_) => "invalid_building",
            Error::InvalidChamber(_) => "invalid_chamber",
            Error::WrongSimplexKind(_) => "wrong_simplex_kind",
            Error::ChamberLink => "chamber_link",
            Error::NotIsometry(_) => "not_isometry",
            Error::ExtensionFailed { .. } => "extension_failed",
            Error::ThicknessTooSmall { .. } => "thickness_too_small",
            Error::Precondition(_) => "precondition",
            Error::WallsDiffer => "walls_differ",
            Error::Construction(_) => "construction",
            Error::Certificate(_) => "certificate",
            Error::Parse { .. } => "parse",
            Error::NotPolygon { .. } => "not_polygon",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }
}

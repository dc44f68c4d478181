use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator symbol `{0}`")]
    UnknownGenerator(String),

    #[error("operands belong to different group models")]
    ModelMismatch,

    #[error("group is infinite; enumeration is not available")]
    InfiniteGroup,

    #[error("unsupported group kind `{0}`")]
    UnsupportedGroupKind(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("malformed word `{word}`: {reason}")]
    MalformedWord { word: String, reason: String },

    #[error("invalid group model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("closure set cannot be resolved: {0}")]
    ClosureUnresolvable(String),

    #[error("track is not based: core is `{0}`")]
    NotBased(String),

    #[error("invalid track: {0}")]
    InvalidTrack(String),

    #[error(
        "inconsistent cocycle at `{element}`: U = {first} and U = {second} differ outside the indeterminacy subgroup"
    )]
    InconsistentCocycle { element: String, first: String, second: String },

    #[error("self-intersection invariant does not vanish: {0}")]
    NonVanishingObstruction(String),

    #[error("scenario declares no stabilizer data")]
    MissingStabilizer,
}

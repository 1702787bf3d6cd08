use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("[ifs] syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("[ifs] invalid rational literal `{0}`")]
    Literal(String),
    #[error("[ifs] division by zero")]
    DivisionByZero,
    #[error("[ifs] line {line}: ratio {ratio} is outside (0,1)")]
    RatioOutOfRange { line: usize, ratio: String },
    #[error("[ifs] line {line}: expected {expected} coordinates, found {found}")]
    CoordinateCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("[ifs] dimension must be at least 1, got {0}")]
    Dimension(String),
    #[error("[ifs] system has no maps")]
    Empty,
    #[error("[ifs] maps {first} and {second} are identical")]
    DuplicateMap { first: usize, second: usize },
    #[error("[ifs] map {index} has {found} coordinates, system dimension is {expected}")]
    MapDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("[ifs] symbol {index} out of range for {len} maps")]
    SymbolOutOfRange { index: usize, len: usize },
    #[error("[ifs] projection level {level} outside 1..={dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("[tree] system is not of Lalley-Gatzouras type: {0}")]
    NotLalleyGatzouras(String),
    #[error("[tree] vertex {0} is not in the tree")]
    UnknownVertex(String),
    #[error("[tree] vertex {0} has rank {1} = dim and carries no fiber IFS")]
    LeafVertex(String, usize),
    #[error("[classify] {0}")]
    Witness(String),
    #[error("[classify] system is uniformly disconnected; no witness vertex exists")]
    NoWitness,
    #[error("[components] delta must be positive, got {0}")]
    NonPositiveDelta(String),
    #[error("[components] {0}")]
    Components(String),
    #[error("[components] precondition failed: set {set} has a component wider than C*delta at delta^2 = {delta_sq}")]
    UnionPrecondition { set: usize, delta_sq: String },
    #[error("[components] resource cap exceeded: {requested} objects requested, cap is {cap}")]
    ResourceCap { requested: u128, cap: usize },
    #[error("[cantor] {0}")]
    Cantor(String),
}

impl Error {
    /// Short tag naming the module the error originates from.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Syntax { .. }
            | Error::Literal(_)
            | Error::DivisionByZero
            | Error::RatioOutOfRange { .. }
            | Error::CoordinateCount { .. }
            | Error::Dimension(_)
            | Error::Empty
            | Error::DuplicateMap { .. }
            | Error::MapDimension { .. }
            | Error::SymbolOutOfRange { .. }
            | Error::LevelOutOfRange { .. } => "ifs",
            Error::NotLalleyGatzouras(_) | Error::UnknownVertex(_) | Error::LeafVertex(..) => {
                "tree"
            }
            Error::Witness(_) | Error::NoWitness => "classify",
            Error::NonPositiveDelta(_)
            | Error::Components(_)
            | Error::UnionPrecondition { .. }
            | Error::ResourceCap { .. } => {
                "components"
            }
            Error::Cantor(_) => "cantor",
        }
    }

    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("marks require a basepoint")]
    MarksWithoutBasepoint,
    #[error("declared rank {declared} but edges give rank {actual}")]
    RankMismatch { declared: usize, actual: usize },
    #[error("declared mark count s={declared} but graph carries s={actual}")]
    MarkCountMismatch { declared: usize, actual: usize },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} is a loop and cannot be collapsed")]
    LoopInForest(usize),
    #[error("edge set contains a cycle")]
    CycleInForest,
    #[error("graphs with more than {0} edges are not supported by forest operations")]
    TooManyEdges(usize),
    #[error("flag members must be strictly increasing")]
    FlagNotIncreasing,
    #[error("operation requires a basepoint (s >= 1)")]
    NoBasepoint,
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("parameter mismatch: ({0},{1}) vs ({2},{3})")]
    ParameterMismatch(usize, usize, usize, usize),
    #[error("letter {0} is outside the rank-{1} alphabet")]
    LetterOutOfRange(i32, usize),
    #[error("images and inverse images do not compose to the identity")]
    NotInverse,
    #[error("expected {expected} words, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("operation needs s >= {needed}, got s = {got}")]
    TooFewBoundaries { needed: usize, got: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("cannot parse word {0:?}")]
    BadWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("boundary composition d{0} . d{1} is nonzero")]
    NotAComplex(usize, usize),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("chain map does not commute with boundaries in dimension {0}")]
    NotAChainMap(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("resource budget exceeded: {what} ({count} > {limit})")]
    Budget {
        what: &'static str,
        count: usize,
        limit: usize,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubexError {
    #[error("graph is not median: triple {triple:?} has {medians} medians")]
    NotMedian { triple: [usize; 3], medians: usize },
    #[error("graph is not median: {0}")]
    NotMedianLocal(String),
    #[error("hyperplane {hyperplane} does not split the vertex set into two convex halfspaces")]
    InconsistentHalfspace { hyperplane: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex budget of {budget} exceeded")]
    RadiusTooLarge { budget: usize },
    #[error("topological graph is not sufficiently subdivided for {strands} strands: {reason}")]
    NotSubdivided { strands: usize, reason: String },
    #[error("subcomplex is empty")]
    EmptySubcomplex,
    #[error("subcomplexes do not form a cycle: {0}")]
    NotACycle(String),
    #[error("hyperplanes are not distinct")]
    NotDistinct,
    #[error("search budget exhausted; best value found is {lower_bound}")]
    Budget { lower_bound: usize },
    #[error("precondition failed: {0}")]
    TooSmall(String),
    #[error("partial isometry domain too small: {0}")]
    DomainTooSmall(String),
    #[error("vertex set is not {measured}-quasiconvex for the requested K = {requested}")]
    NotQuasiconvex { requested: usize, measured: usize },
    #[error("subgraph is not induced")]
    NotInduced,
    #[error("no thick constrained grid of size {0}")]
    NoThickGrid(usize),
    #[error("path is not a geodesic")]
    NotGeodesic,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, CubexError>;

impl From<serde_json::Error> for CubexError {
    fn from(e: serde_json::Error) -> Self {
        CubexError::Schema {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent rotation system: {0}")]
    InconsistentRotation(String),

    #[error("embedding is not planar: component containing vertex {vertex} has V - E + F = {euler}")]
    NonPlanar { vertex: usize, euler: i64 },

    #[error("malformed embedding: {0}")]
    MalformedEmbedding(String),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("vertex {0} is unreachable from the root")]
    Unreachable(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("unknown vertex {0}")]
    UnknownVertex(u64),

    #[error("witness is not bipartite: edge {0}-{1} joins vertices on the same side")]
    NotBipartite(u64, u64),

    #[error("terminal {0} lies on the weight-0 side")]
    TerminalOnWeightZeroSide(u64),

    #[error("instance has no terminals")]
    NoTerminals,

    #[error("{what} has size {size}, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },

    #[error("no Steiner tree exists: terminals are not connected")]
    Infeasible,

    #[error("edge set is not a subtree of the host graph: {0}")]
    NotASubtree(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// True when the failure is computational infeasibility rather than bad input.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Infeasible => true,
            Error::Stage { source, .. } => source.is_infeasible(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

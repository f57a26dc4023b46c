use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("{what} {size} exceeds cap {cap}")]
    SizeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("graph has odd order {0}")]
    OddOrder(usize),
    #[error("perfect matching count exceeds cap {cap} (enumerated {partial} before stopping)")]
    CapExceeded { cap: usize, partial: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph is not a regular bipartite graph of positive degree")]
    NotRegularBipartite,
    #[error("bipartition sides have sizes {0} and {1}")]
    UnbalancedSides(usize, usize),
    #[error("flow network has no source or sink")]
    MissingTerminals,
    #[error("invalid flow network: {0}")]
    InvalidNetwork(String),
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

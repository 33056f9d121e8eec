use crate::oracle::QueryKind;
use crate::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node {0} has out-degree 0")]
    DanglingNode(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("node id {node} out of range for a graph with {node_count} nodes")]
    NodeIdOutOfRange { node: NodeId, node_count: usize },
    #[error("index {index} out of range for node {node} with degree {degree}")]
    IndexOutOfRange { node: NodeId, index: usize, degree: usize },
    #[error("query {0:?} is not enabled on this oracle")]
    CapabilityDisabled(QueryKind),
    #[error("brute-force enumeration refused for n = {0} (limit 64)")]
    ExplosionGuard(usize),
    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("instance constraint violated: {0}")]
    SpecConstraintViolation(String),
    #[error("no closed form for {0}")]
    NoClosedForm(String),
    #[error("no parameter regime covers delta = {0}")]
    RegimeUndefined(f64),
    #[error("need at least {needed} sweep points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("algorithm {algorithm} needs capabilities the experiment does not grant: {missing}")]
    CapabilityMismatch { algorithm: String, missing: String },
    #[error("could not load instance: {0}")]
    InstanceLoad(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

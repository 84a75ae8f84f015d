//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    // --- embedding construction / editing ---
    #[error("adjacency is not symmetric: {u} lists {v} but {v} does not list {u}")]
    NonSymmetricAdjacency { u: usize, v: usize },
    #[error("rotation system is not simple: {0}")]
    NotSimple(String),
    #[error("rotation system is not a planar embedding (Euler check failed: V={v} E={e} F={f} C={c})")]
    NotAnEmbedding { v: usize, e: usize, f: usize, c: usize },
    #[error("no traced face matches the requested outer face walk")]
    OuterFaceNotFound,
    #[error("outer face walk repeats a vertex; graph is not a triangulated disk")]
    NotADisk,
    #[error("edge ({0}, {1}) is not on the outer face")]
    NotBoundaryEdge(usize, usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} does not lie on the given face")]
    NotOnFace(usize),
    #[error("vertices {0} and {1} are already adjacent")]
    AlreadyAdjacent(usize, usize),
    #[error("edge ({0}, {1}) does not exist")]
    UnknownEdge(usize, usize),

    // --- solver ---
    #[error("graph is not a near-triangulation")]
    NotNearTriangulation,
    #[error("invalid special set: {0}")]
    SpecialSetInvalid(String),
    #[error("graph is not one of the base cases K3, K4, diamond")]
    NotABaseCase,
    #[error("a child coloring is not a good coloring of its subproblem: {0}")]
    ChildNotGood(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("planarity violated during contraction: {0}")]
    PlanarityViolation(String),
    #[error("no color pairing separates every special vertex's protected edge")]
    NoValidPairing,
    #[error("repair: unsatisfied neighbors of an independent-set vertex miss different colors")]
    MixedMissingColors,
    #[error("repair: satisfied set failed to grow")]
    NoProgress,
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("four-coloring search exceeded the node budget ({nodes} nodes)")]
    Timeout { nodes: u64 },

    // --- oracle ---
    #[error("instance too large for exhaustive search: n={n}, cap={cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("coloring is not total: vertex {0} is uncolored")]
    PartialColoring(usize),

    // --- generators ---
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("generation failed: retry budget exhausted")]
    GenerationFailed,

    // --- i/o ---
    #[error("parse error: {0}")]
    ParseError(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

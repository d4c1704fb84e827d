use std::path::PathBuf;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cell {cell} references vertex {index}, but the mesh has {count} vertices")]
    InvalidVertexIndex { cell: usize, index: usize, count: usize },

    #[error("vertex {index} has a non-finite coordinate")]
    NonFiniteVertex { index: usize },

    #[error("vertex {index} is not referenced by any cell")]
    UnusedVertex { index: usize },

    #[error("cell {cell} is degenerate: {reason}")]
    DegenerateCell { cell: usize, reason: String },

    #[error("non-manifold edge ({}, {}): shared by {count} cells", edge[0], edge[1])]
    NonManifoldEdge { edge: [usize; 2], count: usize },

    #[error("edge ({}, {}) is traversed in the same direction by two cells; orientation cannot be repaired", edge[0], edge[1])]
    InconsistentOrientation { edge: [usize; 2] },

    #[error("untagged boundary edge ({}, {})", edge[0], edge[1])]
    UntaggedBoundaryEdge { edge: [usize; 2] },

    #[error("boundary tag given for edge ({}, {}), which is not a boundary edge of the mesh", edge[0], edge[1])]
    MisplacedBoundaryTag { edge: [usize; 2] },

    #[error("the mesh has no gamma0 (free surface) edge")]
    NoGamma0,

    #[error("cell {cell} is not star-shaped with respect to its centroid; mesh quality too poor")]
    NotStarShaped { cell: usize },

    #[error("local projector of cell {cell} is singular")]
    SingularProjector { cell: usize },

    #[error("edge ({}, {}) is not a gamma0 edge", edge[0], edge[1])]
    NotGamma0Edge { edge: [usize; 2] },

    #[error("degenerate triangle (area {area:e})")]
    DegenerateTriangle { area: f64 },

    #[error("Cholesky factorization of K + M failed ({0}); the mesh may be disconnected")]
    Factorization(String),

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("eigenvector has zero boundary mass norm")]
    ZeroMassNorm,

    #[error("requested {requested} positive eigenvalues but only {available} exist on this mesh")]
    TooManyEigenvalues { requested: usize, available: usize },

    #[error("dense reference solve limited to {max} dofs, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("cell {cell} is not a triangle ({vertices} vertices)")]
    NonTriangular { cell: usize, vertices: usize },

    #[error("need at least {needed} usable points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

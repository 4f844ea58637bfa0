use std::path::PathBuf;

use thiserror::Error;

use crate::mesh::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty complex")]
    EmptyComplex,

    #[error("degenerate input")]
    DegenerateInput,

    /// A local operation would produce a non-positively oriented tetrahedron.
    #[error("would invert")]
    WouldInvert,

    /// A local operation would change the topology of a tagged surface or of the mesh.
    #[error("topology change")]
    TopologyChange,

    /// A local operation touches the input complex, the mesh boundary or a locked layer.
    #[error("frozen simplex")]
    FrozenSimplex,

    #[error("numerical split failure on edge ({}, {})", .edge.0[0], .edge.0[1])]
    NumericalSplitFailure { edge: Edge },

    #[error("input not strictly interior")]
    NotInterior,

    #[error("mesh is not a simplicial embedding of the complex ({violations} violating tets)")]
    NotSimplicialEmbedding { violations: usize },

    #[error("open or inconsistent input")]
    InconsistentInput,

    #[error("no such simplex: {0}")]
    MissingSimplex(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Errors that refuse a single local operation without invalidating the mesh.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::WouldInvert | Error::TopologyChange | Error::FrozenSimplex
        )
    }
}

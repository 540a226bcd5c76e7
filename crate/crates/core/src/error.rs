use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while reading, validating or measuring meshes.
#[derive(Debug, Error)]
pub enum MeshError {
    #[error("truncated STL: expected {expected} bytes for {triangles} triangles, found {actual}")]
    TruncatedFile {
        triangles: u32,
        expected: usize,
        actual: usize,
    },
    #[error("malformed ASCII STL at line {line}: {message}")]
    MalformedAscii { line: usize, message: String },
    #[error("malformed PLY: {0}")]
    MalformedPly(String),
    #[error("mesh has no triangles")]
    EmptyMesh,
    #[error("face {face} is degenerate (no well-defined plane)")]
    DegenerateFace { face: usize },
    #[error("mesh is not watertight: {bad_edges} edges are not shared by exactly two opposite faces")]
    NotWatertight { bad_edges: usize },
    #[error("invalid face {face}: {reason}")]
    InvalidFace { face: usize, reason: String },
    #[error("non-finite coordinate in vertex {0}")]
    NonFinite(usize),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MeshError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MeshError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Errors raised by the contact pipeline.
#[derive(Debug, Error)]
pub enum CsaError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    /// Fewer than four distances fall below the cap; the meshes never come close.
    #[error("insufficient contact: only {below_cap} distances fall below the {cap_mm} mm cap")]
    InsufficientContact { below_cap: usize, cap_mm: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Errors raised by the synthetic pair generators.
#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("manifest: {0}")]
    Manifest(String),
}

pub type Result<T, E = MeshError> = std::result::Result<T, E>;

//! Contact surface area (CSA) between two watertight triangle meshes.
//!
//! The measured mesh is whichever of the pair has fewer faces (normally the
//! tumor). For each of its faces the distance from the face centroid to the
//! nearest centroid on the other mesh is computed; the sorted distances are
//! split by a two-segment least-squares fit to find an adaptive threshold;
//! faces below it form the contact region, which is then repaired for
//! spurious disconnected non-contact islands and summed.

pub mod error;
pub mod engine;
pub mod mesh;
pub mod synth;

pub use error::{CsaError, MeshError, SynthError};
pub use mesh::{Face, FaceCentroids, Point3, TriMesh};
pub use engine::{compute_csa, CsaConfig, CsaReport, CsaResult};

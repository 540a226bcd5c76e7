//! The contact pipeline: distances, threshold, labeling, refinement, area.

mod distance;
mod pipeline;
mod refine;
mod report;
mod spatial;
mod threshold;

pub use distance::{min_distances, min_distances_bruteforce, DistanceVector, BRUTE_FORCE_BELOW};
pub use pipeline::{
    compute_csa, compute_csa_with_distances, hsieh_estimate, pair_distances, CsaConfig, CsaResult,
    MeshRole, MeshStats,
};
pub use refine::{compute_csa_area, define_csa, refine_csa, Refinement};
pub use report::{CsaReport, Distribution};
pub use spatial::CentroidGrid;
pub use threshold::{
    find_threshold, split_error, LineFit, ThresholdResult, DEFAULT_CAP_MM, MIN_CAPPED_SAMPLES,
};

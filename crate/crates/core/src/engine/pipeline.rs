use serde::{Deserialize, Serialize};

use super::distance::{min_distances, DistanceVector};
use super::refine::{compute_csa_area, define_csa, refine_csa};
use super::threshold::{find_threshold, ThresholdResult, DEFAULT_CAP_MM};
use crate::error::CsaError;
use crate::mesh::{all_centroids, mesh_total_area, mesh_volume, TriMesh};

/// Tunables for one contact computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsaConfig {
    /// Only distances strictly below this enter the knee search.
    pub cap_mm: f64,
    /// Skips the knee search and uses this threshold directly.
    pub threshold_override_mm: Option<f64>,
    pub refine: bool,
}

impl Default for CsaConfig {
    fn default() -> Self {
        CsaConfig {
            cap_mm: DEFAULT_CAP_MM,
            threshold_override_mm: None,
            refine: true,
        }
    }
}

impl CsaConfig {
    pub fn validate(&self) -> Result<(), CsaError> {
        if !(self.cap_mm > 0.0 && self.cap_mm.is_finite()) {
            return Err(CsaError::InvalidParameter(format!(
                "cap_mm must be positive and finite, got {}",
                self.cap_mm
            )));
        }
        if let Some(t) = self.threshold_override_mm {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CsaError::InvalidParameter(format!(
                    "threshold override must be non-negative and finite, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// Which input the contact faces live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshRole {
    Organ,
    Tumor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    /// Total surface area of the measured mesh.
    pub measured_total_area: f64,
    /// Enclosed volume of the measured mesh; `None` when it is not watertight.
    pub measured_volume: Option<f64>,
    pub face_count_organ: usize,
    pub face_count_tumor: usize,
}

/// Everything one run of the pipeline produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsaResult {
    pub csa_face_ids: Vec<usize>,
    pub csa_face_ids_pre_refinement: Vec<usize>,
    pub csa_area: f64,
    /// The threshold that was applied, automatic or overridden.
    pub tau: Option<f64>,
    /// Knee search details; absent when overridden or when contact was insufficient.
    pub threshold: Option<ThresholdResult>,
    pub refinement_applied: bool,
    pub discarded_component_count: usize,
    pub insufficient_contact: bool,
    pub measured: MeshRole,
    pub stats: MeshStats,
    pub unit_scale: f64,
}

/// Distances from the measured mesh to the other one. On a face-count tie
/// the tumor is measured.
pub fn pair_distances(organ: &TriMesh, tumor: &TriMesh) -> DistanceVector {
    min_distances(&all_centroids(tumor), &all_centroids(organ))
}

/// Runs the full pipeline: centroids, distances, threshold, labeling,
/// refinement and area.
pub fn compute_csa(organ: &TriMesh, tumor: &TriMesh, config: &CsaConfig) -> Result<CsaResult, CsaError> {
    config.validate()?;
    let distances = pair_distances(organ, tumor);
    compute_csa_with_distances(organ, tumor, &distances, config)
}

/// The pipeline after the distance step, for callers that cache distances.
pub fn compute_csa_with_distances(
    organ: &TriMesh,
    tumor: &TriMesh,
    distances: &DistanceVector,
    config: &CsaConfig,
) -> Result<CsaResult, CsaError> {
    config.validate()?;
    let (measured_mesh, measured) = if distances.small_is_first {
        (tumor, MeshRole::Tumor)
    } else {
        (organ, MeshRole::Organ)
    };
    if distances.len() != measured_mesh.face_count() {
        return Err(CsaError::InvalidParameter(format!(
            "distance vector has {} entries for a mesh with {} faces",
            distances.len(),
            measured_mesh.face_count()
        )));
    }
    let stats = MeshStats {
        measured_total_area: mesh_total_area(measured_mesh),
        measured_volume: mesh_volume(measured_mesh).ok(),
        face_count_organ: organ.face_count(),
        face_count_tumor: tumor.face_count(),
    };
    let d = distances.as_slice();

    let (tau, threshold, insufficient) = match config.threshold_override_mm {
        Some(t) => (Some(t), None, false),
        None => match find_threshold(d, config.cap_mm) {
            Ok(t) => (Some(t.tau), Some(t), false),
            Err(CsaError::InsufficientContact { .. }) => (None, None, true),
            Err(e) => return Err(e),
        },
    };

    let pre = tau.map(|t| define_csa(d, t)).unwrap_or_default();
    let (post, discarded) = if config.refine && tau.is_some() {
        let r = refine_csa(measured_mesh, &pre, d);
        (r.face_ids, r.discarded_component_count)
    } else {
        (pre.clone(), 0)
    };
    let csa_area = compute_csa_area(measured_mesh, &post);

    Ok(CsaResult {
        csa_face_ids: post,
        csa_face_ids_pre_refinement: pre,
        csa_area,
        tau,
        threshold,
        refinement_applied: discarded > 0,
        discarded_component_count: discarded,
        insufficient_contact: insufficient,
        measured,
        stats,
        unit_scale: tumor.unit_scale(),
    })
}

/// Legacy estimate `2·π·r·d` from maximum tumor radius and intrusion depth.
pub fn hsieh_estimate(radius_mm: f64, depth_mm: f64) -> f64 {
    2.0 * std::f64::consts::PI * radius_mm * depth_mm
}

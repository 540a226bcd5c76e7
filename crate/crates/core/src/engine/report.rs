//! The JSON/CSV report shared by the CLI and the HTTP service.

use serde::{Deserialize, Serialize};

use super::pipeline::{CsaResult, MeshRole};
use super::threshold::LineFit;

/// Sorted capped distances with the chosen two-line fit, for plotting the knee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub sorted_distances_mm: Vec<f64>,
    /// Number of samples in the lower run; absent for overridden thresholds.
    pub split_index: Option<usize>,
    pub fit_lines: Option<[LineFit; 2]>,
    pub cap_mm: f64,
}

/// Flat report. Area and volume fields describe the measured mesh, which is
/// the tumor unless the organ has fewer faces (see `measured_mesh`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsaReport {
    pub csa_area_mm2: f64,
    pub tumor_total_area_mm2: f64,
    pub tumor_volume_mm3: Option<f64>,
    pub threshold_mm: Option<f64>,
    pub split_index: Option<usize>,
    pub face_count_tumor: usize,
    pub face_count_organ: usize,
    pub csa_face_ids: Vec<usize>,
    pub pre_refinement_face_ids: Vec<usize>,
    pub refinement_applied: bool,
    pub discarded_component_count: usize,
    pub insufficient_contact: bool,
    pub unit_scale: f64,
    pub measured_mesh: MeshRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Distribution>,
}

impl CsaReport {
    pub fn from_result(r: &CsaResult) -> Self {
        CsaReport {
            csa_area_mm2: r.csa_area,
            tumor_total_area_mm2: r.stats.measured_total_area,
            tumor_volume_mm3: r.stats.measured_volume,
            threshold_mm: r.tau,
            split_index: r.threshold.as_ref().map(|t| t.split_index),
            face_count_tumor: r.stats.face_count_tumor,
            face_count_organ: r.stats.face_count_organ,
            csa_face_ids: r.csa_face_ids.clone(),
            pre_refinement_face_ids: r.csa_face_ids_pre_refinement.clone(),
            refinement_applied: r.refinement_applied,
            discarded_component_count: r.discarded_component_count,
            insufficient_contact: r.insufficient_contact,
            unit_scale: r.unit_scale,
            measured_mesh: r.measured,
            distribution: None,
        }
    }

    /// Adds the knee plot data. With an overridden threshold the sorted
    /// capped distances are still provided, without a fit.
    pub fn with_distribution(mut self, r: &CsaResult, distances: &[f64], cap_mm: f64) -> Self {
        self.distribution = Some(match &r.threshold {
            Some(t) => Distribution {
                sorted_distances_mm: t.sorted.clone(),
                split_index: Some(t.split_index),
                fit_lines: Some(t.fit_lines),
                cap_mm,
            },
            None => {
                let mut sorted: Vec<f64> = distances.iter().copied().filter(|&d| d < cap_mm).collect();
                sorted.sort_by(f64::total_cmp);
                Distribution {
                    sorted_distances_mm: sorted,
                    split_index: None,
                    fit_lines: None,
                    cap_mm,
                }
            }
        });
        self
    }

    pub const CSV_HEADER: &'static str = "csa_area_mm2,tumor_total_area_mm2,tumor_volume_mm3,threshold_mm,split_index,face_count_tumor,face_count_organ,csa_face_count,pre_refinement_face_count,refinement_applied,insufficient_contact,unit_scale,measured_mesh";

    /// One CSV data row matching [`Self::CSV_HEADER`]. Face ID lists are summarized as counts.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.csa_area_mm2,
            self.tumor_total_area_mm2,
            opt(self.tumor_volume_mm3),
            opt(self.threshold_mm),
            self.split_index.map(|s| s.to_string()).unwrap_or_default(),
            self.face_count_tumor,
            self.face_count_organ,
            self.csa_face_ids.len(),
            self.pre_refinement_face_ids.len(),
            self.refinement_applied,
            self.insufficient_contact,
            self.unit_scale,
            match self.measured_mesh {
                MeshRole::Organ => "organ",
                MeshRole::Tumor => "tumor",
            }
        )
    }
}

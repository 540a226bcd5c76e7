use serde::{Deserialize, Serialize};

use crate::mesh::{connected_components, face_area, TriMesh};

/// Faces whose distance is strictly below `tau`, ascending.
pub fn define_csa(distances: &[f64], tau: f64) -> Vec<usize> {
    distances
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d < tau)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    /// Contact faces after absorbing stray non-contact islands, ascending.
    pub face_ids: Vec<usize>,
    /// Non-contact components folded back into the contact set.
    pub discarded_component_count: usize,
    /// Components of the non-contact remainder before refinement.
    pub complement_components: usize,
}

/// Folds disconnected non-contact islands back into the contact set.
///
/// The non-contact faces are split into vertex-connected components. The
/// component holding the face with the largest distance stays non-contact
/// (first component on ties); every other component joins the contact set.
/// `mesh` must be welded and indexed like `distances`.
pub fn refine_csa(mesh: &TriMesh, csa_ids: &[usize], distances: &[f64]) -> Refinement {
    let mut in_csa = vec![false; mesh.face_count()];
    for &i in csa_ids {
        in_csa[i] = true;
    }
    let complement: Vec<usize> = (0..mesh.face_count()).filter(|&i| !in_csa[i]).collect();
    let parts = connected_components(mesh, &complement);
    let mut face_ids: Vec<usize> = csa_ids.to_vec();
    face_ids.sort_unstable();
    face_ids.dedup();
    if parts.len() <= 1 {
        return Refinement {
            face_ids,
            discarded_component_count: 0,
            complement_components: parts.len(),
        };
    }

    let furthest: Vec<f64> = parts
        .components
        .iter()
        .map(|c| c.iter().map(|&j| distances[j]).fold(0.0, f64::max))
        .collect();
    let mut keep = 0;
    for (k, &t) in furthest.iter().enumerate() {
        if t > furthest[keep] {
            keep = k;
        }
    }
    for (k, comp) in parts.components.iter().enumerate() {
        if k != keep {
            face_ids.extend_from_slice(comp);
        }
    }
    face_ids.sort_unstable();
    Refinement {
        face_ids,
        discarded_component_count: parts.len() - 1,
        complement_components: parts.len(),
    }
}

/// Sum of face areas over `face_ids`.
pub fn compute_csa_area(mesh: &TriMesh, face_ids: &[usize]) -> f64 {
    face_ids.iter().map(|&j| face_area(mesh, j)).sum()
}

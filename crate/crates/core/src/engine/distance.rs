use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spatial::CentroidGrid;
use crate::mesh::FaceCentroids;

/// Below this many faces on either side the index costs more than it saves.
pub const BRUTE_FORCE_BELOW: usize = 256;

/// Per-face minimum centroid-to-centroid distances for the measured mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceVector {
    /// Indexed by face ID of the measured (smaller) mesh, in millimeters.
    pub distances: Vec<f64>,
    /// True when the first argument was the measured mesh.
    pub small_is_first: bool,
}

impl DistanceVector {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.distances
    }
}

/// Picks the measured mesh: the one with fewer faces, the first on a tie.
fn roles<'a>(
    first: &'a FaceCentroids,
    second: &'a FaceCentroids,
) -> (&'a FaceCentroids, &'a FaceCentroids, bool) {
    if first.len() <= second.len() {
        (first, second, true)
    } else {
        (second, first, false)
    }
}

/// For each face of the mesh with fewer faces, the distance from its centroid
/// to the nearest centroid of the other mesh.
///
/// Uses a uniform grid over the larger mesh's centroids; results are
/// bit-identical to [`min_distances_bruteforce`].
pub fn min_distances(first: &FaceCentroids, second: &FaceCentroids) -> DistanceVector {
    let (small, large, small_is_first) = roles(first, second);
    if small.len() < BRUTE_FORCE_BELOW || large.len() < BRUTE_FORCE_BELOW {
        return min_distances_bruteforce(first, second);
    }
    let grid = CentroidGrid::new(large.as_slice());
    let distances = small
        .as_slice()
        .par_iter()
        .map(|&c| grid.nearest(c).0)
        .collect();
    DistanceVector {
        distances,
        small_is_first,
    }
}

/// Exhaustive O(N·M) scan. Kept as the reference for [`min_distances`].
pub fn min_distances_bruteforce(first: &FaceCentroids, second: &FaceCentroids) -> DistanceVector {
    let (small, large, small_is_first) = roles(first, second);
    let distances = small
        .as_slice()
        .par_iter()
        .map(|&c| {
            large
                .as_slice()
                .iter()
                .map(|&o| c.distance(o))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    DistanceVector {
        distances,
        small_is_first,
    }
}

use std::collections::HashMap;

use super::{Face, Point3, TriMesh};

/// Default weld tolerance in millimeters.
pub const DEFAULT_WELD_EPSILON_MM: f64 = 1e-5;

/// Outcome of [`weld_vertices`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeldReport {
    pub mesh: TriMesh,
    /// Faces removed because they collapsed to fewer than three distinct vertices.
    pub dropped_faces: usize,
    pub merged_vertices: usize,
}

/// Merges vertices closer than `epsilon`.
///
/// Coordinates are quantized to cubic cells of side `epsilon`. Each vertex,
/// in input order, joins the first existing representative within `epsilon`
/// found in its own or the 26 neighboring cells, otherwise it becomes a new
/// representative. Representatives are therefore pairwise farther apart than
/// `epsilon`, which makes welding idempotent. With `epsilon == 0` only
/// bit-identical coordinates merge.
///
/// Faces keep their relative order; those that degenerate are dropped.
pub fn weld_vertices(mesh: &TriMesh, epsilon: f64) -> WeldReport {
    assert!(epsilon >= 0.0, "weld epsilon must be non-negative");
    let src = mesh.vertices();
    let mut remap = vec![0u32; src.len()];
    let mut reps: Vec<Point3> = Vec::with_capacity(src.len());

    if epsilon == 0.0 {
        let mut exact: HashMap<[u64; 3], u32> = HashMap::with_capacity(src.len());
        for (i, p) in src.iter().enumerate() {
            // -0.0 and 0.0 are the same coordinate
            let key = [p.x + 0.0, p.y + 0.0, p.z + 0.0].map(f64::to_bits);
            remap[i] = *exact.entry(key).or_insert_with(|| {
                reps.push(*p);
                (reps.len() - 1) as u32
            });
        }
    } else {
        let cell = |p: Point3| -> [i64; 3] {
            [p.x, p.y, p.z].map(|c| (c / epsilon).floor() as i64)
        };
        let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::with_capacity(src.len());
        for (i, &p) in src.iter().enumerate() {
            let c = cell(p);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(bucket) = grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                            if let Some(&r) = bucket
                                .iter()
                                .find(|&&r| reps[r as usize].distance(p) <= epsilon)
                            {
                                found = Some(r);
                                break 'search;
                            }
                        }
                    }
                }
            }
            remap[i] = found.unwrap_or_else(|| {
                reps.push(p);
                let r = (reps.len() - 1) as u32;
                grid.entry(c).or_default().push(r);
                r
            });
        }
    }

    let mut faces = Vec::with_capacity(mesh.face_count());
    let mut dropped = 0;
    for f in mesh.faces() {
        let mut ids: Vec<u32> = f.ids().iter().map(|&v| remap[v as usize]).collect();
        ids.dedup();
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < 3 || sorted.len() != ids.len() {
            dropped += 1;
            continue;
        }
        faces.push(Face::new(ids));
    }

    let merged = src.len() - reps.len();
    let mut welded = TriMesh::from_parts_unchecked(reps, faces);
    welded.unit_scale = mesh.unit_scale();
    WeldReport {
        mesh: welded,
        dropped_faces: dropped,
        merged_vertices: merged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles(offset: f64) -> TriMesh {
        // (0,1,2) and (3,4,5) share the edge (1,0,0)-(0,1,0); the copy is offset.
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0 + offset, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0 + offset, 0.0),
        ];
        TriMesh::from_triangles(v, &[[0, 1, 2], [3, 4, 5]]).unwrap()
    }

    #[test]
    fn exact_weld_of_shared_edge() {
        let r = weld_vertices(&two_triangles(0.0), 0.0);
        assert_eq!(r.mesh.vertex_count(), 4);
        assert_eq!(r.mesh.face_count(), 2);
        assert_eq!(r.dropped_faces, 0);
    }

    #[test]
    fn near_weld_within_epsilon() {
        let r = weld_vertices(&two_triangles(1e-6), 1e-4);
        assert_eq!(r.mesh.vertex_count(), 4);
        // with a zero tolerance the offset copies stay apart
        assert_eq!(weld_vertices(&two_triangles(1e-6), 0.0).mesh.vertex_count(), 6);
    }

    #[test]
    fn sliver_is_dropped() {
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1e-6, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        let m = TriMesh::from_triangles(v, &[[0, 1, 2], [0, 3, 2]]).unwrap();
        let r = weld_vertices(&m, 1e-4);
        assert_eq!(r.dropped_faces, 1);
        assert_eq!(r.mesh.face_count(), 1);
    }

    #[test]
    fn merge_across_cell_boundary() {
        // 0.99999e-4 and 1.00001e-4 straddle a cell wall at epsilon = 1e-4.
        let v = vec![
            Point3::new(0.99999e-4, 0.0, 0.0),
            Point3::new(1.00001e-4, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        let m = TriMesh::from_triangles(v, &[[0, 2, 3], [1, 3, 2]]).unwrap();
        assert_eq!(weld_vertices(&m, 1e-4).mesh.vertex_count(), 3);
    }

    #[test]
    fn idempotent() {
        let once = weld_vertices(&two_triangles(3e-5), 5e-5).mesh;
        let twice = weld_vertices(&once, 5e-5).mesh;
        assert_eq!(once.vertex_count(), twice.vertex_count());
        assert_eq!(once.face_count(), twice.face_count());
    }
}

//! Indexed polygon meshes and the per-face geometry the contact pipeline needs.
//!
//! Coordinates are millimeters. STL carries no units, so loaders take a
//! `unit_scale` (millimeters per model unit) and rescale on ingestion.

mod geometry;
mod ply;
mod stl;
mod topology;
mod transform;
mod weld;

use std::ops::{Add, Div, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{MeshError, Result};

pub use geometry::{
    all_centroids, face_area, face_centroid, face_normal, mesh_total_area, mesh_volume,
    project_to_plane, shoelace_area, FaceCentroids,
};
pub use ply::{export_ply_colored, parse_ply, write_ply_colored, BASE_COLOR, HIGHLIGHT_COLOR};
pub use stl::{parse_stl, read_stl, write_stl_ascii, write_stl_binary, write_stl_file};
pub use topology::{connected_components, edge_manifold_defects, SubMeshPartition};
pub use transform::RigidTransform;
pub use weld::{weld_vertices, WeldReport, DEFAULT_WELD_EPSILON_MM};

/// Rescales a freshly parsed mesh to millimeters and welds it.
pub fn prepare_mesh(raw: TriMesh, unit_scale: f64, weld_epsilon_mm: f64) -> WeldReport {
    weld_vertices(&raw.with_unit_scale(unit_scale), weld_epsilon_mm)
}

/// [`read_stl`] followed by [`prepare_mesh`].
pub fn load_stl(
    path: impl AsRef<std::path::Path>,
    unit_scale: f64,
    weld_epsilon_mm: f64,
) -> Result<WeldReport> {
    Ok(prepare_mesh(read_stl(path)?, unit_scale, weld_epsilon_mm))
}

/// A point (or vector) in 3D Cartesian space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Point3) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        let dz = self.z - o.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// A planar polygonal face: an ordered loop of indices into the vertex table.
///
/// Triangles are the common case, but nothing downstream assumes `len() == 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face(SmallVec<[u32; 3]>);

impl Face {
    pub fn new(ids: impl IntoIterator<Item = u32>) -> Self {
        Face(ids.into_iter().collect())
    }

    pub fn triangle(a: u32, b: u32, c: u32) -> Self {
        Face(SmallVec::from_buf([a, b, c]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> &[u32] {
        &self.0
    }

    /// Directed edges around the loop, closing last-to-first.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let n = self.0.len();
        (0..n).map(move |k| (self.0[k], self.0[(k + 1) % n]))
    }

    pub fn reversed(&self) -> Face {
        Face(self.0.iter().rev().copied().collect())
    }
}

impl Index<usize> for Face {
    type Output = u32;
    fn index(&self, k: usize) -> &u32 {
        &self.0[k]
    }
}

/// An indexed polygon mesh in millimeters.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point3>,
    faces: Vec<Face>,
    unit_scale: f64,
}

impl TriMesh {
    /// Builds a mesh, checking coordinates are finite and faces are well formed.
    pub fn new(vertices: Vec<Point3>, faces: Vec<Face>) -> Result<Self> {
        if faces.is_empty() {
            return Err(MeshError::EmptyMesh);
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(MeshError::NonFinite(i));
        }
        let n = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(MeshError::InvalidFace {
                    face: fi,
                    reason: format!("{} vertices", f.len()),
                });
            }
            if let Some(&bad) = f.ids().iter().find(|&&v| v as usize >= n) {
                return Err(MeshError::InvalidFace {
                    face: fi,
                    reason: format!("vertex index {bad} out of range ({n} vertices)"),
                });
            }
            if f.edges().any(|(a, b)| a == b) {
                return Err(MeshError::InvalidFace {
                    face: fi,
                    reason: "repeated consecutive vertex".into(),
                });
            }
        }
        Ok(TriMesh {
            vertices,
            faces,
            unit_scale: 1.0,
        })
    }

    /// Builds from a flat triangle list without validation beyond debug asserts.
    pub(crate) fn from_parts_unchecked(vertices: Vec<Point3>, faces: Vec<Face>) -> Self {
        debug_assert!(faces
            .iter()
            .all(|f| f.ids().iter().all(|&v| (v as usize) < vertices.len())));
        TriMesh {
            vertices,
            faces,
            unit_scale: 1.0,
        }
    }

    pub fn from_triangles(vertices: Vec<Point3>, triangles: &[[u32; 3]]) -> Result<Self> {
        let faces = triangles
            .iter()
            .map(|t| Face::triangle(t[0], t[1], t[2]))
            .collect();
        TriMesh::new(vertices, faces)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Millimeters per model unit applied when the mesh was loaded.
    pub fn unit_scale(&self) -> f64 {
        self.unit_scale
    }

    pub fn face_points(&self, face_id: usize) -> impl Iterator<Item = Point3> + '_ {
        self.faces[face_id]
            .ids()
            .iter()
            .map(move |&v| self.vertices[v as usize])
    }

    /// Rescales model units to millimeters and records the factor.
    pub fn with_unit_scale(mut self, unit_scale: f64) -> Self {
        if unit_scale != 1.0 {
            for v in &mut self.vertices {
                *v = *v * unit_scale;
            }
        }
        self.unit_scale *= unit_scale;
        self
    }

    /// Applies `f` to every vertex. Faces and their IDs are unchanged.
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> TriMesh {
        TriMesh {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            faces: self.faces.clone(),
            unit_scale: self.unit_scale,
        }
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Point3, Point3) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for v in &self.vertices {
            lo = Point3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Point3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        (lo, hi)
    }

    /// Flat `[x0, y0, z0, x1, ...]` positions.
    pub fn positions_flat(&self) -> Vec<f64> {
        self.vertices.iter().flat_map(|v| v.to_array()).collect()
    }

    /// Fan-triangulated index list; for triangle meshes this is the face list itself.
    pub fn triangle_indices(&self) -> Vec<[u32; 3]> {
        let mut out = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let ids = f.ids();
            for k in 1..ids.len() - 1 {
                out.push([ids[0], ids[k], ids[k + 1]]);
            }
        }
        out
    }

    /// Merges two meshes into one vertex/face table; `other`'s indices are shifted.
    pub fn concat(&self, other: &TriMesh) -> TriMesh {
        let offset = self.vertices.len() as u32;
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut faces = self.faces.clone();
        faces.extend(
            other
                .faces
                .iter()
                .map(|f| Face::new(f.ids().iter().map(|&v| v + offset))),
        );
        TriMesh {
            vertices,
            faces,
            unit_scale: self.unit_scale,
        }
    }

    /// Same geometry with every face winding reversed.
    pub fn flipped(&self) -> TriMesh {
        TriMesh {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(Face::reversed).collect(),
            unit_scale: self.unit_scale,
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn unit_cube() -> TriMesh {
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(1.0, 0.0, 1.0),
            Point3::new(1.0, 1.0, 1.0),
            Point3::new(0.0, 1.0, 1.0),
        ];
        let t = [
            [0, 2, 1],
            [0, 3, 2],
            [4, 5, 6],
            [4, 6, 7],
            [0, 1, 5],
            [0, 5, 4],
            [1, 2, 6],
            [1, 6, 5],
            [2, 3, 7],
            [2, 7, 6],
            [3, 0, 4],
            [3, 4, 7],
        ];
        TriMesh::from_triangles(v, &t).unwrap()
    }

    pub fn single_triangle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> TriMesh {
        TriMesh::from_triangles(vec![a.into(), b.into(), c.into()], &[[0, 1, 2]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_faces() {
        let v = vec![Point3::ZERO, Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
        assert!(matches!(
            TriMesh::from_triangles(v.clone(), &[[0, 1, 3]]),
            Err(MeshError::InvalidFace { .. })
        ));
        assert!(matches!(
            TriMesh::from_triangles(v.clone(), &[[0, 0, 1]]),
            Err(MeshError::InvalidFace { .. })
        ));
        assert!(matches!(
            TriMesh::from_triangles(v, &[]),
            Err(MeshError::EmptyMesh)
        ));
        let nan = vec![Point3::new(f64::NAN, 0.0, 0.0), Point3::ZERO, Point3::ZERO];
        assert!(matches!(
            TriMesh::from_triangles(nan, &[[0, 1, 2]]),
            Err(MeshError::NonFinite(0))
        ));
    }

    #[test]
    fn unit_scale_rescales_coordinates() {
        let m = fixtures::single_triangle([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
            .with_unit_scale(10.0);
        assert_eq!(m.vertices()[1], Point3::new(10.0, 0.0, 0.0));
        assert_eq!(m.unit_scale(), 10.0);
    }

    #[test]
    fn face_edges_close_the_loop() {
        let f = Face::new([4, 5, 6, 7]);
        let e: Vec<_> = f.edges().collect();
        assert_eq!(e, vec![(4, 5), (5, 6), (6, 7), (7, 4)]);
    }
}

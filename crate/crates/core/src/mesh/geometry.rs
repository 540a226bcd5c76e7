use rayon::prelude::*;

use super::{edge_manifold_defects, Point3, TriMesh};
use crate::error::{MeshError, Result};

/// Newell normals with a norm at or below this are treated as having no plane.
pub(crate) const DEGENERATE_NORMAL_NORM: f64 = 1e-12;

/// Face centroids, one per face, in face order.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceCentroids(Vec<Point3>);

impl FaceCentroids {
    pub fn as_slice(&self) -> &[Point3] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Point3> {
        self.0
    }
}

impl From<Vec<Point3>> for FaceCentroids {
    fn from(v: Vec<Point3>) -> Self {
        FaceCentroids(v)
    }
}

/// Per-coordinate mean of the face's vertices.
pub fn face_centroid(mesh: &TriMesh, face_id: usize) -> Point3 {
    let face = &mesh.faces()[face_id];
    let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
    for &v in face.ids() {
        let p = mesh.vertices()[v as usize];
        x += p.x;
        y += p.y;
        z += p.z;
    }
    let m = face.len() as f64;
    Point3::new(x / m, y / m, z / m)
}

pub fn all_centroids(mesh: &TriMesh) -> FaceCentroids {
    FaceCentroids(
        (0..mesh.face_count())
            .into_par_iter()
            .map(|j| face_centroid(mesh, j))
            .collect(),
    )
}

/// Unnormalized Newell normal, computed relative to the first vertex.
fn newell(points: &[Point3]) -> Point3 {
    let o = points[0];
    let n = points.len();
    let mut acc = Point3::ZERO;
    for k in 0..n {
        let a = points[k] - o;
        let b = points[(k + 1) % n] - o;
        acc.x += (a.y - b.y) * (a.z + b.z);
        acc.y += (a.z - b.z) * (a.x + b.x);
        acc.z += (a.x - b.x) * (a.y + b.y);
    }
    acc
}

/// Unit normal following the face winding (right-hand rule).
pub fn face_normal(mesh: &TriMesh, face_id: usize) -> Result<Point3> {
    let pts: Vec<Point3> = mesh.face_points(face_id).collect();
    let n = newell(&pts);
    let len = n.norm();
    if !(len > DEGENERATE_NORMAL_NORM) {
        return Err(MeshError::DegenerateFace { face: face_id });
    }
    Ok(n / len)
}

fn project_points(points: &[Point3]) -> Option<Vec<[f64; 2]>> {
    let n = newell(points);
    let len = n.norm();
    if !(len > DEGENERATE_NORMAL_NORM) {
        return None;
    }
    let normal = n / len;
    let origin = points[0];
    // First edge, or the first non-zero one from the origin vertex.
    let u = points[1..]
        .iter()
        .map(|&p| p - origin)
        .find(|e| e.norm() > 0.0)?;
    let u = u / u.norm();
    let v = normal.cross(u);
    Some(
        points
            .iter()
            .map(|&p| {
                let d = p - origin;
                [d.dot(u), d.dot(v)]
            })
            .collect(),
    )
}

/// Face vertices expressed in an orthonormal in-plane basis `(u, v)`: `u`
/// along the first edge, `v = normal × u`. Winding is preserved.
pub fn project_to_plane(mesh: &TriMesh, face_id: usize) -> Result<Vec<[f64; 2]>> {
    let pts: Vec<Point3> = mesh.face_points(face_id).collect();
    project_points(&pts).ok_or(MeshError::DegenerateFace { face: face_id })
}

/// Shoelace area of a simple 2D polygon given in order.
pub fn shoelace_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        let [xi, yi] = poly[i];
        let [xj, yj] = poly[(i + 1) % n];
        twice += xi * yj - xj * yi;
    }
    0.5 * twice.abs()
}

/// Area of a planar face via projection into its own plane. Degenerate faces have area 0.
pub fn face_area(mesh: &TriMesh, face_id: usize) -> f64 {
    let pts: Vec<Point3> = mesh.face_points(face_id).collect();
    project_points(&pts).map_or(0.0, |p| shoelace_area(&p))
}

pub fn mesh_total_area(mesh: &TriMesh) -> f64 {
    (0..mesh.face_count()).map(|j| face_area(mesh, j)).sum()
}

/// Enclosed volume by signed tetrahedra against the origin.
///
/// Requires every edge to be shared by exactly two faces traversing it in
/// opposite directions.
pub fn mesh_volume(mesh: &TriMesh) -> Result<f64> {
    let bad_edges = edge_manifold_defects(mesh);
    if bad_edges > 0 {
        return Err(MeshError::NotWatertight { bad_edges });
    }
    // Shift to the bounding-box center to keep the triple products well conditioned.
    let (lo, hi) = mesh.bounding_box();
    let c = (lo + hi) * 0.5;
    let v = mesh.vertices();
    let mut six_vol = 0.0;
    for f in mesh.faces() {
        let ids = f.ids();
        let a = v[ids[0] as usize] - c;
        for k in 1..ids.len() - 1 {
            let b = v[ids[k] as usize] - c;
            let d = v[ids[k + 1] as usize] - c;
            six_vol += a.dot(b.cross(d));
        }
    }
    Ok((six_vol / 6.0).abs())
}

use std::collections::HashMap;

use crate::mesh::{Point3, TriMesh};

/// Unit icosphere: a regular icosahedron with each face split into four
/// `subdiv` times, new vertices pushed out to the sphere. Faces point outward.
pub fn icosphere(subdiv: u32) -> TriMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point3> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .iter()
    .map(|&a| {
        let p = Point3::from(a);
        p / p.norm()
    })
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdiv {
        let mut midpoints: HashMap<(u32, u32), u32> = HashMap::new();
        let mut mid = |a: u32, b: u32, vertices: &mut Vec<Point3>| -> u32 {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let m = (vertices[a as usize] + vertices[b as usize]) * 0.5;
                vertices.push(m / m.norm());
                (vertices.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    TriMesh::from_triangles(vertices, &faces).expect("icosphere is well formed")
}

/// Icosphere stretched to semi-axes `a`, `b`, `c` along x, y, z.
pub fn ellipsoid(a: f64, b: f64, c: f64, subdiv: u32) -> TriMesh {
    icosphere(subdiv).map_vertices(|p| Point3::new(p.x * a, p.y * b, p.z * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{edge_manifold_defects, mesh_volume};

    #[test]
    fn counts() {
        for s in 0..4 {
            let m = icosphere(s);
            assert_eq!(m.face_count(), 20 * 4usize.pow(s));
            // Euler: V - E + F = 2 with E = 3F/2
            assert_eq!(m.vertex_count(), m.face_count() / 2 + 2);
            assert_eq!(edge_manifold_defects(&m), 0);
        }
    }

    #[test]
    fn outward_and_on_sphere() {
        let m = icosphere(2);
        assert!(m.vertices().iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
        assert!(mesh_volume(&m).unwrap() > 0.0);
    }
}

use std::collections::HashMap;

use super::TriMesh;

/// Face-ID groups of a face subset, each group vertex-connected.
///
/// Components are ordered by their smallest face ID and each list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubMeshPartition {
    pub components: Vec<Vec<usize>>,
}

impl SubMeshPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// Groups `face_ids` by connectivity of the graph whose nodes are the
/// vertices of those faces and whose edges are the faces' boundary loops.
///
/// Two faces sharing only a vertex land in the same component. The mesh
/// should be welded first; STL soups have no shared vertices.
pub fn connected_components(mesh: &TriMesh, face_ids: &[usize]) -> SubMeshPartition {
    if face_ids.is_empty() {
        return SubMeshPartition::default();
    }
    let mut dsu = DisjointSet::new(mesh.vertex_count());
    for &j in face_ids {
        for (a, b) in mesh.faces()[j].edges() {
            dsu.union(a, b);
        }
    }
    let mut sorted = face_ids.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut slot: HashMap<u32, usize> = HashMap::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for j in sorted {
        let root = dsu.find(mesh.faces()[j][0]);
        let k = *slot.entry(root).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[k].push(j);
    }
    SubMeshPartition { components }
}

/// Number of undirected edges not shared by exactly two faces that traverse
/// them in opposite directions. Zero means closed and consistently oriented.
pub fn edge_manifold_defects(mesh: &TriMesh) -> usize {
    // (lo, hi) -> (uses lo->hi, uses hi->lo)
    let mut edges: HashMap<(u32, u32), (u32, u32)> = HashMap::with_capacity(mesh.face_count() * 2);
    for f in mesh.faces() {
        for (a, b) in f.edges() {
            let e = edges.entry((a.min(b), a.max(b))).or_default();
            if a < b {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    edges.values().filter(|&&(f, r)| !(f == 1 && r == 1)).count()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::unit_cube;
    use super::super::{Point3, TriMesh};
    use super::*;

    fn p(x: f64, y: f64) -> Point3 {
        Point3::new(x, y, 0.0)
    }

    #[test]
    fn shared_edge_is_one_component() {
        let m = TriMesh::from_triangles(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)],
            &[[0, 1, 2], [1, 3, 2]],
        )
        .unwrap();
        assert_eq!(connected_components(&m, &[0, 1]).len(), 1);
    }

    #[test]
    fn shared_vertex_is_one_component() {
        let m = TriMesh::from_triangles(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(2.0, 0.0), p(1.0, -1.0)],
            &[[0, 1, 2], [1, 3, 4]],
        )
        .unwrap();
        assert_eq!(connected_components(&m, &[0, 1]).len(), 1);
    }

    #[test]
    fn disjoint_triangles_are_two_components() {
        let m = TriMesh::from_triangles(
            vec![
                p(0.0, 0.0),
                p(1.0, 0.0),
                p(0.0, 1.0),
                p(5.0, 0.0),
                p(6.0, 0.0),
                p(5.0, 1.0),
            ],
            &[[0, 1, 2], [3, 4, 5]],
        )
        .unwrap();
        let parts = connected_components(&m, &[1, 0]);
        assert_eq!(parts.components, vec![vec![0], vec![1]]);
        assert!(connected_components(&m, &[]).is_empty());
    }

    #[test]
    fn subset_of_cube() {
        let cube = unit_cube();
        // bottom (0,1) and top (2,3) faces share no vertex
        let parts = connected_components(&cube, &[0, 1, 2, 3]);
        assert_eq!(parts.components, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(edge_manifold_defects(&cube), 0);
    }
}

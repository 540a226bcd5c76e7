//! Organ/tumor pairs with known contact area.
//!
//! The tumor is positioned so the organ's top face lies in the plane `z = 0`
//! and is cut along that plane, so the submerged part is a union of whole
//! faces. The organ is a box whose top carries a cavity built from exactly
//! those faces, reversed and deepened by a small gap that grows with depth
//! (zero at the rim). The rest of the top is a ring triangulation from the
//! rim out to the box edges.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::ellipsoid_area_below;
use super::shapes::icosphere;
use crate::error::SynthError;
use crate::mesh::{
    edge_manifold_defects, parse_stl, weld_vertices, write_stl_binary, Face, Point3,
    RigidTransform, TriMesh, DEFAULT_WELD_EPSILON_MM,
};

/// Default organ-to-tumor clearance at the deepest point of the cavity, mm.
pub const DEFAULT_GAP_MM: f64 = 0.02;

/// Organ box around the contact, centered on the tumor axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrganBox {
    pub half_x: f64,
    pub half_y: f64,
    /// Distance from the top face down to the bottom face.
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeSpec {
    /// Sphere of radius `r` submerged to depth `h`.
    Sphere { r: f64, h: f64 },
    /// Ellipsoid with semi-axes `a, b, c`, submerged below `z = z0` of its own frame.
    Ellipsoid { a: f64, b: f64, c: f64, z0: f64 },
}

impl ShapeSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeSpec::Sphere { .. } => "sphere",
            ShapeSpec::Ellipsoid { .. } => "ellipsoid",
        }
    }
}

/// Everything needed to regenerate a pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDescriptor {
    pub shape: ShapeSpec,
    pub subdiv: u32,
    pub organ_box: OrganBox,
    pub gap_mm: f64,
    /// Rigid motion applied to both meshes after construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<Placement>,
}

/// Serializable rigid motion (row-major rotation, translation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
}

impl From<RigidTransform> for Placement {
    fn from(t: RigidTransform) -> Self {
        Placement {
            rotation: t.rotation,
            translation: t.translation.to_array(),
        }
    }
}

impl From<Placement> for RigidTransform {
    fn from(p: Placement) -> Self {
        RigidTransform {
            rotation: p.rotation,
            translation: p.translation.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticPair {
    pub organ: TriMesh,
    pub tumor: TriMesh,
    /// Analytic (or quadrature) area of the submerged tumor surface, mm².
    pub ground_truth_csa: f64,
    pub descriptor: PairDescriptor,
    /// Tumor faces lying below the contact plane, ascending.
    pub contact_faces: Vec<usize>,
}

/// Sphere of radius `r` pressed `h` deep into a box.
///
/// `organ_box: None` sizes the box around the contact.
pub fn generate_sphere_pair(
    r: f64,
    h: f64,
    subdiv: u32,
    organ_box: Option<OrganBox>,
) -> Result<SyntheticPair, SynthError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SynthError::InvalidGeometry(format!("radius must be positive, got {r}")));
    }
    if !(h > 0.0 && h <= 2.0 * r) {
        return Err(SynthError::InvalidGeometry(format!(
            "depth must be in (0, 2r] = (0, {}], got {h}",
            2.0 * r
        )));
    }
    build(
        PairDescriptor {
            shape: ShapeSpec::Sphere { r, h },
            subdiv,
            organ_box: organ_box.unwrap_or(auto_box(r, r, h)),
            gap_mm: DEFAULT_GAP_MM,
            placement: None,
        },
    )
}

/// Ellipsoid with semi-axes `a, b, c` pressed into a box up to its own `z = z0`.
pub fn generate_ellipsoid_pair(
    a: f64,
    b: f64,
    c: f64,
    z0: f64,
    subdiv: u32,
    organ_box: Option<OrganBox>,
) -> Result<SyntheticPair, SynthError> {
    if !(a > 0.0 && b > 0.0 && c > 0.0 && a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(SynthError::InvalidGeometry(format!(
            "semi-axes must be positive, got {a}, {b}, {c}"
        )));
    }
    if !(z0 > -c && z0 < c) {
        return Err(SynthError::InvalidGeometry(format!(
            "cut plane must be in (-c, c) = ({}, {c}), got {z0}",
            -c
        )));
    }
    build(
        PairDescriptor {
            shape: ShapeSpec::Ellipsoid { a, b, c, z0 },
            subdiv,
            organ_box: organ_box.unwrap_or(auto_box(a, b, c + z0)),
            gap_mm: DEFAULT_GAP_MM,
            placement: None,
        },
    )
}

/// Ground-truth contact area for a shape.
pub fn ground_truth(shape: &ShapeSpec) -> f64 {
    match *shape {
        ShapeSpec::Sphere { r, h } => 2.0 * PI * r * h,
        ShapeSpec::Ellipsoid { a, b, c, z0 } => ellipsoid_area_below(a, b, c, z0).area,
    }
}

fn auto_box(half_x: f64, half_y: f64, depth: f64) -> OrganBox {
    let margin = 0.5 * half_x.max(half_y) + 2.0;
    OrganBox {
        half_x: half_x + margin,
        half_y: half_y + margin,
        depth: depth + margin,
    }
}

/// Builds the pair described by `desc`.
pub fn build(desc: PairDescriptor) -> Result<SyntheticPair, SynthError> {
    if !(desc.gap_mm >= 0.0) {
        return Err(SynthError::InvalidGeometry("gap must be non-negative".into()));
    }
    // Tumor in the contact frame: plane z = 0, submerged part below it.
    let (axes, center_z) = match desc.shape {
        ShapeSpec::Sphere { r, h } => ([r, r, r], r - h),
        ShapeSpec::Ellipsoid { a, b, c, z0 } => ([a, b, c], -z0),
    };
    let surface = Quadric {
        center: Point3::new(0.0, 0.0, center_z),
        axes,
    };
    // A generic tilt keeps icosphere symmetry planes off the cut, where two
    // vertices on one meridian would slide onto the same point.
    let tilt = RigidTransform::from_quaternion(0.9, 0.31, -0.17, 0.23, Point3::ZERO);
    let tumor = icosphere(desc.subdiv).map_vertices(|p| {
        let q = tilt.apply(p);
        Point3::new(q.x * axes[0], q.y * axes[1], q.z * axes[2] + center_z)
    });
    let (tumor, below) = cut_at_plane(&tumor, &surface)?;
    let contact: Vec<usize> = (0..below.len()).filter(|&i| below[i]).collect();
    if contact.is_empty() {
        return Err(SynthError::InvalidGeometry("tumor does not reach the organ".into()));
    }
    let organ = if contact.len() == tumor.face_count() {
        embedded_organ(&tumor, &desc)?
    } else {
        indented_organ(&tumor, &contact, &desc)?
    };

    let place = desc.placement.map(RigidTransform::from);
    let organ = quantize(&organ, place)?;
    let tumor = quantize(&tumor, place)?;
    for (name, m) in [("organ", &organ), ("tumor", &tumor)] {
        let defects = edge_manifold_defects(m);
        if defects != 0 {
            return Err(SynthError::InvalidGeometry(format!(
                "{name} mesh is not watertight ({defects} bad edges)"
            )));
        }
    }
    Ok(SyntheticPair {
        organ,
        tumor,
        ground_truth_csa: ground_truth(&desc.shape),
        descriptor: desc,
        contact_faces: contact,
    })
}

/// Rounds through binary STL so the in-memory pair equals what is written
/// to disk, and checks that loading with the default weld is a no-op.
fn quantize(mesh: &TriMesh, place: Option<RigidTransform>) -> Result<TriMesh, SynthError> {
    let moved;
    let mesh = match place {
        Some(t) => {
            moved = t.apply_mesh(mesh);
            &moved
        }
        None => mesh,
    };
    let mut bytes = Vec::new();
    write_stl_binary(mesh, &mut bytes).expect("writing to memory");
    let parsed = parse_stl(&bytes)?;
    let w = weld_vertices(&parsed, DEFAULT_WELD_EPSILON_MM);
    if w.dropped_faces != 0 || w.merged_vertices != 0 {
        return Err(SynthError::InvalidGeometry(format!(
            "mesh too fine for single precision: {} faces collapse",
            w.dropped_faces
        )));
    }
    Ok(parsed)
}

/// Ellipsoid surface `((x-cx)/a)² + ((y-cy)/b)² + ((z-cz)/c)² = 1`.
#[derive(Debug, Clone, Copy)]
struct Quadric {
    center: Point3,
    axes: [f64; 3],
}

impl Quadric {
    /// Slides a surface point along its meridian onto `z = 0`.
    fn to_plane(self, p: Point3) -> Option<Point3> {
        let [a, b, c] = self.axes;
        let (qx, qy) = ((p.x - self.center.x) / a, (p.y - self.center.y) / b);
        let u = -self.center.z / c;
        let rho = (qx * qx + qy * qy).sqrt();
        if rho < 1e-9 || u.abs() >= 1.0 {
            return None;
        }
        let k = (1.0 - u * u).sqrt() / rho;
        Some(Point3::new(
            self.center.x + a * qx * k,
            self.center.y + b * qy * k,
            0.0,
        ))
    }

    fn outward(&self, p: Point3) -> Point3 {
        let [a, b, c] = self.axes;
        let d = p - self.center;
        Point3::new(d.x / (a * a), d.y / (b * b), d.z / (c * c))
    }
}

/// Moves vertices onto `z = 0` so that no face crosses the plane, and flags
/// the faces on or below it. For every edge with endpoints on opposite
/// sides, the endpoint nearer the plane slides along the surface onto it;
/// after one pass no edge joins the two sides.
fn cut_at_plane(mesh: &TriMesh, surface: &Quadric) -> Result<(TriMesh, Vec<bool>), SynthError> {
    let scale = surface.axes.iter().fold(0.0f64, |m, &a| m.max(a));
    let mut vertices: Vec<Point3> = mesh
        .vertices()
        .iter()
        .map(|&p| if p.z.abs() < 1e-9 * scale { Point3::new(p.x, p.y, 0.0) } else { p })
        .collect();
    let mut snap = vec![false; vertices.len()];
    for f in mesh.faces() {
        for (a, b) in f.edges() {
            let (za, zb) = (vertices[a as usize].z, vertices[b as usize].z);
            if za * zb < 0.0 {
                snap[if za.abs() <= zb.abs() { a } else { b } as usize] = true;
            }
        }
    }
    for (v, moved) in vertices.iter_mut().zip(&snap) {
        if *moved {
            *v = surface.to_plane(*v).ok_or_else(|| {
                SynthError::InvalidGeometry("cut plane passes through a pole vertex".into())
            })?;
        }
    }
    let mut below = Vec::with_capacity(mesh.face_count());
    for (fi, f) in mesh.faces().iter().enumerate() {
        let pts: Vec<Point3> = f.ids().iter().map(|&v| vertices[v as usize]).collect();
        let n = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
        let mid = (pts[0] + pts[1] + pts[2]) / 3.0;
        if n.norm() < 1e-12 * (1.0 + mid.norm()).powi(2) || n.dot(surface.outward(mid)) <= 0.0 {
            return Err(SynthError::InvalidGeometry(format!(
                "face {fi} folds over when cut at the plane"
            )));
        }
        below.push(pts.iter().all(|p| p.z <= 0.0));
    }
    let tumor = TriMesh::new(vertices, mesh.faces().to_vec())?;
    Ok((tumor, below))
}

/// Deepens submerged vertices so the cavity clears the tumor by up to `gap`.
fn cavity_scale(tumor: &TriMesh, gap: f64) -> f64 {
    let deepest = tumor.vertices().iter().map(|p| -p.z).fold(0.0, f64::max);
    1.0 + gap / deepest
}

struct Builder {
    vertices: Vec<Point3>,
    faces: Vec<Face>,
}

impl Builder {
    fn vertex(&mut self, p: Point3) -> u32 {
        self.vertices.push(p);
        (self.vertices.len() - 1) as u32
    }

    /// Adds a triangle wound so its normal points along `outward`.
    fn oriented(&mut self, a: u32, b: u32, c: u32, outward: Point3) {
        let [pa, pb, pc] = [a, b, c].map(|v| self.vertices[v as usize]);
        if (pb - pa).cross(pc - pa).dot(outward) >= 0.0 {
            self.faces.push(Face::triangle(a, b, c));
        } else {
            self.faces.push(Face::triangle(a, c, b));
        }
    }

    /// A closed box `[-hx, hx] × [-hy, hy] × [bottom, top]`.
    fn closed_box(&mut self, hx: f64, hy: f64, bottom: f64, top: f64) {
        let v: Vec<u32> = (0..8)
            .map(|k| {
                let x = if k & 1 == 0 { -hx } else { hx };
                let y = if k & 2 == 0 { -hy } else { hy };
                let z = if k & 4 == 0 { bottom } else { top };
                self.vertex(Point3::new(x, y, z))
            })
            .collect();
        let quads: [([usize; 4], [f64; 3]); 6] = [
            ([0, 1, 3, 2], [0.0, 0.0, -1.0]),
            ([4, 5, 7, 6], [0.0, 0.0, 1.0]),
            ([0, 1, 5, 4], [0.0, -1.0, 0.0]),
            ([2, 3, 7, 6], [0.0, 1.0, 0.0]),
            ([0, 2, 6, 4], [-1.0, 0.0, 0.0]),
            ([1, 3, 7, 5], [1.0, 0.0, 0.0]),
        ];
        for (q, n) in quads {
            let n = Point3::from(n);
            self.oriented(v[q[0]], v[q[1]], v[q[2]], n);
            self.oriented(v[q[0]], v[q[2]], v[q[3]], n);
        }
    }

    fn finish(self) -> TriMesh {
        TriMesh::new(self.vertices, self.faces).expect("organ is well formed")
    }
}

fn check_box(tumor: &TriMesh, b: &OrganBox, contact_only: bool) -> Result<(), SynthError> {
    let mut max_x: f64 = 0.0;
    let mut max_y: f64 = 0.0;
    let mut deepest: f64 = 0.0;
    for p in tumor.vertices() {
        if contact_only && p.z > 0.0 {
            continue;
        }
        max_x = max_x.max(p.x.abs());
        max_y = max_y.max(p.y.abs());
        deepest = deepest.max(-p.z);
    }
    if !(b.half_x > max_x && b.half_y > max_y && b.depth > deepest * 1.01) {
        return Err(SynthError::InvalidGeometry(format!(
            "box {:.3} x {:.3} x {:.3} does not contain the contact (needs > {:.3} x {:.3} x {:.3})",
            2.0 * b.half_x,
            2.0 * b.half_y,
            b.depth,
            2.0 * max_x,
            2.0 * max_y,
            deepest * 1.01
        )));
    }
    Ok(())
}

/// Fully submerged tumor: the organ is a closed box with a sealed cavity.
fn embedded_organ(tumor: &TriMesh, desc: &PairDescriptor) -> Result<TriMesh, SynthError> {
    let b = desc.organ_box;
    check_box(tumor, &b, false)?;
    let scale = cavity_scale(tumor, desc.gap_mm);
    let mut out = Builder {
        vertices: Vec::new(),
        faces: Vec::new(),
    };
    // The tumor touches the top plane, so lift the lid slightly.
    let lid = 0.1 * b.depth;
    out.closed_box(b.half_x, b.half_y, -b.depth, lid);
    let base = out.vertices.len() as u32;
    out.vertices
        .extend(tumor.vertices().iter().map(|p| Point3::new(p.x, p.y, p.z * scale)));
    out.faces.extend(
        tumor
            .faces()
            .iter()
            .map(|f| Face::new(f.reversed().ids().iter().map(|&v| v + base))),
    );
    Ok(out.finish())
}

/// Organ box whose top face carries a cavity matching the submerged faces.
fn indented_organ(
    tumor: &TriMesh,
    contact: &[usize],
    desc: &PairDescriptor,
) -> Result<TriMesh, SynthError> {
    let b = desc.organ_box;
    check_box(tumor, &b, true)?;
    let scale = cavity_scale(tumor, desc.gap_mm);
    let rim = rim_loop(tumor, contact)?;

    let mut out = Builder {
        vertices: Vec::new(),
        faces: Vec::new(),
    };
    // Cavity: submerged faces reversed, sharing rim vertices with the top.
    let mut map: HashMap<u32, u32> = HashMap::new();
    for &fi in contact {
        let f = tumor.faces()[fi].reversed();
        let ids: Vec<u32> = f
            .ids()
            .iter()
            .map(|&v| {
                *map.entry(v).or_insert_with(|| {
                    let p = tumor.vertices()[v as usize];
                    out.vertices.push(Point3::new(p.x, p.y, p.z * scale));
                    (out.vertices.len() - 1) as u32
                })
            })
            .collect();
        out.faces.push(Face::new(ids));
    }
    let rim: Vec<u32> = rim.iter().map(|v| map[v]).collect();
    let n = rim.len();
    let rim_pts: Vec<Point3> = rim.iter().map(|&v| out.vertices[v as usize]).collect();
    let o = rim_pts.iter().fold(Point3::ZERO, |s, &p| s + p) / n as f64;

    let (hx, hy) = (b.half_x, b.half_y);
    let corners = [
        Point3::new(-hx, -hy, 0.0),
        Point3::new(hx, -hy, 0.0),
        Point3::new(hx, hy, 0.0),
        Point3::new(-hx, hy, 0.0),
    ];
    let perimeter = |p: Point3| -> f64 {
        let eps = 1e-12 * (hx + hy);
        if (p.y + hy).abs() <= eps && p.x < hx {
            (p.x + hx) / (2.0 * hx)
        } else if (p.x - hx).abs() <= eps && p.y < hy {
            1.0 + (p.y + hy) / (2.0 * hy)
        } else if (p.y - hy).abs() <= eps && p.x > -hx {
            2.0 + (hx - p.x) / (2.0 * hx)
        } else {
            3.0 + (hy - p.y) / (2.0 * hy)
        }
    };
    let corner_ids: Vec<u32> = corners.iter().map(|&c| out.vertex(c)).collect();

    // Rays from the rim center through each rim vertex to the box edge.
    let mut edge_ids = Vec::with_capacity(n);
    let mut edge_pos = Vec::with_capacity(n);
    let mut edge_pts = Vec::with_capacity(n);
    for &p in &rim_pts {
        let (dx, dy) = (p.x - o.x, p.y - o.y);
        let tx = if dx > 0.0 { (hx - o.x) / dx } else if dx < 0.0 { (-hx - o.x) / dx } else { f64::INFINITY };
        let ty = if dy > 0.0 { (hy - o.y) / dy } else if dy < 0.0 { (-hy - o.y) / dy } else { f64::INFINITY };
        let t = tx.min(ty);
        let mut q = Point3::new(o.x + dx * t, o.y + dy * t, 0.0);
        if tx <= ty {
            q.x = hx.copysign(dx);
        }
        if ty <= tx {
            q.y = hy.copysign(dy);
        }
        let (id, s) = match corners.iter().position(|c| c.distance(q) < 1e-9 * (hx + hy)) {
            Some(k) => (corner_ids[k], k as f64),
            None => (out.vertex(q), perimeter(q)),
        };
        edge_ids.push(id);
        edge_pos.push(s);
        edge_pts.push(out.vertices[id as usize]);
    }

    // Enough rings to leave the organ finer than the tumor, so the pipeline
    // measures the tumor.
    let target = tumor.face_count() as f64 * 1.2 - contact.len() as f64 - n as f64;
    let rings = ((target / (2 * n) as f64).ceil() as usize).max(2);
    let up = Point3::new(0.0, 0.0, 1.0);
    let mut prev = rim.clone();
    for k in 1..=rings {
        let ring: Vec<u32> = if k == rings {
            edge_ids.clone()
        } else {
            let t = k as f64 / rings as f64;
            (0..n)
                .map(|i| out.vertex(rim_pts[i] + (edge_pts[i] - rim_pts[i]) * t))
                .collect()
        };
        for i in 0..n {
            let j = (i + 1) % n;
            out.oriented(prev[i], prev[j], ring[j], up);
            if ring[i] != ring[j] {
                out.oriented(prev[i], ring[j], ring[i], up);
            }
        }
        prev = ring;
    }
    // Box corners between consecutive rays.
    let gap = |a: f64, b: f64| (b - a).rem_euclid(4.0);
    for i in 0..n {
        let j = (i + 1) % n;
        let span = gap(edge_pos[i], edge_pos[j]);
        let mut between: Vec<(f64, u32)> = (0..4)
            .map(|k| (gap(edge_pos[i], k as f64), corner_ids[k]))
            .filter(|&(d, id)| d > 0.0 && d < span && id != edge_ids[i] && id != edge_ids[j])
            .collect();
        between.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut chain: Vec<u32> = between.into_iter().map(|(_, id)| id).collect();
        chain.push(edge_ids[j]);
        for w in chain.windows(2) {
            out.oriented(edge_ids[i], w[0], w[1], up);
        }
    }

    // Walls: each side's top chain fanned from its bottom corner.
    let bottom: Vec<u32> = corners
        .iter()
        .map(|c| out.vertex(Point3::new(c.x, c.y, -b.depth)))
        .collect();
    let mut outline: Vec<(f64, u32)> = (0..4).map(|k| (k as f64, corner_ids[k])).collect();
    outline.extend(edge_pos.iter().copied().zip(edge_ids.iter().copied()));
    outline.sort_by(|a, b| a.0.total_cmp(&b.0));
    outline.dedup_by_key(|e| e.1);
    let normals = [
        Point3::new(0.0, -1.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(-1.0, 0.0, 0.0),
    ];
    for s in 0..4 {
        let mut chain: Vec<u32> = outline
            .iter()
            .filter(|e| e.0 >= s as f64 && e.0 < (s + 1) as f64)
            .map(|e| e.1)
            .collect();
        chain.push(corner_ids[(s + 1) % 4]);
        chain.push(bottom[(s + 1) % 4]);
        for w in chain.windows(2) {
            out.oriented(bottom[s], w[0], w[1], normals[s]);
        }
    }
    let down = Point3::new(0.0, 0.0, -1.0);
    out.oriented(bottom[0], bottom[1], bottom[2], down);
    out.oriented(bottom[0], bottom[2], bottom[3], down);
    Ok(out.finish())
}

/// Boundary loop of the submerged region, counter-clockwise seen from above.
fn rim_loop(tumor: &TriMesh, contact: &[usize]) -> Result<Vec<u32>, SynthError> {
    let mut directed: HashMap<u32, u32> = HashMap::new();
    let mut all = std::collections::HashSet::new();
    for &fi in contact {
        for e in tumor.faces()[fi].edges() {
            all.insert(e);
        }
    }
    for &(a, b) in &all {
        if !all.contains(&(b, a)) && directed.insert(a, b).is_some() {
            return Err(SynthError::InvalidGeometry("contact rim is not a simple loop".into()));
        }
    }
    let Some(&start) = directed.keys().min() else {
        return Err(SynthError::InvalidGeometry("contact region has no rim".into()));
    };
    let mut rim = vec![start];
    let mut cur = directed[&start];
    while cur != start {
        rim.push(cur);
        cur = *directed
            .get(&cur)
            .ok_or_else(|| SynthError::InvalidGeometry("contact rim is open".into()))?;
        if rim.len() > directed.len() {
            return Err(SynthError::InvalidGeometry("contact rim is not a simple loop".into()));
        }
    }
    if rim.len() != directed.len() {
        return Err(SynthError::InvalidGeometry("contact rim has several loops".into()));
    }
    let v = tumor.vertices();
    let signed: f64 = (0..rim.len())
        .map(|i| {
            let (p, q) = (v[rim[i] as usize], v[rim[(i + 1) % rim.len()] as usize]);
            p.x * q.y - q.x * p.y
        })
        .sum();
    if signed < 0.0 {
        rim.reverse();
    }
    Ok(rim)
}

//! ASCII PLY with per-face colors, used for highlighting contact faces.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::{Face, Point3, TriMesh};
use crate::error::{MeshError, Result};

pub const HIGHLIGHT_COLOR: [u8; 3] = [255, 0, 0];
pub const BASE_COLOR: [u8; 3] = [200, 200, 160];

pub fn write_ply_colored<W: Write>(
    mesh: &TriMesh,
    highlighted: &HashSet<usize>,
    mut w: W,
) -> io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", mesh.vertex_count())?;
    writeln!(w, "property float x")?;
    writeln!(w, "property float y")?;
    writeln!(w, "property float z")?;
    writeln!(w, "element face {}", mesh.face_count())?;
    writeln!(w, "property list uchar int vertex_indices")?;
    writeln!(w, "property uchar red")?;
    writeln!(w, "property uchar green")?;
    writeln!(w, "property uchar blue")?;
    writeln!(w, "end_header")?;
    for v in mesh.vertices() {
        writeln!(w, "{} {} {}", v.x, v.y, v.z)?;
    }
    for (j, f) in mesh.faces().iter().enumerate() {
        let [r, g, b] = if highlighted.contains(&j) {
            HIGHLIGHT_COLOR
        } else {
            BASE_COLOR
        };
        write!(w, "{}", f.len())?;
        for &v in f.ids() {
            write!(w, " {v}")?;
        }
        writeln!(w, " {r} {g} {b}")?;
    }
    Ok(())
}

/// Writes `mesh` to `path` with `highlighted` faces in red.
pub fn export_ply_colored(
    mesh: &TriMesh,
    highlighted: &HashSet<usize>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| MeshError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_ply_colored(mesh, highlighted, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| MeshError::io(path, e))
}

/// Parses ASCII PLY with `x y z` vertices and a `vertex_indices` face list.
/// Extra per-face properties (colors) are returned alongside the mesh.
pub fn parse_ply(text: &str) -> Result<(TriMesh, Vec<Vec<f64>>)> {
    let bad = |m: &str| MeshError::MalformedPly(m.to_string());
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(bad("missing 'ply' magic"));
    }
    let mut n_vertices = None;
    let mut n_faces = None;
    let mut vertex_props = 0usize;
    let mut face_extra = 0usize;
    let mut current = "";
    loop {
        let line = lines.next().ok_or_else(|| bad("missing end_header"))?.trim();
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["format", "ascii", _] => {}
            ["format", ..] => return Err(bad("only ASCII PLY is supported")),
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", "vertex", n] => {
                n_vertices = Some(n.parse::<usize>().map_err(|_| bad("bad vertex count"))?);
                current = "vertex";
            }
            ["element", "face", n] => {
                n_faces = Some(n.parse::<usize>().map_err(|_| bad("bad face count"))?);
                current = "face";
            }
            ["element", ..] => current = "other",
            ["property", "list", ..] => {}
            ["property", _, _] if current == "vertex" => vertex_props += 1,
            ["property", _, _] if current == "face" => face_extra += 1,
            ["property", ..] => {}
            ["end_header"] => break,
            _ => return Err(bad(&format!("unexpected header line '{line}'"))),
        }
    }
    let nv = n_vertices.ok_or_else(|| bad("no vertex element"))?;
    let nf = n_faces.ok_or_else(|| bad("no face element"))?;
    if vertex_props < 3 {
        return Err(bad("vertex element needs x y z"));
    }
    let mut body = lines.filter(|l| !l.trim().is_empty());
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let l = body.next().ok_or_else(|| bad("too few vertex lines"))?;
        let c: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad vertex coordinate"))?;
        if c.len() < 3 {
            return Err(bad("vertex line too short"));
        }
        vertices.push(Point3::new(c[0], c[1], c[2]));
    }
    let mut faces = Vec::with_capacity(nf);
    let mut extras = Vec::with_capacity(nf);
    for _ in 0..nf {
        let l = body.next().ok_or_else(|| bad("too few face lines"))?;
        let mut w = l.split_whitespace();
        let k: usize = w
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad face vertex count"))?;
        let ids: Vec<u32> = w
            .by_ref()
            .take(k)
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad face index"))?;
        if ids.len() != k {
            return Err(bad("face line too short"));
        }
        let extra: Vec<f64> = w
            .take(face_extra)
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad face property"))?;
        faces.push(Face::new(ids));
        extras.push(extra);
    }
    Ok((TriMesh::new(vertices, faces)?, extras))
}

//! STL reading and writing. Stored facet normals are ignored on input.

use std::collections::HashMap;
use std::io::{self, Write};
use std::path::Path;

use super::{face_normal, Face, Point3, TriMesh};
use crate::error::{MeshError, Result};

const HEADER_LEN: usize = 80;
const RECORD_LEN: usize = 50;

/// Reads and parses an STL file.
pub fn read_stl(path: impl AsRef<Path>) -> Result<TriMesh> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| MeshError::io(path, e))?;
    parse_stl(&bytes)
}

/// Writes binary STL to `path`.
pub fn write_stl_file(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| MeshError::io(path, e))?;
    let mut w = io::BufWriter::new(file);
    write_stl_binary(mesh, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| MeshError::io(path, e))
}

/// Parses binary or ASCII STL.
///
/// The stream is treated as ASCII only if it starts with `solid` and parses
/// as ASCII; binary files whose header happens to start with `solid` fall back
/// to the binary reader. Vertices are deduplicated by exact bit equality.
pub fn parse_stl(bytes: &[u8]) -> Result<TriMesh> {
    let starts_solid = bytes
        .iter()
        .skip_while(|b| b.is_ascii_whitespace())
        .take(5)
        .copied()
        .eq(*b"solid");
    if starts_solid {
        match parse_ascii(bytes) {
            Ok(tris) => return build(tris),
            Err(ascii_err) => {
                if binary_len_consistent(bytes) {
                    return build(parse_binary(bytes)?);
                }
                return Err(ascii_err);
            }
        }
    }
    build(parse_binary(bytes)?)
}

fn binary_len_consistent(bytes: &[u8]) -> bool {
    if bytes.len() < HEADER_LEN + 4 {
        return false;
    }
    let n = u32::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 4].try_into().unwrap()) as usize;
    bytes.len() == HEADER_LEN + 4 + n * RECORD_LEN
}

fn parse_binary(bytes: &[u8]) -> Result<Vec<[[f32; 3]; 3]>> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(MeshError::TruncatedFile {
            triangles: 0,
            expected: HEADER_LEN + 4,
            actual: bytes.len(),
        });
    }
    let n = u32::from_le_bytes(bytes[HEADER_LEN..HEADER_LEN + 4].try_into().unwrap());
    let expected = HEADER_LEN + 4 + n as usize * RECORD_LEN;
    if bytes.len() < expected {
        return Err(MeshError::TruncatedFile {
            triangles: n,
            expected,
            actual: bytes.len(),
        });
    }
    let mut tris = Vec::with_capacity(n as usize);
    for rec in bytes[HEADER_LEN + 4..expected].chunks_exact(RECORD_LEN) {
        let f = |k: usize| f32::from_le_bytes(rec[k * 4..k * 4 + 4].try_into().unwrap());
        // floats 0..3 are the stored normal
        tris.push([
            [f(3), f(4), f(5)],
            [f(6), f(7), f(8)],
            [f(9), f(10), f(11)],
        ]);
    }
    Ok(tris)
}

struct Tokens<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    current: Option<(usize, std::str::SplitWhitespace<'a>)>,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            lines: text.lines().enumerate(),
            current: None,
            last_line: 1,
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        loop {
            if let Some((line, words)) = &mut self.current {
                if let Some(w) = words.next() {
                    self.last_line = *line;
                    return Some((*line, w));
                }
            }
            let (i, l) = self.lines.next()?;
            self.current = Some((i + 1, l.split_whitespace()));
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> MeshError {
        MeshError::MalformedAscii {
            line,
            message: message.into(),
        }
    }

    fn expect(&mut self, word: &str) -> Result<()> {
        match self.next() {
            Some((_, w)) if w.eq_ignore_ascii_case(word) => Ok(()),
            Some((line, w)) => Err(self.err(line, format!("expected '{word}', found '{w}'"))),
            None => Err(self.err(self.last_line, format!("expected '{word}', found end of file"))),
        }
    }

    fn float(&mut self) -> Result<f32> {
        match self.next() {
            Some((line, w)) => w
                .parse::<f32>()
                .map_err(|_| self.err(line, format!("expected a number, found '{w}'"))),
            None => Err(self.err(self.last_line, "expected a number, found end of file")),
        }
    }
}

fn parse_ascii(bytes: &[u8]) -> Result<Vec<[[f32; 3]; 3]>> {
    let text = std::str::from_utf8(bytes).map_err(|e| MeshError::MalformedAscii {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        message: "not valid UTF-8".into(),
    })?;
    let mut tok = Tokens::new(text);
    let mut tris = Vec::new();
    let mut seen_solid = false;
    'solids: while let Some((line, w)) = tok.next() {
        if !w.eq_ignore_ascii_case("solid") {
            return Err(tok.err(line, format!("expected 'solid', found '{w}'")));
        }
        seen_solid = true;
        // The solid name is free text on the rest of the line.
        tok.current = None;
        loop {
            let Some((line, w)) = tok.next() else {
                return Err(tok.err(tok.last_line, "missing 'endsolid'"));
            };
            if w.eq_ignore_ascii_case("endsolid") {
                tok.current = None;
                continue 'solids;
            }
            if w.eq_ignore_ascii_case("facet") {
                tok.expect("normal")?;
                for _ in 0..3 {
                    tok.float()?;
                }
                tok.expect("outer")?;
                tok.expect("loop")?;
                let mut t = [[0f32; 3]; 3];
                for v in &mut t {
                    tok.expect("vertex")?;
                    for c in v.iter_mut() {
                        *c = tok.float()?;
                    }
                }
                tok.expect("endloop")?;
                tok.expect("endfacet")?;
                tris.push(t);
            } else {
                return Err(tok.err(line, format!("expected 'facet' or 'endsolid', found '{w}'")));
            }
        }
    }
    if !seen_solid {
        return Err(tok.err(1, "empty input"));
    }
    Ok(tris)
}

fn build(tris: Vec<[[f32; 3]; 3]>) -> Result<TriMesh> {
    if tris.is_empty() {
        return Err(MeshError::EmptyMesh);
    }
    let mut index: HashMap<[u32; 3], u32> = HashMap::with_capacity(tris.len());
    let mut vertices = Vec::with_capacity(tris.len() / 2 + 3);
    let mut faces = Vec::with_capacity(tris.len());
    for t in &tris {
        let mut ids = [0u32; 3];
        for (k, v) in t.iter().enumerate() {
            let key = [v[0].to_bits(), v[1].to_bits(), v[2].to_bits()];
            let p = Point3::new(v[0] as f64, v[1] as f64, v[2] as f64);
            let mut id = *index.entry(key).or_insert_with(|| {
                vertices.push(p);
                (vertices.len() - 1) as u32
            });
            // A triangle repeating a corner keeps its own copy so the face
            // stays well formed; welding later merges and drops it.
            if ids[..k].contains(&id) {
                vertices.push(p);
                id = (vertices.len() - 1) as u32;
            }
            ids[k] = id;
        }
        faces.push(Face::triangle(ids[0], ids[1], ids[2]));
    }
    TriMesh::new(vertices, faces)
}

fn facet_normal(mesh: &TriMesh, j: usize) -> [f32; 3] {
    face_normal(mesh, j).map_or([0.0; 3], |n| [n.x as f32, n.y as f32, n.z as f32])
}

/// Writes binary STL. Non-triangular faces are fan-triangulated.
pub fn write_stl_binary<W: Write>(mesh: &TriMesh, mut w: W) -> io::Result<()> {
    let mut header = [0u8; HEADER_LEN];
    let tag = b"binary STL";
    header[..tag.len()].copy_from_slice(tag);
    w.write_all(&header)?;
    let count: usize = mesh.faces().iter().map(|f| f.len() - 2).sum();
    w.write_all(&(count as u32).to_le_bytes())?;
    let v = mesh.vertices();
    for (j, f) in mesh.faces().iter().enumerate() {
        let n = facet_normal(mesh, j);
        let ids = f.ids();
        for k in 1..ids.len() - 1 {
            let mut rec = [0u8; RECORD_LEN];
            let mut put = |slot: usize, x: f32| {
                rec[slot * 4..slot * 4 + 4].copy_from_slice(&x.to_le_bytes());
            };
            for (c, x) in n.iter().enumerate() {
                put(c, *x);
            }
            for (corner, &vid) in [ids[0], ids[k], ids[k + 1]].iter().enumerate() {
                let p = v[vid as usize];
                put(3 + corner * 3, p.x as f32);
                put(4 + corner * 3, p.y as f32);
                put(5 + corner * 3, p.z as f32);
            }
            w.write_all(&rec)?;
        }
    }
    Ok(())
}

/// Writes ASCII STL with full `f32` round-trip precision.
pub fn write_stl_ascii<W: Write>(mesh: &TriMesh, name: &str, mut w: W) -> io::Result<()> {
    writeln!(w, "solid {name}")?;
    let v = mesh.vertices();
    for (j, f) in mesh.faces().iter().enumerate() {
        let n = facet_normal(mesh, j);
        let ids = f.ids();
        for k in 1..ids.len() - 1 {
            writeln!(w, "  facet normal {:e} {:e} {:e}", n[0], n[1], n[2])?;
            writeln!(w, "    outer loop")?;
            for &vid in &[ids[0], ids[k], ids[k + 1]] {
                let p = v[vid as usize];
                writeln!(
                    w,
                    "      vertex {:e} {:e} {:e}",
                    p.x as f32, p.y as f32, p.z as f32
                )?;
            }
            writeln!(w, "    endloop")?;
            writeln!(w, "  endfacet")?;
        }
    }
    writeln!(w, "endsolid {name}")
}

//! ASCII mesh format.
//!
//! ```text
//! <vertex-count> <triangle-count> <ambient-dim>
//! x_1 ... x_m          (vertex-count rows)
//! i j k                (triangle-count rows, 0-based indices)
//! boundary <count>     (optional)
//! v_1 v_2 ... v_count  (optional, may wrap lines)
//! ```
//!
//! Lines starting with `#` are comments. A provided boundary list must
//! agree with the boundary derived from edge incidence.

use std::fmt::Write as _;
use std::path::Path;

use super::ImmersedMesh;
use crate::error::{Error, Result};

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                items.push((lineno + 1, tok));
            }
        }
        Tokens { items, pos: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied().ok_or_else(|| {
            let line = self.items.last().map_or(1, |(l, _)| *l);
            Error::parse(line, format!("unexpected end of file, expected {what}"))
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn next_usize(&mut self, what: &str) -> Result<usize> {
        let (line, tok) = self.next(what)?;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
    }

    fn next_f64(&mut self, what: &str) -> Result<f64> {
        let (line, tok) = self.next(what)?;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
    }

    fn peek(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|(_, t)| *t)
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos.min(self.items.len().saturating_sub(1)))
            .map_or(1, |(l, _)| *l)
    }
}

/// Parse a mesh from its ASCII representation.
pub fn read_mesh_str(text: &str) -> Result<ImmersedMesh> {
    let mut tok = Tokens::new(text);
    let nv = tok.next_usize("vertex count")?;
    let nt = tok.next_usize("triangle count")?;
    let m = tok.next_usize("ambient dimension")?;
    let mut coords = Vec::with_capacity(nv * m);
    for v in 0..nv {
        for d in 0..m {
            coords.push(tok.next_f64(&format!("coordinate {d} of vertex {v}"))?);
        }
    }
    let mut triangles = Vec::with_capacity(nt);
    for t in 0..nt {
        let a = tok.next_usize(&format!("vertex index of triangle {t}"))?;
        let b = tok.next_usize(&format!("vertex index of triangle {t}"))?;
        let c = tok.next_usize(&format!("vertex index of triangle {t}"))?;
        triangles.push([a, b, c]);
    }
    let declared_boundary = if tok.peek() == Some("boundary") {
        tok.next("boundary keyword")?;
        let count = tok.next_usize("boundary vertex count")?;
        let mut list = Vec::with_capacity(count);
        for i in 0..count {
            list.push(tok.next_usize(&format!("boundary vertex {i}"))?);
        }
        Some(list)
    } else {
        None
    };
    if let Some(extra) = tok.peek() {
        return Err(Error::parse(
            tok.line(),
            format!("unexpected trailing token '{extra}'"),
        ));
    }
    let mesh = ImmersedMesh::new(m, coords, triangles)?;
    if let Some(mut declared) = declared_boundary {
        declared.sort_unstable();
        declared.dedup();
        let derived = mesh.boundary_vertices();
        if declared != derived {
            return Err(Error::domain(format!(
                "declared boundary list ({} vertices) disagrees with edge incidence ({} vertices)",
                declared.len(),
                derived.len()
            )));
        }
    }
    Ok(mesh)
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<ImmersedMesh> {
    let text = std::fs::read_to_string(path)?;
    read_mesh_str(&text)
}

/// Serialize a mesh to the ASCII format (includes the boundary list when
/// nonempty).
pub fn write_mesh_string(mesh: &ImmersedMesh) -> String {
    let mut out = String::new();
    let m = mesh.ambient_dim();
    let _ = writeln!(
        out,
        "{} {} {}",
        mesh.num_vertices(),
        mesh.num_triangles(),
        m
    );
    for v in 0..mesh.num_vertices() {
        let p = mesh.vertex(v);
        let row: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    for tri in mesh.triangles() {
        let _ = writeln!(out, "{} {} {}", tri[0], tri[1], tri[2]);
    }
    let boundary = mesh.boundary_vertices();
    if !boundary.is_empty() {
        let _ = writeln!(out, "boundary {}", boundary.len());
        let list: Vec<String> = boundary.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", list.join(" "));
    }
    out
}

pub fn write_mesh(mesh: &ImmersedMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh_string(mesh))?;
    Ok(())
}

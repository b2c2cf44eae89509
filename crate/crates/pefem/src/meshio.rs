//! The `pefem-mesh v1` text format.
//!
//! ```text
//! pefem-mesh v1
//! vertices N
//! x y            (N lines)
//! triangles M
//! i j k          (M lines)
//! boundary_edges B
//! i j triangle_index curve_id   (B lines)
//! ```
//!
//! Indices are 0-based, fields are whitespace-separated and `#` starts a
//! comment. Coordinates are written in shortest round-trip decimal form, so
//! `read_mesh(&write_mesh(m)) == m` exactly.

use pefem_core::geometry::CurveId;
use pefem_core::mesh::{BoundaryEdge, Mesh};
use std::fmt::Write as _;
use std::path::Path;

pub const HEADER: &str = "pefem-mesh v1";
const SECTIONS: [&str; 3] = ["vertices", "triangles", "boundary_edges"];

#[derive(Debug, thiserror::Error)]
pub enum MeshIoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("section `{section}`: {message}")]
    Section { section: &'static str, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "vertices {}", mesh.vertices().len()).unwrap();
    for v in mesh.vertices() {
        writeln!(out, "{} {}", v[0], v[1]).unwrap();
    }
    writeln!(out, "triangles {}", mesh.triangles().len()).unwrap();
    for t in mesh.triangles() {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    writeln!(out, "boundary_edges {}", mesh.boundary_edges().len()).unwrap();
    for e in mesh.boundary_edges() {
        writeln!(out, "{} {} {} {}", e.vertices[0], e.vertices[1], e.triangle, e.curve.0).unwrap();
    }
    out
}

/// Non-empty, comment-stripped lines with their 1-based numbers.
struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, Vec<&'a str>);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = body.split_whitespace().collect();
            if !fields.is_empty() {
                return Some((i + 1, fields));
            }
        }
        None
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T, MeshIoError> {
    field.parse().map_err(|_| MeshIoError::Parse { line, message: format!("invalid {what} `{field}`") })
}

fn section_header(lines: &mut Lines<'_>, name: &'static str) -> Result<usize, MeshIoError> {
    let (line, fields) = lines
        .next()
        .ok_or_else(|| MeshIoError::Section { section: name, message: "missing section header".into() })?;
    match fields.as_slice() {
        [tag, count] if *tag == name => parse_field(line, count, "count"),
        _ => Err(MeshIoError::Parse { line, message: format!("expected `{name} <count>`, found `{}`", fields.join(" ")) }),
    }
}

/// Reads `count` rows of exactly `width` fields. A short section is
/// reported against the section name.
fn rows<'a>(
    lines: &mut Lines<'a>,
    name: &'static str,
    count: usize,
    width: usize,
) -> Result<Vec<(usize, Vec<&'a str>)>, MeshIoError> {
    let mut out = Vec::with_capacity(count);
    for read in 0..count {
        let (line, fields) = lines.next().ok_or_else(|| MeshIoError::Section {
            section: name,
            message: format!("expected {count} rows, found {read}"),
        })?;
        if fields.len() != width || SECTIONS.contains(&fields[0]) {
            return Err(MeshIoError::Section {
                section: name,
                message: format!("expected {count} rows, found {read} before line {line} (`{}`)", fields.join(" ")),
            });
        }
        out.push((line, fields));
    }
    Ok(out)
}

fn index(line: usize, field: &str, bound: usize, what: &str) -> Result<usize, MeshIoError> {
    let i: usize = parse_field(line, field, what)?;
    if i >= bound {
        return Err(MeshIoError::Parse { line, message: format!("{what} {i} out of range (< {bound})") });
    }
    Ok(i)
}

pub fn read_mesh(text: &str) -> Result<Mesh, MeshIoError> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    match lines.next() {
        None => return Err(MeshIoError::Parse { line: 1, message: "empty mesh file".into() }),
        Some((line, fields)) if fields.join(" ") != HEADER => {
            return Err(MeshIoError::Parse { line, message: format!("expected header `{HEADER}`") })
        }
        Some(_) => {}
    }

    let nv = section_header(&mut lines, "vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for (line, f) in rows(&mut lines, "vertices", nv, 2)? {
        let x: f64 = parse_field(line, f[0], "coordinate")?;
        let y: f64 = parse_field(line, f[1], "coordinate")?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(MeshIoError::Parse { line, message: "non-finite coordinate".into() });
        }
        vertices.push([x, y]);
    }

    let nt = section_header(&mut lines, "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for (line, f) in rows(&mut lines, "triangles", nt, 3)? {
        triangles.push([
            index(line, f[0], nv, "vertex")?,
            index(line, f[1], nv, "vertex")?,
            index(line, f[2], nv, "vertex")?,
        ]);
    }

    let nb = section_header(&mut lines, "boundary_edges")?;
    let mut edges = Vec::with_capacity(nb);
    for (line, f) in rows(&mut lines, "boundary_edges", nb, 4)? {
        edges.push(BoundaryEdge {
            vertices: [index(line, f[0], nv, "vertex")?, index(line, f[1], nv, "vertex")?],
            triangle: index(line, f[2], nt, "triangle")?,
            curve: CurveId(parse_field(line, f[3], "curve id")?),
        });
    }

    if let Some((line, _)) = lines.next() {
        return Err(MeshIoError::Parse { line, message: "trailing data after boundary_edges".into() });
    }
    Ok(Mesh::new(vertices, triangles, edges))
}

pub fn load_mesh(path: &Path) -> Result<Mesh, MeshIoError> {
    read_mesh(&std::fs::read_to_string(path)?)
}

pub fn save_mesh(mesh: &Mesh, path: &Path) -> Result<(), MeshIoError> {
    std::fs::write(path, write_mesh(mesh))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "pefem-mesh v1\n# unit triangle\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\nboundary_edges 3\n0 1 0 0\n1 2 0 0\n2 0 0 0\n";

    #[test]
    fn reads_a_small_mesh() {
        let m = read_mesh(SMALL).unwrap();
        assert_eq!(m.vertices(), &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(m.triangles(), &[[0, 1, 2]]);
        assert_eq!(m.boundary_edges().len(), 3);
        assert_eq!(write_mesh(&m), SMALL.replace("# unit triangle\n", ""));
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(read_mesh(""), Err(MeshIoError::Parse { .. })));
        assert!(matches!(read_mesh("  # nothing\n\n"), Err(MeshIoError::Parse { .. })));
    }

    #[test]
    fn vertex_count_mismatch_names_the_section() {
        let bad = SMALL.replace("vertices 3", "vertices 4");
        let err = read_mesh(&bad).unwrap_err();
        assert!(matches!(err, MeshIoError::Section { section: "vertices", .. }), "{err}");
        assert!(err.to_string().contains("vertices"));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let bad = SMALL.replace("1 2 0 0", "1 x 0 0");
        match read_mesh(&bad).unwrap_err() {
            MeshIoError::Parse { line, .. } => assert_eq!(line, 11),
            other => panic!("{other}"),
        }
        let bad = SMALL.replace("0 1 2\n", "0 1 7\n");
        assert!(read_mesh(&bad).unwrap_err().to_string().contains("out of range"));
    }

    #[test]
    fn header_is_required() {
        let err = read_mesh(&SMALL.replace("v1", "v2")).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }
}

//! ASCII OFF and OBJ mesh input/output (positions and faces only).

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::mesh::TriangleMesh;
use crate::{Error, Real, Result, Vec3};

/// Write OFF.
pub fn write_off<S: Real, W: Write>(mesh: &TriangleMesh<S>, mut w: W) -> Result<()> {
    writeln!(w, "OFF")?;
    writeln!(w, "{} {} 0", mesh.n_vertices(), mesh.n_faces())?;
    for v in mesh.vertices() {
        writeln!(
            w,
            "{:.17e} {:.17e} {:.17e}",
            v.x.to_f64().unwrap(),
            v.y.to_f64().unwrap(),
            v.z.to_f64().unwrap()
        )?;
    }
    for f in mesh.faces() {
        writeln!(w, "3 {} {} {}", f[0], f[1], f[2])?;
    }
    Ok(())
}

/// Write OBJ (1-based indices).
pub fn write_obj<S: Real, W: Write>(mesh: &TriangleMesh<S>, mut w: W) -> Result<()> {
    for v in mesh.vertices() {
        writeln!(
            w,
            "v {:.17e} {:.17e} {:.17e}",
            v.x.to_f64().unwrap(),
            v.y.to_f64().unwrap(),
            v.z.to_f64().unwrap()
        )?;
    }
    for f in mesh.faces() {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

/// Read OFF.
pub fn read_off<S: Real, R: Read>(r: R) -> Result<TriangleMesh<S>> {
    let reader = BufReader::new(r);
    let mut tokens: Vec<String> = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("");
        tokens.extend(body.split_whitespace().map(str::to_string));
    }
    let mut it = tokens.into_iter();
    let magic = it.next().ok_or_else(|| Error::Parse("empty OFF file".into()))?;
    if magic != "OFF" {
        return Err(Error::Parse(format!("expected OFF header, got '{magic}'")));
    }
    let mut next_usize = |what: &str| -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse(format!("OFF truncated before {what}")))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("{what}: {e}")))
    };
    let nv = next_usize("vertex count")?;
    let nf = next_usize("face count")?;
    let _ne = next_usize("edge count")?;
    let mut next_scalar = |what: &str| -> Result<S> {
        let tok = it
            .next()
            .ok_or_else(|| Error::Parse(format!("OFF truncated in {what}")))?;
        let x: f64 = tok
            .parse()
            .map_err(|e| Error::Parse(format!("{what}: {e}")))?;
        Ok(crate::real(x))
    };
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let x = next_scalar(&format!("vertex {i}"))?;
        let y = next_scalar(&format!("vertex {i}"))?;
        let z = next_scalar(&format!("vertex {i}"))?;
        vertices.push(Vec3::new(x, y, z));
    }
    let mut faces = Vec::with_capacity(nf);
    for i in 0..nf {
        let mut next_idx = |what: &str| -> Result<usize> {
            it.next()
                .ok_or_else(|| Error::Parse(format!("OFF truncated in {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{what}: {e}")))
        };
        let arity = next_idx(&format!("face {i} arity"))?;
        if arity != 3 {
            return Err(Error::Parse(format!(
                "face {i} has {arity} vertices; only triangles are supported"
            )));
        }
        let a = next_idx(&format!("face {i}"))?;
        let b = next_idx(&format!("face {i}"))?;
        let c = next_idx(&format!("face {i}"))?;
        faces.push([a, b, c]);
    }
    TriangleMesh::build(vertices, faces)
}

/// Read OBJ (v/f records only; other records are ignored).
pub fn read_obj<S: Real, R: Read>(r: R) -> Result<TriangleMesh<S>> {
    let reader = BufReader::new(r);
    let mut vertices: Vec<Vec3<S>> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut parts = body.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut coord = |what: &str| -> Result<S> {
                    let tok = parts
                        .next()
                        .ok_or_else(|| Error::Parse(format!("line {lineno}: missing {what}")))?;
                    let x: f64 = tok
                        .parse()
                        .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
                    Ok(crate::real(x))
                };
                let x = coord("x")?;
                let y = coord("y")?;
                let z = coord("z")?;
                vertices.push(Vec3::new(x, y, z));
            }
            Some("f") => {
                let mut idx = |what: &str| -> Result<usize> {
                    let tok = parts
                        .next()
                        .ok_or_else(|| Error::Parse(format!("line {lineno}: missing {what}")))?;
                    let first = tok.split('/').next().unwrap_or(tok);
                    let v: i64 = first
                        .parse()
                        .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
                    if v < 1 {
                        return Err(Error::Parse(format!(
                            "line {lineno}: only positive face indices supported"
                        )));
                    }
                    Ok((v - 1) as usize)
                };
                let a = idx("i")?;
                let b = idx("j")?;
                let c = idx("k")?;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!(
                        "line {lineno}: only triangles are supported"
                    )));
                }
                faces.push([a, b, c]);
            }
            _ => {}
        }
    }
    TriangleMesh::build(vertices, faces)
}

/// Dispatch on extension: `.off` or `.obj`.
pub fn write_mesh_file<S: Real>(mesh: &TriangleMesh<S>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let writer = std::io::BufWriter::new(file);
    match extension(path) {
        Some("off") => write_off(mesh, writer),
        Some("obj") => write_obj(mesh, writer),
        _ => Err(Error::InvalidParameter(format!(
            "unsupported mesh extension in {}",
            path.display()
        ))),
    }
}

pub fn read_mesh_file<S: Real>(path: &Path) -> Result<TriangleMesh<S>> {
    let file = std::fs::File::open(path)?;
    match extension(path) {
        Some("off") => read_off(file),
        Some("obj") => read_obj(file),
        _ => Err(Error::InvalidParameter(format!(
            "unsupported mesh extension in {}",
            path.display()
        ))),
    }
}

fn extension(path: &Path) -> Option<&str> {
    path.extension().and_then(|e| e.to_str())
}

//! Triangle surface export and import (OBJ, OFF).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Point3;
use crate::mesh::topology::face_components;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Surface {
    pub points: Vec<Point3>,
    pub faces: Vec<[u32; 3]>,
    /// Face ranges per connected component, in `faces` order.
    pub components: Vec<std::ops::Range<usize>>,
}

impl Surface {
    /// Compacts the vertices referenced by `faces` and groups faces by component.
    pub fn extract(pos: &[Point3], faces: &[[u32; 3]]) -> Surface {
        let mut map = std::collections::BTreeMap::new();
        let mut points = Vec::new();
        let mut out = Vec::with_capacity(faces.len());
        let mut components = Vec::new();
        for comp in face_components(faces) {
            let start = out.len();
            for fi in comp {
                out.push(faces[fi].map(|v| {
                    *map.entry(v).or_insert_with(|| {
                        points.push(pos[v as usize]);
                        points.len() as u32 - 1
                    })
                }));
            }
            components.push(start..out.len());
        }
        Surface {
            points,
            faces: out,
            components,
        }
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            writeln!(s, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z).unwrap();
        }
        for (i, r) in self.components.iter().enumerate() {
            writeln!(s, "g component_{i}").unwrap();
            for f in &self.faces[r.clone()] {
                writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
            }
        }
        s
    }

    pub fn to_off(&self) -> String {
        let mut s = String::from("OFF\n");
        writeln!(s, "{} {} 0", self.points.len(), self.faces.len()).unwrap();
        for p in &self.points {
            writeln!(s, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.z).unwrap();
        }
        for f in &self.faces {
            writeln!(s, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
        }
        s
    }

    /// Writes OBJ or OFF depending on the extension.
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = match extension(path).as_deref() {
            Some("obj") => self.to_obj(),
            Some("off") => self.to_off(),
            _ => {
                return Err(Error::Config(format!(
                    "{}: surface output must end in .obj or .off",
                    path.display()
                )))
            }
        };
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Surface> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let (points, faces) = match extension(path).as_deref() {
            Some("obj") => parse_obj(&text, path)?,
            Some("off") => parse_off(&text, path)?,
            _ => {
                return Err(Error::Config(format!(
                    "{}: unknown surface format",
                    path.display()
                )))
            }
        };
        Ok(Surface::extract(&points, &faces))
    }
}

pub fn extension(path: &Path) -> Option<String> {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
}

fn perr(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn point(tok: &[&str], path: &Path, line: usize) -> Result<Point3> {
    let c: Vec<f64> = tok
        .iter()
        .take(3)
        .map(|x| x.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(path, line, "bad coordinate"))?;
    if c.len() < 3 {
        return Err(perr(path, line, "expected 3 coordinates"));
    }
    Point3::try_new(c[0], c[1], c[2]).map_err(|e| perr(path, line, e.to_string()))
}

fn check_face(f: [u32; 3], n: usize, path: &Path, line: usize) -> Result<[u32; 3]> {
    if f.iter().any(|&v| v as usize >= n) {
        return Err(perr(path, line, "face index out of range"));
    }
    Ok(f)
}

pub fn parse_obj(text: &str, path: &Path) -> Result<(Vec<Point3>, Vec<[u32; 3]>)> {
    let mut pts = Vec::new();
    let mut raw = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let tok: Vec<&str> = l.split_whitespace().collect();
        match tok.first() {
            Some(&"v") => pts.push(point(&tok[1..], path, i + 1)?),
            Some(&"f") => {
                let idx: Vec<i64> = tok[1..]
                    .iter()
                    .map(|t| t.split('/').next().unwrap_or("").parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| perr(path, i + 1, "bad face index"))?;
                if idx.len() != 3 {
                    return Err(perr(path, i + 1, "only triangles are supported"));
                }
                raw.push((i + 1, idx));
            }
            _ => {}
        }
    }
    let n = pts.len() as i64;
    let mut faces = Vec::with_capacity(raw.len());
    for (line, idx) in raw {
        let f = idx.iter().map(|&k| if k < 0 { n + k } else { k - 1 });
        let f: Vec<i64> = f.collect();
        if f.iter().any(|&k| k < 0) {
            return Err(perr(path, line, "face index out of range"));
        }
        faces.push(check_face(
            [f[0] as u32, f[1] as u32, f[2] as u32],
            pts.len(),
            path,
            line,
        )?);
    }
    Ok((pts, faces))
}

pub fn parse_off(text: &str, path: &Path) -> Result<(Vec<Point3>, Vec<[u32; 3]>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "OFF")) => {}
        _ => return Err(perr(path, 1, "missing OFF header")),
    }
    let (line, counts) = lines
        .next()
        .ok_or_else(|| perr(path, 2, "missing counts"))?;
    let c: Vec<usize> = counts
        .split_whitespace()
        .map(|x| x.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(path, line, "bad counts"))?;
    if c.len() < 2 {
        return Err(perr(path, line, "bad counts"));
    }
    let mut pts = Vec::with_capacity(c[0]);
    for _ in 0..c[0] {
        let (line, l) = lines
            .next()
            .ok_or_else(|| perr(path, line, "unexpected end of file"))?;
        let tok: Vec<&str> = l.split_whitespace().collect();
        pts.push(point(&tok, path, line)?);
    }
    let mut faces = Vec::with_capacity(c[1]);
    for _ in 0..c[1] {
        let (line, l) = lines
            .next()
            .ok_or_else(|| perr(path, line, "unexpected end of file"))?;
        let v: Vec<u32> = l
            .split_whitespace()
            .map(|x| x.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| perr(path, line, "bad face"))?;
        if v.len() != 4 || v[0] != 3 {
            return Err(perr(path, line, "only triangles are supported"));
        }
        faces.push(check_face([v[1], v[2], v[3]], pts.len(), path, line)?);
    }
    Ok((pts, faces))
}

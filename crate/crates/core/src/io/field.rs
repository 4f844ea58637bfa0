//! Per-vertex distance files: one `vertex value` pair per line, `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::TetMesh;

pub fn parse(text: &str, path: &Path) -> Result<BTreeMap<u32, f64>> {
    let mut out = BTreeMap::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: msg.to_string(),
        };
        let mut w = l.split_whitespace();
        let v: u32 = w
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| err("bad vertex id"))?;
        let d: f64 = w
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| err("bad distance"))?;
        if w.next().is_some() {
            return Err(err("trailing tokens"));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(err("distance must be positive and finite"));
        }
        if out.insert(v, d).is_some() {
            return Err(err("duplicate vertex"));
        }
    }
    Ok(out)
}

/// Reads a field and checks that every listed vertex is an input vertex of `m`.
pub fn read(path: &Path, m: &TetMesh) -> Result<BTreeMap<u32, f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let f = parse(&text, path)?;
    if let Some(v) = f.keys().find(|&&v| !m.input.has_vertex(v)) {
        return Err(Error::Config(format!(
            "{}: vertex {v} is not an input vertex",
            path.display()
        )));
    }
    Ok(f)
}

pub fn to_string(f: &BTreeMap<u32, f64>) -> String {
    let mut s = String::new();
    for (v, d) in f {
        writeln!(s, "{v} {d:.16e}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let p = Path::new("f.txt");
        let f = parse("# field\n3 0.5\n7 1e-1\n", p).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(parse(&to_string(&f), p).unwrap(), f);
        assert!(parse("3 -1", p).is_err());
        assert!(parse("3 1\n3 2", p).is_err());
        assert!(parse("x 1", p).is_err());
    }
}

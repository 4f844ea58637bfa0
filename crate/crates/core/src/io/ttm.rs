//! Tagged tet mesh text format.
//!
//! ```text
//! TTM 1
//! vertices N      then N lines `x y z`
//! tets M          then M lines `v0 v1 v2 v3`
//! input_vertices K, input_edges K, input_faces K   sorted vertex tuples
//! offset_faces K  outward faces of the depth >= 1 volume
//! inside_tets K   lines `t depth`
//! ```
//!
//! Coordinates are written with 17 significant digits so reading back is
//! exact. Dead slots are dropped and ids renumbered densely on write.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Point3;
use crate::mesh::{Edge, Face, TetMesh};

pub const HEADER: &str = "TTM 1";

pub fn to_string(m: &TetMesh) -> String {
    let mut vmap = vec![u32::MAX; m.vertex_capacity()];
    for (i, v) in m.vertex_ids().enumerate() {
        vmap[v as usize] = i as u32;
    }
    let g = |v: u32| vmap[v as usize];
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "vertices {}", m.num_vertices()).unwrap();
    for v in m.vertex_ids() {
        let p = m.position(v);
        writeln!(s, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.z).unwrap();
    }
    writeln!(s, "tets {}", m.num_tets()).unwrap();
    let mut inside = Vec::new();
    for (i, t) in m.tet_ids().enumerate() {
        let [a, b, c, d] = m.tet(t).map(g);
        writeln!(s, "{a} {b} {c} {d}").unwrap();
        if m.region(t) > 0 {
            inside.push((i, m.region(t)));
        }
    }
    let mut iv: Vec<u32> = m.input.vertices.iter().map(|&v| g(v)).collect();
    iv.sort_unstable();
    writeln!(s, "input_vertices {}", iv.len()).unwrap();
    for v in iv {
        writeln!(s, "{v}").unwrap();
    }
    let mut ie: Vec<[u32; 2]> = m
        .input
        .edges
        .iter()
        .map(|e| Edge::new(g(e.0[0]), g(e.0[1])).0)
        .collect();
    ie.sort_unstable();
    writeln!(s, "input_edges {}", ie.len()).unwrap();
    for [a, b] in ie {
        writeln!(s, "{a} {b}").unwrap();
    }
    let mut ifs: Vec<[u32; 3]> = m
        .input
        .faces
        .iter()
        .map(|f| Face::from_slice(f.0.map(g)).0)
        .collect();
    ifs.sort_unstable();
    writeln!(s, "input_faces {}", ifs.len()).unwrap();
    for [a, b, c] in ifs {
        writeln!(s, "{a} {b} {c}").unwrap();
    }
    let mut of: Vec<[u32; 3]> = m.offset_faces(1).into_iter().map(|f| f.map(g)).collect();
    of.sort_unstable_by_key(|f| Face::from_slice(*f));
    writeln!(s, "offset_faces {}", of.len()).unwrap();
    for [a, b, c] in of {
        writeln!(s, "{a} {b} {c}").unwrap();
    }
    writeln!(s, "inside_tets {}", inside.len()).unwrap();
    for (t, r) in inside {
        writeln!(s, "{t} {r}").unwrap();
    }
    s
}

pub fn write(m: &TetMesh, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(m)).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<TetMesh> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

struct Lines<'a> {
    it: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
    line: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Option<&'a str> {
        for (i, l) in self.it.by_ref() {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            self.line = i + 1;
            return Some(l);
        }
        None
    }

    fn section(&mut self, name: &str) -> Result<usize> {
        let l = self
            .next()
            .ok_or_else(|| self.err(format!("missing section '{name}'")))?;
        let mut w = l.split_whitespace();
        if w.next() != Some(name) {
            return Err(self.err(format!("expected section '{name}'")));
        }
        let n = w
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| self.err("bad count"))?;
        if w.next().is_some() {
            return Err(self.err("trailing tokens"));
        }
        Ok(n)
    }

    fn numbers<T: std::str::FromStr>(&mut self, k: usize) -> Result<Vec<T>> {
        let l = self
            .next()
            .ok_or_else(|| self.err("unexpected end of file"))?;
        let v: Vec<T> = l
            .split_whitespace()
            .map(|x| x.parse::<T>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| self.err(format!("bad number in '{l}'")))?;
        if v.len() != k {
            return Err(self.err(format!("expected {k} values")));
        }
        Ok(v)
    }
}

pub fn parse(text: &str, path: &Path) -> Result<TetMesh> {
    let mut r = Lines {
        it: text.lines().enumerate(),
        path,
        line: 0,
    };
    if r.next() != Some(HEADER) {
        return Err(r.err("missing 'TTM 1' header"));
    }
    let nv = r.section("vertices")?;
    let mut pts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let c: Vec<f64> = r.numbers(3)?;
        pts.push(Point3::try_new(c[0], c[1], c[2]).map_err(|_| r.err("non-finite coordinate"))?);
    }
    let nt = r.section("tets")?;
    let mut tets = Vec::with_capacity(nt);
    for _ in 0..nt {
        let t: Vec<u32> = r.numbers(4)?;
        if t.iter().any(|&v| v as usize >= nv) {
            return Err(r.err("vertex index out of range"));
        }
        tets.push([t[0], t[1], t[2], t[3]]);
    }
    let mut m = TetMesh::new(pts, tets).map_err(|e| r.err(e.to_string()))?;
    for _ in 0..r.section("input_vertices")? {
        let v: Vec<u32> = r.numbers(1)?;
        if v[0] as usize >= nv {
            return Err(r.err("vertex index out of range"));
        }
        m.input.insert_vertex(v[0]);
    }
    for _ in 0..r.section("input_edges")? {
        let e: Vec<u32> = r.numbers(2)?;
        if !m.has_edge(e[0], e[1]) {
            return Err(r.err("input edge is not a mesh edge"));
        }
        m.input.insert_edge(Edge::new(e[0], e[1]));
    }
    for _ in 0..r.section("input_faces")? {
        let f: Vec<u32> = r.numbers(3)?;
        let f = Face::new(f[0], f[1], f[2]);
        if !m.has_face(&f) {
            return Err(r.err("input face is not a mesh face"));
        }
        m.input.insert_face(f);
    }
    let mut offset = Vec::new();
    for _ in 0..r.section("offset_faces")? {
        let f: Vec<u32> = r.numbers(3)?;
        offset.push([f[0], f[1], f[2]]);
    }
    for _ in 0..r.section("inside_tets")? {
        let t: Vec<u32> = r.numbers(2)?;
        if t[0] as usize >= nt || t[1] == 0 || t[1] > u8::MAX as u32 {
            return Err(r.err("bad inside tet"));
        }
        m.set_region(t[0], t[1] as u8);
    }
    if r.next().is_some() {
        return Err(r.err("trailing content"));
    }
    let mut derived = m.offset_faces(1);
    derived.sort_unstable_by_key(|f| Face::from_slice(*f));
    offset.sort_unstable_by_key(|f| Face::from_slice(*f));
    if derived != offset {
        return Err(r.err("offset_faces do not match the inside tets"));
    }
    Ok(m)
}

use std::collections::BTreeMap;

use crate::mesh::{Edge, Face, TetMesh};

/// Interface faces of the layer-`layer` volume that avoid locked vertices.
pub fn active_faces(m: &TetMesh, layer: u8) -> Vec<[u32; 3]> {
    m.offset_faces(layer)
        .into_iter()
        .filter(|f| f.iter().all(|v| !m.locked().contains(v)))
        .collect()
}

/// Outward-oriented offset faces around `v`.
pub fn faces_around(m: &TetMesh, v: u32, layer: u8) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for &t in m.star(v) {
        if m.region(t) < layer {
            continue;
        }
        let tv = m.tet(t);
        for (i, &w) in tv.iter().enumerate() {
            if w == v {
                continue;
            }
            if m.neighbor(t, i).is_some_and(|u| m.region(u) < layer) {
                out.push(m.oriented_face(t, i));
            }
        }
    }
    out
}

pub fn is_surface_edge(m: &TetMesh, a: u32, b: u32, layer: u8) -> bool {
    if m.locked().contains(&a) || m.locked().contains(&b) || !m.has_edge(a, b) {
        return false;
    }
    let ts = m.edge_tets(a, b);
    ts.iter().any(|&t| m.region(t) >= layer) && ts.iter().any(|&t| m.region(t) < layer)
}

/// Face and edge incidence of a face list.
pub struct SurfaceView {
    pub faces: Vec<[u32; 3]>,
    pub edge_faces: BTreeMap<Edge, Vec<usize>>,
    pub vertex_faces: BTreeMap<u32, Vec<usize>>,
}

impl SurfaceView {
    pub fn new(faces: Vec<[u32; 3]>) -> Self {
        let mut edge_faces: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        let mut vertex_faces: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, f) in faces.iter().enumerate() {
            for e in Face::from_slice(*f).edges() {
                edge_faces.entry(e).or_default().push(i);
            }
            for &v in f {
                vertex_faces.entry(v).or_default().push(i);
            }
        }
        SurfaceView {
            faces,
            edge_faces,
            vertex_faces,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edge_faces.keys()
    }

    /// Edges sharing a vertex with `e`.
    pub fn adjacent_edges(&self, e: &Edge) -> Vec<Edge> {
        let mut out = Vec::new();
        for v in e.0 {
            for &fi in &self.vertex_faces[&v] {
                for g in Face::from_slice(self.faces[fi]).edges() {
                    if g != *e && g.contains(v) {
                        out.push(g);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

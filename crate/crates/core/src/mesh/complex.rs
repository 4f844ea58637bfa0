use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// An undirected edge with sorted endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub [u32; 2]);

impl Edge {
    #[inline]
    pub fn new(a: u32, b: u32) -> Edge {
        if a < b {
            Edge([a, b])
        } else {
            Edge([b, a])
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0[0] == v || self.0[1] == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: u32) -> u32 {
        if self.0[0] == v {
            self.0[1]
        } else {
            self.0[0]
        }
    }
}

/// An unoriented triangle with sorted vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Face(pub [u32; 3]);

impl Face {
    #[inline]
    pub fn new(a: u32, b: u32, c: u32) -> Face {
        let mut v = [a, b, c];
        v.sort_unstable();
        Face(v)
    }

    pub fn from_slice(v: [u32; 3]) -> Face {
        Face::new(v[0], v[1], v[2])
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge([a, b]), Edge([a, c]), Edge([b, c])]
    }

    /// The edge opposite `v`.
    pub fn opposite(&self, v: u32) -> Edge {
        let o: Vec<u32> = self.0.iter().copied().filter(|&x| x != v).collect();
        Edge::new(o[0], o[1])
    }
}

/// A set of vertices, edges and triangles of the mesh.
///
/// Insertion through `insert_face`/`insert_edge` keeps the set closed under
/// taking faces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Complex {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeSet<Edge>,
    pub faces: BTreeSet<Face>,
}

impl Complex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn clear(&mut self) {
        self.vertices.clear();
        self.edges.clear();
        self.faces.clear();
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&Edge::new(a, b))
    }

    pub fn has_face(&self, f: &Face) -> bool {
        self.faces.contains(f)
    }

    pub fn insert_vertex(&mut self, v: u32) {
        self.vertices.insert(v);
    }

    pub fn insert_edge(&mut self, e: Edge) {
        self.vertices.extend(e.0);
        self.edges.insert(e);
    }

    pub fn insert_face(&mut self, f: Face) {
        for e in f.edges() {
            self.insert_edge(e);
        }
        self.faces.insert(f);
    }

    /// Whether every edge and face has all its sub-simplices in the set.
    pub fn is_closed(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.0.iter().all(|v| self.vertices.contains(v)))
            && self
                .faces
                .iter()
                .all(|f| f.edges().iter().all(|e| self.edges.contains(e)))
    }

    /// Edges not covered by any face.
    pub fn dangling_edges(&self) -> Vec<Edge> {
        let mut covered = BTreeSet::new();
        for f in &self.faces {
            covered.extend(f.edges());
        }
        self.edges.difference(&covered).copied().collect()
    }

    /// Vertices not covered by any edge.
    pub fn isolated_vertices(&self) -> Vec<u32> {
        let covered: BTreeSet<u32> = self.edges.iter().flat_map(|e| e.0).collect();
        self.vertices.difference(&covered).copied().collect()
    }

    /// Tag update for splitting edge `ab` at new vertex `m`; `ring` holds the
    /// apexes of all mesh faces around `ab`.
    pub(crate) fn split_edge(&mut self, a: u32, b: u32, m: u32, ring: &[u32]) {
        if !self.edges.remove(&Edge::new(a, b)) {
            return;
        }
        self.insert_edge(Edge::new(a, m));
        self.insert_edge(Edge::new(m, b));
        for &c in ring {
            if self.faces.remove(&Face::new(a, b, c)) {
                self.insert_face(Face::new(a, m, c));
                self.insert_face(Face::new(m, b, c));
            }
        }
    }

    pub(crate) fn split_face(&mut self, f: Face, m: u32) {
        if !self.faces.remove(&f) {
            return;
        }
        let [a, b, c] = f.0;
        self.insert_face(Face::new(a, b, m));
        self.insert_face(Face::new(a, m, c));
        self.insert_face(Face::new(m, b, c));
    }

    /// Renumbers vertices; `map[v]` is the new id of `v`.
    pub(crate) fn remap(&self, map: &[u32]) -> Complex {
        let mut out = Complex::new();
        for &v in &self.vertices {
            out.vertices.insert(map[v as usize]);
        }
        for e in &self.edges {
            out.edges
                .insert(Edge::new(map[e.0[0] as usize], map[e.0[1] as usize]));
        }
        for f in &self.faces {
            out.faces.insert(Face::new(
                map[f.0[0] as usize],
                map[f.0[1] as usize],
                map[f.0[2] as usize],
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_insertion_is_closed() {
        let mut c = Complex::new();
        c.insert_face(Face::new(3, 1, 2));
        assert!(c.is_closed());
        assert_eq!(c.edges.len(), 3);
        assert_eq!(c.vertices.len(), 3);
    }

    #[test]
    fn split_edge_updates_faces() {
        let mut c = Complex::new();
        c.insert_face(Face::new(0, 1, 2));
        c.split_edge(0, 1, 9, &[2, 5]);
        assert!(c.is_closed());
        assert_eq!(c.faces.len(), 2);
        assert!(c.has_edge(9, 2));
        assert!(!c.has_edge(0, 1));
    }
}

//! Simplicial embedding of a tagged complex.
//!
//! A tet meets the complex in nothing, a vertex, an edge or a triangle of
//! both. Three split passes (tets bounded by four complex triangles, faces
//! bounded by three complex edges, edges joining two complex vertices) run to
//! a fixpoint. Decisions use tags only, never coordinates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{Complex, Edge, Face, TetMesh};

/// Which tagged complex of the mesh an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Input,
    Shell,
}

impl Target {
    pub fn of(self, m: &TetMesh) -> &Complex {
        match self {
            Target::Input => &m.input,
            Target::Shell => &m.shell,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitOp {
    Tet { tet: u32, vertex: u32 },
    Face { face: [u32; 3], vertex: u32 },
    Edge { edge: [u32; 2], vertex: u32 },
}

/// Split log plus the violation count before each round of passes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EmbeddingLog {
    pub ops: Vec<SplitOp>,
    pub violations_per_round: Vec<usize>,
}

/// Whether tet `t` meets `c` in at most one simplex shared by both.
pub fn tet_is_simplicial(m: &TetMesh, c: &Complex, t: u32) -> bool {
    let tv = m.tet(t);
    let on: Vec<u32> = tv.iter().copied().filter(|&v| c.has_vertex(v)).collect();
    match on.len() {
        0 | 1 => true,
        2 => c.has_edge(on[0], on[1]),
        3 => c.has_face(&Face::new(on[0], on[1], on[2])),
        _ => false,
    }
}

/// Tets violating the simplicial-embedding condition, ascending.
pub fn simplicial_violations(m: &TetMesh, target: Target) -> Vec<u32> {
    let c = target.of(m);
    let tets: Vec<u32> = m.tet_ids().collect();
    let bad = crate::par::map(&tets, |&t| !tet_is_simplicial(m, c, t));
    tets.into_iter()
        .zip(bad)
        .filter(|(_, b)| *b)
        .map(|(t, _)| t)
        .collect()
}

pub fn is_simplicial_embedding(m: &TetMesh) -> (bool, Vec<u32>) {
    let v = simplicial_violations(m, Target::Input);
    (v.is_empty(), v)
}

fn failure(e: Error, edge: Edge) -> Error {
    match e {
        Error::WouldInvert => Error::NumericalSplitFailure { edge },
        e => e,
    }
}

/// Splits until every tet meets the complex simplicially.
pub fn make_simplicial_embedding(m: &mut TetMesh, target: Target) -> Result<EmbeddingLog> {
    let mut log = EmbeddingLog::default();
    loop {
        let violations = simplicial_violations(m, target).len();
        log.violations_per_round.push(violations);
        if violations == 0 {
            return Ok(log);
        }
        let before = log.ops.len();

        // Tets whose four faces are all in the complex.
        let tets: Vec<u32> = m
            .tet_ids()
            .filter(|&t| (0..4).all(|i| target.of(m).has_face(&m.tet_face(t, i))))
            .collect();
        for t in tets {
            let tv = m.tet(t);
            let v = m
                .split_tet(t)
                .map_err(|e| failure(e, Edge::new(tv[0], tv[1])))?;
            log.ops.push(SplitOp::Tet { tet: t, vertex: v });
        }

        // Non-complex faces bounded by three complex edges.
        let faces: Vec<Face> = m
            .faces()
            .into_iter()
            .filter(|f| {
                let c = target.of(m);
                !c.has_face(f) && f.edges().iter().all(|e| c.edges.contains(e))
            })
            .collect();
        for f in faces {
            let v = m
                .split_face(f)
                .map_err(|e| failure(e, Edge::new(f.0[0], f.0[1])))?;
            log.ops.push(SplitOp::Face {
                face: f.0,
                vertex: v,
            });
        }

        // Non-complex edges joining two complex vertices.
        let edges: Vec<Edge> = {
            let c = target.of(m);
            let mut out = Vec::new();
            for &a in &c.vertices {
                for b in m.neighbors(a) {
                    if a < b && c.has_vertex(b) && !c.has_edge(a, b) {
                        out.push(Edge([a, b]));
                    }
                }
            }
            out
        };
        for e in edges {
            let [a, b] = e.0;
            let mid = m.position(a).midpoint(m.position(b));
            let v = m.split_edge(a, b, mid).map_err(|err| failure(err, e))?;
            log.ops.push(SplitOp::Edge {
                edge: e.0,
                vertex: v,
            });
        }

        if log.ops.len() == before {
            // Cannot happen for a complex: every violation exposes one of the
            // three split patterns.
            return Err(Error::NotSimplicialEmbedding { violations });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{synth_grid_embedding, Shape};

    #[test]
    fn single_vertex_is_simplicial() {
        let m = synth_grid_embedding(4, Shape::Point).unwrap();
        assert!(is_simplicial_embedding(&m).0);
    }

    #[test]
    fn tet_with_four_input_faces() {
        let mut m = synth_grid_embedding(4, Shape::Point).unwrap();
        let t = m.star(m.input.vertices.iter().next().copied().unwrap())[0];
        for i in 0..4 {
            let f = m.tet_face(t, i);
            m.input.insert_face(f);
        }
        let (ok, bad) = is_simplicial_embedding(&m);
        assert!(!ok);
        assert!(bad.contains(&t));
        let log = make_simplicial_embedding(&mut m, Target::Input).unwrap();
        assert!(matches!(log.ops[0], SplitOp::Tet { tet, .. } if tet == t));
        assert!(is_simplicial_embedding(&m).0);
    }

    #[test]
    fn face_plus_opposite_vertex() {
        let mut m = synth_grid_embedding(4, Shape::Point).unwrap();
        let v = m.input.vertices.iter().next().copied().unwrap();
        let t = m.star(v)[0];
        let i = m.tet(t).iter().position(|&x| x == v).unwrap();
        m.input.insert_face(m.tet_face(t, i));
        assert!(!tet_is_simplicial(&m, &m.input, t));
    }

    #[test]
    fn octahedron_becomes_simplicial() {
        let mut m = synth_grid_embedding(8, Shape::Octahedron).unwrap();
        let log = make_simplicial_embedding(&mut m, Target::Input).unwrap();
        assert!(is_simplicial_embedding(&m).0);
        let again = make_simplicial_embedding(&mut m, Target::Input).unwrap();
        assert!(again.ops.is_empty());
        assert!(log.violations_per_round.windows(2).all(|w| w[1] < w[0]));
    }
}

//! Combinatorial insertion of the topological offset.
//!
//! Every edge joining a complex vertex to a non-complex vertex is split at
//! its midpoint; afterwards the tets incident to complex vertices form a
//! regular neighborhood whose boundary, made of midpoint triangles only, is
//! the offset surface. This is the binary marching-tetrahedra cut, with the
//! cut cells tetrahedralized by the splits themselves.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::embedding::{simplicial_violations, Target};
use crate::error::{Error, Result};
use crate::mesh::{Edge, TetMesh};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Insertion {
    /// Split edges with the new vertex, in split order.
    pub splits: Vec<(Edge, u32)>,
    /// New offset vertex to the complex vertex it was cut from.
    pub provenance: BTreeMap<u32, u32>,
    pub layer: u8,
}

/// Inserts the offset of `target` as the boundary of the depth-`layer`
/// volume.
pub fn insert_offset(m: &mut TetMesh, target: Target, layer: u8) -> Result<Insertion> {
    assert!(layer >= 1);
    let c = target.of(m);
    if c.is_empty() {
        return Err(Error::EmptyComplex);
    }
    if c.vertices.iter().any(|&v| m.is_boundary_vertex(v)) {
        return Err(Error::NotInterior);
    }
    let violations = simplicial_violations(m, target).len();
    if violations > 0 {
        return Err(Error::NotSimplicialEmbedding { violations });
    }
    let mut mixed = Vec::new();
    for &a in &c.vertices {
        for b in m.neighbors(a) {
            if !c.has_vertex(b) {
                mixed.push((Edge::new(a, b), a));
            }
        }
    }
    mixed.sort_unstable();
    let cverts: Vec<u32> = c.vertices.iter().copied().collect();

    let mut out = Insertion {
        layer,
        ..Default::default()
    };
    for (e, a) in mixed {
        let [p, q] = e.0;
        let mid = m.position(p).midpoint(m.position(q));
        let v = m.split_edge(p, q, mid).map_err(|err| match err {
            Error::WouldInvert => Error::NumericalSplitFailure { edge: e },
            err => err,
        })?;
        out.splits.push((e, v));
        out.provenance.insert(v, a);
    }
    for a in cverts {
        for &t in m.star(a).to_vec().iter() {
            if m.region(t) < layer {
                m.set_region(t, layer);
            }
        }
    }
    Ok(out)
}

/// Topological offset of the input complex (layer 1).
pub fn insert_topological_offset(m: &mut TetMesh) -> Result<Insertion> {
    insert_offset(m, Target::Input, 1)
}

/// Reference topology of the offset of each canonical fixture:
/// component count and ascending Euler characteristics.
pub fn expected_topology(shape: crate::io::Shape) -> Option<(usize, Vec<i64>)> {
    use crate::io::Shape::*;
    Some(match shape {
        Point | Segment | Triangle | Disk | Book | Crossing | TinyEdge => (1, vec![2]),
        Loop => (1, vec![0]),
        Octahedron => (2, vec![2, 2]),
        Torus => (2, vec![0, 0]),
        Dumbbell => (3, vec![0, 2, 2]),
        Plates => (2, vec![2, 2]),
        Nested => (4, vec![2, 2, 2, 2]),
        SharedVertex => (3, vec![2, 2, 2]),
        Soup => (2, vec![2, 2]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::make_simplicial_embedding;
    use crate::io::{synth_grid_embedding, Shape};
    use crate::mesh::{surface_topology, validate, ValidateOptions};

    fn offset_topology(shape: Shape, n: usize) -> (usize, Vec<i64>) {
        let mut m = synth_grid_embedding(n, shape).unwrap();
        make_simplicial_embedding(&mut m, Target::Input).unwrap();
        insert_topological_offset(&mut m).unwrap();
        let r = validate(&m, ValidateOptions::default());
        assert!(r.is_ok(), "{shape}: {:?}", r.failures());
        surface_topology(&m.offset_faces(1))
    }

    #[test]
    fn point_offset_is_a_sphere() {
        assert_eq!(offset_topology(Shape::Point, 4), (1, vec![2]));
    }

    #[test]
    fn canonical_fixtures_match_reference() {
        for shape in [
            Shape::Segment,
            Shape::Triangle,
            Shape::Disk,
            Shape::Loop,
            Shape::Book,
            Shape::Crossing,
            Shape::Octahedron,
            Shape::Torus,
            Shape::Nested,
            Shape::Plates,
            Shape::SharedVertex,
            Shape::Soup,
        ] {
            let n = shape.min_resolution().max(8);
            assert_eq!(
                offset_topology(shape, n),
                expected_topology(shape).unwrap(),
                "{shape}"
            );
        }
    }

    #[test]
    fn one_on_vertex_tet_gives_one_triangle() {
        let mut m = synth_grid_embedding(4, Shape::Point).unwrap();
        let v = *m.input.vertices.iter().next().unwrap();
        let before = m.star(v).len();
        insert_topological_offset(&mut m).unwrap();
        // Each original tet around the vertex contributes one offset triangle.
        assert_eq!(m.offset_faces(1).len(), before);
    }

    #[test]
    fn boundary_input_is_rejected() {
        let mut m = crate::io::grid(4);
        m.input.insert_vertex(0);
        let err = insert_topological_offset(&mut m).unwrap_err();
        assert_eq!(err.to_string(), "input not strictly interior");
    }

    #[test]
    fn tiny_edge_fails_numerically() {
        let mut m = synth_grid_embedding(4, Shape::TinyEdge).unwrap();
        let err = insert_topological_offset(&mut m).unwrap_err();
        assert!(matches!(err, Error::NumericalSplitFailure { .. }), "{err}");
    }
}

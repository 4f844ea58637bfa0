use std::collections::BTreeMap;

use topoffset::apps::{count_non_manifold, manifold_extract, oriented_input, topological_offset};
use topoffset::embedding::{make_simplicial_embedding, Target};
use topoffset::expansion::{DistanceField, InputIndex};
use topoffset::geom::{winding_number_indexed, Point3};
use topoffset::insertion::{expected_topology, insert_topological_offset};
use topoffset::io::{synth_grid_embedding, Shape};
use topoffset::mesh::{surface_topology, validate, TetMesh, ValidateOptions};
use topoffset::optimize::{active_faces, Distance, OffsetParams, Side};

fn quick(delta: f64) -> OffsetParams {
    OffsetParams {
        delta: Distance::Absolute(delta),
        max_iterations: 3,
        ..OffsetParams::default()
    }
}

fn assert_valid(m: &TetMesh) {
    let r = validate(m, ValidateOptions::default());
    assert!(r.is_ok(), "{:?}", r.failures());
}

#[test]
fn combinatorial_offset_topology_of_every_fixture() {
    for shape in Shape::ALL {
        if shape == Shape::TinyEdge {
            continue;
        }
        let Some(want) = expected_topology(shape) else {
            continue;
        };
        let mut m = synth_grid_embedding(shape.min_resolution().max(8), shape).unwrap();
        make_simplicial_embedding(&mut m, Target::Input).unwrap();
        insert_topological_offset(&mut m).unwrap();
        let mut got = surface_topology(&m.offset_faces(1));
        got.1.sort_unstable();
        let mut want = want;
        want.1.sort_unstable();
        assert_eq!(got, want, "{shape}");
        assert_valid(&m);
    }
}

#[test]
fn optimized_offset_keeps_topology_and_distance() {
    let mut m = synth_grid_embedding(8, Shape::Loop).unwrap();
    let run = topological_offset(&mut m, &quick(0.8), None).unwrap();
    assert_eq!(run.topology, (1, vec![0]));
    assert_valid(&m);
    let ii = InputIndex::build(&m).unwrap();
    let faces = active_faces(&m, 1);
    let mean: f64 = faces
        .iter()
        .map(|f| ii.distance(Point3::centroid(&f.map(|v| m.position(v)))))
        .sum::<f64>()
        / faces.len() as f64;
    assert!((mean - 0.8).abs() < 0.15, "{mean}");
}

#[test]
fn variable_field_moves_the_surface() {
    let mut m = synth_grid_embedding(8, Shape::Segment).unwrap();
    let c = m.bbox().center();
    let values: BTreeMap<u32, f64> = m
        .input
        .vertices
        .iter()
        .map(|&v| (v, if m.position(v).x > c.x { 1.2 } else { 0.6 }))
        .collect();
    let field = DistanceField { delta: 1.2, values };
    topological_offset(&mut m, &quick(1.2), Some(&field)).unwrap();
    assert_valid(&m);
    let ii = InputIndex::build(&m).unwrap();
    let (mut hi, mut lo) = (Vec::new(), Vec::new());
    for f in active_faces(&m, 1) {
        for v in f {
            let p = m.position(v);
            let d = ii.distance(p);
            if p.x > c.x + 1.0 {
                hi.push(d);
            } else if p.x < c.x - 1.0 {
                lo.push(d);
            }
        }
    }
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    assert!(mean(&hi) > mean(&lo) + 0.15, "{} {}", mean(&hi), mean(&lo));
}

#[test]
fn side_selection_by_winding() {
    for (side, inside) in [(Side::Outside, 0.0), (Side::Inside, 1.0)] {
        let mut m = synth_grid_embedding(8, Shape::Octahedron).unwrap();
        let p = OffsetParams { side, ..quick(0.5) };
        let run = topological_offset(&mut m, &p, None).unwrap();
        assert_eq!(run.topology.0, 1);
        let input = oriented_input(&m).unwrap();
        for f in active_faces(&m, 1) {
            let c = Point3::centroid(&f.map(|v| m.position(v)));
            let w = winding_number_indexed(c, m.positions(), &input);
            assert!((w - inside).abs() < 1e-6, "{side:?} {w}");
        }
        assert_valid(&m);
    }
}

#[test]
fn manifold_extraction_removes_singularities() {
    for shape in [Shape::Book, Shape::SharedVertex, Shape::Soup] {
        let mut m = synth_grid_embedding(8, shape).unwrap();
        assert_ne!(count_non_manifold(&m.input), (0, 0));
        let r = manifold_extract(&mut m, 0.3).unwrap();
        assert_eq!(count_non_manifold(&m.input), (0, 0), "{shape}");
        assert!(r.faces_after > 0);
        assert_valid(&m);
    }
    let mut m = synth_grid_embedding(8, Shape::Octahedron).unwrap();
    let before = m.input.clone();
    manifold_extract(&mut m, 0.3).unwrap();
    assert_eq!(m.input, before);
}

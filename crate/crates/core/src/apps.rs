//! End-to-end pipelines: topological, finite and layered offsets, side
//! selection and manifold extraction.

use std::collections::{BTreeMap, BTreeSet};

use log::info;
use serde::Serialize;

use crate::embedding::{make_simplicial_embedding, Target};
use crate::error::{Error, Result};
use crate::expansion::{
    adapt_layer, expand, Adaptation, DistanceField, ExpandOptions, InputIndex, Mode,
};
use crate::geom::{winding_number_indexed, Aabb, Point3};
use crate::insertion::insert_offset;
use crate::mesh::topology::{face_components, link_shape, LinkShape};
use crate::mesh::{orient_closed, surface_topology, Complex, Edge, Face, TetMesh};
use crate::optimize::{active_faces, run_optimization, OffsetParams, Optimization, Resolved, Side};

/// Bounding-box diagonal of the input complex.
pub fn input_diagonal(m: &TetMesh) -> Result<f64> {
    if m.input.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let pts: Vec<Point3> = m.input.vertices.iter().map(|&v| m.position(v)).collect();
    Ok(Aabb::from_points(&pts).diagonal())
}

/// The input surface, consistently oriented with outward normals.
pub fn oriented_input(m: &TetMesh) -> Result<Vec<[u32; 3]>> {
    let faces: Vec<[u32; 3]> = m.input.faces.iter().map(|f| f.0).collect();
    if faces.is_empty()
        || !m.input.dangling_edges().is_empty()
        || !m.input.isolated_vertices().is_empty()
    {
        return Err(Error::InconsistentInput);
    }
    orient_closed(&faces, m.positions()).ok_or(Error::InconsistentInput)
}

#[derive(Clone, Debug, Serialize)]
pub struct SideSelection {
    pub side: Side,
    /// Per offset component: whether it lies inside the input.
    pub inside: Vec<bool>,
    pub kept: Vec<usize>,
}

/// Restricts the offset of `layer` to the components on `side` of the
/// input surface by winding number; the vertices of the other components
/// are locked and their faces leave the active surface.
pub fn select_side(m: &mut TetMesh, layer: u8, side: Side) -> Result<SideSelection> {
    let faces = m.offset_faces(layer);
    let comps = face_components(&faces);
    if side == Side::Both {
        return Ok(SideSelection {
            side,
            inside: Vec::new(),
            kept: (0..comps.len()).collect(),
        });
    }
    let input = oriented_input(m)?;
    let mut inside = Vec::with_capacity(comps.len());
    for comp in &comps {
        let verts: BTreeSet<u32> = comp.iter().flat_map(|&i| faces[i]).collect();
        let w: Vec<f64> = verts
            .iter()
            .map(|&v| winding_number_indexed(m.position(v), m.positions(), &input))
            .collect();
        if w.iter().all(|&x| x > 0.5) {
            inside.push(true);
        } else if w.iter().all(|&x| x < 0.5) {
            inside.push(false);
        } else {
            return Err(Error::InconsistentInput);
        }
    }
    let want_inside = side == Side::Inside;
    let mut kept = Vec::new();
    for (k, comp) in comps.iter().enumerate() {
        if inside[k] == want_inside {
            kept.push(k);
        } else {
            for &i in comp {
                for v in faces[i] {
                    m.lock(v);
                }
            }
        }
    }
    Ok(SideSelection { side, inside, kept })
}

#[derive(Clone, Debug, Serialize)]
pub struct OffsetRun {
    pub params: Resolved,
    pub adaptation: Option<Adaptation>,
    pub side: Option<SideSelection>,
    pub optimization: Optimization,
    pub topology: (usize, Vec<i64>),
}

/// Simplicial embedding, insertion, distance adaptation, side selection and
/// optimization of the topological offset. `field` overrides the uniform
/// target distance with per-input-vertex values.
pub fn topological_offset(
    m: &mut TetMesh,
    params: &OffsetParams,
    field: Option<&DistanceField>,
) -> Result<OffsetRun> {
    let diag = input_diagonal(m)?;
    make_simplicial_embedding(m, Target::Input)?;
    insert_offset(m, Target::Input, 1)?;
    let p = params.resolve(diag)?;
    let ii = InputIndex::build(m)?;
    let target = field
        .cloned()
        .unwrap_or_else(|| DistanceField::uniform(p.delta));
    let adaptation = adapt_layer(m, &ii, &target, 1)?;
    let side = select_side(m, 1, params.side)?;
    let optimization = run_optimization(m, 1, &ii, &adaptation.propagation.field, &p);
    info!("topological offset stopped: {:?}", optimization.stop);
    let topology = surface_topology(&active_faces(m, 1));
    Ok(OffsetRun {
        params: p,
        adaptation: Some(adaptation),
        side: Some(side),
        optimization,
        topology,
    })
}

/// Offset at the prescribed distance, whose topology may differ from the
/// input's: the volume grows without the topology guard, its boundary is
/// re-wrapped by a topological offset, and the result is optimized toward
/// the distance from the original input.
pub fn finite_offset(m: &mut TetMesh, params: &OffsetParams) -> Result<OffsetRun> {
    let p = params.resolve(input_diagonal(m)?)?;
    make_simplicial_embedding(m, Target::Input)?;
    insert_offset(m, Target::Input, 1)?;
    let ii = InputIndex::build(m)?;
    let field = DistanceField::uniform(p.delta);
    expand(
        m,
        &ii,
        &field,
        ExpandOptions {
            layer: 1,
            mode: Mode::Conservative,
            topology_guard: false,
        },
    );
    m.shell.clear();
    for f in m.offset_faces(1) {
        m.shell.insert_face(Face::from_slice(f));
    }
    make_simplicial_embedding(m, Target::Shell)?;
    insert_offset(m, Target::Shell, 1)?;
    m.shell.clear();
    let side = select_side(m, 1, params.side)?;
    let optimization = run_optimization(m, 1, &ii, &field, &p);
    let topology = surface_topology(&active_faces(m, 1));
    Ok(OffsetRun {
        params: p,
        adaptation: None,
        side: Some(side),
        optimization,
        topology,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerRun {
    pub layer: u8,
    pub delta: f64,
    pub optimization: Optimization,
    pub topology: (usize, Vec<i64>),
}

/// Nested offsets at decreasing distances. Layer `i + 1` grows inside the
/// volume of layer `i` and never touches an earlier surface, whose vertices
/// stay locked.
pub fn layered_offsets(
    m: &mut TetMesh,
    params: &OffsetParams,
    distances: &[f64],
) -> Result<Vec<LayerRun>> {
    if distances.is_empty() || distances.len() > u8::MAX as usize {
        return Err(Error::InvalidParameter(
            "need between 1 and 255 layers".into(),
        ));
    }
    if distances.windows(2).any(|w| !(w[0] > w[1])) || !(distances[distances.len() - 1] > 0.0) {
        return Err(Error::InvalidParameter(
            "layer distances must be positive and strictly decreasing".into(),
        ));
    }
    let diag = input_diagonal(m)?;
    make_simplicial_embedding(m, Target::Input)?;
    let ii = InputIndex::build(m)?;
    let mut out = Vec::new();
    for (k, &d) in distances.iter().enumerate() {
        let layer = (k + 1) as u8;
        let lp = OffsetParams {
            delta: crate::optimize::Distance::Absolute(d),
            ..params.clone()
        };
        let p = lp.resolve(diag)?;
        insert_offset(m, Target::Input, layer)?;
        let a = adapt_layer(m, &ii, &DistanceField::uniform(d), layer)?;
        let optimization = run_optimization(m, layer, &ii, &a.propagation.field, &p);
        let faces = m.offset_faces(layer);
        for f in &faces {
            for &v in f {
                m.lock(v);
            }
        }
        out.push(LayerRun {
            layer,
            delta: d,
            optimization,
            topology: surface_topology(&faces),
        });
    }
    m.unlock_all();
    Ok(out)
}

/// Non-manifold simplices of the input: edges with more than two faces,
/// dangling edges, isolated vertices and vertices whose link is neither a
/// single cycle nor a single arc.
pub fn non_manifold(c: &Complex) -> Complex {
    let mut out = Complex::new();
    let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
    for f in &c.faces {
        for e in f.edges() {
            *count.entry(e).or_default() += 1;
        }
    }
    for (e, n) in &count {
        if *n > 2 {
            out.insert_edge(*e);
        }
    }
    for e in c.dangling_edges() {
        out.insert_edge(e);
    }
    for v in c.isolated_vertices() {
        out.insert_vertex(v);
    }
    let mut link: BTreeMap<u32, Vec<Edge>> = BTreeMap::new();
    for f in &c.faces {
        for &v in &f.0 {
            link.entry(v).or_default().push(f.opposite(v));
        }
    }
    for (v, l) in link {
        if !matches!(link_shape(&l), LinkShape::Cycle | LinkShape::Arc) {
            out.insert_vertex(v);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifoldReport {
    pub non_manifold_vertices: usize,
    pub non_manifold_edges: usize,
    /// Whether tube pieces inside the input were kept to close the surface.
    pub closed: bool,
    pub faces_before: usize,
    pub faces_after: usize,
    pub collapses: usize,
    pub topology: (usize, Vec<i64>),
}

/// Replaces the neighborhood of every non-manifold simplex of the input by
/// a piece of its topological offset.
///
/// Input faces inside the offset region are dropped. If the input is a
/// closed oriented surface, the offset pieces inside it are added back so
/// the result bounds the input solid minus the offset region; otherwise the
/// trimmed surface, now with boundary, is the result. Free offset vertices
/// of the same non-manifold vertex are merged by collapses and then pushed
/// toward distance `push` from the non-manifold set. Offset depths are
/// cleared afterwards.
pub fn manifold_extract(m: &mut TetMesh, push: f64) -> Result<ManifoldReport> {
    let faces_before = m.input.faces.len();
    make_simplicial_embedding(m, Target::Input)?;
    let n = non_manifold(&m.input);
    let mut report = ManifoldReport {
        non_manifold_vertices: n.vertices.len(),
        non_manifold_edges: n.edges.len(),
        closed: false,
        faces_before,
        faces_after: faces_before,
        collapses: 0,
        topology: surface_topology(&m.input.faces.iter().map(|f| f.0).collect::<Vec<_>>()),
    };
    if n.is_empty() {
        return Ok(report);
    }
    // Orientation of the original surface, if it is closed.
    let oriented = orient_closed(
        &m.input.faces.iter().map(|f| f.0).collect::<Vec<_>>(),
        m.positions(),
    )
    .filter(|_| m.input.dangling_edges().is_empty() && m.input.isolated_vertices().is_empty());
    let original_pos: Vec<Point3> = m.positions().to_vec();

    m.shell = n.clone();
    make_simplicial_embedding(m, Target::Shell)?;
    let n = m.shell.clone();
    let ins = insert_offset(m, Target::Shell, 1)?;

    // Merge offset vertices cut from the same non-manifold vertex.
    let mut collapses = 0;
    loop {
        let mut cand: Vec<Edge> = m
            .offset_faces(1)
            .iter()
            .flat_map(|f| Face::from_slice(*f).edges())
            .filter(|e| {
                let [a, b] = e.0;
                let same = matches!(
                    (ins.provenance.get(&a), ins.provenance.get(&b)),
                    (Some(x), Some(y)) if x == y
                );
                same && !m.input.has_vertex(a) && !m.input.has_vertex(b)
            })
            .collect();
        cand.sort_unstable();
        cand.dedup();
        let before = collapses;
        for e in cand {
            let [a, b] = e.0;
            if !(m.is_vertex_alive(a) && m.is_vertex_alive(b) && m.has_edge(a, b)) {
                continue;
            }
            if m.collapse_halfedge(a, b).is_ok() || m.collapse_halfedge(b, a).is_ok() {
                collapses += 1;
            }
        }
        if collapses == before {
            break;
        }
    }
    report.collapses = collapses;

    // Push the free offset vertices away from the non-manifold set.
    let nidx = InputIndex::from_complex(m, &n)?;
    let mut tube: BTreeSet<u32> = BTreeSet::new();
    for f in m.offset_faces(1) {
        tube.extend(f);
    }
    for &v in &tube {
        if m.input.has_vertex(v) || m.locked().contains(&v) || m.is_boundary_vertex(v) {
            continue;
        }
        let p = m.position(v);
        let c = nidx.closest(p);
        if let Some(dir) = (p - c.point).normalized() {
            let _ = m.smooth_vertex(v, c.point + dir * push);
        }
    }

    let tube_faces = m.offset_faces(1);
    let mut out = Complex::new();
    for f in &m.input.faces {
        if !f.0.iter().any(|v| n.has_vertex(*v)) {
            out.insert_face(*f);
        }
    }
    if let Some(oriented) = &oriented {
        report.closed = true;
        for f in &tube_faces {
            let c = Point3::centroid(&f.map(|v| m.position(v)));
            if winding_number_indexed(c, &original_pos, oriented) > 0.5 {
                out.insert_face(Face::from_slice(*f));
            }
        }
    }
    m.input = out;
    m.shell.clear();
    for t in m.tet_ids().collect::<Vec<_>>() {
        m.set_region(t, 0);
    }
    report.faces_after = m.input.faces.len();
    report.topology = surface_topology(&m.input.faces.iter().map(|f| f.0).collect::<Vec<_>>());
    Ok(report)
}

/// Non-manifold edges and vertices remaining in the input surface.
pub fn count_non_manifold(c: &Complex) -> (usize, usize) {
    let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
    for f in &c.faces {
        for e in f.edges() {
            *count.entry(e).or_default() += 1;
        }
    }
    let edges = count.values().filter(|&&n| n > 2).count();
    let mut link: BTreeMap<u32, Vec<Edge>> = BTreeMap::new();
    for f in &c.faces {
        for &v in &f.0 {
            link.entry(v).or_default().push(f.opposite(v));
        }
    }
    let verts = link
        .values()
        .filter(|l| !matches!(link_shape(l), LinkShape::Cycle | LinkShape::Arc))
        .count();
    (edges, verts)
}

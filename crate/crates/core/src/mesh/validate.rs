//! Mesh and tag validators.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::tetmesh::face_of;
use super::topology::{
    check_closed_manifold, euler_characteristic, face_components, link_shape, LinkShape,
};
use super::{Edge, Face, TetMesh};
use crate::geom::{mesh_triangles_intersect, segment_triangle, Aabb, Point3, Sign};
use crate::par;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: impl Into<String>, violations: usize, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            passed: violations == 0,
            detail,
        });
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ValidateOptions {
    /// Brute-force triangle intersection oracle on offset and input faces.
    pub intersections: bool,
    /// Per-vertex link checks of the tet mesh.
    pub vertex_links: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            intersections: true,
            vertex_links: true,
        }
    }
}

pub fn validate(m: &TetMesh, opts: ValidateOptions) -> ValidationReport {
    let mut r = ValidationReport::default();

    let tets: Vec<u32> = m.tet_ids().collect();
    let bad = par::map(&tets, |&t| m.orient_of(m.tet(t)) != Sign::Positive)
        .into_iter()
        .filter(|&b| b)
        .count();
    r.push("tets_positive", bad, format!("{bad} non-positive tets"));

    let mut counts: HashMap<Face, usize> = HashMap::new();
    for &t in &tets {
        for i in 0..4 {
            *counts.entry(face_of(m.tet(t), i)).or_default() += 1;
        }
    }
    let mut bad = counts.values().filter(|&&n| n > 2).count();
    bad += counts.len().abs_diff(m.num_faces());
    for v in m.vertex_ids() {
        bad += m
            .star(v)
            .iter()
            .filter(|&&t| !m.tet(t).contains(&v) || !m.is_tet_alive(t))
            .count();
    }
    r.push("incidence", bad, format!("{bad} inconsistent incidences"));

    let bad_edges = m
        .edges()
        .into_iter()
        .filter(|e| {
            let (ring, tets, closed) = m.edge_ring(e.0[0], e.0[1]);
            let n = m.edge_tets(e.0[0], e.0[1]).len();
            tets.len() != n || (closed && ring.len() != n) || (!closed && ring.len() != n + 1)
        })
        .count();
    r.push(
        "edge_fans",
        bad_edges,
        format!("{bad_edges} edges with broken tet fans"),
    );

    if opts.vertex_links {
        let verts: Vec<u32> = m.vertex_ids().collect();
        let bad = par::map(&verts, |&v| !vertex_link_ok(m, v))
            .into_iter()
            .filter(|&b| b)
            .count();
        r.push(
            "vertex_links",
            bad,
            format!("{bad} vertices with non-ball stars"),
        );
    }

    let c = &m.input;
    let mut bad = usize::from(!c.is_closed());
    bad += c
        .vertices
        .iter()
        .filter(|&&v| !m.is_vertex_alive(v))
        .count();
    bad += c
        .edges
        .iter()
        .filter(|e| !m.has_edge(e.0[0], e.0[1]))
        .count();
    bad += c.faces.iter().filter(|f| !m.has_face(f)).count();
    r.push(
        "input_complex",
        bad,
        format!("{bad} missing or unclosed input simplices"),
    );

    let bad = c
        .vertices
        .iter()
        .filter(|&&v| m.is_boundary_vertex(v))
        .count();
    r.push(
        "input_interior",
        bad,
        format!("{bad} input vertices on the mesh boundary"),
    );

    let layers = m.max_region();
    let mut offset_all = Vec::new();
    for l in 1..=layers {
        let faces = m.offset_faces(l);
        let d = check_closed_manifold(&faces);
        let touching = m.inside_boundary_faces(l);
        let bad = d.open_or_branching_edges.len()
            + d.singular_vertices.len()
            + d.misoriented_edges.len()
            + touching;
        r.push(
            format!("offset_manifold_layer_{l}"),
            bad,
            format!(
                "{} open/branching edges, {} singular vertices, {} misoriented edges, {} boundary-touching faces",
                d.open_or_branching_edges.len(),
                d.singular_vertices.len(),
                d.misoriented_edges.len(),
                touching
            ),
        );
        offset_all.extend(faces);
    }
    let bad = offset_all
        .iter()
        .flatten()
        .filter(|v| m.input.has_vertex(**v))
        .count();
    r.push(
        "offset_input_disjoint",
        bad,
        format!("{bad} offset vertices tagged input"),
    );

    if opts.intersections {
        let pos = m.positions();
        let n = count_self_intersections(pos, &offset_all);
        r.push(
            "offset_offset_intersections",
            n,
            format!("{n} intersecting offset pairs"),
        );
        let n = count_input_intersections(m, &offset_all);
        r.push(
            "offset_input_intersections",
            n,
            format!("{n} offset/input intersections"),
        );
    }
    r
}

fn vertex_link_ok(m: &TetMesh, v: u32) -> bool {
    let link: Vec<[u32; 3]> = m
        .star(v)
        .iter()
        .map(|&t| {
            let tv = m.tet(t);
            let i = tv.iter().position(|&x| x == v).unwrap();
            m.oriented_face(t, i)
        })
        .collect();
    if link.is_empty() {
        return false;
    }
    if !m.is_boundary_vertex(v) {
        return check_closed_manifold(&link).is_empty()
            && face_components(&link).len() == 1
            && euler_characteristic(&link) == 2;
    }
    if face_components(&link).len() != 1 || euler_characteristic(&link) != 1 {
        return false;
    }
    let mut by_vertex: BTreeMap<u32, Vec<Edge>> = BTreeMap::new();
    let mut edge_count: BTreeMap<Edge, usize> = BTreeMap::new();
    for f in &link {
        for k in 0..3 {
            by_vertex
                .entry(f[k])
                .or_default()
                .push(Edge::new(f[(k + 1) % 3], f[(k + 2) % 3]));
            *edge_count
                .entry(Edge::new(f[k], f[(k + 1) % 3]))
                .or_default() += 1;
        }
    }
    edge_count.values().all(|&n| n <= 2)
        && by_vertex
            .values()
            .all(|es| matches!(link_shape(es), LinkShape::Cycle | LinkShape::Arc))
}

fn tri_box(pos: &[Point3], f: &[u32; 3]) -> Aabb {
    Aabb::from_points(f.iter().map(|&v| &pos[v as usize]))
}

/// Pairs of triangles (given by vertex ids) that intersect beyond shared
/// vertices or edges; sweep-and-prune on x, exact tests on every overlap.
pub fn intersecting_pairs(pos: &[Point3], faces: &[[u32; 3]]) -> Vec<(usize, usize)> {
    let boxes: Vec<Aabb> = faces.iter().map(|f| tri_box(pos, f)).collect();
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x).then(a.cmp(&b)));
    let mut pairs = par::flat_map_range(order.len(), |k| {
        let i = order[k];
        let mut out = Vec::new();
        for &j in &order[k + 1..] {
            if boxes[j].min.x > boxes[i].max.x {
                break;
            }
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            if mesh_triangles_intersect(pos, faces[i], faces[j]).unwrap_or(true) {
                out.push((i.min(j), i.max(j)));
            }
        }
        out
    });
    pairs.sort_unstable();
    pairs
}

pub fn count_self_intersections(pos: &[Point3], faces: &[[u32; 3]]) -> usize {
    intersecting_pairs(pos, faces).len()
}

/// Offset triangles hitting any input face, dangling edge or isolated vertex.
pub fn count_input_intersections(m: &TetMesh, offset: &[[u32; 3]]) -> usize {
    let pos = m.positions();
    let p = |v: u32| pos[v as usize];
    let in_faces: Vec<[u32; 3]> = m.input.faces.iter().map(|f| f.0).collect();
    let in_edges = m.input.dangling_edges();
    let in_points = m.input.isolated_vertices();
    let face_boxes: Vec<Aabb> = in_faces.iter().map(|f| tri_box(pos, f)).collect();
    let edge_boxes: Vec<Aabb> = in_edges
        .iter()
        .map(|e| Aabb::from_points([&pos[e.0[0] as usize], &pos[e.0[1] as usize]]))
        .collect();
    par::map_range(offset.len(), |i| {
        let f = offset[i];
        let b = tri_box(pos, &f);
        let (a0, a1, a2) = (p(f[0]), p(f[1]), p(f[2]));
        let mut n = 0;
        for (k, g) in in_faces.iter().enumerate() {
            if b.overlaps(&face_boxes[k]) && mesh_triangles_intersect(pos, f, *g).unwrap_or(true) {
                n += 1;
            }
        }
        for (k, e) in in_edges.iter().enumerate() {
            if b.overlaps(&edge_boxes[k]) && segment_triangle(p(e.0[0]), p(e.0[1]), a0, a1, a2) {
                n += 1;
            }
        }
        for &v in &in_points {
            let q = p(v);
            if b.overlaps(&Aabb::from_points([&q])) && segment_triangle(q, q, a0, a1, a2) {
                n += 1;
            }
        }
        n
    })
    .into_iter()
    .sum()
}

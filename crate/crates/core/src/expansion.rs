//! Growing the offset volume toward a target distance.
//!
//! A FIFO marching front adds tets to the volume of one layer. The greedy
//! pass over-approximates the target distance; its reach is turned into an
//! adapted distance field by harmonic interpolation, and the conservative
//! pass then rebuilds the volume strictly within that field.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{Closest, DistanceIndex, Point3, Simplex, Sphere};
use crate::mesh::{Edge, Face, TetMesh};
use crate::par;

/// Exact distance queries against the mesh's input complex.
#[derive(Clone, Debug)]
pub struct InputIndex {
    pub index: DistanceIndex,
    /// Index point to mesh vertex id.
    pub verts: Vec<u32>,
}

impl InputIndex {
    pub fn build(m: &TetMesh) -> Result<InputIndex> {
        Self::from_complex(m, &m.input)
    }

    pub fn from_complex(m: &TetMesh, c: &crate::mesh::Complex) -> Result<InputIndex> {
        let verts: Vec<u32> = c.vertices.iter().copied().collect();
        let local: HashMap<u32, u32> = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let l = |v: u32| local[&v];
        let mut simplices: Vec<Simplex> = c
            .faces
            .iter()
            .map(|f| Simplex::Triangle(f.0.map(l)))
            .collect();
        simplices.extend(
            c.dangling_edges()
                .into_iter()
                .map(|e| Simplex::Segment(e.0.map(l))),
        );
        simplices.extend(
            c.isolated_vertices()
                .into_iter()
                .map(|v| Simplex::Point(l(v))),
        );
        let pts = verts.iter().map(|&v| m.position(v)).collect();
        Ok(InputIndex {
            index: DistanceIndex::new(pts, simplices)?,
            verts,
        })
    }

    pub fn distance(&self, p: Point3) -> f64 {
        self.index.distance(p)
    }

    pub fn closest(&self, p: Point3) -> Closest {
        self.index.closest(p)
    }

    /// Mesh vertex ids of simplex `i`.
    pub fn simplex_vertices(&self, i: usize) -> Vec<u32> {
        self.index.simplices()[i]
            .vertices()
            .iter()
            .map(|&k| self.verts[k as usize])
            .collect()
    }
}

/// Per-input-vertex offset distance, bounded by a global target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceField {
    pub delta: f64,
    /// Values at input vertices; vertices not listed use `delta`.
    pub values: BTreeMap<u32, f64>,
}

impl DistanceField {
    pub fn uniform(delta: f64) -> Self {
        DistanceField {
            delta,
            values: BTreeMap::new(),
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.values.values().all(|&v| v == self.delta)
    }

    pub fn at_vertex(&self, v: u32) -> f64 {
        self.values.get(&v).copied().unwrap_or(self.delta)
    }

    /// Field value at the closest input point of `p`.
    pub fn at_closest(&self, ii: &InputIndex, c: &Closest) -> f64 {
        if self.is_uniform() {
            return self.delta;
        }
        ii.simplex_vertices(c.simplex)
            .iter()
            .zip(c.bary)
            .map(|(&v, w)| w * self.at_vertex(v))
            .sum()
    }

    pub fn at(&self, ii: &InputIndex, p: Point3) -> f64 {
        self.at_closest(ii, &ii.closest(p))
    }

    /// Min and max over the vertices of simplices within `reach` of `p`.
    pub fn range_near(&self, ii: &InputIndex, p: Point3, reach: f64) -> (f64, f64) {
        if self.is_uniform() {
            return (self.delta, self.delta);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in ii.index.within(p, reach) {
            for v in ii.simplex_vertices(s) {
                let x = self.at_vertex(v);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo, hi)
    }

    pub fn min_value(&self) -> f64 {
        self.values.values().copied().fold(self.delta, f64::min)
    }

    pub fn mean_value(&self, ii: &InputIndex) -> f64 {
        if ii.verts.is_empty() {
            return self.delta;
        }
        ii.verts.iter().map(|&v| self.at_vertex(v)).sum::<f64>() / ii.verts.len() as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Class {
    Inside,
    Outside,
}

/// Recursion cap of the sphere classifiers.
pub const MAX_SUBDIVISION_DEPTH: usize = 10;

/// Bottom-out radius as a fraction of the distance.
pub const BOTTOM_OUT_FRACTION: f64 = 0.1;

/// The regular 1-to-8 subdivision of a tet.
pub fn subdivide8(p: &[Point3; 4]) -> [[Point3; 4]; 8] {
    let m = |i: usize, j: usize| p[i].midpoint(p[j]);
    let (m01, m02, m03, m12, m13, m23) = (m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3));
    [
        [p[0], m01, m02, m03],
        [m01, p[1], m12, m13],
        [m02, m12, p[2], m23],
        [m03, m13, m23, p[3]],
        [m02, m13, m01, m12],
        [m02, m13, m12, m23],
        [m02, m13, m23, m03],
        [m02, m13, m03, m01],
    ]
}

fn sphere_bounds(s: &Sphere, ii: &InputIndex, field: &DistanceField) -> (f64, f64, f64) {
    let dc = ii.distance(s.center);
    let (lo, hi) = field.range_near(ii, s.center, dc + 2.0 * s.radius);
    (dc, lo, hi)
}

/// Greedy classifier: outside only if every covering sphere is beyond the
/// field; anything undecided at the bottom-out radius counts as inside.
pub fn classify_tet_greedy(p: &[Point3; 4], ii: &InputIndex, field: &DistanceField) -> Class {
    greedy_rec(p, ii, field, 0)
}

fn greedy_rec(p: &[Point3; 4], ii: &InputIndex, field: &DistanceField, depth: usize) -> Class {
    let s = Sphere::enclosing(p);
    let (dc, lo, hi) = sphere_bounds(&s, ii, field);
    if dc + s.radius <= lo {
        return Class::Inside;
    }
    if dc - s.radius >= hi {
        return Class::Outside;
    }
    if s.radius < BOTTOM_OUT_FRACTION * field.delta || depth >= MAX_SUBDIVISION_DEPTH {
        return Class::Inside;
    }
    if subdivide8(p)
        .iter()
        .any(|c| greedy_rec(c, ii, field, depth + 1) == Class::Inside)
    {
        Class::Inside
    } else {
        Class::Outside
    }
}

/// Conservative classifier: inside only if every covering sphere is within
/// the field; anything undecided at the bottom-out radius counts as outside.
pub fn classify_tet_conservative(p: &[Point3; 4], ii: &InputIndex, field: &DistanceField) -> Class {
    conservative_rec(p, ii, field, 0)
}

fn conservative_rec(
    p: &[Point3; 4],
    ii: &InputIndex,
    field: &DistanceField,
    depth: usize,
) -> Class {
    let s = Sphere::enclosing(p);
    let (dc, lo, hi) = sphere_bounds(&s, ii, field);
    if dc + s.radius <= lo {
        return Class::Inside;
    }
    if dc - s.radius >= hi {
        return Class::Outside;
    }
    if s.radius < BOTTOM_OUT_FRACTION * lo || depth >= MAX_SUBDIVISION_DEPTH {
        return Class::Outside;
    }
    if subdivide8(p)
        .iter()
        .all(|c| conservative_rec(c, ii, field, depth + 1) == Class::Inside)
    {
        Class::Inside
    } else {
        Class::Outside
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Greedy,
    Conservative,
}

#[derive(Clone, Copy, Debug)]
pub struct ExpandOptions {
    pub layer: u8,
    pub mode: Mode,
    /// Keep the volume boundary a manifold of unchanged topology.
    pub topology_guard: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Expansion {
    pub added: Vec<u32>,
    /// Candidates refused by the distance classifier at their last visit.
    pub rejected_distance: BTreeSet<u32>,
    /// Candidates refused by the topology guard or frozen vertices.
    pub rejected_topology: BTreeSet<u32>,
}

/// Whether adding `t` to the depth-`>= layer` volume keeps its boundary a
/// manifold with the same topology: `t` meets the boundary in one, two or
/// three faces plus exactly their closure.
pub fn tet_preserves_surface_topology(m: &TetMesh, t: u32, layer: u8) -> bool {
    let tv = m.tet(t);
    let in_volume = |u: u32| m.region(u) >= layer;
    let mut shared_v = BTreeSet::new();
    let mut shared_e = BTreeSet::new();
    let mut nf = 0;
    for i in 0..4 {
        if m.neighbor(t, i).is_some_and(in_volume) {
            nf += 1;
            let f = m.tet_face(t, i);
            shared_v.extend(f.0);
            shared_e.extend(f.edges());
        }
    }
    if !(1..=3).contains(&nf) {
        return false;
    }
    for &v in &tv {
        let touches = m.star(v).iter().any(|&u| in_volume(u));
        if touches != shared_v.contains(&v) {
            return false;
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let e = Edge::new(tv[i], tv[j]);
            let touches = m.edge_tets(tv[i], tv[j]).iter().any(|&u| in_volume(u));
            if touches != shared_e.contains(&e) {
                return false;
            }
        }
    }
    true
}

/// Vertices the front of layer `layer` may not touch: mesh boundary, locked
/// vertices and the surfaces of outer layers.
pub fn front_barrier(m: &TetMesh, layer: u8) -> BTreeSet<u32> {
    let mut out: BTreeSet<u32> = m.locked().clone();
    for l in 1..layer {
        for f in m.offset_faces(l) {
            out.extend(f);
        }
    }
    for f in m.boundary_faces() {
        out.extend(f);
    }
    out
}

fn classify(p: &[Point3; 4], ii: &InputIndex, field: &DistanceField, mode: Mode) -> Class {
    match mode {
        Mode::Greedy => classify_tet_greedy(p, ii, field),
        Mode::Conservative => classify_tet_conservative(p, ii, field),
    }
}

/// Marching-front expansion of one layer's volume.
pub fn expand(
    m: &mut TetMesh,
    ii: &InputIndex,
    field: &DistanceField,
    opts: ExpandOptions,
) -> Expansion {
    let layer = opts.layer;
    let eligible = |m: &TetMesh, t: u32| m.is_tet_alive(t) && m.region(t) + 1 == layer;
    let barrier = front_barrier(m, layer);
    let mut memo: HashMap<u32, Class> = HashMap::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut queued: BTreeSet<u32> = BTreeSet::new();
    let mut seed: BTreeSet<u32> = BTreeSet::new();
    for t in m.tet_ids() {
        if m.region(t) >= layer {
            for i in 0..4 {
                if let Some(u) = m.neighbor(t, i) {
                    if eligible(m, u) {
                        seed.insert(u);
                    }
                }
            }
        }
    }
    for t in seed {
        queue.push_back(t);
        queued.insert(t);
    }
    let mut out = Expansion::default();
    while let Some(t) = queue.pop_front() {
        queued.remove(&t);
        if !eligible(m, t) {
            continue;
        }
        if m.tet(t).iter().any(|v| barrier.contains(v))
            || (opts.topology_guard && !tet_preserves_surface_topology(m, t, layer))
        {
            out.rejected_topology.insert(t);
            continue;
        }
        if !memo.contains_key(&t) {
            // Classify everything pending in one parallel batch.
            let mut batch: Vec<u32> = queue
                .iter()
                .copied()
                .filter(|u| !memo.contains_key(u))
                .collect();
            batch.push(t);
            let pts: Vec<[Point3; 4]> = batch.iter().map(|&u| m.tet_points(u)).collect();
            let classes = par::map(&pts, |p| classify(p, ii, field, opts.mode));
            memo.extend(batch.into_iter().zip(classes));
        }
        if memo[&t] == Class::Outside {
            out.rejected_distance.insert(t);
            continue;
        }
        out.rejected_distance.remove(&t);
        out.rejected_topology.remove(&t);
        m.set_region(t, layer);
        out.added.push(t);
        for i in 0..4 {
            if let Some(u) = m.neighbor(t, i) {
                if eligible(m, u) && queued.insert(u) {
                    queue.push_back(u);
                }
            }
        }
    }
    out
}

pub fn greedy_expand(
    m: &mut TetMesh,
    ii: &InputIndex,
    field: &DistanceField,
    layer: u8,
) -> Expansion {
    expand(
        m,
        ii,
        field,
        ExpandOptions {
            layer,
            mode: Mode::Greedy,
            topology_guard: true,
        },
    )
}

pub fn conservative_expand(
    m: &mut TetMesh,
    ii: &InputIndex,
    field: &DistanceField,
    layer: u8,
) -> Expansion {
    expand(
        m,
        ii,
        field,
        ExpandOptions {
            layer,
            mode: Mode::Conservative,
            topology_guard: true,
        },
    )
}

/// Relative residual of the harmonic solve.
pub const CG_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct Propagation {
    pub field: DistanceField,
    /// Dirichlet data on the volume boundary.
    pub boundary: BTreeMap<u32, f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Harmonic interpolation of the distance reached by the volume of `layer`.
///
/// Each boundary vertex gets the smallest of the target and the barycenter
/// distances of the outside tets touching it across a boundary face; the
/// uniform graph Laplacian over volume edges is solved for the interior and
/// read at input vertices.
pub fn propagate_distance(
    m: &TetMesh,
    ii: &InputIndex,
    target: &DistanceField,
    layer: u8,
) -> Propagation {
    let in_volume = |t: u32| m.region(t) >= layer;
    let mut boundary: BTreeMap<u32, f64> = BTreeMap::new();
    let mut front: BTreeSet<u32> = BTreeSet::new();
    for f in m.offset_faces(layer) {
        let key = Face::from_slice(f);
        let (t0, t1) = m.face_tets(&key).unwrap();
        let out = if in_volume(t0) { t1.unwrap() } else { t0 };
        front.insert(out);
        for v in f {
            boundary.entry(v).or_insert(f64::INFINITY);
        }
    }
    for &t in &front {
        let b = Point3::centroid(&m.tet_points(t));
        let c = ii.closest(b);
        let value = c.distance.min(target.at_closest(ii, &c));
        for v in m.tet(t) {
            if let Some(x) = boundary.get_mut(&v) {
                *x = x.min(value);
            }
        }
    }
    for x in boundary.values_mut() {
        if !x.is_finite() {
            *x = target.delta;
        }
    }

    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    let mut adj: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for t in m.tet_ids().filter(|&t| in_volume(t)) {
        let tv = m.tet(t);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    adj.entry(tv[i]).or_default().insert(tv[j]);
                }
            }
        }
    }
    for &v in adj.keys() {
        if !boundary.contains_key(&v) {
            let n = index.len();
            index.insert(v, n);
        }
    }
    let n = index.len();
    let ids: Vec<u32> = index.keys().copied().collect();
    let nbrs: Vec<Vec<usize>> = ids
        .iter()
        .map(|v| {
            adj[v]
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect()
        })
        .collect();
    let diag: Vec<f64> = ids.iter().map(|v| adj[v].len() as f64).collect();
    let rhs: Vec<f64> = ids
        .iter()
        .map(|v| adj[v].iter().filter_map(|w| boundary.get(w)).sum())
        .collect();
    let apply = |x: &[f64], y: &mut [f64]| {
        for i in 0..n {
            y[i] = diag[i] * x[i] - nbrs[i].iter().map(|&j| x[j]).sum::<f64>();
        }
    };
    let (x, iterations, converged) = pcg(n, &apply, &diag, &rhs, CG_TOLERANCE, 10 * n.max(1));
    let solution: Vec<f64> = if converged {
        x
    } else {
        warn!("harmonic distance solve did not converge after {iterations} iterations; using nearest boundary values");
        nearest_boundary_values(&ids, &adj, &boundary)
    };

    let mut field = DistanceField::uniform(target.delta);
    let floor = 1e-3 * target.delta;
    for &v in &m.input.vertices {
        let raw = match index.get(&v) {
            Some(&i) => solution[i],
            None => boundary.get(&v).copied().unwrap_or(target.delta),
        };
        field
            .values
            .insert(v, raw.clamp(floor, target.at_vertex(v)));
    }
    Propagation {
        field,
        boundary,
        iterations,
        converged,
    }
}

/// Jacobi-preconditioned conjugate gradients for `A x = b`.
fn pcg(
    n: usize,
    apply: &dyn Fn(&[f64], &mut [f64]),
    diag: &[f64],
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, usize, bool) {
    let mut x = vec![0.0; n];
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n == 0 || bnorm == 0.0 {
        return (x, 0, true);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return (x, it, false);
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= tol * bnorm {
            return (x, it + 1, true);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (x, max_iter, false)
}

fn nearest_boundary_values(
    ids: &[u32],
    adj: &BTreeMap<u32, BTreeSet<u32>>,
    boundary: &BTreeMap<u32, f64>,
) -> Vec<f64> {
    let mut value: HashMap<u32, f64> = boundary.iter().map(|(&k, &v)| (k, v)).collect();
    let mut queue: VecDeque<u32> = boundary.keys().copied().collect();
    while let Some(v) = queue.pop_front() {
        let x = value[&v];
        if let Some(ns) = adj.get(&v) {
            for &w in ns {
                if let std::collections::hash_map::Entry::Vacant(e) = value.entry(w) {
                    e.insert(x);
                    queue.push_back(w);
                }
            }
        }
    }
    ids.iter()
        .map(|v| value.get(v).copied().unwrap_or(0.0))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Adaptation {
    pub greedy_volume: Vec<u32>,
    pub greedy_rejected_distance: Vec<u32>,
    pub propagation: Propagation,
    pub conservative: Expansion,
}

/// Greedy expansion, distance propagation, then a conservative rebuild of
/// the volume from the insertion state.
pub fn adapt_layer(
    m: &mut TetMesh,
    ii: &InputIndex,
    target: &DistanceField,
    layer: u8,
) -> Result<Adaptation> {
    if !(target.delta > 0.0) {
        return Err(Error::InvalidParameter(
            "offset distance must be positive".into(),
        ));
    }
    let saved: Vec<u8> = m.regions().to_vec();
    let greedy = greedy_expand(m, ii, target, layer);
    let mut greedy_volume: Vec<u32> = m.tet_ids().filter(|&t| m.region(t) >= layer).collect();
    greedy_volume.sort_unstable();
    let propagation = propagate_distance(m, ii, target, layer);
    for t in m.tet_ids().collect::<Vec<_>>() {
        m.set_region(t, saved[t as usize]);
    }
    let conservative = conservative_expand(m, ii, &propagation.field, layer);
    Ok(Adaptation {
        greedy_volume,
        greedy_rejected_distance: greedy.rejected_distance.into_iter().collect(),
        propagation,
        conservative,
    })
}

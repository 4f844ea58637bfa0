//! Local operations on the offset surface, applied through the background mesh.

use std::collections::BTreeSet;

use serde::Serialize;

use super::metrics::{normal_deviation, shape_regularity, triangle_samples};
use super::params::Resolved;
use super::sizing::SizingField;
use super::surface::{active_faces, faces_around, is_surface_edge, SurfaceView};
use crate::expansion::{DistanceField, InputIndex};
use crate::geom::{triangle_area, Point3};
use crate::mesh::{Edge, TetMesh};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PassStats {
    pub splits: usize,
    pub collapses: usize,
    pub flips: usize,
    pub moved: usize,
}

fn length(m: &TetMesh, e: Edge) -> f64 {
    m.position(e.0[0]).distance(m.position(e.0[1]))
}

fn tri(m: &TetMesh, f: [u32; 3]) -> [Point3; 3] {
    f.map(|v| m.position(v))
}

fn min_q(m: &TetMesh, fs: &[[u32; 3]]) -> f64 {
    fs.iter()
        .map(|&f| {
            let t = tri(m, f);
            shape_regularity(t[0], t[1], t[2])
        })
        .fold(1.0, f64::min)
}

fn max_sigma(m: &TetMesh, fs: &[[u32; 3]], ii: &InputIndex) -> f64 {
    fs.iter()
        .map(|&f| normal_deviation(&tri(m, f), ii))
        .fold(0.0, f64::max)
}

/// Splits offset edges longer than 4/3 of their target, longest first.
pub fn split_pass(m: &mut TetMesh, layer: u8, sf: &mut SizingField) -> usize {
    let surf = SurfaceView::new(active_faces(m, layer));
    let mut cand: Vec<(f64, Edge)> = surf
        .edges()
        .filter(|&&e| length(m, e) > 4.0 / 3.0 * sf.get(m, e))
        .map(|&e| (length(m, e), e))
        .collect();
    cand.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut n = 0;
    for (_, e) in cand {
        let [a, b] = e.0;
        if !is_surface_edge(m, a, b, layer) {
            continue;
        }
        let target = sf.get(m, e);
        let mid = m.position(a).midpoint(m.position(b));
        if let Ok(v) = m.split_edge(a, b, mid) {
            sf.target.remove(&e);
            for w in m.neighbors(v) {
                if is_surface_edge(m, v, w, layer) {
                    sf.set(Edge::new(v, w), target);
                }
            }
            n += 1;
        }
    }
    n
}

/// Half-edge collapses of offset edges shorter than 3/4 of their target,
/// shortest first. A collapse must keep the normal deviation of the new
/// faces within bounds, must not create edges above the split threshold and
/// must not produce a worse triangle than already present.
pub fn collapse_pass(
    m: &mut TetMesh,
    layer: u8,
    sf: &mut SizingField,
    ii: &InputIndex,
    p: &Resolved,
) -> usize {
    let surf = SurfaceView::new(active_faces(m, layer));
    let mut cand: Vec<(f64, Edge)> = surf
        .edges()
        .filter(|&&e| length(m, e) < 0.75 * sf.get(m, e))
        .map(|&e| (length(m, e), e))
        .collect();
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut n = 0;
    for (_, e) in cand {
        let [a, b] = e.0;
        if !is_surface_edge(m, a, b, layer) || length(m, e) >= 0.75 * sf.get(m, e) {
            continue;
        }
        for (from, to) in [(a, b), (b, a)] {
            if m.is_frozen(from) {
                continue;
            }
            let before = faces_around(m, from, layer);
            let after: Vec<[u32; 3]> = before
                .iter()
                .filter(|f| !f.contains(&to))
                .map(|f| f.map(|v| if v == from { to } else { v }))
                .collect();
            if after.is_empty() {
                continue;
            }
            if max_sigma(m, &after, ii) > p.sigma_max {
                continue;
            }
            if min_q(m, &after) < min_q(m, &before).min(0.25) {
                continue;
            }
            let nbrs: BTreeSet<u32> = after
                .iter()
                .flatten()
                .copied()
                .filter(|&v| v != to)
                .collect();
            let too_long = nbrs.iter().any(|&x| {
                let t = sf.get(m, Edge::new(from, x));
                m.position(to).distance(m.position(x)) > 4.0 / 3.0 * t
            });
            if too_long {
                continue;
            }
            let Ok(plan) = m.plan_collapse(from, to) else {
                continue;
            };
            let inherited: Vec<(u32, f64)> = nbrs
                .iter()
                .map(|&x| (x, sf.get(m, Edge::new(from, x))))
                .collect();
            m.apply_collapse(plan);
            sf.target.retain(|e, _| !e.contains(from));
            for (x, t) in inherited {
                sf.target.entry(Edge::new(to, x)).or_insert(t);
            }
            n += 1;
            break;
        }
    }
    n
}

/// Flips offset edges when the smaller shape regularity of the two adjacent
/// triangles increases, longest first.
pub fn flip_pass(
    m: &mut TetMesh,
    layer: u8,
    sf: &mut SizingField,
    ii: &InputIndex,
    p: &Resolved,
) -> usize {
    let surf = SurfaceView::new(active_faces(m, layer));
    let mut cand: Vec<(f64, Edge)> = surf.edges().map(|&e| (length(m, e), e)).collect();
    cand.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut n = 0;
    for (_, e) in cand {
        let [a, b] = e.0;
        if !is_surface_edge(m, a, b, layer) {
            continue;
        }
        let fs: Vec<[u32; 3]> = faces_around(m, a, layer)
            .into_iter()
            .filter(|f| f.contains(&b))
            .collect();
        if fs.len() != 2 {
            continue;
        }
        let apex = |f: &[u32; 3]| *f.iter().find(|&&v| v != a && v != b).unwrap();
        // Orient so that the first face runs a -> b.
        let (f1, f2) = {
            let i = fs[0].iter().position(|&v| v == a).unwrap();
            if fs[0][(i + 1) % 3] == b {
                (fs[0], fs[1])
            } else {
                (fs[1], fs[0])
            }
        };
        let (c, d) = (apex(&f1), apex(&f2));
        if c == d {
            continue;
        }
        let new = [[c, a, d], [d, b, c]];
        let q_old = min_q(m, &[f1, f2]);
        let q_new = min_q(m, &new);
        if q_new <= q_old + 1e-9 {
            continue;
        }
        if max_sigma(m, &[f1, f2], ii) <= p.sigma_max && max_sigma(m, &new, ii) > p.sigma_max {
            continue;
        }
        let target = sf.get(m, e);
        if m.flip_surface_edge(a, b).is_ok() {
            sf.target.remove(&e);
            sf.set(Edge::new(c, d), target);
            n += 1;
        }
    }
    n
}

/// Distance assigned to a vertex: area-weighted mean of the field at the
/// samples of its triangles.
fn vertex_target(m: &TetMesh, fs: &[[u32; 3]], ii: &InputIndex, field: &DistanceField) -> f64 {
    if field.is_uniform() {
        return field.delta;
    }
    let mut sum = 0.0;
    let mut w = 0.0;
    for &f in fs {
        let t = tri(m, f);
        let a = triangle_area(t[0], t[1], t[2]).max(1e-300);
        let mean: f64 = triangle_samples(&t)
            .iter()
            .map(|&s| field.at(ii, s))
            .sum::<f64>()
            / 4.0;
        sum += a * mean;
        w += a;
    }
    sum / w
}

/// Tangential smoothing followed by projection onto the target distance.
pub fn relocate_pass(m: &mut TetMesh, layer: u8, ii: &InputIndex, field: &DistanceField) -> usize {
    let surf = SurfaceView::new(active_faces(m, layer));
    let verts: Vec<u32> = surf.vertex_faces.keys().copied().collect();
    let mut n = 0;
    for v in verts {
        if m.is_frozen(v) {
            continue;
        }
        let fs = faces_around(m, v, layer);
        if fs.is_empty() {
            continue;
        }
        let mut c = Point3::new(0.0, 0.0, 0.0);
        let mut w = 0.0;
        for &f in &fs {
            let t = tri(m, f);
            let a = triangle_area(t[0], t[1], t[2]);
            c += Point3::centroid(&t) * a;
            w += a;
        }
        let smoothed = if w > 0.0 { c / w } else { m.position(v) };
        let d = vertex_target(m, &fs, ii, field);
        let cp = ii.closest(smoothed).point;
        let dir = (smoothed - cp)
            .normalized()
            .or_else(|| (m.position(v) - ii.closest(m.position(v)).point).normalized());
        let Some(dir) = dir else { continue };
        let start = m.position(v);
        if let Ok(p) = m.smooth_vertex(v, cp + dir * d) {
            if p != start {
                n += 1;
            }
        }
    }
    n
}

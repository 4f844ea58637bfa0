use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use super::metrics::QualityReport;
use super::params::{CoarsenRule, Resolved};
use super::surface::SurfaceView;
use crate::mesh::{Edge, TetMesh};

/// Target length of each offset edge.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SizingField {
    pub target: BTreeMap<Edge, f64>,
}

/// Ratio between targets of edges sharing a vertex.
pub const ADJACENCY_CAP: f64 = 1.5;

#[derive(Clone, Copy)]
struct Key(f64);
impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o).is_eq()
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

impl SizingField {
    /// Target of `e`, or its current length if unset.
    pub fn get(&self, m: &TetMesh, e: Edge) -> f64 {
        self.target
            .get(&e)
            .copied()
            .unwrap_or_else(|| m.position(e.0[0]).distance(m.position(e.0[1])))
    }

    pub fn set(&mut self, e: Edge, t: f64) {
        self.target.insert(e, t);
    }

    /// One update pass from the per-triangle quality of `surf`.
    pub fn update(
        &mut self,
        m: &TetMesh,
        surf: &SurfaceView,
        report: &QualityReport,
        p: &Resolved,
    ) {
        let mut next: BTreeMap<Edge, f64> = BTreeMap::new();
        for (e, fs) in &surf.edge_faces {
            let mut t = self.get(m, *e);
            let q = |i: &usize| report.per_triangle[*i];
            let refine = fs
                .iter()
                .any(|i| q(i).shape_regularity < 0.5 || q(i).normal_deviation > p.sigma_max);
            let coarsen = match p.coarsen_rule {
                CoarsenRule::PaperLiteral => fs
                    .iter()
                    .any(|i| q(i).shape_regularity < 0.5 && q(i).normal_deviation > p.sigma_min),
                CoarsenRule::FlatRegions => fs
                    .iter()
                    .all(|i| q(i).shape_regularity >= 0.5 && q(i).normal_deviation < p.sigma_min),
            };
            if refine {
                t *= 0.5;
            }
            if coarsen {
                t *= 1.5;
            }
            next.insert(*e, t.clamp(p.lmin, p.lmax));
        }
        cap_adjacent(&mut next, surf, ADJACENCY_CAP);
        self.target = next;
    }

    /// Largest ratio between the targets of adjacent edges.
    pub fn max_adjacent_ratio(&self, surf: &SurfaceView) -> f64 {
        let mut worst: f64 = 1.0;
        for (e, &t) in &self.target {
            if !surf.edge_faces.contains_key(e) {
                continue;
            }
            for g in surf.adjacent_edges(e) {
                if let Some(&u) = self.target.get(&g) {
                    worst = worst.max(t / u);
                }
            }
        }
        worst
    }
}

/// Lowers targets until none exceeds `cap` times an adjacent one.
pub fn cap_adjacent(target: &mut BTreeMap<Edge, f64>, surf: &SurfaceView, cap: f64) {
    let mut heap: BinaryHeap<Reverse<(Key, Edge)>> =
        target.iter().map(|(e, &t)| Reverse((Key(t), *e))).collect();
    while let Some(Reverse((Key(t), e))) = heap.pop() {
        if target[&e] < t {
            continue;
        }
        for g in surf.adjacent_edges(&e) {
            if let Some(u) = target.get_mut(&g) {
                if *u > cap * t {
                    *u = cap * t;
                    heap.push(Reverse((Key(*u), g)));
                }
            }
        }
    }
}

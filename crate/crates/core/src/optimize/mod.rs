//! Offset surface optimization: sizing field, remeshing, relocation toward
//! the target distance and background quality, iterated to convergence.

mod background;
mod metrics;
mod params;
mod remesh;
mod sizing;
mod surface;

pub use background::{
    amips, clear_offset_band, optimize_background, tet_energies, BackgroundStats, AMIPS_THRESHOLD,
};
pub use metrics::{
    distance_error, normal_deviation, offset_normal, quality_report, shape_regularity, summarize,
    triangle_quality, triangle_samples, QualityReport, TriangleQuality,
};
pub use params::{CoarsenRule, Distance, OffsetParams, Resolved, Side};
pub use remesh::{collapse_pass, flip_pass, relocate_pass, split_pass, PassStats};
pub use sizing::{cap_adjacent, SizingField, ADJACENCY_CAP};
pub use surface::{active_faces, faces_around, SurfaceView};

use serde::Serialize;

use crate::expansion::{DistanceField, InputIndex};
use crate::mesh::TetMesh;

/// Change of the mean normal deviation (degrees) at or below which the
/// iteration has converged.
pub const SIGMA_PROGRESS: f64 = 0.5;
/// Change of the mean and max distance error, relative to δ, at or below
/// which the iteration has converged.
pub const ERROR_PROGRESS: f64 = 0.005;

#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub triangles: usize,
    pub mean_shape_regularity: f64,
    pub min_shape_regularity: f64,
    pub mean_normal_deviation: f64,
    pub max_normal_deviation: f64,
    pub mean_distance_error: f64,
    pub max_distance_error: f64,
    pub mean_relative_error: f64,
    pub ops: PassStats,
    pub background: BackgroundStats,
}

impl IterationRecord {
    fn new(
        iteration: usize,
        r: &QualityReport,
        ops: PassStats,
        background: BackgroundStats,
    ) -> Self {
        IterationRecord {
            iteration,
            triangles: r.triangles,
            mean_shape_regularity: r.mean_shape_regularity,
            min_shape_regularity: r.min_shape_regularity,
            mean_normal_deviation: r.mean_normal_deviation,
            max_normal_deviation: r.max_normal_deviation,
            mean_distance_error: r.mean_distance_error,
            max_distance_error: r.max_distance_error,
            mean_relative_error: r.mean_relative_error,
            ops,
            background,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopReason {
    NormalDeviationStalled,
    DistanceErrorStalled,
    IterationCap,
    EmptySurface,
}

#[derive(Clone, Debug, Serialize)]
pub struct Optimization {
    pub history: Vec<IterationRecord>,
    pub report: QualityReport,
    pub stop: StopReason,
}

/// Whether the iteration from `prev` to `cur` changed the metrics too
/// little to continue.
pub fn stalled(prev: &QualityReport, cur: &QualityReport, delta: f64) -> Option<StopReason> {
    if (prev.mean_normal_deviation - cur.mean_normal_deviation).abs() <= SIGMA_PROGRESS {
        return Some(StopReason::NormalDeviationStalled);
    }
    let tol = ERROR_PROGRESS * delta;
    if (prev.max_distance_error - cur.max_distance_error).abs() <= tol
        && (prev.mean_distance_error - cur.mean_distance_error).abs() <= tol
    {
        return Some(StopReason::DistanceErrorStalled);
    }
    None
}

/// One sizing update, remeshing pass and background pass.
pub fn iterate(
    m: &mut TetMesh,
    layer: u8,
    ii: &InputIndex,
    field: &DistanceField,
    p: &Resolved,
    sf: &mut SizingField,
    current: &QualityReport,
) -> (PassStats, BackgroundStats) {
    let surf = SurfaceView::new(active_faces(m, layer));
    sf.update(m, &surf, current, p);
    let cleared = clear_offset_band(m, layer, ii, field);
    let ops = PassStats {
        splits: split_pass(m, layer, sf),
        collapses: collapse_pass(m, layer, sf, ii, p),
        flips: flip_pass(m, layer, sf, ii, p),
        moved: relocate_pass(m, layer, ii, field),
    };
    let mut bg = optimize_background(m);
    bg.moved += cleared;
    (ops, bg)
}

/// Optimizes the offset surface of `layer` toward `field`.
pub fn run_optimization(
    m: &mut TetMesh,
    layer: u8,
    ii: &InputIndex,
    field: &DistanceField,
    p: &Resolved,
) -> Optimization {
    let report = |m: &TetMesh| quality_report(m, &active_faces(m, layer), ii, field);
    let mut cur = report(m);
    let mut history = vec![IterationRecord::new(
        0,
        &cur,
        PassStats::default(),
        BackgroundStats::default(),
    )];
    if cur.triangles == 0 {
        return Optimization {
            history,
            report: cur,
            stop: StopReason::EmptySurface,
        };
    }
    let mut sf = SizingField::default();
    let mut stop = StopReason::IterationCap;
    for it in 1..=p.max_iterations {
        let (ops, bg) = iterate(m, layer, ii, field, p, &mut sf, &cur);
        let next = report(m);
        history.push(IterationRecord::new(it, &next, ops, bg));
        let s = stalled(&cur, &next, p.delta);
        cur = next;
        if let Some(s) = s {
            stop = s;
            break;
        }
    }
    Optimization {
        history,
        report: cur,
        stop,
    }
}

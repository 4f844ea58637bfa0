//! Triangle quality, normal deviation and distance error of an offset surface.

use serde::Serialize;

use crate::expansion::{DistanceField, InputIndex};
use crate::geom::{triangle_area, Point3};
use crate::mesh::TetMesh;
use crate::par;

/// `4√3 A / (l1² + l2² + l3²)`: 1 for equilateral, 0 for degenerate.
pub fn shape_regularity(a: Point3, b: Point3, c: Point3) -> f64 {
    let s = (b - a).norm_squared() + (c - b).norm_squared() + (a - c).norm_squared();
    if s == 0.0 {
        return 0.0;
    }
    (4.0 * 3f64.sqrt() * triangle_area(a, b, c) / s).clamp(0.0, 1.0)
}

/// Centroid followed by the three near-vertex samples `0.1 pc + 0.9 pv`.
pub fn triangle_samples(t: &[Point3; 3]) -> [Point3; 4] {
    let c = Point3::centroid(t);
    let s = |v: Point3| c * 0.1 + v * 0.9;
    [c, s(t[0]), s(t[1]), s(t[2])]
}

/// Unit direction from the closest input point to `p`.
pub fn offset_normal(ii: &InputIndex, p: Point3) -> Option<Point3> {
    (p - ii.closest(p).point).normalized()
}

fn angle_deg(a: Point3, b: Point3) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos().to_degrees()
}

/// Largest angle in degrees between the offset normal at the centroid and
/// at the near-vertex samples.
pub fn normal_deviation(t: &[Point3; 3], ii: &InputIndex) -> f64 {
    let s = triangle_samples(t);
    let Some(nc) = offset_normal(ii, s[0]) else {
        return 180.0;
    };
    s[1..]
        .iter()
        .map(|&p| offset_normal(ii, p).map_or(180.0, |n| angle_deg(nc, n)))
        .fold(0.0, f64::max)
}

/// `|d(p) − δ̂(p)|`.
pub fn distance_error(p: Point3, ii: &InputIndex, field: &DistanceField) -> f64 {
    let c = ii.closest(p);
    (c.distance - field.at_closest(ii, &c)).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangleQuality {
    pub shape_regularity: f64,
    pub normal_deviation: f64,
    /// Mean over the four samples.
    pub distance_error: f64,
    pub max_distance_error: f64,
    /// Mean over the samples of the error over the local target.
    pub relative_error: f64,
    pub area: f64,
}

pub fn triangle_quality(
    t: &[Point3; 3],
    ii: &InputIndex,
    field: &DistanceField,
) -> TriangleQuality {
    let mut err = 0.0;
    let mut max_err: f64 = 0.0;
    let mut rel = 0.0;
    for p in triangle_samples(t) {
        let c = ii.closest(p);
        let target = field.at_closest(ii, &c);
        let e = (c.distance - target).abs();
        err += e / 4.0;
        max_err = max_err.max(e);
        rel += e / target / 4.0;
    }
    TriangleQuality {
        shape_regularity: shape_regularity(t[0], t[1], t[2]),
        normal_deviation: normal_deviation(t, ii),
        distance_error: err,
        max_distance_error: max_err,
        relative_error: rel,
        area: triangle_area(t[0], t[1], t[2]),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct QualityReport {
    pub triangles: usize,
    pub mean_shape_regularity: f64,
    pub min_shape_regularity: f64,
    pub mean_normal_deviation: f64,
    pub max_normal_deviation: f64,
    pub mean_distance_error: f64,
    pub max_distance_error: f64,
    pub mean_relative_error: f64,
    pub max_relative_error: f64,
    pub per_triangle: Vec<TriangleQuality>,
}

pub fn quality_report(
    m: &TetMesh,
    faces: &[[u32; 3]],
    ii: &InputIndex,
    field: &DistanceField,
) -> QualityReport {
    let tris: Vec<[Point3; 3]> = faces.iter().map(|f| f.map(|v| m.position(v))).collect();
    let per = par::map(&tris, |t| triangle_quality(t, ii, field));
    summarize(per)
}

pub fn summarize(per: Vec<TriangleQuality>) -> QualityReport {
    let n = per.len();
    if n == 0 {
        return QualityReport::default();
    }
    let mean = |f: &dyn Fn(&TriangleQuality) -> f64| per.iter().map(f).sum::<f64>() / n as f64;
    let max = |f: &dyn Fn(&TriangleQuality) -> f64| per.iter().map(f).fold(0.0, f64::max);
    QualityReport {
        triangles: n,
        mean_shape_regularity: mean(&|t| t.shape_regularity),
        min_shape_regularity: per.iter().map(|t| t.shape_regularity).fold(1.0, f64::min),
        mean_normal_deviation: mean(&|t| t.normal_deviation),
        max_normal_deviation: max(&|t| t.normal_deviation),
        mean_distance_error: mean(&|t| t.distance_error),
        max_distance_error: max(&|t| t.max_distance_error),
        mean_relative_error: mean(&|t| t.relative_error),
        max_relative_error: max(&|t| t.relative_error),
        per_triangle: per,
    }
}

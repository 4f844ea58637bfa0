//! Background tet quality near the offset.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::expansion::{DistanceField, InputIndex};
use crate::geom::Point3;
use crate::mesh::{Tag, TetMesh};
use crate::par;

/// Energy above which a tet's neighborhood is optimized.
pub const AMIPS_THRESHOLD: f64 = 100.0;

/// Conformal AMIPS energy `tr(JᵀJ) / det(J)^(2/3)` of the map from the
/// regular tet; 3 for a regular tet, infinite for inverted or flat tets.
pub fn amips(p: &[Point3; 4]) -> f64 {
    let e = [p[1] - p[0], p[2] - p[0], p[3] - p[0]];
    // Columns of the regular tet with unit edges, inverted in closed form.
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let winv = [
        [1.0, -1.0 / s3, -1.0 / s6],
        [0.0, 2.0 / s3, -1.0 / s6],
        [0.0, 0.0, 3.0 / s6],
    ];
    // J = E · W⁻¹ with E's columns the tet edges.
    let mut j = [[0.0f64; 3]; 3];
    for (r, row) in j.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = (0..3).map(|k| e[k][r] * winv[k][c]).sum();
        }
    }
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    if !(det > 0.0) {
        return f64::INFINITY;
    }
    let fro: f64 = j.iter().flatten().map(|x| x * x).sum();
    fro / det.powf(2.0 / 3.0)
}

pub fn tet_energies(m: &TetMesh) -> Vec<(u32, f64)> {
    let ids: Vec<u32> = m.tet_ids().collect();
    let es = par::map(&ids, |&t| amips(&m.tet_points(t)));
    ids.into_iter().zip(es).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BackgroundStats {
    pub bad_tets: usize,
    pub moved: usize,
    pub max_energy: f64,
}

fn star_energy(m: &TetMesh, v: u32) -> f64 {
    m.star(v)
        .iter()
        .map(|&t| amips(&m.tet_points(t)))
        .fold(0.0, f64::max)
}

/// Smooths untagged vertices in the two-ring of every tet with energy above
/// the threshold; a move is kept only if the worst energy of the star drops.
pub fn optimize_background(m: &mut TetMesh) -> BackgroundStats {
    let energies = tet_energies(m);
    let bad: Vec<u32> = energies
        .iter()
        .filter(|(_, e)| *e > AMIPS_THRESHOLD)
        .map(|(t, _)| *t)
        .collect();
    let mut cand: BTreeSet<u32> = BTreeSet::new();
    for &t in &bad {
        for v in m.tet(t) {
            for &u in m.star(v) {
                cand.extend(m.tet(u));
            }
        }
    }
    let mut moved = 0;
    for v in cand {
        if m.is_frozen(v) || m.vertex_tag(v) != Tag::None {
            continue;
        }
        let before = star_energy(m, v);
        if before <= AMIPS_THRESHOLD {
            continue;
        }
        let start = m.position(v);
        let nb = m.neighbors(v);
        let c = Point3::centroid(&nb.iter().map(|&w| m.position(w)).collect::<Vec<_>>());
        for f in [1.0, 0.5, 0.25] {
            let p = start.lerp(c, f);
            if !m.star_positive_at(v, p) {
                continue;
            }
            m.set_position(v, p);
            if star_energy(m, v) < before {
                moved += 1;
                break;
            }
            m.set_position(v, start);
        }
    }
    BackgroundStats {
        bad_tets: bad.len(),
        moved,
        max_energy: energies.iter().map(|x| x.1).fold(0.0, f64::max),
    }
}

/// Pushes untagged vertices next to the offset of `layer` out of its way.
///
/// A vertex joined to an offset vertex by an edge qualifies if its star lies
/// entirely on one side of the offset. Outside vertices are moved to the
/// target distance plus the mean length `h` of those joining edges; inside
/// vertices to the target minus `h`, but no closer than half the target.
/// Moves stop where the star would stop being positive.
pub fn clear_offset_band(
    m: &mut TetMesh,
    layer: u8,
    ii: &InputIndex,
    field: &DistanceField,
) -> usize {
    let mut cand: BTreeSet<u32> = BTreeSet::new();
    for f in m.offset_faces(layer) {
        for v in f {
            cand.extend(m.neighbors(v));
        }
    }
    let mut moved = 0;
    for w in cand {
        if m.is_frozen(w) || m.vertex_tag(w) != Tag::None {
            continue;
        }
        let outside = m.region(m.star(w)[0]) < layer;
        let nb: Vec<u32> = m
            .neighbors(w)
            .into_iter()
            .filter(|&v| m.vertex_tag(v) == Tag::Offset)
            .collect();
        if nb.is_empty() {
            continue;
        }
        let p = m.position(w);
        let h = nb.iter().map(|&v| m.position(v).distance(p)).sum::<f64>() / nb.len() as f64;
        let c = ii.closest(p);
        let target = field.at_closest(ii, &c);
        let want = if outside {
            target + h
        } else {
            (target - h).max(0.5 * target)
        };
        if (outside && c.distance >= want) || (!outside && c.distance <= want) {
            continue;
        }
        let Some(dir) = (p - c.point).normalized() else {
            continue;
        };
        if let Ok(q) = m.smooth_vertex(w, c.point + dir * want) {
            if q != p {
                moved += 1;
            }
        }
    }
    moved
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_tet_has_minimal_energy() {
        let s3 = 3f64.sqrt();
        let p = [
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(0.5, s3 / 2., 0.),
            Point3::new(0.5, s3 / 6., (2.0f64 / 3.0).sqrt()),
        ];
        assert!((amips(&p) - 3.0).abs() < 1e-12);
        let scaled = p.map(|x| x * 7.5 + Point3::new(1., 2., 3.));
        assert!((amips(&scaled) - 3.0).abs() < 1e-12);
        let flat = [p[0], p[1], p[2], Point3::new(0.5, s3 / 6., 1e-4)];
        assert!(amips(&flat) > 100.0);
        let inverted = [p[0], p[2], p[1], p[3]];
        assert_eq!(amips(&inverted), f64::INFINITY);
    }
}

use super::TetMesh;
use crate::error::{Error, Result};
use crate::geom::{orient3d, Point3, Sign};

/// Bisection steps when the requested position would invert a tet.
pub const SMOOTH_BISECTIONS: usize = 20;

impl TetMesh {
    pub(crate) fn star_positive_at(&self, v: u32, p: Point3) -> bool {
        let pos = |w: u32| if w == v { p } else { self.position(w) };
        self.star(v).iter().all(|&t| {
            let tv = self.tet(t);
            orient3d(pos(tv[0]), pos(tv[1]), pos(tv[2]), pos(tv[3])) == Sign::Positive
        })
    }

    /// Moves `v` toward `target`, as far as its star stays positive.
    ///
    /// Tries `target` first, then bisects the segment from the current
    /// position. Returns the final position (unchanged if nothing is valid).
    pub fn smooth_vertex(&mut self, v: u32, target: Point3) -> Result<Point3> {
        if self.is_frozen(v) {
            return Err(Error::FrozenSimplex);
        }
        let start = self.position(v);
        if !target.is_finite() {
            return Ok(start);
        }
        if self.star_positive_at(v, target) {
            self.set_position(v, target);
            return Ok(target);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..SMOOTH_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if self.star_positive_at(v, start.lerp(target, mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo > 0.0 {
            let p = start.lerp(target, lo);
            self.set_position(v, p);
            Ok(p)
        } else {
            Ok(start)
        }
    }
}

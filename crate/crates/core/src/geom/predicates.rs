//! Exact orientation predicates.
//!
//! Both predicates run a floating-point filter first and fall back to
//! adaptive-precision expansion arithmetic (Shewchuk's scheme as implemented
//! by the `robust` crate) only when the filter cannot certify the sign.

use std::cmp::Ordering;

use robust::{Coord, Coord3D};

use super::Point3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    #[inline]
    pub fn of(v: f64) -> Sign {
        match v.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Sign::Positive,
            Some(Ordering::Less) => Sign::Negative,
            _ => Sign::Zero,
        }
    }

    #[inline]
    pub fn as_i8(self) -> i8 {
        self as i8
    }

    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

#[inline]
fn c3(p: Point3) -> Coord3D<f64> {
    Coord3D {
        x: p.x,
        y: p.y,
        z: p.z,
    }
}

/// Sign of `det[b - a, c - a, d - a]`.
///
/// Positive for `(0,0,0), (1,0,0), (0,1,0), (0,0,1)`.
#[inline]
pub fn orient3d(a: Point3, b: Point3, c: Point3, d: Point3) -> Sign {
    // Static filter: the error bound of the naive determinant is
    // (7u + 56u^2) * permanent (Shewchuk's o3derrboundA).
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let bc = bd.y * cd.z - bd.z * cd.y;
    let ca = cd.y * ad.z - cd.z * ad.y;
    let ab = ad.y * bd.z - ad.z * bd.y;
    let det = ad.x * bc + bd.x * ca + cd.x * ab;
    let perm = ad.x.abs() * ((bd.y * cd.z).abs() + (bd.z * cd.y).abs())
        + bd.x.abs() * ((cd.y * ad.z).abs() + (cd.z * ad.y).abs())
        + cd.x.abs() * ((ad.y * bd.z).abs() + (ad.z * bd.y).abs());
    const ERR: f64 = (7.0 + 56.0 * f64::EPSILON / 2.0) * f64::EPSILON / 2.0;
    // Shewchuk's determinant is det[a-d, b-d, c-d], the negation of ours.
    if det > ERR * perm {
        return Sign::Negative;
    }
    if -det > ERR * perm {
        return Sign::Positive;
    }
    Sign::of(-robust::orient3d(c3(a), c3(b), c3(c), c3(d)))
}

/// Sign of the 2D orientation of `a, b, c` after dropping coordinate `axis`.
///
/// The remaining coordinates keep their cyclic order, so dropping `z` gives
/// the usual `(x, y)` orientation.
#[inline]
pub fn orient2d_projected(a: Point3, b: Point3, c: Point3, axis: usize) -> Sign {
    let proj = |p: Point3| match axis {
        0 => Coord { x: p.y, y: p.z },
        1 => Coord { x: p.z, y: p.x },
        _ => Coord { x: p.x, y: p.y },
    };
    Sign::of(robust::orient2d(proj(a), proj(b), proj(c)))
}

/// Exact collinearity test for three points.
pub fn collinear(a: Point3, b: Point3, c: Point3) -> bool {
    (0..3).all(|axis| orient2d_projected(a, b, c, axis) == Sign::Zero)
}

/// An axis along which the triangle projects to a non-degenerate triangle.
pub fn projection_axis(a: Point3, b: Point3, c: Point3) -> Option<usize> {
    // Prefer the dominant normal component; any non-degenerate axis is exact.
    let n = (b - a).cross(c - a);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| n[j].abs().total_cmp(&n[i].abs()));
    order
        .into_iter()
        .find(|&axis| orient2d_projected(a, b, c, axis) != Sign::Zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn canonical_tet_is_positive() {
        let s = orient3d(p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.), p(0., 0., 1.));
        assert_eq!(s, Sign::Positive);
    }

    #[test]
    fn coplanar_is_zero() {
        let s = orient3d(p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.), p(1., 1., 0.));
        assert_eq!(s, Sign::Zero);
    }

    #[test]
    fn mirrored_is_negative() {
        let s = orient3d(p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.), p(0., 0., -1.));
        assert_eq!(s, Sign::Negative);
    }

    #[test]
    fn nearly_coplanar_resolved_exactly() {
        // d sits one ulp above the plane z = 0 at a large offset.
        let d = p(1e8, 1e8, f64::MIN_POSITIVE);
        let s = orient3d(p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.), d);
        assert_eq!(s, Sign::Positive);
        let s = orient3d(
            p(0.1, 0.1, 0.1),
            p(0.2, 0.2, 0.2),
            p(0.3, 0.3, 0.3 + 1e-17),
            p(0.0, 1.0, 0.0),
        );
        // 0.3 + 1e-17 rounds to 0.3, so the three first points are collinear.
        assert_eq!(
            s,
            orient3d(
                p(0.1, 0.1, 0.1),
                p(0.2, 0.2, 0.2),
                p(0.3, 0.3, 0.3),
                p(0.0, 1.0, 0.0)
            )
        );
    }

    #[test]
    fn projected_orientation_keeps_xy_convention() {
        let (a, b, c) = (p(0., 0., 5.), p(1., 0., 5.), p(0., 1., 5.));
        assert_eq!(orient2d_projected(a, b, c, 2), Sign::Positive);
        assert_eq!(projection_axis(a, b, c), Some(2));
        assert!(collinear(p(0., 0., 0.), p(1., 1., 1.), p(3., 3., 3.)));
        assert!(!collinear(a, b, c));
    }
}

//! Exact intersection tests between segments and triangles.
//!
//! All decisions are made with exact orientation predicates; closed sets are
//! assumed throughout (touching counts as intersecting).

use super::predicates::{collinear, orient2d_projected, orient3d, projection_axis, Sign};
use super::Point3;
use crate::error::{Error, Result};

// Closed 2D segment intersection in the projection dropping `axis`.
fn segments_intersect_2d(p: Point3, q: Point3, a: Point3, b: Point3, axis: usize) -> bool {
    let o1 = orient2d_projected(p, q, a, axis);
    let o2 = orient2d_projected(p, q, b, axis);
    let o3 = orient2d_projected(a, b, p, axis);
    let o4 = orient2d_projected(a, b, q, axis);
    if o1.as_i8() * o2.as_i8() < 0 && o3.as_i8() * o4.as_i8() < 0 {
        return true;
    }
    // Touching or collinear overlap. The projection is injective on the
    // common plane, so projected collinearity is collinearity.
    let on = |o: Sign, x: Point3, s: Point3, t: Point3| o == Sign::Zero && between(x, s, t);
    on(o1, a, p, q) || on(o2, b, p, q) || on(o3, p, a, b) || on(o4, q, a, b)
}

// `x` collinear with `s, t`: is it inside their bounding box?
fn between(x: Point3, s: Point3, t: Point3) -> bool {
    (0..3).all(|k| x[k] >= s[k].min(t[k]) && x[k] <= s[k].max(t[k]))
}

fn point_in_triangle_2d(p: Point3, a: Point3, b: Point3, c: Point3, axis: usize) -> bool {
    let s = [
        orient2d_projected(a, b, p, axis).as_i8(),
        orient2d_projected(b, c, p, axis).as_i8(),
        orient2d_projected(c, a, p, axis).as_i8(),
    ];
    !(s.contains(&1) && s.contains(&-1))
}

/// Closed segment `pq` against closed triangle `abc` (non-degenerate).
pub fn segment_triangle(p: Point3, q: Point3, a: Point3, b: Point3, c: Point3) -> bool {
    let sp = orient3d(a, b, c, p);
    let sq = orient3d(a, b, c, q);
    if sp == sq && sp != Sign::Zero {
        return false;
    }
    if sp == Sign::Zero && sq == Sign::Zero {
        let axis = projection_axis(a, b, c).expect("non-degenerate triangle");
        return point_in_triangle_2d(p, a, b, c, axis)
            || point_in_triangle_2d(q, a, b, c, axis)
            || segments_intersect_2d(p, q, a, b, axis)
            || segments_intersect_2d(p, q, b, c, axis)
            || segments_intersect_2d(p, q, c, a, axis);
    }
    // The segment crosses or touches the plane at a single point; the line
    // through it meets the triangle iff the edge orientations do not disagree.
    let s = [
        orient3d(p, q, a, b).as_i8(),
        orient3d(p, q, b, c).as_i8(),
        orient3d(p, q, c, a).as_i8(),
    ];
    !(s.contains(&1) && s.contains(&-1))
}

fn check(t: &[Point3; 3]) -> Result<()> {
    if collinear(t[0], t[1], t[2]) {
        Err(Error::DegenerateInput)
    } else {
        Ok(())
    }
}

fn edges_hit(t1: &[Point3; 3], t2: &[Point3; 3]) -> bool {
    (0..3).any(|i| segment_triangle(t1[i], t1[(i + 1) % 3], t2[0], t2[1], t2[2]))
}

/// Whether two closed triangles share at least one point.
pub fn triangles_intersect(t1: &[Point3; 3], t2: &[Point3; 3]) -> Result<bool> {
    check(t1)?;
    check(t2)?;
    Ok(edges_hit(t1, t2) || edges_hit(t2, t1))
}

/// Intersection test for two mesh triangles given by vertex ids.
///
/// Intersections consisting only of shared vertices or a shared edge are
/// ignored; anything more is reported.
pub fn mesh_triangles_intersect(pos: &[Point3], f1: [u32; 3], f2: [u32; 3]) -> Result<bool> {
    let p = |v: u32| pos[v as usize];
    let t1 = [p(f1[0]), p(f1[1]), p(f1[2])];
    let t2 = [p(f2[0]), p(f2[1]), p(f2[2])];
    check(&t1)?;
    check(&t2)?;
    let shared: Vec<u32> = f1.iter().copied().filter(|v| f2.contains(v)).collect();
    match shared.len() {
        0 => Ok(edges_hit(&t1, &t2) || edges_hit(&t2, &t1)),
        1 => {
            let v = shared[0];
            let opp = |f: [u32; 3]| {
                let k = f.iter().position(|&x| x == v).unwrap();
                (p(f[(k + 1) % 3]), p(f[(k + 2) % 3]))
            };
            let (a, b) = opp(f1);
            let (c, d) = opp(f2);
            Ok(segment_triangle(a, b, t2[0], t2[1], t2[2])
                || segment_triangle(c, d, t1[0], t1[1], t1[2]))
        }
        2 => {
            let apex = |f: [u32; 3]| p(*f.iter().find(|v| !shared.contains(v)).unwrap());
            let (a, b) = (p(shared[0]), p(shared[1]));
            let (c, d) = (apex(f1), apex(f2));
            if orient3d(a, b, c, d) != Sign::Zero {
                return Ok(false);
            }
            let axis = projection_axis(a, b, c).unwrap();
            Ok(orient2d_projected(a, b, c, axis) == orient2d_projected(a, b, d, axis))
        }
        _ => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    fn unit() -> [Point3; 3] {
        [p(0., 0., 0.), p(1., 0., 0.), p(0., 1., 0.)]
    }

    #[test]
    fn parallel_planes_do_not_meet() {
        let t2 = [p(0., 0., 1.), p(1., 0., 1.), p(0., 1., 1.)];
        assert!(!triangles_intersect(&unit(), &t2).unwrap());
    }

    #[test]
    fn identical_triangles_meet() {
        assert!(triangles_intersect(&unit(), &unit()).unwrap());
    }

    #[test]
    fn piercing_through_barycenter() {
        let g = 1.0 / 3.0;
        let t2 = [p(g, g, -1.), p(g, g, 1.), p(g + 1., g, 0.5)];
        assert!(triangles_intersect(&unit(), &t2).unwrap());
    }

    #[test]
    fn degenerate_triangle_is_rejected() {
        let bad = [p(0., 0., 0.), p(1., 1., 1.), p(2., 2., 2.)];
        let err = triangles_intersect(&unit(), &bad).unwrap_err();
        assert_eq!(err.to_string(), "degenerate input");
    }

    #[test]
    fn coplanar_containment() {
        let inner = [p(0.1, 0.1, 0.), p(0.2, 0.1, 0.), p(0.1, 0.2, 0.)];
        assert!(triangles_intersect(&unit(), &inner).unwrap());
    }

    #[test]
    fn adjacent_mesh_triangles() {
        let pos = vec![
            p(0., 0., 0.),
            p(1., 0., 0.),
            p(0., 1., 0.),
            p(1., 1., 0.),
            p(0.5, 0.2, 0.),
            p(0., 0., 1.),
            p(-1., -1., 0.),
        ];
        // Edge-adjacent, opposite sides: fine.
        assert!(!mesh_triangles_intersect(&pos, [0, 1, 2], [1, 3, 2]).unwrap());
        // Edge-adjacent, folded onto each other.
        assert!(mesh_triangles_intersect(&pos, [0, 1, 2], [0, 1, 4]).unwrap());
        // Vertex-adjacent, pointing away.
        assert!(!mesh_triangles_intersect(&pos, [0, 1, 2], [0, 5, 6]).unwrap());
        // Vertex-adjacent, crossing the hypotenuse along the diagonal.
        assert!(mesh_triangles_intersect(&pos, [0, 1, 2], [0, 5, 3]).unwrap());
        // Vertex-adjacent, overlapping beyond the shared vertex.
        assert!(mesh_triangles_intersect(&pos, [0, 1, 2], [0, 4, 5]).unwrap());
    }
}

//! Generalized winding numbers by direct solid-angle summation.

use std::f64::consts::PI;

use super::Point3;

/// Signed solid angle of triangle `abc` seen from `p` (Van Oosterom and Strackee).
pub fn solid_angle(p: Point3, a: Point3, b: Point3, c: Point3) -> f64 {
    let (a, b, c) = (a - p, b - p, c - p);
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let num = a.dot(b.cross(c));
    let den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    2.0 * num.atan2(den)
}

/// Winding number of `p` with respect to outward-oriented triangles.
pub fn winding_number(p: Point3, tris: &[[Point3; 3]]) -> f64 {
    tris.iter()
        .map(|t| solid_angle(p, t[0], t[1], t[2]))
        .sum::<f64>()
        / (4.0 * PI)
}

/// Winding number over an indexed triangle list.
pub fn winding_number_indexed(p: Point3, points: &[Point3], tris: &[[u32; 3]]) -> f64 {
    tris.iter()
        .map(|t| {
            solid_angle(
                p,
                points[t[0] as usize],
                points[t[1] as usize],
                points[t[2] as usize],
            )
        })
        .sum::<f64>()
        / (4.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> Vec<[Point3; 3]> {
        let v = [
            Point3::new(1., 0., 0.),
            Point3::new(-1., 0., 0.),
            Point3::new(0., 1., 0.),
            Point3::new(0., -1., 0.),
            Point3::new(0., 0., 1.),
            Point3::new(0., 0., -1.),
        ];
        let mut tris = Vec::new();
        for &x in &[0usize, 1] {
            for &y in &[2usize, 3] {
                for &z in &[4usize, 5] {
                    let t = [v[x], v[y], v[z]];
                    let n = (t[1] - t[0]).cross(t[2] - t[0]);
                    if n.dot(t[0]) > 0.0 {
                        tris.push(t);
                    } else {
                        tris.push([t[0], t[2], t[1]]);
                    }
                }
            }
        }
        tris
    }

    #[test]
    fn inside_octahedron_is_one() {
        assert!((winding_number(Point3::ZERO, &octahedron()) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn outside_octahedron_is_zero() {
        assert!(winding_number(Point3::new(10., 0., 0.), &octahedron()).abs() < 1e-6);
    }

    #[test]
    fn single_triangle_decays() {
        let t = [[
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(0., 1., 0.),
        ]];
        let near = winding_number(Point3::new(0.2, 0.2, 10.0), &t).abs();
        let far = winding_number(Point3::new(0.2, 0.2, 100.0), &t).abs();
        assert!(far < near);
        assert!(far < 1e-4);
    }
}

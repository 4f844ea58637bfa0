//! Closest-point queries against points, segments and triangles.

use super::Point3;

/// Closest point on a simplex with its barycentric coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosestPoint {
    pub point: Point3,
    pub bary: [f64; 3],
    pub distance_squared: f64,
}

pub fn closest_on_point(p: Point3, a: Point3) -> ClosestPoint {
    ClosestPoint {
        point: a,
        bary: [1.0, 0.0, 0.0],
        distance_squared: (p - a).norm_squared(),
    }
}

pub fn closest_on_segment(p: Point3, a: Point3, b: Point3) -> ClosestPoint {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = a + ab * t;
    ClosestPoint {
        point: q,
        bary: [1.0 - t, t, 0.0],
        distance_squared: (p - q).norm_squared(),
    }
}

/// Voronoi-region walk from Ericson, "Real-Time Collision Detection" 5.1.5.
pub fn closest_on_triangle(p: Point3, a: Point3, b: Point3, c: Point3) -> ClosestPoint {
    let finish = |q: Point3, bary: [f64; 3]| ClosestPoint {
        point: q,
        bary,
        distance_squared: (p - q).norm_squared(),
    };
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return finish(a, [1.0, 0.0, 0.0]);
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return finish(b, [0.0, 1.0, 0.0]);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return finish(a + ab * v, [1.0 - v, v, 0.0]);
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return finish(c, [0.0, 0.0, 1.0]);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return finish(a + ac * w, [1.0 - w, 0.0, w]);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return finish(b + (c - b) * w, [0.0, 1.0 - w, w]);
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    finish(a + ab * v + ac * w, [1.0 - v - w, v, w])
}

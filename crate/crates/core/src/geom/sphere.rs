//! Enclosing spheres and sphere-versus-complex distance tests.

use super::{DistanceIndex, Point3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere {
    pub center: Point3,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Point3, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Sphere { center, radius }
    }

    pub fn contains(&self, p: Point3) -> bool {
        self.center.distance(p) <= self.radius
    }

    /// A sphere containing every point of `pts`.
    ///
    /// Ritter's two-pass approximation, then grown to cover all points; the
    /// centroid sphere is returned instead when it is smaller.
    pub fn enclosing(pts: &[Point3]) -> Sphere {
        assert!(!pts.is_empty());
        let p0 = pts[0];
        let far = |from: Point3| {
            *pts.iter()
                .max_by(|a, b| from.distance(**a).total_cmp(&from.distance(**b)))
                .unwrap()
        };
        let a = far(p0);
        let b = far(a);
        let mut center = a.midpoint(b);
        let mut radius = a.distance(b) / 2.0;
        for &p in pts {
            let d = center.distance(p);
            if d > radius {
                let grow = (d - radius) / 2.0;
                radius += grow;
                center = center + (p - center) * (grow / d);
            }
        }
        let ritter = cover(center, radius, pts);
        let c = Point3::centroid(pts);
        let centroid = cover(c, 0.0, pts);
        if centroid.radius < ritter.radius {
            centroid
        } else {
            ritter
        }
    }
}

// Inflates the radius until every point is inside despite rounding.
fn cover(center: Point3, radius: f64, pts: &[Point3]) -> Sphere {
    let mut r = pts
        .iter()
        .map(|&p| center.distance(p))
        .fold(radius, f64::max);
    while pts.iter().any(|&p| center.distance(p) > r) {
        r = r.next_up();
    }
    Sphere { center, radius: r }
}

/// True iff every point of the sphere is within distance `d` of the complex.
pub fn sphere_within(s: &Sphere, idx: &DistanceIndex, d: f64) -> bool {
    idx.distance(s.center) + s.radius <= d
}

/// True iff every point of the sphere is at distance at least `d` from the complex.
pub fn sphere_beyond(s: &Sphere, idx: &DistanceIndex, d: f64) -> bool {
    idx.distance(s.center) - s.radius >= d
}

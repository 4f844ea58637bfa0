//! Geometric kernel: exact predicates, distance queries, intersection tests,
//! winding numbers and enclosing spheres.

mod bvh;
pub mod distance;
pub mod intersect;
mod point;
pub mod predicates;
mod sphere;
pub mod winding;

pub use bvh::{distance_to_complex, Closest, DistanceIndex, Simplex};
pub use intersect::{mesh_triangles_intersect, segment_triangle, triangles_intersect};
pub use point::{Aabb, Point3};
pub use predicates::{orient3d, Sign};
pub use sphere::{sphere_beyond, sphere_within, Sphere};
pub use winding::{solid_angle, winding_number, winding_number_indexed};

/// Signed volume of tet `abc d`, positive when `orient3d` is positive.
pub fn tet_volume(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    (b - a).dot((c - a).cross(d - a)) / 6.0
}

pub fn triangle_area(a: Point3, b: Point3, c: Point3) -> f64 {
    (b - a).cross(c - a).norm() / 2.0
}

/// Unnormalized normal of triangle `abc`.
pub fn triangle_normal(a: Point3, b: Point3, c: Point3) -> Point3 {
    (b - a).cross(c - a)
}

//! Voxel dilation topology oracle.
//!
//! Samples the distance to a complex on a regular lattice, thresholds at the
//! dilation radius and extracts the boundary of the sampled set with binary
//! marching tetrahedra. Distances are brute force over all simplices.

use std::collections::HashMap;

use crate::geom::distance::{closest_on_point, closest_on_segment, closest_on_triangle};
use crate::geom::{Aabb, Point3, Simplex};
use crate::mesh::{surface_topology, TetMesh};
use crate::par;

fn brute_distance_squared(p: Point3, pts: &[Point3], simplices: &[Simplex]) -> f64 {
    let q = |v: u32| pts[v as usize];
    simplices
        .iter()
        .map(|s| match *s {
            Simplex::Point(a) => closest_on_point(p, q(a)).distance_squared,
            Simplex::Segment([a, b]) => closest_on_segment(p, q(a), q(b)).distance_squared,
            Simplex::Triangle([a, b, c]) => {
                closest_on_triangle(p, q(a), q(b), q(c)).distance_squared
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Boundary triangles of `{x : dist(x) <= r}` sampled at pitch `h`.
/// Triangle vertices are lattice-edge ids.
pub fn dilation_boundary(pts: &[Point3], simplices: &[Simplex], r: f64, h: f64) -> Vec<[u32; 3]> {
    let mut bbox = Aabb::from_points(pts);
    let pad = r + 2.0 * h;
    bbox.min = bbox.min - Point3::new(pad, pad, pad);
    bbox.max += Point3::new(pad, pad, pad);
    let dims: [usize; 3] =
        std::array::from_fn(|a| ((bbox.max[a] - bbox.min[a]) / h).ceil() as usize + 1);
    let idx = |i: usize, j: usize, k: usize| i + dims[0] * (j + dims[1] * k);
    let total = dims[0] * dims[1] * dims[2];
    let r2 = r * r;
    let inside: Vec<bool> = par::map_range(total, |n| {
        let i = n % dims[0];
        let j = (n / dims[0]) % dims[1];
        let k = n / (dims[0] * dims[1]);
        let p = bbox.min + Point3::new(i as f64 * h, j as f64 * h, k as f64 * h);
        brute_distance_squared(p, pts, simplices) <= r2
    });

    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut edge_ids: HashMap<(usize, usize), u32> = HashMap::new();
    let mut tris = Vec::new();
    let mut eid = |a: usize, b: usize| {
        let key = (a.min(b), a.max(b));
        let n = edge_ids.len() as u32;
        *edge_ids.entry(key).or_insert(n)
    };
    for k in 0..dims[2] - 1 {
        for j in 0..dims[1] - 1 {
            for i in 0..dims[0] - 1 {
                for p in perms {
                    let mut u = [0usize; 3];
                    let mut c = [0usize; 4];
                    for step in 0..4 {
                        if step > 0 {
                            u[p[step - 1]] = 1;
                        }
                        c[step] = idx(i + u[0], j + u[1], k + u[2]);
                    }
                    let ins: Vec<usize> = c.iter().copied().filter(|&v| inside[v]).collect();
                    let out: Vec<usize> = c.iter().copied().filter(|&v| !inside[v]).collect();
                    match ins.len() {
                        1 => tris.push([
                            eid(ins[0], out[0]),
                            eid(ins[0], out[1]),
                            eid(ins[0], out[2]),
                        ]),
                        3 => tris.push([
                            eid(out[0], ins[0]),
                            eid(out[0], ins[1]),
                            eid(out[0], ins[2]),
                        ]),
                        2 => {
                            let (a, b) = (ins[0], ins[1]);
                            let (x, y) = (out[0], out[1]);
                            let q = [eid(a, x), eid(a, y), eid(b, y), eid(b, x)];
                            tris.push([q[0], q[1], q[2]]);
                            tris.push([q[0], q[2], q[3]]);
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    tris
}

/// Component count and ascending Euler characteristics of the boundary of
/// the `r`-dilation of the complex, sampled at pitch `h`.
pub fn voxel_topology_oracle(
    pts: &[Point3],
    simplices: &[Simplex],
    r: f64,
    h: f64,
) -> (usize, Vec<i64>) {
    surface_topology(&dilation_boundary(pts, simplices, r, h))
}

/// The simplices of the mesh's input complex: faces, dangling edges and
/// isolated vertices, indexing the mesh's vertex array.
pub fn input_simplices(m: &TetMesh) -> Vec<Simplex> {
    let mut s: Vec<Simplex> = m
        .input
        .faces
        .iter()
        .map(|f| Simplex::Triangle(f.0))
        .collect();
    s.extend(
        m.input
            .dangling_edges()
            .into_iter()
            .map(|e| Simplex::Segment(e.0)),
    );
    s.extend(m.input.isolated_vertices().into_iter().map(Simplex::Point));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_dilates_to_sphere() {
        let t = voxel_topology_oracle(&[Point3::ZERO], &[Simplex::Point(0)], 1.0, 0.25);
        assert_eq!(t, (1, vec![2]));
    }

    #[test]
    fn circle_dilates_to_torus() {
        let n = 24;
        let pts: Vec<Point3> = (0..n)
            .map(|i| {
                let a = i as f64 / n as f64 * std::f64::consts::TAU;
                Point3::new(3.0 * a.cos(), 3.0 * a.sin(), 0.0)
            })
            .collect();
        let segs: Vec<Simplex> = (0..n as u32)
            .map(|i| Simplex::Segment([i, (i + 1) % n as u32]))
            .collect();
        assert_eq!(voxel_topology_oracle(&pts, &segs, 0.6, 0.2), (1, vec![0]));
        // A large radius fills the hole.
        assert_eq!(voxel_topology_oracle(&pts, &segs, 3.5, 0.25), (1, vec![2]));
    }
}

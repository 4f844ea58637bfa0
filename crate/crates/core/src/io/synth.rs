//! Synthetic grid embeddings of canonical input complexes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{Point3, Sign};
use crate::mesh::{Edge, Face, TetMesh};

/// Canonical fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Point,
    Segment,
    Triangle,
    Disk,
    Loop,
    Book,
    Crossing,
    Octahedron,
    Torus,
    Dumbbell,
    Plates,
    Nested,
    SharedVertex,
    Soup,
    TinyEdge,
}

impl Shape {
    pub const ALL: [Shape; 15] = [
        Shape::Point,
        Shape::Segment,
        Shape::Triangle,
        Shape::Disk,
        Shape::Loop,
        Shape::Book,
        Shape::Crossing,
        Shape::Octahedron,
        Shape::Torus,
        Shape::Dumbbell,
        Shape::Plates,
        Shape::Nested,
        Shape::SharedVertex,
        Shape::Soup,
        Shape::TinyEdge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Point => "point",
            Shape::Segment => "segment",
            Shape::Triangle => "triangle",
            Shape::Disk => "disk",
            Shape::Loop => "loop",
            Shape::Book => "book",
            Shape::Crossing => "crossing",
            Shape::Octahedron => "octahedron",
            Shape::Torus => "torus",
            Shape::Dumbbell => "dumbbell",
            Shape::Plates => "plates",
            Shape::Nested => "nested",
            Shape::SharedVertex => "shared_vertex",
            Shape::Soup => "soup",
            Shape::TinyEdge => "tiny_edge",
        }
    }

    /// Smallest supported grid resolution.
    pub fn min_resolution(self) -> usize {
        match self {
            Shape::Point | Shape::Segment | Shape::Triangle | Shape::TinyEdge => 4,
            Shape::Disk | Shape::Loop => 4,
            Shape::Book | Shape::Crossing | Shape::SharedVertex | Shape::Soup => 6,
            Shape::Octahedron | Shape::Torus | Shape::Plates | Shape::Nested => 8,
            Shape::Dumbbell => 16,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Shape> {
        Shape::ALL
            .into_iter()
            .find(|sh| sh.name() == s || sh.name().replace('_', "-") == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown shape '{s}'")))
    }
}

/// Lattice of `n^3` unit cubes, six tets per cube.
///
/// The cube diagonals alternate by octant around the grid center so that the
/// planes `x ± z = const` and `y ± z = const` are unions of mesh faces.
pub fn grid(n: usize) -> TetMesh {
    let s = n + 1;
    let id = |i: usize, j: usize, k: usize| (i + s * (j + s * k)) as u32;
    let mut pts = Vec::with_capacity(s * s * s);
    for k in 0..s {
        for j in 0..s {
            for i in 0..s {
                pts.push(Point3::new(i as f64, j as f64, k as f64));
            }
        }
    }
    let c = n as f64 / 2.0;
    let below = |i: usize| (i as f64 + 0.5) < c;
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let base = [i, j, k];
                let flip = [below(i), below(j), !below(k)];
                for p in perms {
                    let mut u = [0usize; 3];
                    let mut corners = [0u32; 4];
                    for step in 0..4 {
                        if step > 0 {
                            u[p[step - 1]] = 1;
                        }
                        let q: [usize; 3] = std::array::from_fn(|a| {
                            base[a] + if flip[a] { 1 - u[a] } else { u[a] }
                        });
                        corners[step] = id(q[0], q[1], q[2]);
                    }
                    tets.push(corners);
                }
            }
        }
    }
    let p = |v: u32| pts[v as usize];
    for t in &mut tets {
        if crate::geom::orient3d(p(t[0]), p(t[1]), p(t[2]), p(t[3])) == Sign::Negative {
            t.swap(2, 3);
        }
    }
    TetMesh::new(pts, tets).expect("lattice tets are positive")
}

struct Lattice {
    n: usize,
}

impl Lattice {
    fn id(&self, i: i64, j: i64, k: i64) -> u32 {
        let s = self.n as i64 + 1;
        (i + s * (j + s * k)) as u32
    }
}

/// Builds the grid and tags the canonical complex `shape`.
pub fn synth_grid_embedding(n: usize, shape: Shape) -> Result<TetMesh> {
    if n < shape.min_resolution() || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "shape '{shape}' needs an even resolution of at least {}",
            shape.min_resolution()
        )));
    }
    if shape == Shape::Dumbbell && !n.is_multiple_of(16) {
        return Err(Error::InvalidParameter(
            "dumbbell needs a resolution divisible by 16".into(),
        ));
    }
    let mut m = grid(n);
    let lat = Lattice { n };
    let c = (n / 2) as i64;
    let cf = c as f64;
    match shape {
        Shape::Point => m.input.insert_vertex(lat.id(c, c, c)),
        Shape::TinyEdge => {
            let a = lat.id(c, c, c);
            let b = lat.id(c + 1, c, c);
            m.input.insert_vertex(a);
            let pa = m.position(a);
            // The new vertex is one ulp away, so the edge midpoint rounds
            // onto an endpoint.
            let p = Point3::new(pa.x.next_up(), pa.y, pa.z);
            m.split_edge(a, b, p)?;
        }
        Shape::Segment => tag_path(&mut m, &lat, &[(c - 1, c, c), (c, c, c), (c + 1, c, c)]),
        Shape::Triangle => {
            let f = Face::new(
                lat.id(c, c, c),
                lat.id(c + 1, c, c),
                lat.id(c + 1, c + 1, c),
            );
            let f = if m.has_face(&f) {
                f
            } else {
                Face::new(lat.id(c, c, c), lat.id(c + 1, c, c), lat.id(c, c + 1, c))
            };
            m.input.insert_face(f);
        }
        Shape::Disk => tag_faces(&mut m, |p| {
            p.z == cf && (p.x - cf).abs() <= 1.0 && (p.y - cf).abs() <= 1.0
        }),
        Shape::Loop => tag_path(
            &mut m,
            &lat,
            &[
                (c - 1, c - 1, c),
                (c, c - 1, c),
                (c + 1, c - 1, c),
                (c + 1, c, c),
                (c + 1, c + 1, c),
                (c, c + 1, c),
                (c - 1, c + 1, c),
                (c - 1, c, c),
                (c - 1, c - 1, c),
            ],
        ),
        Shape::Book => {
            let spine = |p: Point3| (p.z - cf).abs() <= 1.0;
            tag_faces(&mut m, |p| {
                p.x == cf && p.y >= cf - 2.0 && p.y <= cf + 2.0 && spine(p)
            });
            tag_faces(&mut m, |p| {
                p.y == cf && p.x >= cf && p.x <= cf + 2.0 && spine(p)
            });
        }
        Shape::Crossing => {
            let sq = |a: f64, b: f64| (a - cf).abs() <= 1.0 && (b - cf).abs() <= 1.0;
            tag_faces(&mut m, |p| p.x == cf && sq(p.y, p.z));
            tag_faces(&mut m, |p| p.y == cf && sq(p.x, p.z));
        }
        Shape::Octahedron => {
            let r = n as f64 / 4.0;
            tag_solid(&mut m, |p| {
                let (x, y, z) = (p.x - cf, p.y - cf, p.z - cf);
                x.abs().max(y.abs()) + z.abs() <= r
            });
        }
        Shape::Torus => {
            let s = n as f64 / 8.0;
            tag_solid(&mut m, |p| {
                let (x, y, z) = ((p.x - cf).abs(), (p.y - cf).abs(), (p.z - cf).abs());
                x.max(y) <= 2.0 * s && z <= s && x.max(y) >= s
            });
        }
        Shape::Dumbbell => {
            let k = (n / 16) as i64;
            let kf = k as f64;
            let in_box = |p: Point3, x0: f64, x1: f64| {
                p.x >= x0 * kf
                    && p.x <= x1 * kf
                    && p.y >= 6.0 * kf
                    && p.y <= 10.0 * kf
                    && p.z >= 7.0 * kf
                    && p.z <= 9.0 * kf
            };
            tag_solid(&mut m, |p| in_box(p, 3.0, 5.0));
            tag_solid(&mut m, |p| in_box(p, 11.0, 13.0));
            for y in [7, 9] {
                let path: Vec<(i64, i64, i64)> =
                    (5 * k..=11 * k).map(|x| (x, y * k, 8 * k)).collect();
                tag_path(&mut m, &lat, &path);
            }
        }
        Shape::Plates => {
            let h = n as f64 / 4.0;
            for z in [cf - 1.0, cf + 1.0] {
                tag_faces(&mut m, |p| {
                    p.z == z && (p.x - cf).abs() <= h && (p.y - cf).abs() <= h
                });
            }
        }
        Shape::Nested => {
            tag_solid(&mut m, |p| chebyshev(p, cf) <= 1.0);
            tag_solid(&mut m, |p| chebyshev(p, cf) <= 3.0);
        }
        Shape::SharedVertex => {
            let inside =
                |p: Point3, lo: f64| [p.x, p.y, p.z].iter().all(|&v| v >= lo && v <= lo + 2.0);
            tag_solid(&mut m, |p| inside(p, cf - 2.0));
            tag_solid(&mut m, |p| inside(p, cf));
        }
        Shape::Soup => {
            tag_faces(&mut m, |p| {
                p.z == cf && p.x >= cf - 2.0 && p.x <= cf && (p.y - cf).abs() <= 1.0
            });
            tag_faces(&mut m, |p| {
                p.y == cf && p.x >= cf - 2.0 && p.x <= cf && p.z >= cf && p.z <= cf + 1.0
            });
            tag_path(&mut m, &lat, &[(c, c, c), (c + 1, c, c), (c + 2, c, c)]);
            m.input.insert_vertex(lat.id(c + 2, c + 2, c + 2));
        }
    }
    if m.input.vertices.iter().any(|&v| m.is_boundary_vertex(v)) {
        return Err(Error::NotInterior);
    }
    Ok(m)
}

fn chebyshev(p: Point3, c: f64) -> f64 {
    (p.x - c).abs().max((p.y - c).abs()).max((p.z - c).abs())
}

fn tag_path(m: &mut TetMesh, lat: &Lattice, path: &[(i64, i64, i64)]) {
    for w in path.windows(2) {
        let a = lat.id(w[0].0, w[0].1, w[0].2);
        let b = lat.id(w[1].0, w[1].1, w[1].2);
        debug_assert!(m.has_edge(a, b));
        m.input.insert_edge(Edge::new(a, b));
    }
}

fn tag_faces(m: &mut TetMesh, on: impl Fn(Point3) -> bool) {
    for f in m.faces() {
        if f.0.iter().all(|&v| on(m.position(v))) {
            m.input.insert_face(f);
        }
    }
}

/// Tags the faces separating tets whose centroid is inside `solid` from
/// those outside.
fn tag_solid(m: &mut TetMesh, solid: impl Fn(Point3) -> bool) {
    let inside = |m: &TetMesh, t: u32| solid(Point3::centroid(&m.tet_points(t)));
    for f in m.faces() {
        if let Some((t0, Some(t1))) = m.face_tets(&f) {
            if inside(m, t0) != inside(m, t1) {
                m.input.insert_face(f);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::surface_topology;
    use crate::mesh::topology::check_closed_manifold;

    #[test]
    fn point_grid_counts() {
        let m = synth_grid_embedding(4, Shape::Point).unwrap();
        assert_eq!(m.num_tets(), 384);
        assert_eq!(m.input.vertices.len(), 1);
    }

    #[test]
    fn grid_is_conforming() {
        let m = grid(4);
        let r = crate::mesh::validate(&m, Default::default());
        assert!(r.is_ok(), "{:?}", r.failures());
        assert_eq!(m.boundary_faces().len(), 6 * 16 * 2);
    }

    #[test]
    fn solids_are_closed_surfaces() {
        for (shape, n, topo) in [
            (Shape::Octahedron, 8, (1, vec![2])),
            (Shape::Octahedron, 16, (1, vec![2])),
            (Shape::Torus, 8, (1, vec![0])),
            (Shape::Nested, 8, (2, vec![2, 2])),
            (Shape::SharedVertex, 6, (2, vec![2, 2])),
        ] {
            let m = synth_grid_embedding(n, shape).unwrap();
            let faces: Vec<[u32; 3]> = m.input.faces.iter().map(|f| f.0).collect();
            assert_eq!(surface_topology(&faces), topo, "{shape}");
            if shape != Shape::SharedVertex {
                let unoriented = check_closed_manifold(&faces);
                assert!(unoriented.open_or_branching_edges.is_empty(), "{shape}");
            }
        }
    }

    #[test]
    fn octahedron_surface_is_the_pyramid_pair() {
        let m = synth_grid_embedding(8, Shape::Octahedron).unwrap();
        let area: f64 = m
            .input
            .faces
            .iter()
            .map(|f| {
                let p = f.0.map(|v| m.position(v));
                crate::geom::triangle_area(p[0], p[1], p[2])
            })
            .sum();
        // Eight triangles with base 2r·sqrt(2)/... : each lateral face spans
        // base 2r and slant height r·sqrt(2).
        let r = 2.0f64;
        let expect = 8.0 * 0.5 * (2.0 * r) * (r * 2f64.sqrt());
        assert!((area - expect).abs() < 1e-9, "{area} vs {expect}");
    }

    #[test]
    fn loop_is_a_cycle() {
        let m = synth_grid_embedding(8, Shape::Loop).unwrap();
        assert_eq!(m.input.edges.len(), 8);
        assert!(m.input.faces.is_empty());
    }

    #[test]
    fn names_round_trip() {
        for s in Shape::ALL {
            assert_eq!(s.name().parse::<Shape>().unwrap(), s);
        }
    }
}

//! Bounding-volume hierarchy over points, segments and triangles.

use super::distance::{closest_on_point, closest_on_segment, closest_on_triangle, ClosestPoint};
use super::{Aabb, Point3};
use crate::error::{Error, Result};

/// A simplex of the indexed complex, as indices into the index's point array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Simplex {
    Point(u32),
    Segment([u32; 2]),
    Triangle([u32; 3]),
}

impl Simplex {
    pub fn vertices(&self) -> &[u32] {
        match self {
            Simplex::Point(v) => std::slice::from_ref(v),
            Simplex::Segment(v) => v,
            Simplex::Triangle(v) => v,
        }
    }
}

/// Result of a closest-point query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Closest {
    pub distance: f64,
    pub point: Point3,
    /// Index of the closest simplex.
    pub simplex: usize,
    /// Barycentric coordinates of `point` on that simplex.
    pub bary: [f64; 3],
}

#[derive(Clone, Debug)]
struct Node {
    bbox: Aabb,
    // Leaf: `start..start + count` in `order`. Inner: children at `left`, `left + 1`.
    left: u32,
    start: u32,
    count: u32,
}

const LEAF_SIZE: usize = 4;

/// Exact nearest-simplex queries over a simplicial complex.
///
/// Pruning uses box distances only, so every query returns the true minimum
/// over all indexed simplices.
#[derive(Clone, Debug)]
pub struct DistanceIndex {
    points: Vec<Point3>,
    simplices: Vec<Simplex>,
    boxes: Vec<Aabb>,
    order: Vec<u32>,
    nodes: Vec<Node>,
}

impl DistanceIndex {
    pub fn new(points: Vec<Point3>, simplices: Vec<Simplex>) -> Result<Self> {
        if simplices.is_empty() {
            return Err(Error::EmptyComplex);
        }
        for s in &simplices {
            if s.vertices().iter().any(|&v| v as usize >= points.len()) {
                return Err(Error::InvalidParameter(format!(
                    "simplex {s:?} references a missing point"
                )));
            }
        }
        let boxes: Vec<Aabb> = simplices
            .iter()
            .map(|s| Aabb::from_points(s.vertices().iter().map(|&v| &points[v as usize])))
            .collect();
        let mut index = DistanceIndex {
            points,
            simplices,
            boxes,
            order: Vec::new(),
            nodes: Vec::new(),
        };
        index.build();
        Ok(index)
    }

    /// Convenience constructor for a triangle list.
    pub fn from_triangles(points: Vec<Point3>, tris: &[[u32; 3]]) -> Result<Self> {
        Self::new(points, tris.iter().map(|&t| Simplex::Triangle(t)).collect())
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn bbox(&self) -> Aabb {
        self.nodes[0].bbox
    }

    fn build(&mut self) {
        let n = self.simplices.len();
        let centers: Vec<Point3> = self.boxes.iter().map(Aabb::center).collect();
        self.order = (0..n as u32).collect();
        self.nodes.clear();
        self.nodes.push(Node {
            bbox: Aabb::EMPTY,
            left: 0,
            start: 0,
            count: n as u32,
        });
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let (start, count) = (self.nodes[ni].start as usize, self.nodes[ni].count as usize);
            let items = &mut self.order[start..start + count];
            let mut bbox = Aabb::EMPTY;
            let mut cbox = Aabb::EMPTY;
            for &i in items.iter() {
                bbox = bbox.union(&self.boxes[i as usize]);
                cbox.grow(centers[i as usize]);
            }
            self.nodes[ni].bbox = bbox;
            if count <= LEAF_SIZE {
                continue;
            }
            let axis = cbox.longest_axis();
            let mid = count / 2;
            items.select_nth_unstable_by(mid, |&a, &b| {
                centers[a as usize][axis]
                    .total_cmp(&centers[b as usize][axis])
                    .then(a.cmp(&b))
            });
            let left = self.nodes.len();
            self.nodes[ni].left = left as u32;
            self.nodes[ni].count = 0;
            self.nodes.push(Node {
                bbox: Aabb::EMPTY,
                left: 0,
                start: start as u32,
                count: mid as u32,
            });
            self.nodes.push(Node {
                bbox: Aabb::EMPTY,
                left: 0,
                start: (start + mid) as u32,
                count: (count - mid) as u32,
            });
            stack.push(left + 1);
            stack.push(left);
        }
    }

    /// Closest point on simplex `i` to `p`.
    pub fn closest_on(&self, i: usize, p: Point3) -> ClosestPoint {
        let pt = |v: u32| self.points[v as usize];
        match self.simplices[i] {
            Simplex::Point(a) => closest_on_point(p, pt(a)),
            Simplex::Segment([a, b]) => closest_on_segment(p, pt(a), pt(b)),
            Simplex::Triangle([a, b, c]) => closest_on_triangle(p, pt(a), pt(b), pt(c)),
        }
    }

    pub fn closest(&self, p: Point3) -> Closest {
        let mut best = f64::INFINITY;
        let mut best_i = usize::MAX;
        let mut best_cp = None;
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni];
            if node.bbox.distance_squared(p) > best {
                continue;
            }
            if node.count > 0 {
                let s = node.start as usize;
                for &i in &self.order[s..s + node.count as usize] {
                    let i = i as usize;
                    if self.boxes[i].distance_squared(p) > best {
                        continue;
                    }
                    let cp = self.closest_on(i, p);
                    // Ties go to the lowest simplex index.
                    if cp.distance_squared < best || (cp.distance_squared == best && i < best_i) {
                        best = cp.distance_squared;
                        best_i = i;
                        best_cp = Some(cp);
                    }
                }
            } else {
                let (l, r) = (node.left as usize, node.left as usize + 1);
                let dl = self.nodes[l].bbox.distance_squared(p);
                let dr = self.nodes[r].bbox.distance_squared(p);
                if dl <= dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        let cp = best_cp.expect("index is never empty");
        Closest {
            distance: cp.distance_squared.sqrt(),
            point: cp.point,
            simplex: best_i,
            bary: cp.bary,
        }
    }

    pub fn distance(&self, p: Point3) -> f64 {
        self.closest(p).distance
    }

    /// Indices of all simplices within distance `r` of `p` (closed), ascending.
    pub fn within(&self, p: Point3, r: f64) -> Vec<usize> {
        let r2 = r * r;
        let mut out = Vec::new();
        let mut stack = vec![0usize];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni];
            if node.bbox.distance_squared(p) > r2 {
                continue;
            }
            if node.count > 0 {
                let s = node.start as usize;
                for &i in &self.order[s..s + node.count as usize] {
                    let i = i as usize;
                    if self.boxes[i].distance_squared(p) <= r2
                        && self.closest_on(i, p).distance_squared <= r2
                    {
                        out.push(i);
                    }
                }
            } else {
                stack.push(node.left as usize);
                stack.push(node.left as usize + 1);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Distance from `p` to the indexed complex.
pub fn distance_to_complex(p: Point3, idx: &DistanceIndex) -> f64 {
    idx.distance(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_triangle() -> DistanceIndex {
        DistanceIndex::from_triangles(
            vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
            ],
            &[[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn empty_index_is_rejected() {
        let err = DistanceIndex::new(vec![], vec![]).unwrap_err();
        assert_eq!(err.to_string(), "empty complex");
    }

    #[test]
    fn distance_above_triangle() {
        let idx = unit_triangle();
        assert_eq!(distance_to_complex(Point3::new(0., 0., 2.), &idx), 2.0);
        assert_eq!(distance_to_complex(Point3::new(0., 1., 0.), &idx), 0.0);
    }

    #[test]
    fn distance_to_hypotenuse() {
        let idx = unit_triangle();
        let c = idx.closest(Point3::new(2., 2., 0.));
        assert!((c.distance - 4.5f64.sqrt()).abs() < 1e-15);
        assert!((c.point - Point3::new(0.5, 0.5, 0.)).norm() < 1e-15);
    }

    #[test]
    fn mixed_simplices_match_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut pts = Vec::new();
        let mut simplices = Vec::new();
        for k in 0..300 {
            let base = pts.len() as u32;
            let o = Point3::new(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            );
            for _ in 0..3 {
                pts.push(
                    o + Point3::new(
                        rng.gen_range(-0.5..0.5),
                        rng.gen_range(-0.5..0.5),
                        rng.gen_range(-0.5..0.5),
                    ),
                );
            }
            simplices.push(match k % 3 {
                0 => Simplex::Point(base),
                1 => Simplex::Segment([base, base + 1]),
                _ => Simplex::Triangle([base, base + 1, base + 2]),
            });
        }
        let idx = DistanceIndex::new(pts, simplices).unwrap();
        for _ in 0..200 {
            let p = Point3::new(
                rng.gen_range(-7.0..7.0),
                rng.gen_range(-7.0..7.0),
                rng.gen_range(-7.0..7.0),
            );
            let brute = (0..idx.len())
                .map(|i| idx.closest_on(i, p).distance_squared)
                .fold(f64::INFINITY, f64::min)
                .sqrt();
            assert_eq!(idx.distance(p), brute);
            let r = brute + 0.7;
            let scan: Vec<usize> = (0..idx.len())
                .filter(|&i| idx.closest_on(i, p).distance_squared <= r * r)
                .collect();
            assert_eq!(idx.within(p, r), scan);
        }
    }
}

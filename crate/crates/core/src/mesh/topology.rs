//! Combinatorial topology of triangle sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Edge, Face};
use crate::geom::Point3;

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// V - E + F of the complex spanned by `faces`.
pub fn euler_characteristic(faces: &[[u32; 3]]) -> i64 {
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for f in faces {
        verts.extend(f.iter().copied());
        edges.insert(Edge::new(f[0], f[1]));
        edges.insert(Edge::new(f[1], f[2]));
        edges.insert(Edge::new(f[0], f[2]));
    }
    let nf: BTreeSet<Face> = faces.iter().map(|&f| Face::from_slice(f)).collect();
    verts.len() as i64 - edges.len() as i64 + nf.len() as i64
}

/// Face indices grouped into edge-connected components, ordered by their
/// smallest face index.
pub fn face_components(faces: &[[u32; 3]]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(faces.len());
    let mut first: HashMap<Edge, usize> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for e in Face::from_slice(*f).edges() {
            match first.get(&e) {
                Some(&j) => uf.union(i, j),
                None => {
                    first.insert(e, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..faces.len() {
        let r = uf.find(i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Consistently orients a closed surface given by unoriented faces, each
/// edge-connected component with positive enclosed volume. `None` if some
/// edge does not have exactly two faces or a component is not orientable.
pub fn orient_closed(faces: &[[u32; 3]], pos: &[Point3]) -> Option<Vec<[u32; 3]>> {
    let mut edge_faces: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for e in Face::from_slice(*f).edges() {
            edge_faces.entry(e).or_default().push(i);
        }
    }
    if edge_faces.values().any(|fs| fs.len() != 2) {
        return None;
    }
    let directed = |f: &[u32; 3], a: u32, b: u32| (0..3).any(|i| f[i] == a && f[(i + 1) % 3] == b);
    let mut out: Vec<Option<[u32; 3]>> = vec![None; faces.len()];
    for comp in face_components(faces) {
        let seed = comp[0];
        out[seed] = Some(faces[seed]);
        let mut stack = vec![seed];
        while let Some(i) = stack.pop() {
            let f = out[i].unwrap();
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let j = edge_faces[&Edge::new(a, b)]
                    .iter()
                    .copied()
                    .find(|&j| j != i)
                    .unwrap();
                let g = faces[j];
                // The neighbor must run b -> a.
                let g = if directed(&g, b, a) {
                    g
                } else {
                    [g[0], g[2], g[1]]
                };
                match out[j] {
                    None => {
                        out[j] = Some(g);
                        stack.push(j);
                    }
                    Some(h) if h != g => return None,
                    Some(_) => {}
                }
            }
        }
        let vol: f64 = comp
            .iter()
            .map(|&i| {
                let [a, b, c] = out[i].unwrap().map(|v| pos[v as usize]);
                a.dot(b.cross(c))
            })
            .sum();
        if vol < 0.0 {
            for &i in &comp {
                let f = out[i].unwrap();
                out[i] = Some([f[0], f[2], f[1]]);
            }
        }
    }
    out.into_iter().collect()
}

/// Component count and ascending Euler characteristics per component.
pub fn surface_topology(faces: &[[u32; 3]]) -> (usize, Vec<i64>) {
    let comps = face_components(faces);
    let mut chis: Vec<i64> = comps
        .iter()
        .map(|c| {
            let fs: Vec<[u32; 3]> = c.iter().map(|&i| faces[i]).collect();
            euler_characteristic(&fs)
        })
        .collect();
    chis.sort_unstable();
    (comps.len(), chis)
}

/// Problems found by [`check_closed_manifold`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceDefects {
    /// Edges with a face count other than two.
    pub open_or_branching_edges: Vec<Edge>,
    /// Vertices whose link is not a single cycle.
    pub singular_vertices: Vec<u32>,
    /// Edges traversed twice in the same direction.
    pub misoriented_edges: Vec<Edge>,
}

impl SurfaceDefects {
    pub fn is_empty(&self) -> bool {
        self.open_or_branching_edges.is_empty()
            && self.singular_vertices.is_empty()
            && self.misoriented_edges.is_empty()
    }
}

/// Checks that oriented `faces` form a closed, consistently oriented
/// 2-manifold.
pub fn check_closed_manifold(faces: &[[u32; 3]]) -> SurfaceDefects {
    let mut d = SurfaceDefects::default();
    let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
    let mut directed: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut link: BTreeMap<u32, Vec<Edge>> = BTreeMap::new();
    for f in faces {
        for k in 0..3 {
            let (a, b, c) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            *count.entry(Edge::new(a, b)).or_default() += 1;
            *directed.entry((a, b)).or_default() += 1;
            link.entry(a).or_default().push(Edge::new(b, c));
        }
    }
    d.open_or_branching_edges = count
        .iter()
        .filter(|(_, &n)| n != 2)
        .map(|(e, _)| *e)
        .collect();
    d.misoriented_edges = directed
        .iter()
        .filter(|(_, &n)| n > 1)
        .map(|(&(a, b), _)| Edge::new(a, b))
        .collect();
    d.misoriented_edges.dedup();
    for (v, edges) in link {
        if link_shape(&edges) != LinkShape::Cycle {
            d.singular_vertices.push(v);
        }
    }
    d
}

/// Shape of a vertex link given as a list of edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkShape {
    Empty,
    Cycle,
    Arc,
    Other,
}

pub fn link_shape(edges: &[Edge]) -> LinkShape {
    if edges.is_empty() {
        return LinkShape::Empty;
    }
    let uniq: BTreeSet<Edge> = edges.iter().copied().collect();
    if uniq.len() != edges.len() {
        return LinkShape::Other;
    }
    let mut deg: BTreeMap<u32, usize> = BTreeMap::new();
    for e in &uniq {
        *deg.entry(e.0[0]).or_default() += 1;
        *deg.entry(e.0[1]).or_default() += 1;
    }
    if deg.values().any(|&d| d > 2) {
        return LinkShape::Other;
    }
    let ids: Vec<u32> = deg.keys().copied().collect();
    let index: HashMap<u32, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(ids.len());
    for e in &uniq {
        uf.union(index[&e.0[0]], index[&e.0[1]]);
    }
    let roots: BTreeSet<usize> = (0..ids.len()).map(|i| uf.find(i)).collect();
    if roots.len() != 1 {
        return LinkShape::Other;
    }
    let ends = deg.values().filter(|&&d| d == 1).count();
    match ends {
        0 => LinkShape::Cycle,
        2 => LinkShape::Arc,
        _ => LinkShape::Other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> Vec<[u32; 3]> {
        // 0,1 = ±x, 2,3 = ±y, 4,5 = ±z
        vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ]
    }

    fn torus(n: u32, m: u32) -> Vec<[u32; 3]> {
        let id = |i: u32, j: u32| (i % n) * m + (j % m);
        let mut f = Vec::new();
        for i in 0..n {
            for j in 0..m {
                f.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                f.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        f
    }

    #[test]
    fn octahedron_chi_two() {
        assert_eq!(euler_characteristic(&octahedron()), 2);
        assert!(check_closed_manifold(&octahedron()).is_empty());
    }

    #[test]
    fn torus_chi_zero() {
        let t = torus(4, 4);
        assert_eq!(euler_characteristic(&t), 0);
        assert!(check_closed_manifold(&t).is_empty());
    }

    #[test]
    fn two_spheres_chi_four() {
        let mut f = octahedron();
        f.extend(octahedron().into_iter().map(|t| t.map(|v| v + 10)));
        assert_eq!(euler_characteristic(&f), 4);
        assert_eq!(surface_topology(&f), (2, vec![2, 2]));
    }

    #[test]
    fn open_surface_is_reported() {
        let mut f = octahedron();
        f.pop();
        let d = check_closed_manifold(&f);
        assert_eq!(d.open_or_branching_edges.len(), 3);
    }

    #[test]
    fn link_shapes() {
        let e = |a, b| Edge::new(a, b);
        assert_eq!(link_shape(&[e(1, 2), e(2, 3), e(3, 1)]), LinkShape::Cycle);
        assert_eq!(link_shape(&[e(1, 2), e(2, 3)]), LinkShape::Arc);
        assert_eq!(
            link_shape(&[e(1, 2), e(2, 3), e(3, 1), e(4, 5), e(5, 6), e(6, 4)]),
            LinkShape::Other
        );
    }
}

//! Split operations.

use super::{Face, TetMesh};
use crate::error::{Error, Result};
use crate::geom::{orient3d, Point3, Sign};

impl TetMesh {
    fn children_positive(&self, children: &[[u32; 4]], m: u32, pm: Point3) -> bool {
        let p = |v: u32| if v == m { pm } else { self.position(v) };
        children
            .iter()
            .all(|t| orient3d(p(t[0]), p(t[1]), p(t[2]), p(t[3])) == Sign::Positive)
    }

    fn replace(&mut self, old: &[u32], children: Vec<([u32; 4], u8)>) {
        for &t in old {
            self.remove_tet(t);
        }
        for (t, r) in children {
            self.add_tet(t, r);
        }
    }

    /// Splits edge `ab` at `position`; every incident tet is halved.
    ///
    /// Refused with `WouldInvert` (mesh unchanged) if any child tet is not
    /// positively oriented.
    pub fn split_edge(&mut self, a: u32, b: u32, position: Point3) -> Result<u32> {
        let ts = self.edge_tets(a, b);
        if ts.is_empty() {
            return Err(Error::MissingSimplex(format!("edge ({a}, {b})")));
        }
        let m = self.vertex_capacity() as u32;
        let mut children = Vec::with_capacity(2 * ts.len());
        let mut ring = Vec::with_capacity(2 * ts.len());
        for &t in &ts {
            let tv = self.tet(t);
            let r = self.region(t);
            children.push((tv.map(|v| if v == b { m } else { v }), r));
            children.push((tv.map(|v| if v == a { m } else { v }), r));
            ring.extend(tv.iter().copied().filter(|&v| v != a && v != b));
        }
        let shapes: Vec<[u32; 4]> = children.iter().map(|c| c.0).collect();
        if !position.is_finite() || !self.children_positive(&shapes, m, position) {
            return Err(Error::WouldInvert);
        }
        ring.sort_unstable();
        ring.dedup();
        let nm = self.add_vertex(position);
        debug_assert_eq!(nm, m);
        self.replace(&ts, children);
        self.input.split_edge(a, b, m, &ring);
        self.shell.split_edge(a, b, m, &ring);
        Ok(m)
    }

    /// Splits `f` at its barycenter; each incident tet becomes three.
    pub fn split_face(&mut self, f: Face) -> Result<u32> {
        let Some((t0, t1)) = self.face_tets(&f) else {
            return Err(Error::MissingSimplex(format!("face {:?}", f.0)));
        };
        let [a, b, c] = f.0;
        let pm = Point3::centroid(&[self.position(a), self.position(b), self.position(c)]);
        let m = self.vertex_capacity() as u32;
        let ts: Vec<u32> = std::iter::once(t0).chain(t1).collect();
        let mut children = Vec::with_capacity(6);
        for &t in &ts {
            let tv = self.tet(t);
            for &x in &f.0 {
                children.push((tv.map(|v| if v == x { m } else { v }), self.region(t)));
            }
        }
        let shapes: Vec<[u32; 4]> = children.iter().map(|c| c.0).collect();
        if !self.children_positive(&shapes, m, pm) {
            return Err(Error::WouldInvert);
        }
        self.add_vertex(pm);
        self.replace(&ts, children);
        self.input.split_face(f, m);
        self.shell.split_face(f, m);
        Ok(m)
    }

    /// Splits tet `t` into four around its barycenter.
    pub fn split_tet(&mut self, t: u32) -> Result<u32> {
        if !self.is_tet_alive(t) {
            return Err(Error::MissingSimplex(format!("tet {t}")));
        }
        let tv = self.tet(t);
        let pm = Point3::centroid(&self.tet_points(t));
        let m = self.vertex_capacity() as u32;
        let r = self.region(t);
        let children: Vec<([u32; 4], u8)> = (0..4)
            .map(|k| {
                let mut c = tv;
                c[k] = m;
                (c, r)
            })
            .collect();
        let shapes: Vec<[u32; 4]> = children.iter().map(|c| c.0).collect();
        if !self.children_positive(&shapes, m, pm) {
            return Err(Error::WouldInvert);
        }
        self.add_vertex(pm);
        self.replace(&[t], children);
        Ok(m)
    }

    /// Cyclic ring of vertices around edge `ab`.
    ///
    /// Returns the ring ordered so that `(a, b, u[i], u[i+1])` is an even
    /// permutation of a stored (positive) tet, together with those tets, and
    /// whether the ring is closed. Open rings (boundary edges) start at the
    /// chain end.
    pub fn edge_ring(&self, a: u32, b: u32) -> (Vec<u32>, Vec<u32>, bool) {
        let ts = self.edge_tets(a, b);
        let mut next = std::collections::HashMap::with_capacity(ts.len());
        let mut has_prev = std::collections::HashSet::with_capacity(ts.len());
        for &t in &ts {
            let tv = self.tet(t);
            let rest: Vec<u32> = tv.iter().copied().filter(|&v| v != a && v != b).collect();
            let (x, y) = if is_even([a, b, rest[0], rest[1]], tv) {
                (rest[0], rest[1])
            } else {
                (rest[1], rest[0])
            };
            next.insert(x, (y, t));
            has_prev.insert(y);
        }
        let start = next
            .keys()
            .copied()
            .filter(|x| !has_prev.contains(x))
            .min()
            .or_else(|| next.keys().copied().min());
        let Some(start) = start else {
            return (Vec::new(), Vec::new(), false);
        };
        let closed = next.keys().all(|x| has_prev.contains(x));
        let mut ring = vec![start];
        let mut tets = Vec::new();
        let mut cur = start;
        while let Some(&(y, t)) = next.get(&cur) {
            tets.push(t);
            if y == start {
                break;
            }
            ring.push(y);
            cur = y;
            if tets.len() > ts.len() {
                break;
            }
        }
        (ring, tets, closed)
    }
}

/// Whether `p` is an even permutation of `t` (same vertex set assumed).
pub(crate) fn is_even(p: [u32; 4], t: [u32; 4]) -> bool {
    let mut idx = p.map(|v| t.iter().position(|&w| w == v).unwrap());
    let mut swaps = 0;
    for i in 0..4 {
        while idx[i] != i {
            let j = idx[i];
            idx.swap(i, j);
            swaps += 1;
        }
    }
    swaps % 2 == 0
}

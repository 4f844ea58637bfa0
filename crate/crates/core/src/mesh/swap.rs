//! Edge removal, face removal and offset-surface edge flips.

use std::collections::BTreeSet;

use super::tetmesh::face_of;
use super::{Face, TetMesh};
use crate::error::{Error, Result};
use crate::geom::Sign;

impl TetMesh {
    fn edge_is_tagged(&self, a: u32, b: u32, ring: &[u32]) -> bool {
        self.input.has_edge(a, b)
            || self.shell.has_edge(a, b)
            || ring.iter().any(|&c| {
                let f = Face::new(a, b, c);
                self.input.has_face(&f) || self.shell.has_face(&f)
            })
    }

    // Fan of the chain `w` (consecutive ring vertices) from `apex`.
    fn fan(&self, apex: u32, w: &[u32], a: u32, b: u32, out: &mut Vec<[u32; 4]>) {
        for p in w.windows(2) {
            if p[0] == apex || p[1] == apex {
                continue;
            }
            out.push([apex, p[0], p[1], b]);
            out.push([apex, p[1], p[0], a]);
        }
    }

    /// New tets must be positive and must not duplicate edges or faces that
    /// exist outside the removed tets.
    fn replacement_ok(&self, removed: &[u32], new: &[[u32; 4]]) -> Result<()> {
        if new.iter().any(|&t| self.orient_of(t) != Sign::Positive) {
            return Err(Error::WouldInvert);
        }
        let mut old_faces = BTreeSet::new();
        let mut old_edges = BTreeSet::new();
        for &t in removed {
            let tv = self.tet(t);
            for i in 0..4 {
                let f = face_of(tv, i);
                old_faces.insert(f);
                old_edges.extend(f.edges());
            }
        }
        for &t in new {
            for i in 0..4 {
                let f = face_of(t, i);
                if !old_faces.contains(&f) && self.has_face(&f) {
                    return Err(Error::TopologyChange);
                }
                for e in f.edges() {
                    if !old_edges.contains(&e) && self.has_edge(e.0[0], e.0[1]) {
                        return Err(Error::TopologyChange);
                    }
                }
            }
        }
        Ok(())
    }

    fn commit(&mut self, removed: &[u32], new: Vec<([u32; 4], u8)>) {
        for &t in removed {
            self.remove_tet(t);
        }
        for (t, r) in new {
            self.add_tet(t, r);
        }
    }

    /// Whether some face around edge `ab` separates different depths.
    pub fn edge_on_interface(&self, a: u32, b: u32) -> bool {
        let ts = self.edge_tets(a, b);
        ts.iter().any(|&t| {
            let tv = self.tet(t);
            (0..4).any(|i| {
                if tv[i] == a || tv[i] == b {
                    return false;
                }
                let f = face_of(tv, i);
                matches!(self.face_tets(&f), Some((t0, Some(t1))) if self.region(t0) != self.region(t1))
            })
        })
    }

    /// Removes interior edge `ab` by re-triangulating its ring as a fan.
    ///
    /// All tets around the edge must share a region, so no interface is
    /// touched. Each ring vertex is tried as the fan apex in ring order.
    pub fn remove_edge(&mut self, a: u32, b: u32) -> Result<()> {
        let (ring, tets, closed) = self.edge_ring(a, b);
        if tets.is_empty() {
            return Err(Error::MissingSimplex(format!("edge ({a}, {b})")));
        }
        if !closed || self.edge_is_tagged(a, b, &ring) {
            return Err(Error::FrozenSimplex);
        }
        let r = self.region(tets[0]);
        if tets.iter().any(|&t| self.region(t) != r) {
            return Err(Error::FrozenSimplex);
        }
        let mut cyc = ring.clone();
        cyc.push(ring[0]);
        let mut last = Error::WouldInvert;
        for &apex in &ring {
            let mut new = Vec::new();
            self.fan(apex, &cyc, a, b, &mut new);
            match self.replacement_ok(&tets, &new) {
                Ok(()) => {
                    self.commit(&tets, new.into_iter().map(|t| (t, r)).collect());
                    return Ok(());
                }
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    /// 3-2 swap: replaces the three tets around `ab` with two.
    pub fn swap_32(&mut self, a: u32, b: u32) -> Result<()> {
        if self.edge_tets(a, b).len() != 3 {
            return Err(Error::InvalidParameter(
                "3-2 swap needs an edge of degree 3".into(),
            ));
        }
        self.remove_edge(a, b)
    }

    /// 2-3 swap: replaces the two tets sharing `f` with three around the
    /// edge joining their apexes.
    pub fn swap_23(&mut self, f: Face) -> Result<()> {
        let Some((t0, Some(t1))) = self.face_tets(&f) else {
            return Err(Error::FrozenSimplex);
        };
        if self.input.has_face(&f) || self.shell.has_face(&f) {
            return Err(Error::FrozenSimplex);
        }
        let r = self.region(t0);
        if self.region(t1) != r {
            return Err(Error::FrozenSimplex);
        }
        let apex = |t: u32| self.tet(t).into_iter().find(|v| !f.contains(*v)).unwrap();
        let (d, e) = (apex(t0), apex(t1));
        let [a, mut b, mut c] = f.0;
        if self.orient_of([a, b, c, d]) != Sign::Positive {
            std::mem::swap(&mut b, &mut c);
        }
        // All three must be positive, which holds only when `de` crosses
        // the interior of `abc`.
        let new: Vec<[u32; 4]> = [[a, b], [b, c], [c, a]]
            .iter()
            .map(|&[x, y]| [d, e, y, x])
            .collect();
        self.replacement_ok(&[t0, t1], &new)?;
        self.commit(&[t0, t1], new.into_iter().map(|t| (t, r)).collect());
        Ok(())
    }

    /// Flips edge `ab` of an offset interface to the edge joining the
    /// apexes of its two interface triangles.
    ///
    /// The tets around `ab` must form two chains of constant, different
    /// depth; both chains are re-triangulated so the interface now passes
    /// through the new edge.
    pub fn flip_surface_edge(&mut self, a: u32, b: u32) -> Result<()> {
        let (ring, tets, closed) = self.edge_ring(a, b);
        if tets.is_empty() {
            return Err(Error::MissingSimplex(format!("edge ({a}, {b})")));
        }
        if !closed || self.edge_is_tagged(a, b, &ring) {
            return Err(Error::FrozenSimplex);
        }
        let k = ring.len();
        // Interface positions: ring vertex i separates tets i-1 and i.
        let cuts: Vec<usize> = (0..k)
            .filter(|&i| self.region(tets[(i + k - 1) % k]) != self.region(tets[i]))
            .collect();
        if cuts.len() != 2 {
            return Err(Error::TopologyChange);
        }
        let (p, q) = (cuts[0], cuts[1]);
        let chain1: Vec<u32> = (p..=q).map(|i| ring[i]).collect();
        let chain2: Vec<u32> = (q..=p + k).map(|i| ring[i % k]).collect();
        let (r1, r2) = (self.region(tets[p]), self.region(tets[q]));
        if (p..q).any(|i| self.region(tets[i]) != r1)
            || (q..p + k).any(|i| self.region(tets[i % k]) != r2)
        {
            return Err(Error::TopologyChange);
        }
        let (c, d) = (ring[p], ring[q]);
        if (chain1.len() == 2 || chain2.len() == 2) && self.edge_on_interface(c, d) {
            return Err(Error::TopologyChange);
        }
        let mut cyc = ring.clone();
        cyc.push(ring[0]);
        let mut last = Error::WouldInvert;
        for (x1, x2) in [(c, c), (d, d), (c, d), (d, c)] {
            let mut n1 = Vec::new();
            let mut n2 = Vec::new();
            // A single-tet chain changes sides; the other chain absorbs it.
            if chain1.len() == 2 {
                self.fan(x2, &cyc, a, b, &mut n2);
            } else if chain2.len() == 2 {
                self.fan(x1, &cyc, a, b, &mut n1);
            } else {
                self.fan(x1, &chain1, a, b, &mut n1);
                self.fan(x2, &chain2, a, b, &mut n2);
            }
            let all: Vec<[u32; 4]> = n1.iter().chain(n2.iter()).copied().collect();
            match self.replacement_ok(&tets, &all) {
                Ok(()) => {
                    let new = n1
                        .into_iter()
                        .map(|t| (t, r1))
                        .chain(n2.into_iter().map(|t| (t, r2)))
                        .collect();
                    self.commit(&tets, new);
                    return Ok(());
                }
                Err(e) => last = e,
            }
        }
        Err(last)
    }
}

//! Half-edge collapse with tag-aware link conditions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::tetmesh::face_of;
use super::{Edge, Face, TetMesh};
use crate::error::{Error, Result};
use crate::geom::Sign;

/// A validated collapse, ready to apply.
#[derive(Clone, Debug)]
pub struct CollapsePlan {
    pub from: u32,
    pub to: u32,
    removed: Vec<u32>,
    moved: Vec<(u32, [u32; 4])>,
}

impl TetMesh {
    /// Checks every condition for collapsing `from` into `to` without
    /// modifying the mesh.
    pub fn plan_collapse(&self, from: u32, to: u32) -> Result<CollapsePlan> {
        let removed = self.edge_tets(from, to);
        if removed.is_empty() {
            return Err(Error::MissingSimplex(format!("edge ({from}, {to})")));
        }
        if self.is_frozen(from) || self.is_frozen(to) {
            return Err(Error::FrozenSimplex);
        }

        let star_regions: BTreeSet<u8> = self.star(from).iter().map(|&t| self.region(t)).collect();
        if star_regions.len() > 2 {
            return Err(Error::TopologyChange);
        }
        if star_regions.len() == 2 {
            let edge_regions: BTreeSet<u8> = removed.iter().map(|&t| self.region(t)).collect();
            let to_regions: BTreeSet<u8> = self.star(to).iter().map(|&t| self.region(t)).collect();
            if edge_regions != star_regions || to_regions != star_regions {
                return Err(Error::TopologyChange);
            }
        }

        let mut moved = Vec::new();
        for &t in self.star(from) {
            let tv = self.tet(t);
            if tv.contains(&to) {
                continue;
            }
            let nt = tv.map(|v| if v == from { to } else { v });
            if self.orient_of(nt) != Sign::Positive {
                return Err(Error::WouldInvert);
            }
            moved.push((t, nt));
        }
        moved.sort_unstable_by_key(|m| m.0);

        if !self.link_condition(from, to) {
            return Err(Error::TopologyChange);
        }
        self.check_interfaces(from, to, &removed, &moved)?;
        Ok(CollapsePlan {
            from,
            to,
            removed,
            moved,
        })
    }

    pub fn apply_collapse(&mut self, plan: CollapsePlan) {
        for &t in &plan.removed {
            self.remove_tet(t);
        }
        for (t, nt) in plan.moved {
            let r = self.region(t);
            self.remove_tet(t);
            self.add_tet(nt, r);
        }
        self.kill_vertex(plan.from);
    }

    /// Merges `from` into `to`; `to` keeps its position.
    pub fn collapse_halfedge(&mut self, from: u32, to: u32) -> Result<()> {
        let plan = self.plan_collapse(from, to)?;
        self.apply_collapse(plan);
        Ok(())
    }

    /// Lk(a) ∩ Lk(b) = Lk(ab) on the tet complex.
    fn link_condition(&self, a: u32, b: u32) -> bool {
        let link = |v: u32| {
            let mut verts = BTreeSet::new();
            let mut edges = BTreeSet::new();
            let mut tris = BTreeSet::new();
            for &t in self.star(v) {
                let tv = self.tet(t);
                let i = tv.iter().position(|&x| x == v).unwrap();
                let f = face_of(tv, i);
                verts.extend(f.0);
                edges.extend(f.edges());
                tris.insert(f);
            }
            (verts, edges, tris)
        };
        let (va, ea, ta) = link(a);
        let (vb, eb, tb) = link(b);
        let mut vab = BTreeSet::new();
        let mut eab = BTreeSet::new();
        for t in self.edge_tets(a, b) {
            let rest: Vec<u32> = self
                .tet(t)
                .into_iter()
                .filter(|&x| x != a && x != b)
                .collect();
            vab.extend(rest.iter().copied());
            eab.insert(Edge::new(rest[0], rest[1]));
        }
        let vi: BTreeSet<u32> = va.intersection(&vb).copied().collect();
        let ei: BTreeSet<Edge> = ea.intersection(&eb).copied().collect();
        vi == vab && ei == eab && ta.intersection(&tb).next().is_none()
    }

    /// The interface faces around `from` and `to` after the collapse must be
    /// exactly the image of those before, with the same depth pairs, and each
    /// interface surface must satisfy its own link condition.
    fn check_interfaces(
        &self,
        from: u32,
        to: u32,
        removed: &[u32],
        moved: &[(u32, [u32; 4])],
    ) -> Result<()> {
        let mut local: BTreeSet<u32> = self.star(from).iter().copied().collect();
        local.extend(self.star(to).iter().copied());
        let map = |v: u32| if v == from { to } else { v };

        // Interfaces before, keyed by face, valued by (inner, outer) depth.
        let mut before: BTreeMap<Face, (u8, u8)> = BTreeMap::new();
        for &t in &local {
            let tv = self.tet(t);
            for i in 0..4 {
                let f = face_of(tv, i);
                if !(f.contains(from) || f.contains(to)) || before.contains_key(&f) {
                    continue;
                }
                if let Some((t0, Some(t1))) = self.face_tets(&f) {
                    let (r0, r1) = (self.region(t0), self.region(t1));
                    if r0 != r1 {
                        before.insert(f, (r0.max(r1), r0.min(r1)));
                    }
                }
            }
        }

        // Surface link condition for every interface containing the edge.
        let ab_pairs: BTreeSet<(u8, u8)> = before
            .iter()
            .filter(|(f, _)| f.contains(from) && f.contains(to))
            .map(|(_, p)| *p)
            .collect();
        for pair in ab_pairs {
            let lk = |v: u32| {
                let mut verts = BTreeSet::new();
                let mut edges = BTreeSet::new();
                for (f, p) in &before {
                    if *p == pair && f.contains(v) {
                        let e = f.opposite(v);
                        verts.extend(e.0);
                        edges.insert(e);
                    }
                }
                (verts, edges)
            };
            let (va, ea) = lk(from);
            let (vb, eb) = lk(to);
            let vab: BTreeSet<u32> = before
                .iter()
                .filter(|(f, p)| **p == pair && f.contains(from) && f.contains(to))
                .flat_map(|(f, _)| f.0)
                .filter(|&x| x != from && x != to)
                .collect();
            let vi: BTreeSet<u32> = va.intersection(&vb).copied().collect();
            if vi != vab || ea.intersection(&eb).next().is_some() {
                return Err(Error::TopologyChange);
            }
        }

        let mut image: BTreeMap<Face, (u8, u8)> = BTreeMap::new();
        for (f, p) in &before {
            if f.contains(from) && f.contains(to) {
                continue;
            }
            let g = Face::new(map(f.0[0]), map(f.0[1]), map(f.0[2]));
            if image.insert(g, *p).is_some() {
                return Err(Error::TopologyChange);
            }
        }

        // Simulated star of `to` after the collapse.
        let removed: BTreeSet<u32> = removed.iter().copied().collect();
        let moved_map: HashMap<u32, [u32; 4]> = moved.iter().copied().collect();
        let mut sides: HashMap<Face, Vec<u8>> = HashMap::new();
        for &t in &local {
            if removed.contains(&t) {
                continue;
            }
            let tv = moved_map.get(&t).copied().unwrap_or_else(|| self.tet(t));
            for i in 0..4 {
                let f = face_of(tv, i);
                if f.contains(to) {
                    sides.entry(f).or_default().push(self.region(t));
                }
            }
        }
        let mut after: BTreeMap<Face, (u8, u8)> = BTreeMap::new();
        for (f, rs) in sides {
            match rs.as_slice() {
                [r0, r1] => {
                    if r0 != r1 {
                        after.insert(f, (*r0.max(r1), *r0.min(r1)));
                    }
                }
                // `to` is interior, so a single side means a duplicated or
                // dangling face.
                _ => return Err(Error::TopologyChange),
            }
        }
        let image_to: BTreeMap<Face, (u8, u8)> =
            image.into_iter().filter(|(f, _)| f.contains(to)).collect();
        if image_to != after {
            return Err(Error::TopologyChange);
        }
        Ok(())
    }
}

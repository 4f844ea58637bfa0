use std::collections::{BTreeSet, HashMap};

use super::{Complex, Edge, Face};
use crate::error::{Error, Result};
use crate::geom::{orient3d, Aabb, Point3, Sign};

pub(crate) const NO_TET: u32 = u32::MAX;

/// Outward-oriented faces of a positive tet, indexed by the opposite vertex.
pub const TET_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

/// Tag of a vertex, edge or face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Input,
    Offset,
    None,
}

/// Tetrahedral background mesh with tagged sub-complexes.
///
/// Tets carry a region depth: 0 is outside every offset volume, and a tet
/// with depth `>= l` lies inside the volume of layer `l`. Offset faces are
/// the interfaces between depths and are not stored.
#[derive(Clone, Debug)]
pub struct TetMesh {
    pos: Vec<Point3>,
    vert_alive: Vec<bool>,
    star: Vec<Vec<u32>>,
    tets: Vec<[u32; 4]>,
    tet_alive: Vec<bool>,
    region: Vec<u8>,
    faces: HashMap<Face, [u32; 2]>,
    n_verts: usize,
    n_tets: usize,
    /// The input complex S.
    pub input: Complex,
    /// An auxiliary complex (re-wrap shells, non-manifold sets); frozen like S.
    pub shell: Complex,
    locked: BTreeSet<u32>,
}

impl TetMesh {
    /// Builds a mesh; every tet must be positively oriented and every face
    /// shared by at most two tets.
    pub fn new(points: Vec<Point3>, tets: Vec<[u32; 4]>) -> Result<TetMesh> {
        let n = points.len();
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite vertex {p:?}")));
        }
        let mut m = TetMesh {
            pos: points,
            vert_alive: vec![true; n],
            star: vec![Vec::new(); n],
            tets: Vec::with_capacity(tets.len()),
            tet_alive: Vec::with_capacity(tets.len()),
            region: Vec::with_capacity(tets.len()),
            faces: HashMap::with_capacity(tets.len() * 2),
            n_verts: n,
            n_tets: 0,
            input: Complex::new(),
            shell: Complex::new(),
            locked: BTreeSet::new(),
        };
        for (i, t) in tets.into_iter().enumerate() {
            if t.iter().any(|&v| v as usize >= n) {
                return Err(Error::InvalidParameter(format!(
                    "tet {i} has an out-of-range vertex"
                )));
            }
            if m.orient_of(t) != Sign::Positive {
                return Err(Error::InvalidParameter(format!(
                    "tet {i} {t:?} is not positively oriented"
                )));
            }
            for k in 0..4 {
                let f = face_of(t, k);
                if let Some(slot) = m.faces.get(&f) {
                    if slot[1] != NO_TET {
                        return Err(Error::InvalidParameter(format!(
                            "face {:?} is shared by more than two tets",
                            f.0
                        )));
                    }
                }
            }
            m.add_tet(t, 0);
        }
        Ok(m)
    }

    // ---- sizes and ids ----

    pub fn num_vertices(&self) -> usize {
        self.n_verts
    }

    pub fn num_tets(&self) -> usize {
        self.n_tets
    }

    /// Upper bound (exclusive) on vertex ids.
    pub fn vertex_capacity(&self) -> usize {
        self.pos.len()
    }

    pub fn tet_capacity(&self) -> usize {
        self.tets.len()
    }

    pub fn is_vertex_alive(&self, v: u32) -> bool {
        self.vert_alive.get(v as usize).copied().unwrap_or(false)
    }

    pub fn is_tet_alive(&self, t: u32) -> bool {
        self.tet_alive.get(t as usize).copied().unwrap_or(false)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.pos.len() as u32).filter(|&v| self.vert_alive[v as usize])
    }

    pub fn tet_ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.tets.len() as u32).filter(|&t| self.tet_alive[t as usize])
    }

    // ---- geometry ----

    #[inline]
    pub fn position(&self, v: u32) -> Point3 {
        self.pos[v as usize]
    }

    pub fn positions(&self) -> &[Point3] {
        &self.pos
    }

    pub(crate) fn set_position(&mut self, v: u32, p: Point3) {
        self.pos[v as usize] = p;
    }

    #[inline]
    pub fn tet(&self, t: u32) -> [u32; 4] {
        self.tets[t as usize]
    }

    pub fn tet_points(&self, t: u32) -> [Point3; 4] {
        self.tets[t as usize].map(|v| self.pos[v as usize])
    }

    pub fn orient_of(&self, t: [u32; 4]) -> Sign {
        let p = |v: u32| self.pos[v as usize];
        orient3d(p(t[0]), p(t[1]), p(t[2]), p(t[3]))
    }

    pub fn bbox(&self) -> Aabb {
        Aabb::from_points(self.vertex_ids().map(|v| &self.pos[v as usize]))
    }

    // ---- regions ----

    #[inline]
    pub fn region(&self, t: u32) -> u8 {
        self.region[t as usize]
    }

    pub fn set_region(&mut self, t: u32, r: u8) {
        self.region[t as usize] = r;
    }

    pub fn regions(&self) -> &[u8] {
        &self.region
    }

    pub fn max_region(&self) -> u8 {
        self.tet_ids().map(|t| self.region(t)).max().unwrap_or(0)
    }

    // ---- incidence ----

    /// Tets incident to `v`.
    pub fn star(&self, v: u32) -> &[u32] {
        &self.star[v as usize]
    }

    /// The one or two tets sharing `f`.
    pub fn face_tets(&self, f: &Face) -> Option<(u32, Option<u32>)> {
        self.faces
            .get(f)
            .map(|s| (s[0], (s[1] != NO_TET).then_some(s[1])))
    }

    pub fn has_face(&self, f: &Face) -> bool {
        self.faces.contains_key(f)
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Neighbor of `t` across the face opposite local vertex `i`.
    pub fn neighbor(&self, t: u32, i: usize) -> Option<u32> {
        let f = face_of(self.tets[t as usize], i);
        let s = self.faces[&f];
        let n = if s[0] == t { s[1] } else { s[0] };
        (n != NO_TET).then_some(n)
    }

    /// Face of `t` opposite local vertex `i`, oriented outward.
    pub fn oriented_face(&self, t: u32, i: usize) -> [u32; 3] {
        let tv = self.tets[t as usize];
        TET_FACES[i].map(|k| tv[k])
    }

    pub fn tet_face(&self, t: u32, i: usize) -> Face {
        face_of(self.tets[t as usize], i)
    }

    /// Tets containing edge `ab`, ascending.
    pub fn edge_tets(&self, a: u32, b: u32) -> Vec<u32> {
        let (s, o) = if self.star[a as usize].len() <= self.star[b as usize].len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut out: Vec<u32> = self.star[s as usize]
            .iter()
            .copied()
            .filter(|&t| self.tets[t as usize].contains(&o))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let (s, o) = if self.star[a as usize].len() <= self.star[b as usize].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.star[s as usize]
            .iter()
            .any(|&t| self.tets[t as usize].contains(&o))
    }

    /// Vertices adjacent to `v`, ascending.
    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self.star[v as usize]
            .iter()
            .flat_map(|&t| self.tets[t as usize])
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All edges, ascending.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for v in self.vertex_ids() {
            for w in self.neighbors(v) {
                if v < w {
                    out.push(Edge([v, w]));
                }
            }
        }
        out
    }

    /// All faces, ascending.
    pub fn faces(&self) -> Vec<Face> {
        let mut out: Vec<Face> = self.faces.keys().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn is_boundary_face(&self, f: &Face) -> bool {
        self.faces.get(f).is_some_and(|s| s[1] == NO_TET)
    }

    pub fn is_boundary_vertex(&self, v: u32) -> bool {
        self.star[v as usize].iter().any(|&t| {
            let tv = self.tets[t as usize];
            (0..4).any(|i| tv[i] != v && self.faces[&face_of(tv, i)][1] == NO_TET)
        })
    }

    pub fn is_boundary_edge(&self, a: u32, b: u32) -> bool {
        self.edge_tets(a, b).iter().any(|&t| {
            let tv = self.tets[t as usize];
            (0..4).any(|i| tv[i] != a && tv[i] != b && self.faces[&face_of(tv, i)][1] == NO_TET)
        })
    }

    /// Outward-oriented boundary faces, ascending by sorted key.
    pub fn boundary_faces(&self) -> Vec<[u32; 3]> {
        let mut out: Vec<(Face, [u32; 3])> = self
            .faces
            .iter()
            .filter(|(_, s)| s[1] == NO_TET)
            .map(|(f, s)| {
                let t = s[0];
                let i = self.tets[t as usize]
                    .iter()
                    .position(|v| !f.contains(*v))
                    .unwrap();
                (*f, self.oriented_face(t, i))
            })
            .collect();
        out.sort_unstable_by_key(|x| x.0);
        out.into_iter().map(|x| x.1).collect()
    }

    // ---- tags ----

    pub fn vertex_tag(&self, v: u32) -> Tag {
        if self.input.has_vertex(v) {
            Tag::Input
        } else if self
            .star(v)
            .windows(2)
            .any(|w| self.region(w[0]) != self.region(w[1]))
        {
            Tag::Offset
        } else {
            Tag::None
        }
    }

    pub fn face_tag(&self, f: &Face) -> Tag {
        if self.input.has_face(f) {
            return Tag::Input;
        }
        match self.face_tets(f) {
            Some((t0, Some(t1))) if self.region(t0) != self.region(t1) => Tag::Offset,
            _ => Tag::None,
        }
    }

    /// Locked vertices are never moved or removed by optimization.
    pub fn lock(&mut self, v: u32) {
        self.locked.insert(v);
    }

    pub fn unlock_all(&mut self) {
        self.locked.clear();
    }

    pub fn locked(&self) -> &BTreeSet<u32> {
        &self.locked
    }

    /// Whether `v` may not be moved or removed: input, shell, locked or boundary.
    pub fn is_frozen(&self, v: u32) -> bool {
        self.input.has_vertex(v)
            || self.shell.has_vertex(v)
            || self.locked.contains(&v)
            || self.is_boundary_vertex(v)
    }

    /// Outward-oriented interface faces of the layer-`layer` volume
    /// (depth `>= layer`), ascending by sorted key.
    pub fn offset_faces(&self, layer: u8) -> Vec<[u32; 3]> {
        let mut out: Vec<(Face, [u32; 3])> = Vec::new();
        for (f, s) in &self.faces {
            if s[1] == NO_TET {
                continue;
            }
            let (r0, r1) = (self.region[s[0] as usize], self.region[s[1] as usize]);
            let inside = match (r0 >= layer, r1 >= layer) {
                (true, false) => s[0],
                (false, true) => s[1],
                _ => continue,
            };
            let i = self.tets[inside as usize]
                .iter()
                .position(|v| !f.contains(*v))
                .unwrap();
            out.push((*f, self.oriented_face(inside, i)));
        }
        out.sort_unstable_by_key(|x| x.0);
        out.into_iter().map(|x| x.1).collect()
    }

    /// Outward-oriented boundary faces of the volume of layer `layer` that
    /// touch the mesh boundary (should be empty).
    pub fn inside_boundary_faces(&self, layer: u8) -> usize {
        self.faces
            .values()
            .filter(|s| s[1] == NO_TET && self.region[s[0] as usize] >= layer)
            .count()
    }

    /// Interface faces between any two different depths, with the depth pair
    /// `(inner, outer)`.
    pub fn interfaces(&self) -> Vec<(Face, u8, u8)> {
        let mut out: Vec<(Face, u8, u8)> = self
            .faces
            .iter()
            .filter(|(_, s)| s[1] != NO_TET)
            .filter_map(|(f, s)| {
                let (r0, r1) = (self.region[s[0] as usize], self.region[s[1] as usize]);
                (r0 != r1).then(|| (*f, r0.max(r1), r0.min(r1)))
            })
            .collect();
        out.sort_unstable();
        out
    }

    // ---- mutation primitives ----

    pub(crate) fn add_vertex(&mut self, p: Point3) -> u32 {
        self.pos.push(p);
        self.vert_alive.push(true);
        self.star.push(Vec::new());
        self.n_verts += 1;
        (self.pos.len() - 1) as u32
    }

    pub(crate) fn kill_vertex(&mut self, v: u32) {
        debug_assert!(self.star[v as usize].is_empty());
        if self.vert_alive[v as usize] {
            self.vert_alive[v as usize] = false;
            self.n_verts -= 1;
        }
    }

    pub(crate) fn add_tet(&mut self, t: [u32; 4], region: u8) -> u32 {
        let id = self.tets.len() as u32;
        self.tets.push(t);
        self.tet_alive.push(true);
        self.region.push(region);
        for &v in &t {
            self.star[v as usize].push(id);
        }
        for i in 0..4 {
            let slot = self.faces.entry(face_of(t, i)).or_insert([NO_TET, NO_TET]);
            if slot[0] == NO_TET {
                slot[0] = id;
            } else {
                debug_assert_eq!(slot[1], NO_TET, "non-manifold face");
                slot[1] = id;
            }
        }
        self.n_tets += 1;
        id
    }

    pub(crate) fn remove_tet(&mut self, id: u32) {
        debug_assert!(self.tet_alive[id as usize]);
        let t = self.tets[id as usize];
        self.tet_alive[id as usize] = false;
        for &v in &t {
            let s = &mut self.star[v as usize];
            if let Some(k) = s.iter().position(|&x| x == id) {
                s.swap_remove(k);
            }
        }
        for i in 0..4 {
            let f = face_of(t, i);
            let slot = self.faces.get_mut(&f).unwrap();
            if slot[0] == id {
                slot[0] = slot[1];
            }
            slot[1] = NO_TET;
            if slot[0] == NO_TET {
                self.faces.remove(&f);
            }
        }
        self.n_tets -= 1;
    }

    /// Renumbers alive vertices and tets densely, preserving order.
    /// Returns the old-to-new vertex map (`u32::MAX` for dead vertices).
    pub fn compact(&mut self) -> Vec<u32> {
        let mut vmap = vec![u32::MAX; self.pos.len()];
        let mut pos = Vec::with_capacity(self.n_verts);
        for v in self.vertex_ids() {
            vmap[v as usize] = pos.len() as u32;
            pos.push(self.pos[v as usize]);
        }
        let mut tets = Vec::with_capacity(self.n_tets);
        let mut region = Vec::with_capacity(self.n_tets);
        for t in self.tet_ids() {
            tets.push(self.tets[t as usize].map(|v| vmap[v as usize]));
            region.push(self.region[t as usize]);
        }
        let mut m = TetMesh::new(pos, tets).expect("compaction keeps a valid mesh");
        m.region = region;
        m.input = self.input.remap(&vmap);
        m.shell = self.shell.remap(&vmap);
        m.locked = self.locked.iter().map(|&v| vmap[v as usize]).collect();
        *self = m;
        vmap
    }
}

#[inline]
pub(crate) fn face_of(t: [u32; 4], i: usize) -> Face {
    let [a, b, c] = TET_FACES[i];
    Face::new(t[a], t[b], t[c])
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn unit_tet() -> TetMesh {
        TetMesh::new(
            vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
                Point3::new(0., 0., 1.),
            ],
            vec![[0, 1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn outward_faces_are_negative_toward_apex() {
        let m = unit_tet();
        for i in 0..4 {
            let f = m.oriented_face(0, i);
            let p = |v: u32| m.position(v);
            assert_eq!(
                orient3d(p(f[0]), p(f[1]), p(f[2]), p(m.tet(0)[i])),
                Sign::Negative
            );
        }
    }

    #[test]
    fn rejects_inverted_tet() {
        let err = TetMesh::new(
            vec![
                Point3::new(0., 0., 0.),
                Point3::new(1., 0., 0.),
                Point3::new(0., 1., 0.),
                Point3::new(0., 0., -1.),
            ],
            vec![[0, 1, 2, 3]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn single_tet_is_all_boundary() {
        let m = unit_tet();
        assert_eq!(m.boundary_faces().len(), 4);
        assert!(m.is_boundary_vertex(0));
        assert_eq!(m.edges().len(), 6);
    }
}

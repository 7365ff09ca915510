//! Finite sets of simplexes with precomputed incidence, and the simplicial
//! and cosimplicial complexes built on top of them.
//!
//! A [`FaceSet`] stores its faces sorted in [`Simplex`] order, so a
//! [`FaceId`] doubles as a rank in the deterministic tie-break order. The
//! boundary of a face is the set of its codimension-1 faces present in the
//! set; the coboundary is the set of codimension-1 cofaces present in the set.

use std::collections::{HashMap, HashSet};
use std::ops::Deref;
use std::sync::OnceLock;

use thiserror::Error;

use crate::simplex::Simplex;

/// Index of a face inside one [`FaceSet`].
pub type FaceId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("face {0:?} is not in the set")]
    FaceNotFound(Simplex),
    #[error("not a simplicial complex: {missing:?} is a face of {face:?} but is absent")]
    NotClosed { face: Simplex, missing: Simplex },
    #[error("not a cosimplicial complex: {missing:?} lies between two faces but is absent")]
    NotCosimplicial { missing: Simplex },
}

/// A finite set of simplexes with a boundary/coboundary index restricted to
/// the set itself.
#[derive(Clone, Default)]
pub struct FaceSet {
    faces: Vec<Simplex>,
    index: OnceLock<HashMap<Simplex, FaceId>>,
    bnd_off: Vec<u32>,
    bnd: Vec<FaceId>,
    cob_off: Vec<u32>,
    cob: Vec<FaceId>,
}

impl std::fmt::Debug for FaceSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.faces.iter()).finish()
    }
}

impl PartialEq for FaceSet {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
    }
}

impl Eq for FaceSet {}

impl FromIterator<Simplex> for FaceSet {
    fn from_iter<I: IntoIterator<Item = Simplex>>(iter: I) -> Self {
        let mut faces: Vec<Simplex> = iter.into_iter().collect();
        faces.sort_unstable();
        faces.dedup();
        FaceSet::from_sorted_unique(faces)
    }
}

impl FaceSet {
    pub fn new<I: IntoIterator<Item = Simplex>>(faces: I) -> Self {
        faces.into_iter().collect()
    }

    pub fn empty() -> Self {
        FaceSet::default()
    }

    /// `faces` must be sorted and free of duplicates.
    pub(crate) fn from_sorted_unique(faces: Vec<Simplex>) -> Self {
        let index: HashMap<Simplex, FaceId> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i as FaceId))
            .collect();
        let mut bnd_off = Vec::with_capacity(faces.len() + 1);
        let mut bnd = Vec::new();
        bnd_off.push(0);
        for face in &faces {
            let start = bnd.len();
            bnd.extend(face.codim1_faces().filter_map(|f| index.get(&f).copied()));
            bnd[start..].sort_unstable();
            bnd_off.push(bnd.len() as u32);
        }
        let (cob_off, cob) = transpose(faces.len(), &bnd_off, &bnd);
        let cell = OnceLock::new();
        let _ = cell.set(index);
        FaceSet {
            faces,
            index: cell,
            bnd_off,
            bnd,
            cob_off,
            cob,
        }
    }

    /// Restriction to a subset given by ascending ids, computed from the
    /// existing incidence without rehashing faces.
    pub fn subset(&self, members: &[FaceId]) -> FaceSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        self.subset_with(members, |g| members.binary_search(&g).ok().map(|i| i as FaceId))
    }

    /// Like [`FaceSet::subset`], with `local` mapping an id of `self` to its
    /// position in `members`, or `None` outside it.
    pub(crate) fn subset_with(&self, members: &[FaceId], local: impl Fn(FaceId) -> Option<FaceId>) -> FaceSet {
        let mut bnd_off = Vec::with_capacity(members.len() + 1);
        let mut bnd = Vec::new();
        bnd_off.push(0);
        for &g in members {
            bnd.extend(self.boundary_ids(g).iter().filter_map(|&b| local(b)));
            bnd_off.push(bnd.len() as u32);
        }
        let (cob_off, cob) = transpose(members.len(), &bnd_off, &bnd);
        FaceSet {
            faces: members.iter().map(|&g| self.faces[g as usize].clone()).collect(),
            index: OnceLock::new(),
            bnd_off,
            bnd,
            cob_off,
            cob,
        }
    }

    /// The faces not listed in `removed`.
    pub fn without<'a, I: IntoIterator<Item = &'a Simplex>>(&self, removed: I) -> FaceSet {
        let drop: HashSet<FaceId> = removed.into_iter().filter_map(|s| self.id_of(s)).collect();
        let keep: Vec<FaceId> = (0..self.len() as FaceId)
            .filter(|id| !drop.contains(id))
            .collect();
        self.subset(&keep)
    }

    fn index(&self) -> &HashMap<Simplex, FaceId> {
        self.index.get_or_init(|| {
            self.faces
                .iter()
                .enumerate()
                .map(|(i, f)| (f.clone(), i as FaceId))
                .collect()
        })
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Faces in ascending [`Simplex`] order.
    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Simplex {
        &self.faces[id as usize]
    }

    pub fn id_of(&self, s: &Simplex) -> Option<FaceId> {
        self.index().get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.id_of(s).is_some()
    }

    /// Largest face dimension, `None` for the empty set.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.last().map(Simplex::dim)
    }

    pub fn boundary_ids(&self, id: FaceId) -> &[FaceId] {
        let i = id as usize;
        &self.bnd[self.bnd_off[i] as usize..self.bnd_off[i + 1] as usize]
    }

    pub fn coboundary_ids(&self, id: FaceId) -> &[FaceId] {
        let i = id as usize;
        &self.cob[self.cob_off[i] as usize..self.cob_off[i + 1] as usize]
    }

    /// Codimension-1 faces of `s` that belong to the set.
    pub fn boundary(&self, s: &Simplex) -> Result<Vec<Simplex>, ComplexError> {
        let id = self.require(s)?;
        Ok(self.boundary_ids(id).iter().map(|&b| self.face(b).clone()).collect())
    }

    /// Codimension-1 cofaces of `s` that belong to the set.
    pub fn coboundary(&self, s: &Simplex) -> Result<Vec<Simplex>, ComplexError> {
        let id = self.require(s)?;
        Ok(self.coboundary_ids(id).iter().map(|&c| self.face(c).clone()).collect())
    }

    pub(crate) fn require(&self, s: &Simplex) -> Result<FaceId, ComplexError> {
        self.id_of(s).ok_or_else(|| ComplexError::FaceNotFound(s.clone()))
    }

    /// Faces that are maximal for inclusion.
    pub fn facets(&self) -> Vec<Simplex> {
        (0..self.len() as FaceId)
            .filter(|&id| self.coboundary_ids(id).is_empty())
            .map(|id| self.face(id).clone())
            .collect()
    }

    /// Faces that are minimal for inclusion. Only meaningful on cosimplicial
    /// sets, where an empty boundary implies no proper face in the set.
    pub fn cofacets(&self) -> Vec<Simplex> {
        (0..self.len() as FaceId)
            .filter(|&id| self.boundary_ids(id).is_empty())
            .map(|id| self.face(id).clone())
            .collect()
    }

    /// Smallest simplicial complex containing the set.
    pub fn closure(&self) -> SimplicialComplex {
        let mut all: HashSet<Simplex> = HashSet::with_capacity(self.len() * 2);
        for face in &self.faces {
            if all.contains(face) {
                continue;
            }
            all.extend(face.subfaces());
        }
        SimplicialComplex(FaceSet::new(all))
    }

    /// `closure(S) \ S`.
    pub fn frontier(&self) -> FaceSet {
        let closure = self.closure();
        FaceSet::new(
            closure
                .faces()
                .iter()
                .filter(|f| !self.contains(f))
                .cloned(),
        )
    }

    /// Every face has all its codimension-1 faces in the set.
    pub fn is_simplicial(&self) -> bool {
        self.first_missing_face().is_none()
    }

    fn first_missing_face(&self) -> Option<(Simplex, Simplex)> {
        (0..self.len() as FaceId).find_map(|id| {
            let face = self.face(id);
            let expected = if face.dim() == 0 { 0 } else { face.dim() + 1 };
            if self.boundary_ids(id).len() == expected {
                return None;
            }
            let missing = face.codim1_faces().find(|f| !self.contains(f))?;
            Some((face.clone(), missing))
        })
    }

    /// Interval closure, tested as "the frontier is a simplicial complex".
    pub fn is_cosimplicial(&self) -> bool {
        self.frontier().is_simplicial()
    }

    /// Checks that the boundary and coboundary indexes agree with each other
    /// and with the face list.
    pub fn incidence_consistent(&self) -> bool {
        let n = self.len() as FaceId;
        for id in 0..n {
            let face = self.face(id);
            let expected: Vec<FaceId> = {
                let mut v: Vec<FaceId> =
                    face.codim1_faces().filter_map(|f| self.id_of(&f)).collect();
                v.sort_unstable();
                v
            };
            if self.boundary_ids(id) != expected.as_slice() {
                return false;
            }
            for &b in self.boundary_ids(id) {
                if b >= n || !self.coboundary_ids(b).contains(&id) {
                    return false;
                }
            }
            for &c in self.coboundary_ids(id) {
                if c >= n || !self.boundary_ids(c).contains(&id) {
                    return false;
                }
            }
        }
        true
    }
}

fn transpose(n: usize, off: &[u32], adj: &[FaceId]) -> (Vec<u32>, Vec<FaceId>) {
    let mut counts = vec![0u32; n + 1];
    for &t in adj {
        counts[t as usize + 1] += 1;
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let mut fill = counts.clone();
    let mut out = vec![0; adj.len()];
    for src in 0..n {
        for &t in &adj[off[src] as usize..off[src + 1] as usize] {
            out[fill[t as usize] as usize] = src as FaceId;
            fill[t as usize] += 1;
        }
    }
    (counts, out)
}

/// A face set closed under taking non-empty subsets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex(FaceSet);

impl SimplicialComplex {
    pub fn new(faces: FaceSet) -> Result<Self, ComplexError> {
        match faces.first_missing_face() {
            None => Ok(SimplicialComplex(faces)),
            Some((face, missing)) => Err(ComplexError::NotClosed { face, missing }),
        }
    }

    /// Closure of the given simplexes.
    pub fn from_facets<I: IntoIterator<Item = Simplex>>(facets: I) -> Self {
        FaceSet::new(facets).closure()
    }

    pub fn empty() -> Self {
        SimplicialComplex::default()
    }

    pub fn face_set(&self) -> &FaceSet {
        &self.0
    }

    pub fn into_face_set(self) -> FaceSet {
        self.0
    }

    /// `(σ, τ)` is a free pair: both present, `σ` a codimension-1 face of
    /// `τ`, and `τ` the only face strictly containing `σ`.
    pub fn is_free_pair(&self, sigma: &Simplex, tau: &Simplex) -> bool {
        let (Some(s), Some(t)) = (self.id_of(sigma), self.id_of(tau)) else {
            return false;
        };
        sigma.is_facet_of(tau) && self.coboundary_ids(s) == [t]
    }

    /// Per-dimension face counts, index = dimension.
    pub fn face_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for f in self.faces() {
            counts[f.dim()] += 1;
        }
        counts
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Simplex> {
        self.faces().iter().take_while(|f| f.dim() == 0)
    }
}

impl Deref for SimplicialComplex {
    type Target = FaceSet;
    fn deref(&self) -> &FaceSet {
        &self.0
    }
}

/// A face set that is interval-closed: `σ ⊆ ν ⊆ τ` with `σ, τ` in the set
/// forces `ν` into the set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CosimplicialComplex(FaceSet);

impl CosimplicialComplex {
    pub fn new(faces: FaceSet) -> Result<Self, ComplexError> {
        let frontier = faces.frontier();
        match frontier.first_missing_face() {
            None => Ok(CosimplicialComplex(faces)),
            Some((_, missing)) => Err(ComplexError::NotCosimplicial { missing }),
        }
    }

    /// Wraps a set the caller already knows to be interval-closed, such as a
    /// section of a stack.
    pub(crate) fn new_unchecked(faces: FaceSet) -> Self {
        debug_assert!(faces.len() > 2000 || faces.is_cosimplicial());
        CosimplicialComplex(faces)
    }

    /// `K \ L` for simplicial complexes `L ⊆ K`.
    pub fn difference(k: &SimplicialComplex, l: &SimplicialComplex) -> Self {
        let keep: Vec<FaceId> = (0..k.len() as FaceId)
            .filter(|&id| !l.contains(k.face(id)))
            .collect();
        CosimplicialComplex(k.subset(&keep))
    }

    pub fn face_set(&self) -> &FaceSet {
        &self.0
    }

    pub fn into_face_set(self) -> FaceSet {
        self.0
    }

    /// The frontier of a cosimplicial complex is always simplicial.
    pub fn frontier_complex(&self) -> SimplicialComplex {
        SimplicialComplex(self.0.frontier())
    }
}

impl Deref for CosimplicialComplex {
    type Target = FaceSet;
    fn deref(&self) -> &FaceSet {
        &self.0
    }
}

impl From<SimplicialComplex> for CosimplicialComplex {
    fn from(k: SimplicialComplex) -> Self {
        CosimplicialComplex(k.0)
    }
}

//! Simplex-wise Morse sequences, their gradient vector fields, and the
//! predicates that relate a sequence to a stack.
//!
//! A sequence is stored as its list of items: a critical simplex adds one
//! face (an elementary filling), a regular pair `(σ, τ)` adds two (an
//! elementary expansion). The nested complexes are recovered by [`replay`].

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::complex::{FaceSet, SimplicialComplex};
use crate::simplex::Simplex;
use crate::stack::{Level, Stack};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("regular pair {0:?} / {1:?}: first face must be a codimension-1 face of the second")]
    BadPair(Simplex, Simplex),
    #[error("face {0:?} occurs more than once")]
    DuplicateFace(Simplex),
    #[error("sequences do not share the same start and end complexes")]
    EndpointMismatch,
    #[error("vector field pairs overlap on {0:?}")]
    Overlap(Simplex),
    #[error("pair {0:?} / {1:?} has unequal stack values")]
    UnequalValues(Simplex, Simplex),
    #[error("face {0:?} is not in the domain")]
    UnknownFace(Simplex),
}

/// One step of a simplex-wise sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SequenceItem {
    Critical(Simplex),
    Regular(Simplex, Simplex),
}

impl SequenceItem {
    pub fn regular(sigma: Simplex, tau: Simplex) -> Result<Self, SequenceError> {
        if !sigma.is_facet_of(&tau) {
            return Err(SequenceError::BadPair(sigma, tau));
        }
        Ok(SequenceItem::Regular(sigma, tau))
    }

    /// Faces added by this item, lower face first.
    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        let (a, b) = match self {
            SequenceItem::Critical(nu) => (nu, None),
            SequenceItem::Regular(sigma, tau) => (sigma, Some(tau)),
        };
        std::iter::once(a).chain(b)
    }

    /// The face that orders the item: `ν` for a critical face, `τ` for a pair.
    pub fn key(&self) -> &Simplex {
        match self {
            SequenceItem::Critical(nu) => nu,
            SequenceItem::Regular(_, tau) => tau,
        }
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, SequenceItem::Critical(_))
    }

    /// Stack value of the item: `F(ν)` for a critical face, `F(σ)` for a
    /// pair (equal to `F(τ)` in an F-sequence).
    pub fn value(&self, stack: &Stack) -> Option<Level> {
        match self {
            SequenceItem::Critical(nu) => stack.value(nu),
            SequenceItem::Regular(sigma, _) => stack.value(sigma),
        }
    }
}

/// Ordered list of items starting from a base complex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplexWiseSequence {
    base: SimplicialComplex,
    items: Vec<SequenceItem>,
}

impl SimplexWiseSequence {
    /// Checks that pairs are codimension-1 and that no face repeats across
    /// the base and the items. Whether the steps are legal expansions and
    /// fillings is the job of [`validate_morse`].
    pub fn new(base: SimplicialComplex, items: Vec<SequenceItem>) -> Result<Self, SequenceError> {
        let mut seen: HashSet<&Simplex> = base.faces().iter().collect();
        for item in &items {
            if let SequenceItem::Regular(sigma, tau) = item {
                if !sigma.is_facet_of(tau) {
                    return Err(SequenceError::BadPair(sigma.clone(), tau.clone()));
                }
            }
            for f in item.faces() {
                if !seen.insert(f) {
                    return Err(SequenceError::DuplicateFace(f.clone()));
                }
            }
        }
        Ok(SimplexWiseSequence { base, items })
    }

    pub fn from_empty(items: Vec<SequenceItem>) -> Result<Self, SequenceError> {
        Self::new(SimplicialComplex::empty(), items)
    }

    pub(crate) fn new_unchecked(base: SimplicialComplex, items: Vec<SequenceItem>) -> Self {
        SimplexWiseSequence { base, items }
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn items(&self) -> &[SequenceItem] {
        &self.items
    }

    pub fn into_items(self) -> Vec<SequenceItem> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of faces added by the items.
    pub fn added_faces(&self) -> usize {
        self.items.iter().map(|i| i.faces().count()).sum()
    }

    /// Faces of the final complex, base included.
    pub fn final_faces(&self) -> FaceSet {
        FaceSet::new(
            self.base
                .faces()
                .iter()
                .cloned()
                .chain(self.items.iter().flat_map(|i| i.faces().cloned())),
        )
    }
}

/// Why a sequence fails to be a Morse sequence.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseViolation {
    #[error("base complex is not contained in the target complex")]
    BaseOutsideTarget,
    #[error("item {step}: face {face:?} is not in the target complex")]
    UnknownFace { step: usize, face: Simplex },
    #[error("item {step}: face {face:?} is already present")]
    AlreadyPresent { step: usize, face: Simplex },
    #[error("item {step}: face {missing:?} of {face:?} is not present yet")]
    MissingFace {
        step: usize,
        face: Simplex,
        missing: Simplex,
    },
    #[error("item {step}: {sigma:?} is not a codimension-1 face of {tau:?}")]
    BadPair {
        step: usize,
        sigma: Simplex,
        tau: Simplex,
    },
    #[error("sequence ends with {got} faces, target complex has {expected}")]
    Incomplete { got: usize, expected: usize },
}

/// Replays `seq` against `k`: every critical item must be an elementary
/// filling, every regular item an elementary expansion, and the last complex
/// must be `k`.
pub fn validate_morse(seq: &SimplexWiseSequence, k: &SimplicialComplex) -> Result<(), MorseViolation> {
    let mut present = vec![false; k.len()];
    let mut count = 0usize;
    for f in seq.base.faces() {
        let id = k.id_of(f).ok_or(MorseViolation::BaseOutsideTarget)?;
        present[id as usize] = true;
        count += 1;
    }
    for (step, item) in seq.items.iter().enumerate() {
        let lookup = |face: &Simplex| {
            k.id_of(face).ok_or_else(|| MorseViolation::UnknownFace {
                step,
                face: face.clone(),
            })
        };
        let absent = |id: u32, present: &[bool]| {
            if present[id as usize] {
                Err(MorseViolation::AlreadyPresent {
                    step,
                    face: k.face(id).clone(),
                })
            } else {
                Ok(())
            }
        };
        // k is simplicial, so boundary_ids lists every codimension-1 face.
        let faces_present = |id: u32, except: Option<u32>, present: &[bool]| {
            match k
                .boundary_ids(id)
                .iter()
                .find(|&&b| Some(b) != except && !present[b as usize])
            {
                Some(&b) => Err(MorseViolation::MissingFace {
                    step,
                    face: k.face(id).clone(),
                    missing: k.face(b).clone(),
                }),
                None => Ok(()),
            }
        };
        match item {
            SequenceItem::Critical(nu) => {
                let id = lookup(nu)?;
                absent(id, &present)?;
                faces_present(id, None, &present)?;
                present[id as usize] = true;
                count += 1;
            }
            SequenceItem::Regular(sigma, tau) => {
                if !sigma.is_facet_of(tau) {
                    return Err(MorseViolation::BadPair {
                        step,
                        sigma: sigma.clone(),
                        tau: tau.clone(),
                    });
                }
                let s = lookup(sigma)?;
                let t = lookup(tau)?;
                absent(s, &present)?;
                absent(t, &present)?;
                faces_present(s, None, &present)?;
                faces_present(t, Some(s), &present)?;
                // σ was absent, so no present face contains it: once added,
                // τ is its only coface and (σ, τ) is free.
                present[s as usize] = true;
                present[t as usize] = true;
                count += 2;
            }
        }
    }
    if count != k.len() {
        return Err(MorseViolation::Incomplete {
            got: count,
            expected: k.len(),
        });
    }
    Ok(())
}

/// Every regular pair has equal stack values on its two faces.
pub fn is_f_sequence(seq: &SimplexWiseSequence, stack: &Stack) -> bool {
    seq.items.iter().all(|item| match item {
        SequenceItem::Critical(nu) => stack.value(nu).is_some(),
        SequenceItem::Regular(sigma, tau) => match (stack.value(sigma), stack.value(tau)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
    })
}

/// Item values never decrease along the sequence. Assumes an F-sequence.
pub fn is_flooding(seq: &SimplexWiseSequence, stack: &Stack) -> bool {
    let mut last = Level::MIN;
    for item in &seq.items {
        match item.value(stack) {
            Some(v) if v >= last => last = v,
            _ => return false,
        }
    }
    true
}

/// For each level of `stack`, the index `i` such that the replayed complex
/// `K_i` equals the cut at that level, if any.
pub fn cut_positions(seq: &SimplexWiseSequence, stack: &Stack) -> Vec<(Level, Option<usize>)> {
    // K_i equals the cut at λ iff it has as many faces and none above λ.
    let mut prefix: Vec<(usize, Option<Level>)> = Vec::with_capacity(seq.len() + 1);
    let mut size = seq.base.len();
    let mut max = seq.base.faces().iter().filter_map(|f| stack.value(f)).max();
    prefix.push((size, max));
    for item in &seq.items {
        for f in item.faces() {
            size += 1;
            let v = stack.value(f).unwrap_or(Level::MAX);
            max = Some(max.map_or(v, |m| m.max(v)));
        }
        prefix.push((size, max));
    }
    let mut cut_size = 0usize;
    let mut counts = stack.level_partition().into_iter();
    stack
        .levels()
        .iter()
        .map(|level| {
            cut_size += counts.next().map_or(0, |(_, ids)| ids.len());
            let pos = prefix
                .iter()
                .position(|&(n, m)| n == cut_size && m.is_none_or(|m| m <= level));
            (level, pos)
        })
        .collect()
}

/// A set of disjoint pairs `(σ, τ)` with `σ` a codimension-1 face of `τ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    pairs: BTreeSet<(Simplex, Simplex)>,
}

impl VectorField {
    pub fn new<I: IntoIterator<Item = (Simplex, Simplex)>>(pairs: I) -> Result<Self, SequenceError> {
        let mut used = HashSet::new();
        let mut set = BTreeSet::new();
        for (sigma, tau) in pairs {
            if !sigma.is_facet_of(&tau) {
                return Err(SequenceError::BadPair(sigma, tau));
            }
            for f in [&sigma, &tau] {
                if !used.insert(f.clone()) {
                    return Err(SequenceError::Overlap(f.clone()));
                }
            }
            set.insert((sigma, tau));
        }
        Ok(VectorField { pairs: set })
    }

    /// Checks that the field lives on `stack`: all faces in its domain and
    /// `F(σ) = F(τ)` for every pair.
    pub fn check_on_stack(&self, stack: &Stack) -> Result<(), SequenceError> {
        for (sigma, tau) in &self.pairs {
            let a = stack
                .value(sigma)
                .ok_or_else(|| SequenceError::UnknownFace(sigma.clone()))?;
            let b = stack
                .value(tau)
                .ok_or_else(|| SequenceError::UnknownFace(tau.clone()))?;
            if a != b {
                return Err(SequenceError::UnequalValues(sigma.clone(), tau.clone()));
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> &BTreeSet<(Simplex, Simplex)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, sigma: &Simplex, tau: &Simplex) -> bool {
        self.pairs.contains(&(sigma.clone(), tau.clone()))
    }
}

/// The set of regular pairs of a sequence.
pub fn gradient_vector_field(seq: &SimplexWiseSequence) -> VectorField {
    VectorField {
        pairs: seq
            .items
            .iter()
            .filter_map(|item| match item {
                SequenceItem::Regular(sigma, tau) => Some((sigma.clone(), tau.clone())),
                SequenceItem::Critical(_) => None,
            })
            .collect(),
    }
}

/// Two sequences with the same endpoints are equivalent when they have the
/// same gradient vector field.
pub fn equivalent(a: &SimplexWiseSequence, b: &SimplexWiseSequence) -> Result<bool, SequenceError> {
    if a.base != b.base || a.final_faces() != b.final_faces() {
        return Err(SequenceError::EndpointMismatch);
    }
    Ok(gradient_vector_field(a) == gradient_vector_field(b))
}

/// Number of critical items per dimension.
pub fn critical_counts(seq: &SimplexWiseSequence) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for item in &seq.items {
        if let SequenceItem::Critical(nu) = item {
            *counts.entry(nu.dim()).or_insert(0) += 1;
        }
    }
    counts
}

/// Lazily yields `K_0 = base, K_1, …, K_k`. Each step materializes a full
/// complex, so this is meant for small inputs.
pub fn replay(seq: &SimplexWiseSequence) -> Replay<'_> {
    Replay {
        seq,
        current: seq.base.faces().to_vec(),
        next: 0,
    }
}

pub struct Replay<'a> {
    seq: &'a SimplexWiseSequence,
    current: Vec<Simplex>,
    next: usize,
}

impl Iterator for Replay<'_> {
    type Item = SimplicialComplex;

    fn next(&mut self) -> Option<SimplicialComplex> {
        if self.next > self.seq.items.len() {
            return None;
        }
        if self.next > 0 {
            self.current
                .extend(self.seq.items[self.next - 1].faces().cloned());
        }
        self.next += 1;
        let faces = FaceSet::new(self.current.iter().cloned());
        Some(SimplicialComplex::new(faces).expect("replay of a valid Morse sequence"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.seq.items.len() + 1 - self.next;
        (left, Some(left))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn c(v: &[u32]) -> SequenceItem {
        SequenceItem::Critical(s(v))
    }

    fn r(a: &[u32], b: &[u32]) -> SequenceItem {
        SequenceItem::regular(s(a), s(b)).unwrap()
    }

    fn seq(items: Vec<SequenceItem>) -> SimplexWiseSequence {
        SimplexWiseSequence::from_empty(items).unwrap()
    }

    fn edge() -> SimplicialComplex {
        SimplicialComplex::from_facets([s(&[1, 2])])
    }

    fn hollow() -> SimplicialComplex {
        SimplicialComplex::from_facets([s(&[1, 2]), s(&[1, 3]), s(&[2, 3])])
    }

    fn edge_stack(values: [Level; 3]) -> Stack {
        Stack::from_values(edge(), values.to_vec()).unwrap()
    }

    #[test]
    fn morse_validation_examples() {
        assert_eq!(validate_morse(&seq(vec![c(&[1]), r(&[2], &[1, 2])]), &edge()), Ok(()));
        assert!(matches!(
            validate_morse(&seq(vec![c(&[1, 2])]), &edge()),
            Err(MorseViolation::MissingFace { step: 0, .. })
        ));
        let hollow_seq = seq(vec![c(&[3]), r(&[2], &[2, 3]), r(&[1], &[1, 3]), c(&[1, 2])]);
        assert_eq!(validate_morse(&hollow_seq, &hollow()), Ok(()));
    }

    #[test]
    fn morse_validation_rejections() {
        // expansion whose τ is missing another face
        assert!(validate_morse(&seq(vec![r(&[1], &[1, 2])]), &edge()).is_err());
        // stops short of the target
        assert_eq!(
            validate_morse(&seq(vec![c(&[1])]), &edge()),
            Err(MorseViolation::Incomplete { got: 1, expected: 3 })
        );
        // face outside the target
        assert!(matches!(
            validate_morse(&seq(vec![c(&[7])]), &edge()),
            Err(MorseViolation::UnknownFace { .. })
        ));
        // duplicates are caught at construction
        assert_eq!(
            SimplexWiseSequence::from_empty(vec![c(&[1]), c(&[1])]),
            Err(SequenceError::DuplicateFace(s(&[1])))
        );
    }

    #[test]
    fn first_item_from_empty_is_a_vertex() {
        let s0 = seq(vec![c(&[1]), r(&[2], &[1, 2])]);
        assert!(matches!(&s0.items()[0], SequenceItem::Critical(v) if v.dim() == 0));
    }

    #[test]
    fn f_sequence_examples() {
        let s0 = seq(vec![c(&[1]), r(&[2], &[1, 2])]);
        assert!(is_f_sequence(&s0, &Stack::constant(edge(), 1)));
        // faces ordered {1} {2} {1,2}
        assert!(!is_f_sequence(&s0, &edge_stack([0, 0, 1])));
        assert!(is_f_sequence(&s0, &edge_stack([0, 1, 1])));
    }

    #[test]
    fn flooding_examples() {
        let f = edge_stack([0, 1, 1]);
        assert!(is_flooding(&seq(vec![c(&[1]), r(&[2], &[1, 2])]), &f));
        assert!(!is_flooding(&seq(vec![c(&[2]), c(&[1]), c(&[1, 2])]), &f));
        let hollow_seq = seq(vec![c(&[3]), r(&[2], &[2, 3]), r(&[1], &[1, 3]), c(&[1, 2])]);
        assert!(is_flooding(&hollow_seq, &Stack::constant(hollow(), 4)));
    }

    #[test]
    fn cut_positions_track_flooding() {
        let f = edge_stack([0, 1, 1]);
        let good = seq(vec![c(&[1]), r(&[2], &[1, 2])]);
        assert_eq!(cut_positions(&good, &f), vec![(0, Some(1)), (1, Some(2))]);
        let bad = seq(vec![c(&[2]), c(&[1]), c(&[1, 2])]);
        assert_eq!(cut_positions(&bad, &f), vec![(0, None), (1, Some(3))]);
    }

    #[test]
    fn gradient_fields() {
        let gvf = gradient_vector_field(&seq(vec![c(&[1]), r(&[2], &[1, 2])]));
        assert_eq!(gvf, VectorField::new([(s(&[2]), s(&[1, 2]))]).unwrap());
        assert!(gradient_vector_field(&seq(vec![c(&[1]), c(&[2]), c(&[1, 2])])).is_empty());
    }

    #[test]
    fn vector_field_invariants() {
        assert_eq!(
            VectorField::new([(s(&[1]), s(&[1, 2])), (s(&[1]), s(&[1, 3]))]),
            Err(SequenceError::Overlap(s(&[1])))
        );
        assert!(VectorField::new([(s(&[1]), s(&[2, 3]))]).is_err());
        let v = VectorField::new([(s(&[2]), s(&[1, 2]))]).unwrap();
        assert!(v.check_on_stack(&edge_stack([0, 1, 1])).is_ok());
        assert!(v.check_on_stack(&edge_stack([0, 0, 1])).is_err());
    }

    #[test]
    fn equivalence() {
        let a = seq(vec![c(&[1]), r(&[2], &[1, 2])]);
        assert_eq!(equivalent(&a, &a), Ok(true));
        let x = seq(vec![c(&[1]), c(&[2]), c(&[1, 2])]);
        let y = seq(vec![c(&[2]), c(&[1]), c(&[1, 2])]);
        assert_eq!(equivalent(&x, &y), Ok(true));
        assert_eq!(equivalent(&a, &x), Ok(false));
        let other = seq(vec![c(&[1])]);
        assert_eq!(equivalent(&a, &other), Err(SequenceError::EndpointMismatch));
    }

    #[test]
    fn counts() {
        assert_eq!(
            critical_counts(&seq(vec![c(&[1]), r(&[2], &[1, 2])])),
            BTreeMap::from([(0, 1)])
        );
        let hollow_seq = seq(vec![c(&[3]), r(&[2], &[2, 3]), r(&[1], &[1, 3]), c(&[1, 2])]);
        assert_eq!(critical_counts(&hollow_seq), BTreeMap::from([(0, 1), (1, 1)]));
        let all = seq(vec![c(&[1]), c(&[2]), c(&[1, 2])]);
        let counts: HashMap<usize, usize> = critical_counts(&all).into_iter().collect();
        assert_eq!(counts, HashMap::from([(0, 2), (1, 1)]));
    }

    #[test]
    fn replay_steps() {
        let steps: Vec<_> = replay(&seq(vec![c(&[1])])).collect();
        assert_eq!(steps.len(), 2);
        assert!(steps[0].is_empty());
        assert_eq!(steps[1].faces(), &[s(&[1])]);

        let base = SimplicialComplex::from_facets([s(&[4])]);
        let empty = SimplexWiseSequence::new(base.clone(), vec![]).unwrap();
        let steps: Vec<_> = replay(&empty).collect();
        assert_eq!(steps, vec![base]);

        let steps: Vec<_> = replay(&seq(vec![c(&[1]), r(&[2], &[1, 2])])).collect();
        assert_eq!(steps.len(), 3);
        assert_eq!(steps[2], edge());
    }
}

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::complex::FaceId;
use crate::sequence::{SequenceError, SequenceItem, SimplexWiseSequence, VectorField};
use crate::simplex::Simplex;
use crate::stack::Stack;

use super::VerifyError;

/// Alternating list `σ_0, τ_0, σ_1, …, τ_{k-1}, σ_k` where each `(σ_i, τ_i)`
/// is a pair of the field and `σ_{i+1} ≠ σ_i` is a face of `τ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientPath {
    faces: Vec<Simplex>,
}

impl GradientPath {
    pub fn new(faces: Vec<Simplex>) -> Self {
        assert!(faces.len() % 2 == 1, "a gradient path has odd length");
        GradientPath { faces }
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    /// Common dimension of the lower faces.
    pub fn dimension(&self) -> usize {
        self.faces[0].dim()
    }

    pub fn is_trivial(&self) -> bool {
        self.faces.len() == 1
    }

    pub fn is_closed(&self) -> bool {
        self.faces.first() == self.faces.last()
    }

    /// Checks the path against `field`.
    pub fn is_path_in(&self, field: &VectorField) -> bool {
        let p = self.dimension();
        self.faces.chunks(2).zip(self.faces[1..].chunks(2)).all(|(a, b)| {
            let (sigma, tau, next) = (&a[0], &a[1], &b[1]);
            sigma.dim() == p
                && field.contains(sigma, tau)
                && next.is_facet_of(tau)
                && next != sigma
        })
    }
}

impl fmt::Display for GradientPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, s) in self.faces.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s:?}")?;
        }
        write!(f, ">")
    }
}

/// A non-trivial closed gradient path of `field`, if one exists.
pub fn find_closed_path(field: &VectorField) -> Option<GradientPath> {
    // Lower faces of the pairs are the nodes; σ → σ' when σ' ≠ σ is a face
    // of the partner of σ and σ' is itself a lower face.
    let lower: Vec<(&Simplex, &Simplex)> = field.pairs().iter().map(|(s, t)| (s, t)).collect();
    let node_of: HashMap<&Simplex, usize> = lower.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
    let successors = |i: usize| -> Vec<usize> {
        let (sigma, tau) = lower[i];
        tau.codim1_faces()
            .filter(|f| f != sigma)
            .filter_map(|f| node_of.get(&f).copied())
            .collect()
    };

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; lower.len()];
    for root in 0..lower.len() {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, successors(root))];
        mark[root] = Mark::Open;
        while let Some((node, pending)) = stack.last_mut() {
            let node = *node;
            match pending.pop() {
                Some(next) => match mark[next] {
                    Mark::New => {
                        mark[next] = Mark::Open;
                        stack.push((next, successors(next)));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|(n, _)| *n == next).expect("open node on stack");
                        let mut faces = Vec::new();
                        for (n, _) in &stack[start..] {
                            faces.push(lower[*n].0.clone());
                            faces.push(lower[*n].1.clone());
                        }
                        faces.push(lower[next].0.clone());
                        return Some(GradientPath::new(faces));
                    }
                    Mark::Done => {}
                },
                None => {
                    mark[node] = Mark::Done;
                    stack.pop();
                }
            }
        }
    }
    None
}

/// No non-trivial closed gradient path. Errors when `field` has a face
/// outside `domain`.
pub fn is_acyclic(field: &VectorField, domain: &crate::complex::FaceSet) -> Result<bool, VerifyError> {
    for (sigma, tau) in field.pairs() {
        for f in [sigma, tau] {
            if !domain.contains(f) {
                return Err(SequenceError::UnknownFace(f.clone()).into());
            }
        }
    }
    Ok(find_closed_path(field).is_none())
}

/// A Morse sequence on `stack` whose gradient vector field is `field`.
///
/// Items are emitted as soon as their faces are available: a critical face
/// once all its codimension-1 faces are present, a pair once every face of
/// `σ` and every face of `τ` other than `σ` is present. Among ready items the
/// one with the smallest key face goes first.
pub fn sequence_from_gvf(field: &VectorField, stack: &Stack) -> Result<SimplexWiseSequence, VerifyError> {
    field.check_on_stack(stack)?;
    let k = stack.complex().map_err(|_| VerifyError::NotSimplicial)?;
    let n = k.len();
    // partner[f] = the other face of f's pair; u32::MAX when critical.
    let mut partner = vec![FaceId::MAX; n];
    for (sigma, tau) in field.pairs() {
        let (s, t) = (k.id_of(sigma).expect("checked"), k.id_of(tau).expect("checked"));
        partner[s as usize] = t;
        partner[t as usize] = s;
    }
    let is_lower = |f: FaceId| partner[f as usize] != FaceId::MAX && partner[f as usize] > f;
    // The key face of an item represents it: τ for a pair, ν otherwise.
    let key = |f: FaceId| if is_lower(f) { partner[f as usize] } else { f };

    let mut waiting = vec![0u32; n];
    for f in 0..n as FaceId {
        if is_lower(f) {
            continue;
        }
        let deps = match partner[f as usize] {
            FaceId::MAX => k.boundary_ids(f).len(),
            s => k.boundary_ids(s).len() + k.boundary_ids(f).len() - 1,
        };
        waiting[f as usize] = deps as u32;
    }
    let mut ready: BinaryHeap<Reverse<FaceId>> = (0..n as FaceId)
        .filter(|&f| !is_lower(f) && waiting[f as usize] == 0)
        .map(Reverse)
        .collect();

    let mut items = Vec::with_capacity(n);
    let mut emitted = 0usize;
    let release = |f: FaceId, own: FaceId, waiting: &mut [u32], ready: &mut BinaryHeap<Reverse<FaceId>>| {
        for &g in k.coboundary_ids(f) {
            if g == own {
                continue;
            }
            let item = key(g);
            waiting[item as usize] -= 1;
            if waiting[item as usize] == 0 {
                ready.push(Reverse(item));
            }
        }
    };
    while let Some(Reverse(top)) = ready.pop() {
        match partner[top as usize] {
            FaceId::MAX => {
                items.push(SequenceItem::Critical(k.face(top).clone()));
                release(top, FaceId::MAX, &mut waiting, &mut ready);
                emitted += 1;
            }
            s => {
                items.push(SequenceItem::Regular(k.face(s).clone(), k.face(top).clone()));
                release(s, top, &mut waiting, &mut ready);
                release(top, FaceId::MAX, &mut waiting, &mut ready);
                emitted += 2;
            }
        }
    }
    if emitted < n {
        let witness = find_closed_path(field).expect("a stuck emission implies a closed path");
        return Err(VerifyError::Cyclic(witness));
    }
    Ok(SimplexWiseSequence::new(Default::default(), items)?)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::sequence::{gradient_vector_field, validate_morse};

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn hollow() -> SimplicialComplex {
        SimplicialComplex::from_facets([s(&[1, 2]), s(&[1, 3]), s(&[2, 3])])
    }

    fn cyclic_field() -> VectorField {
        VectorField::new([
            (s(&[1]), s(&[1, 2])),
            (s(&[2]), s(&[2, 3])),
            (s(&[3]), s(&[1, 3])),
        ])
        .unwrap()
    }

    #[test]
    fn single_pair_is_acyclic() {
        let k = SimplicialComplex::from_facets([s(&[1, 2])]);
        let v = VectorField::new([(s(&[1]), s(&[1, 2]))]).unwrap();
        assert_eq!(is_acyclic(&v, &k), Ok(true));
    }

    #[test]
    fn hollow_cycle_has_witness() {
        let v = cyclic_field();
        assert_eq!(is_acyclic(&v, &hollow()), Ok(false));
        let path = find_closed_path(&v).unwrap();
        assert!(path.is_closed());
        assert!(!path.is_trivial());
        assert!(path.is_path_in(&v));
        assert_eq!(path.dimension(), 0);
        assert_eq!(path.faces().len(), 7);
    }

    #[test]
    fn unknown_faces_are_errors() {
        let v = VectorField::new([(s(&[7]), s(&[7, 8]))]).unwrap();
        assert!(is_acyclic(&v, &hollow()).is_err());
    }

    #[test]
    fn empty_field_gives_all_critical() {
        let k = SimplicialComplex::from_facets([s(&[1, 2, 3])]);
        let f = Stack::constant(k.clone(), 0);
        let seq = sequence_from_gvf(&VectorField::default(), &f).unwrap();
        assert_eq!(seq.len(), k.len());
        assert!(seq.items().iter().all(SequenceItem::is_critical));
        assert_eq!(validate_morse(&seq, &k), Ok(()));
    }

    #[test]
    fn edge_field_has_one_emission_order() {
        let k = SimplicialComplex::from_facets([s(&[1, 2])]);
        let f = Stack::from_map(k, &HashMap::from([(s(&[1]), 0), (s(&[2]), 1), (s(&[1, 2]), 1)])).unwrap();
        let v = VectorField::new([(s(&[2]), s(&[1, 2]))]).unwrap();
        let seq = sequence_from_gvf(&v, &f).unwrap();
        assert_eq!(
            seq.items(),
            &[
                SequenceItem::Critical(s(&[1])),
                SequenceItem::regular(s(&[2]), s(&[1, 2])).unwrap()
            ]
        );
        assert_eq!(gradient_vector_field(&seq), v);
    }

    #[test]
    fn cyclic_field_is_rejected() {
        let f = Stack::constant(hollow(), 0);
        match sequence_from_gvf(&cyclic_field(), &f) {
            Err(VerifyError::Cyclic(path)) => assert!(path.is_closed() && path.is_path_in(&cyclic_field())),
            other => panic!("expected a cycle, got {other:?}"),
        }
    }

    #[test]
    fn field_must_respect_stack() {
        let k = SimplicialComplex::from_facets([s(&[1, 2])]);
        let f = Stack::from_values(k, vec![0, 0, 1]).unwrap();
        let v = VectorField::new([(s(&[2]), s(&[1, 2]))]).unwrap();
        assert!(matches!(sequence_from_gvf(&v, &f), Err(VerifyError::InvalidField(_))));
    }
}

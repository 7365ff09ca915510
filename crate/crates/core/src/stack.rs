//! Monotone integer weight functions (stacks) on cosimplicial complexes.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{ComplexError, CosimplicialComplex, FaceId, FaceSet, SimplicialComplex};
use crate::simplex::{Simplex, Vertex};

/// Stack value.
pub type Level = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StackError {
    #[error("not a stack: value of {lower:?} ({lower_value}) exceeds value of {upper:?} ({upper_value})")]
    NotMonotone {
        lower: Simplex,
        lower_value: Level,
        upper: Simplex,
        upper_value: Level,
    },
    #[error("no value given for face {0:?}")]
    MissingValue(Simplex),
    #[error("value given for face {0:?} outside the domain")]
    UnknownFace(Simplex),
    #[error("vertex {0} has no weight")]
    MissingVertexWeight(Vertex),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("stack domain is not a simplicial complex")]
    NotSimplicial,
    #[error(transparent)]
    Domain(#[from] ComplexError),
}

/// Sorted distinct values taken by a stack.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelRange {
    levels: Vec<Level>,
}

impl LevelRange {
    pub fn as_slice(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Number of distinct levels minus one; `None` on an empty domain.
    pub fn height(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = Level> + '_ {
        self.levels.iter().copied()
    }

    fn position(&self, level: Level) -> Option<usize> {
        self.levels.binary_search(&level).ok()
    }
}

/// Checks monotonicity of `values` (indexed by face id) over `domain`.
///
/// On a simplicial or cosimplicial domain any comparable pair is linked by a
/// chain of codimension-1 steps inside the domain, so only those are checked
/// there. Other face sets fall back to every comparable pair.
pub fn validate_stack(domain: &FaceSet, values: &[Level]) -> Result<(), StackError> {
    if values.len() != domain.len() {
        return Err(StackError::LengthMismatch {
            expected: domain.len(),
            got: values.len(),
        });
    }
    let violation = |lower: FaceId, upper: FaceId| StackError::NotMonotone {
        lower: domain.face(lower).clone(),
        lower_value: values[lower as usize],
        upper: domain.face(upper).clone(),
        upper_value: values[upper as usize],
    };
    if domain.is_simplicial() || domain.is_cosimplicial() {
        for upper in 0..domain.len() as FaceId {
            for &lower in domain.boundary_ids(upper) {
                if values[lower as usize] > values[upper as usize] {
                    return Err(violation(lower, upper));
                }
            }
        }
    } else {
        for upper in 0..domain.len() as FaceId {
            for sub in domain.face(upper).subfaces() {
                if let Some(lower) = domain.id_of(&sub) {
                    if values[lower as usize] > values[upper as usize] {
                        return Err(violation(lower, upper));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A monotone map from the faces of a cosimplicial complex to the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stack {
    domain: FaceSet,
    values: Vec<Level>,
    levels: LevelRange,
    simplicial: bool,
}

impl Stack {
    /// Builds a stack from values indexed like `domain.faces()`.
    pub fn from_values(
        domain: impl Into<CosimplicialComplex>,
        values: Vec<Level>,
    ) -> Result<Self, StackError> {
        let domain = domain.into().into_face_set();
        validate_stack(&domain, &values)?;
        let mut levels = values.clone();
        levels.sort_unstable();
        levels.dedup();
        let simplicial = domain.is_simplicial();
        Ok(Stack {
            domain,
            values,
            levels: LevelRange { levels },
            simplicial,
        })
    }

    /// Builds a stack from an explicit face → value map, which must cover
    /// the domain exactly.
    pub fn from_map(
        domain: impl Into<CosimplicialComplex>,
        map: &HashMap<Simplex, Level>,
    ) -> Result<Self, StackError> {
        let domain = domain.into();
        if let Some(extra) = map.keys().find(|s| !domain.contains(s)) {
            return Err(StackError::UnknownFace(extra.clone()));
        }
        let values = domain
            .faces()
            .iter()
            .map(|f| map.get(f).copied().ok_or_else(|| StackError::MissingValue(f.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Stack::from_values(domain, values)
    }

    pub fn constant(domain: impl Into<CosimplicialComplex>, value: Level) -> Self {
        let domain = domain.into();
        let n = domain.len();
        Stack::from_values(domain, vec![value; n]).expect("constant maps are monotone")
    }

    /// Lower-star stack: each face takes the largest weight among its
    /// vertices.
    pub fn lower_star(
        k: &SimplicialComplex,
        weights: &HashMap<Vertex, Level>,
    ) -> Result<Self, StackError> {
        let values = k
            .faces()
            .iter()
            .map(|f| {
                f.vertices()
                    .iter()
                    .map(|v| weights.get(v).copied().ok_or(StackError::MissingVertexWeight(*v)))
                    .try_fold(Level::MIN, |acc, w| w.map(|w| acc.max(w)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Stack::from_values(k.clone(), values)
    }

    pub fn domain(&self) -> &FaceSet {
        &self.domain
    }

    /// The domain as a simplicial complex, if it is one.
    pub fn complex(&self) -> Result<SimplicialComplex, StackError> {
        if !self.simplicial {
            return Err(StackError::NotSimplicial);
        }
        Ok(SimplicialComplex::new(self.domain.clone())?)
    }

    pub fn has_simplicial_domain(&self) -> bool {
        self.simplicial
    }

    pub fn value(&self, s: &Simplex) -> Option<Level> {
        self.domain.id_of(s).map(|id| self.values[id as usize])
    }

    pub fn value_of(&self, id: FaceId) -> Level {
        self.values[id as usize]
    }

    pub fn values(&self) -> &[Level] {
        &self.values
    }

    pub fn levels(&self) -> &LevelRange {
        &self.levels
    }

    /// Faces with value at most `level`.
    pub fn cut(&self, level: Level) -> FaceSet {
        self.domain.subset(&self.ids_where(|v| v <= level))
    }

    /// Faces with value exactly `level`.
    pub fn section(&self, level: Level) -> CosimplicialComplex {
        CosimplicialComplex::new_unchecked(self.domain.subset(&self.ids_where(|v| v == level)))
    }

    fn ids_where(&self, pred: impl Fn(Level) -> bool) -> Vec<FaceId> {
        (0..self.domain.len() as FaceId)
            .filter(|&id| pred(self.values[id as usize]))
            .collect()
    }

    /// Face ids grouped by level, in ascending level order. Ids within a
    /// group are ascending.
    pub fn level_partition(&self) -> Vec<(Level, Vec<FaceId>)> {
        let mut groups: Vec<(Level, Vec<FaceId>)> =
            self.levels.iter().map(|l| (l, Vec::new())).collect();
        for (id, &v) in self.values.iter().enumerate() {
            let slot = self.levels.position(v).expect("level of a present value");
            groups[slot].1.push(id as FaceId);
        }
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn edge() -> SimplicialComplex {
        SimplicialComplex::from_facets([s(&[1, 2])])
    }

    fn edge_stack() -> Stack {
        let map = HashMap::from([(s(&[1]), 0), (s(&[2]), 1), (s(&[1, 2]), 1)]);
        Stack::from_map(edge(), &map).unwrap()
    }

    #[test]
    fn validation() {
        assert!(validate_stack(edge().face_set(), &[0, 1, 1]).is_ok());
        // faces are ordered {1}, {2}, {1,2}
        assert!(matches!(
            validate_stack(edge().face_set(), &[2, 1, 1]),
            Err(StackError::NotMonotone { lower_value: 2, upper_value: 1, .. })
        ));
        let k = SimplicialComplex::from_facets([s(&[1, 2, 3])]);
        assert!(validate_stack(&k, &vec![1; k.len()]).is_ok());
    }

    #[test]
    fn validation_on_arbitrary_face_sets_checks_all_pairs() {
        // {1} and {1,2,3} are comparable with nothing between them.
        let faces = FaceSet::new([s(&[1]), s(&[1, 2, 3])]);
        assert!(validate_stack(&faces, &[5, 4]).is_err());
        assert!(validate_stack(&faces, &[4, 5]).is_ok());
    }

    #[test]
    fn cuts() {
        let f = edge_stack();
        assert_eq!(f.cut(0), FaceSet::new([s(&[1])]));
        assert!(f.cut(-1).is_empty());
        assert_eq!(&f.cut(7), f.domain());
    }

    #[test]
    fn sections() {
        let f = edge_stack();
        assert_eq!(f.section(1).face_set(), &FaceSet::new([s(&[2]), s(&[1, 2])]));
        let k = SimplicialComplex::from_facets([s(&[1, 2, 3])]);
        let c = Stack::constant(k.clone(), 1);
        assert_eq!(c.section(1).face_set(), k.face_set());
        assert!(f.section(5).is_empty());
    }

    #[test]
    fn lower_star() {
        let w = HashMap::from([(1, 0), (2, 3)]);
        let f = Stack::lower_star(&edge(), &w).unwrap();
        assert_eq!(f.values(), &[0, 3, 3]);

        let zero = HashMap::from([(1, 0), (2, 0)]);
        assert_eq!(Stack::lower_star(&edge(), &zero).unwrap().values(), &[0, 0, 0]);

        let k = SimplicialComplex::from_facets([s(&[1, 2, 3])]);
        let w = HashMap::from([(1, 1), (2, 2), (3, 3)]);
        let f = Stack::lower_star(&k, &w).unwrap();
        assert_eq!(f.value(&s(&[1, 2, 3])), Some(3));
        assert_eq!(f.value(&s(&[1, 2])), Some(2));

        let partial = HashMap::from([(1, 0)]);
        assert_eq!(
            Stack::lower_star(&edge(), &partial),
            Err(StackError::MissingVertexWeight(2))
        );
    }

    #[test]
    fn levels() {
        assert_eq!(edge_stack().levels().as_slice(), &[0, 1]);
        assert_eq!(Stack::constant(edge(), 1).levels().as_slice(), &[1]);
        let k = SimplicialComplex::from_facets([s(&[1, 2]), s(&[3])]);
        // faces: {1} {2} {3} {1,2}
        let f = Stack::from_values(k, vec![-2, 5, 7, 5]).unwrap();
        assert_eq!(f.levels().as_slice(), &[-2, 5, 7]);
        assert_eq!(f.levels().height(), Some(2));
        assert_eq!(Stack::constant(SimplicialComplex::empty(), 0).levels().height(), None);
    }

    #[test]
    fn map_must_cover_domain() {
        let map = HashMap::from([(s(&[1]), 0), (s(&[2]), 1)]);
        assert_eq!(
            Stack::from_map(edge(), &map),
            Err(StackError::MissingValue(s(&[1, 2])))
        );
        let map = HashMap::from([(s(&[1]), 0), (s(&[2]), 1), (s(&[1, 2]), 1), (s(&[3]), 0)]);
        assert_eq!(Stack::from_map(edge(), &map), Err(StackError::UnknownFace(s(&[3]))));
    }
}

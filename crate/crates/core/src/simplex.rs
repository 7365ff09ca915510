//! Simplexes as canonical sorted vertex lists.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Vertex identifier.
pub type Vertex = u32;

/// Largest dimension accepted anywhere in the crate. Subset enumeration is
/// exponential in the dimension, so larger faces are refused up front.
pub const MAX_DIMENSION: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("a simplex needs at least one vertex")]
    Empty,
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(Vertex),
    #[error("vertices must be strictly increasing, got {0:?}")]
    NotIncreasing(Vec<Vertex>),
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
    TooLarge(usize),
}

/// A finite non-empty set of vertices, stored strictly increasing.
///
/// Simplexes are ordered first by dimension and then lexicographically by
/// vertex list. Every deterministic tie-break in the crate uses this order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    vertices: SmallVec<[Vertex; 4]>,
}

impl Simplex {
    /// Builds a simplex from vertices in any order. Duplicates are an error.
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Self, SimplexError> {
        let mut vertices: SmallVec<[Vertex; 4]> = vertices.into_iter().collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(SimplexError::DuplicateVertex(w[0]));
        }
        Self::checked(vertices)
    }

    /// Builds a simplex from a list that must already be strictly increasing.
    pub fn from_sorted(vertices: &[Vertex]) -> Result<Self, SimplexError> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimplexError::NotIncreasing(vertices.to_vec()));
        }
        Self::checked(SmallVec::from_slice(vertices))
    }

    fn checked(vertices: SmallVec<[Vertex; 4]>) -> Result<Self, SimplexError> {
        if vertices.is_empty() {
            return Err(SimplexError::Empty);
        }
        if vertices.len() > MAX_DIMENSION + 1 {
            return Err(SimplexError::TooLarge(vertices.len() - 1));
        }
        Ok(Simplex { vertices })
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex {
            vertices: SmallVec::from_slice(&[v]),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Inclusion test `self ⊆ other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.vertices.len() > other.vertices.len() {
            return false;
        }
        let mut it = other.vertices.iter();
        'outer: for v in &self.vertices {
            for w in it.by_ref() {
                match w.cmp(v) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// `self ⊂ other` with `dim(other) = dim(self) + 1`.
    pub fn is_facet_of(&self, other: &Simplex) -> bool {
        other.vertices.len() == self.vertices.len() + 1 && self.is_face_of(other)
    }

    /// Codimension-1 faces, obtained by dropping one vertex at a time.
    /// Empty for vertices.
    pub fn codim1_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.vertices.len() > 1 {
            self.vertices.len()
        } else {
            0
        };
        (0..n).map(move |skip| Simplex {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect(),
        })
    }

    /// All non-empty subsets, the simplex itself included.
    pub fn subfaces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.vertices.len();
        (1u64..(1u64 << n)).map(move |mask| Simplex {
            vertices: (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i])
                .collect(),
        })
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Simplex {
    /// Space-separated vertex list, the form used by the text formats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s = Simplex::new([3, 1, 2]).unwrap();
        assert_eq!(s.vertices(), &[1, 2, 3]);
        assert_eq!(s.dim(), 2);
        assert_eq!(Simplex::new([]), Err(SimplexError::Empty));
        assert_eq!(Simplex::new([1, 1]), Err(SimplexError::DuplicateVertex(1)));
        assert!(Simplex::from_sorted(&[2, 1]).is_err());
        assert!(Simplex::new(0..26).is_ok());
        assert_eq!(Simplex::new(0..27), Err(SimplexError::TooLarge(26)));
    }

    #[test]
    fn order_is_dimension_then_lexicographic() {
        let a = Simplex::new([5]).unwrap();
        let b = Simplex::new([1, 2]).unwrap();
        let c = Simplex::new([1, 3]).unwrap();
        assert!(a < b && b < c);
    }

    #[test]
    fn inclusion() {
        let t = Simplex::new([1, 2, 4]).unwrap();
        assert!(Simplex::new([1, 4]).unwrap().is_facet_of(&t));
        assert!(Simplex::new([4]).unwrap().is_face_of(&t));
        assert!(!Simplex::new([3]).unwrap().is_face_of(&t));
        assert!(!Simplex::new([4]).unwrap().is_facet_of(&t));
        assert_eq!(t.codim1_faces().count(), 3);
        assert_eq!(t.subfaces().count(), 7);
        assert_eq!(Simplex::vertex(1).codim1_faces().count(), 0);
    }
}

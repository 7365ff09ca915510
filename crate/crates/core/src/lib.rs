//! Morse sequences on simplicial complexes and flooding sequences on
//! simplicial stacks.

pub mod cli;
pub mod complex;
pub mod engine;
pub mod flooding;
pub mod generate;
pub mod io;
pub mod sequence;
pub mod simplex;
pub mod stack;
pub mod verification;

pub use complex::{ComplexError, CosimplicialComplex, FaceId, FaceSet, SimplicialComplex};
pub use engine::{sequence_on, Contraction, Policy};
pub use flooding::{flood, flood_parallel, stable_sort_to_flooding};
pub use sequence::{SequenceItem, SimplexWiseSequence, VectorField};
pub use simplex::{Simplex, Vertex};
pub use stack::{Level, Stack};

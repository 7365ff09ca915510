//! Seeded random complexes and lower-star stacks for tests and benchmarks.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{FaceSet, SimplicialComplex};
use crate::simplex::{Simplex, Vertex};
use crate::stack::{Level, Stack};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex of dimension at most `max_dim` with roughly
/// `target_faces` faces. Top simplexes are drawn from a sliding window of
/// vertices so that the result is reasonably connected.
pub fn random_complex<R: Rng>(rng: &mut R, max_dim: usize, target_faces: usize) -> SimplicialComplex {
    if target_faces == 0 {
        return SimplicialComplex::empty();
    }
    let n = (target_faces / (2 + 2 * max_dim)).max(max_dim + 2) as Vertex;
    let window = (2 * max_dim as Vertex + 4).min(n);
    let mut faces: HashSet<Simplex> = HashSet::new();
    let mut pool: Vec<Vertex> = Vec::with_capacity(window as usize);
    while faces.len() < target_faces {
        let dim = rng.gen_range(0..=max_dim);
        let start = rng.gen_range(0..n);
        pool.clear();
        pool.extend((0..window).map(|i| (start + i) % n));
        let (chosen, _) = pool.partial_shuffle(rng, dim + 1);
        let top = Simplex::new(chosen.iter().copied()).expect("distinct vertices");
        if faces.contains(&top) {
            continue;
        }
        faces.extend(top.subfaces());
    }
    SimplicialComplex::new(FaceSet::new(faces)).expect("closed by construction")
}

/// Random vertex weights in `0..levels` and the lower-star stack they
/// induce.
pub fn random_lower_star<R: Rng>(rng: &mut R, k: &SimplicialComplex, levels: Level) -> Stack {
    let weights: HashMap<Vertex, Level> = k
        .vertices()
        .map(|v| (v.vertices()[0], rng.gen_range(0..levels.max(1))))
        .collect();
    Stack::lower_star(k, &weights).expect("every vertex weighted")
}

/// A random instance: dimension at most 3, up to `max_faces` faces,
/// lower-star stack with at most 16 levels.
pub fn random_instance(seed: u64, max_faces: usize) -> Stack {
    let mut rng = rng(seed);
    let dim = rng.gen_range(1..=3);
    // leave room for the overshoot of the last top simplex
    let target = rng.gen_range(1..=max_faces.saturating_sub(15).max(1));
    let k = random_complex(&mut rng, dim, target);
    let levels = rng.gen_range(1..=16);
    random_lower_star(&mut rng, &k, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_determinism() {
        let mut r = rng(7);
        let k = random_complex(&mut r, 2, 1000);
        assert!(k.len() >= 1000 && k.len() < 1008);
        assert!(k.dimension().unwrap() <= 2);
        let again = random_complex(&mut rng(7), 2, 1000);
        assert_eq!(k, again);
    }

    #[test]
    fn instances_respect_bounds() {
        for seed in 0..20 {
            let f = random_instance(seed, 5000);
            assert!(f.domain().len() <= 5000);
            assert!(f.domain().dimension().unwrap() <= 3);
            assert!(f.levels().len() <= 16);
        }
    }
}

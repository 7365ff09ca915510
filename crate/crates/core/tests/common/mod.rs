#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use morseflood::{FaceSet, Simplex, SimplicialComplex, Stack};
use proptest::prelude::*;

pub fn s(v: &[u32]) -> Simplex {
    Simplex::new(v.iter().copied()).unwrap()
}

/// Non-empty vertex subsets of `0..vertices` with at most `max_size` elements.
pub fn simplex_strategy(vertices: u32, max_size: usize) -> impl Strategy<Value = Simplex> {
    prop::collection::btree_set(0..vertices, 1..=max_size).prop_map(|vs| Simplex::new(vs).unwrap())
}

pub fn face_set_strategy(vertices: u32, max_size: usize, count: usize) -> impl Strategy<Value = FaceSet> {
    prop::collection::vec(simplex_strategy(vertices, max_size), 0..=count).prop_map(FaceSet::new)
}

pub fn complex_strategy(vertices: u32, max_size: usize, tops: usize) -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(simplex_strategy(vertices, max_size), 0..=tops).prop_map(SimplicialComplex::from_facets)
}

/// A complex with a random lower-star stack.
pub fn stack_strategy(vertices: u32, max_size: usize, tops: usize, levels: i64) -> impl Strategy<Value = Stack> {
    (
        complex_strategy(vertices, max_size, tops),
        prop::collection::vec(0..levels, vertices as usize),
    )
        .prop_map(|(k, w)| {
            let weights: HashMap<u32, i64> = w.into_iter().enumerate().map(|(v, x)| (v as u32, x)).collect();
            Stack::lower_star(&k, &weights).unwrap()
        })
}

/// Every non-empty subset of every member, by direct enumeration.
pub fn brute_closure(faces: &[Simplex]) -> HashSet<Simplex> {
    let mut out = HashSet::new();
    for f in faces {
        let vs = f.vertices();
        for mask in 1u32..(1 << vs.len()) {
            let sub: Vec<u32> = (0..vs.len()).filter(|i| mask & (1 << i) != 0).map(|i| vs[i]).collect();
            out.insert(Simplex::from_sorted(&sub).unwrap());
        }
    }
    out
}

/// Interval closure by checking every triple `σ ⊆ ν ⊆ τ` with `ν` ranging
/// over all subsets of `τ`.
pub fn brute_cosimplicial(faces: &[Simplex]) -> bool {
    let set: HashSet<&Simplex> = faces.iter().collect();
    faces.iter().all(|tau| {
        brute_closure(std::slice::from_ref(tau)).iter().all(|nu| {
            set.contains(nu) || !faces.iter().any(|sigma| sigma.is_face_of(nu))
        })
    })
}

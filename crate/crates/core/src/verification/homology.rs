use std::collections::BTreeMap;

use crate::complex::{FaceId, SimplicialComplex};
use crate::sequence::{critical_counts, SimplexWiseSequence};

use super::CheckLine;

/// Ranks of the mod-2 homology groups, index = dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiProfile(pub Vec<usize>);

impl BettiProfile {
    pub fn get(&self, dim: usize) -> usize {
        self.0.get(dim).copied().unwrap_or(0)
    }
}

/// Rank of a sparse mod-2 matrix given as columns of sorted row indices.
fn rank_z2(mut columns: Vec<Vec<FaceId>>) -> usize {
    // pivot_of[row] = index of the reduced column whose lowest entry is row
    let mut pivot_of: BTreeMap<FaceId, usize> = BTreeMap::new();
    let mut rank = 0;
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match pivot_of.get(&low) {
                Some(&i) => {
                    let sum = symmetric_difference(&columns[j], &columns[i]);
                    columns[j] = sum;
                }
                None => {
                    pivot_of.insert(low, j);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn symmetric_difference(a: &[FaceId], b: &[FaceId]) -> Vec<FaceId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Betti numbers over the two-element field, by column reduction of the
/// boundary matrices.
pub fn betti_z2(k: &SimplicialComplex) -> BettiProfile {
    let counts = k.face_counts();
    let top = counts.len();
    // ranks[p] = rank of the boundary map from p-chains to (p-1)-chains
    let mut ranks = vec![0usize; top + 1];
    for (p, rank) in ranks.iter_mut().enumerate().take(top).skip(1) {
        let columns: Vec<Vec<FaceId>> = (0..k.len() as FaceId)
            .filter(|&id| k.face(id).dim() == p)
            .map(|id| k.boundary_ids(id).to_vec())
            .collect();
        *rank = rank_z2(columns);
    }
    BettiProfile((0..top).map(|p| counts[p] - ranks[p] - ranks[p + 1]).collect())
}

/// Alternating sum of face counts.
pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    k.face_counts()
        .iter()
        .enumerate()
        .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// Critical counts of a sequence from ∅ to `K` against the Euler
/// characteristic and Betti numbers of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseReport {
    pub critical: BTreeMap<usize, usize>,
    pub euler: i64,
    pub betti: Option<BettiProfile>,
}

impl MorseReport {
    pub fn critical_euler(&self) -> i64 {
        self.critical
            .iter()
            .map(|(&p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn euler_ok(&self) -> bool {
        self.critical_euler() == self.euler
    }

    /// `c_p ≥ β_p` in every dimension. `None` when Betti numbers were not
    /// computed.
    pub fn inequalities_ok(&self) -> Option<bool> {
        let betti = self.betti.as_ref()?;
        Some(
            betti
                .0
                .iter()
                .enumerate()
                .all(|(p, &b)| self.critical.get(&p).copied().unwrap_or(0) >= b),
        )
    }

    pub fn passed(&self) -> bool {
        self.euler_ok() && self.inequalities_ok().unwrap_or(true)
    }

    pub fn lines(&self) -> Vec<CheckLine> {
        let counts: Vec<String> = self.critical.iter().map(|(p, c)| format!("c{p}={c}")).collect();
        let mut lines = vec![CheckLine::new(
            "euler",
            self.euler_ok(),
            format!("alternating critical sum {} vs chi {} ({})", self.critical_euler(), self.euler, counts.join(" ")),
        )];
        if let (Some(ok), Some(betti)) = (self.inequalities_ok(), &self.betti) {
            let bs: Vec<String> = betti.0.iter().enumerate().map(|(p, b)| format!("b{p}={b}")).collect();
            lines.push(CheckLine::new(
                "betti",
                ok,
                format!("{} vs {}", counts.join(" "), bs.join(" ")),
            ));
        }
        lines
    }
}

/// Weak Morse inequalities and the Euler relation for a sequence on `k`.
/// Betti numbers are skipped when `with_betti` is false.
pub fn morse_consistency(seq: &SimplexWiseSequence, k: &SimplicialComplex, with_betti: bool) -> MorseReport {
    MorseReport {
        critical: critical_counts(seq),
        euler: euler_characteristic(k),
        betti: with_betti.then(|| betti_z2(k)),
    }
}

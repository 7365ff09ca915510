//! Independent checks on produced sequences and vector fields.

mod acyclic;
mod collapse;
mod homology;

use std::fmt;

use thiserror::Error;

use crate::sequence::SequenceError;

pub use acyclic::{find_closed_path, is_acyclic, sequence_from_gvf, GradientPath};
pub use collapse::{check_collapse_theorem, collapse_violation, CollapseViolation};
pub use homology::{betti_z2, euler_characteristic, morse_consistency, BettiProfile, MorseReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("vector field is not acyclic: closed path {0}")]
    Cyclic(GradientPath),
    #[error(transparent)]
    InvalidField(#[from] SequenceError),
    #[error("the stack domain is not a simplicial complex")]
    NotSimplicial,
}

/// One line of a verification report: `CHECK <name> PASS|FAIL <detail>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {verdict} {}", self.name, self.detail)
    }
}

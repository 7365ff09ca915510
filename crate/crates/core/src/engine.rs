//! Contractions of cosimplicial complexes and the greedy scheme that turns a
//! cosimplicial complex `S` into a Morse sequence from its frontier to its
//! closure.
//!
//! Removing faces from the lower end of `S` (coreductions, coperforations)
//! builds the sequence left to right; removing faces from the upper end
//! (reductions, perforations) builds it right to left. The engine keeps, for
//! every live face, the number of live boundary and coboundary faces plus the
//! sum of their ids, so the unique partner of a face with count one is known
//! in constant time. Candidates are pushed when a count drops to one or zero
//! and re-validated when popped.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complex::{ComplexError, CosimplicialComplex, FaceId, FaceSet, SimplicialComplex};
use crate::sequence::{SequenceItem, SimplexWiseSequence};
use crate::simplex::Simplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("removing {0:?} is not a contraction")]
    NotContraction(SequenceItem),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The four ways of removing faces from a cosimplicial complex while keeping
/// it cosimplicial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Contraction {
    /// `δ(σ, S) = {τ}`
    Reduction(Simplex, Simplex),
    /// `δ(ν, S) = ∅`
    Perforation(Simplex),
    /// `∂(τ, S) = {σ}`
    Coreduction(Simplex, Simplex),
    /// `∂(ν, S) = ∅`
    Coperforation(Simplex),
}

impl Contraction {
    /// Coreductions and coperforations extend the sequence on the left.
    pub fn is_lower(&self) -> bool {
        matches!(self, Contraction::Coreduction(..) | Contraction::Coperforation(_))
    }

    pub fn is_pairing(&self) -> bool {
        matches!(self, Contraction::Reduction(..) | Contraction::Coreduction(..))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Contraction::Reduction(..) => "reduction",
            Contraction::Perforation(_) => "perforation",
            Contraction::Coreduction(..) => "coreduction",
            Contraction::Coperforation(_) => "coperforation",
        }
    }

    pub fn item(&self) -> SequenceItem {
        match self {
            Contraction::Reduction(s, t) | Contraction::Coreduction(s, t) => {
                SequenceItem::Regular(s.clone(), t.clone())
            }
            Contraction::Perforation(n) | Contraction::Coperforation(n) => {
                SequenceItem::Critical(n.clone())
            }
        }
    }
}

impl fmt::Display for Contraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contraction::Reduction(s, t) | Contraction::Coreduction(s, t) => {
                write!(f, "{} {s} | {t}", self.name())
            }
            Contraction::Perforation(n) | Contraction::Coperforation(n) => {
                write!(f, "{} {n}", self.name())
            }
        }
    }
}

/// Which contractions the scheme may use, and in what order of preference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Coreductions; a coperforation only when no coreduction exists.
    Maximal,
    /// Reductions; a perforation only when no reduction exists.
    Minimal,
    /// Coreductions, then reductions; a coperforation only when neither
    /// pairing exists.
    MinMax,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Maximal, Policy::Minimal, Policy::MinMax];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Maximal => "maximal",
            Policy::Minimal => "minimal",
            Policy::MinMax => "minmax",
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "maximal" => Ok(Policy::Maximal),
            "minimal" => Ok(Policy::Minimal),
            "minmax" | "min-max" => Ok(Policy::MinMax),
            other => Err(format!("unknown scheme `{other}`")),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every contraction that removing the faces of `item` from `s` performs.
pub fn contractions_of(item: &SequenceItem, s: &FaceSet) -> Result<Vec<Contraction>, ComplexError> {
    let mut out = Vec::new();
    match item {
        SequenceItem::Critical(nu) => {
            let id = s.require(nu)?;
            if s.boundary_ids(id).is_empty() {
                out.push(Contraction::Coperforation(nu.clone()));
            }
            if s.coboundary_ids(id).is_empty() {
                out.push(Contraction::Perforation(nu.clone()));
            }
        }
        SequenceItem::Regular(sigma, tau) => {
            let a = s.require(sigma)?;
            let b = s.require(tau)?;
            if s.boundary_ids(b) == [a] {
                out.push(Contraction::Coreduction(sigma.clone(), tau.clone()));
            }
            if s.coboundary_ids(a) == [b] {
                out.push(Contraction::Reduction(sigma.clone(), tau.clone()));
            }
        }
    }
    Ok(out)
}

/// The contraction performed by removing `item`, preferring the lower-side
/// reading when both apply. `None` when it is not a contraction or a face is
/// missing from `s`.
pub fn classify(item: &SequenceItem, s: &FaceSet) -> Option<Contraction> {
    contractions_of(item, s).ok()?.into_iter().next()
}

/// `S` minus the faces of `item`, which must be a contraction.
pub fn contract(s: &CosimplicialComplex, item: &SequenceItem) -> Result<CosimplicialComplex, EngineError> {
    if contractions_of(item, s)?.is_empty() {
        return Err(EngineError::NotContraction(item.clone()));
    }
    Ok(CosimplicialComplex::new_unchecked(s.without(item.faces())))
}

/// Checks, for `item` with faces in `s`, that each contraction reading agrees
/// with the matching operation on the closure or frontier of `s`:
/// reduction ⇔ collapse of the closure, perforation ⇔ perforation of the
/// closure, coreduction ⇔ expansion of the frontier, coperforation ⇔
/// filling of the frontier.
pub fn duality_check(s: &CosimplicialComplex, item: &SequenceItem) -> bool {
    let Ok(kinds) = contractions_of(item, s) else {
        return false;
    };
    let has = |name: &str| kinds.iter().any(|k| k.name() == name);
    let closure = s.closure();
    let frontier = s.frontier();
    let grown = |added: &[&Simplex]| -> Option<SimplicialComplex> {
        if added.iter().any(|f| frontier.contains(f)) {
            return None;
        }
        let faces = FaceSet::new(frontier.faces().iter().chain(added.iter().copied()).cloned());
        SimplicialComplex::new(faces).ok()
    };
    match item {
        SequenceItem::Critical(nu) => {
            let closure_facet = closure
                .id_of(nu)
                .is_some_and(|id| closure.coboundary_ids(id).is_empty());
            let filling = grown(&[nu]).is_some_and(|k| {
                let id = k.id_of(nu).expect("added face");
                k.coboundary_ids(id).is_empty()
            });
            closure_facet == has("perforation") && filling == has("coperforation")
        }
        SequenceItem::Regular(sigma, tau) => {
            let collapse = closure.is_free_pair(sigma, tau);
            let expansion = grown(&[sigma, tau]).is_some_and(|k| k.is_free_pair(sigma, tau));
            collapse == has("reduction") && expansion == has("coreduction")
        }
    }
}

/// Record of one scheme run: the contractions in removal order and the
/// number of candidate pushes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<Contraction>,
    pub queue_pushes: usize,
}

/// Morse sequence on `s`, from its frontier to its closure.
pub fn sequence_on(s: &CosimplicialComplex, policy: Policy) -> SimplexWiseSequence {
    sequence_on_traced(s, policy).0
}

pub fn sequence_on_traced(s: &CosimplicialComplex, policy: Policy) -> (SimplexWiseSequence, Trace) {
    let run = Engine::new(s, policy).run(true);
    let base = s.frontier_complex();
    (
        SimplexWiseSequence::new_unchecked(base, run.items),
        run.trace.expect("trace requested"),
    )
}

/// Items of the scheme run on `s`, without the frontier bookkeeping.
pub(crate) fn items_on(s: &FaceSet, policy: Policy) -> Vec<SequenceItem> {
    Engine::new(s, policy).run(false).items
}

pub(crate) fn traced_items_on(s: &FaceSet, policy: Policy) -> (Vec<SequenceItem>, Trace) {
    let run = Engine::new(s, policy).run(true);
    (run.items, run.trace.expect("trace requested"))
}

#[derive(Clone, Copy)]
enum Step {
    Coreduction(FaceId, FaceId),
    Coperforation(FaceId),
    Reduction(FaceId, FaceId),
    Perforation(FaceId),
}

struct Run {
    items: Vec<SequenceItem>,
    trace: Option<Trace>,
}

type PairHeap = BinaryHeap<Reverse<(FaceId, FaceId)>>;
type FaceHeap = BinaryHeap<Reverse<FaceId>>;

struct Engine<'a> {
    s: &'a FaceSet,
    policy: Policy,
    alive: Vec<bool>,
    live: usize,
    bcount: Vec<u32>,
    bsum: Vec<u64>,
    ccount: Vec<u32>,
    csum: Vec<u64>,
    // (τ, σ) so that the heap orders pairs by τ first.
    coreductions: PairHeap,
    coperforations: FaceHeap,
    reductions: PairHeap,
    perforations: FaceHeap,
    pushes: usize,
}

impl<'a> Engine<'a> {
    fn new(s: &'a FaceSet, policy: Policy) -> Self {
        let n = s.len();
        let mut engine = Engine {
            s,
            policy,
            alive: vec![true; n],
            live: n,
            bcount: Vec::with_capacity(n),
            bsum: Vec::with_capacity(n),
            ccount: Vec::with_capacity(n),
            csum: Vec::with_capacity(n),
            coreductions: BinaryHeap::new(),
            coperforations: BinaryHeap::new(),
            reductions: BinaryHeap::new(),
            perforations: BinaryHeap::new(),
            pushes: 0,
        };
        for id in 0..n as FaceId {
            let b = s.boundary_ids(id);
            let c = s.coboundary_ids(id);
            engine.bcount.push(b.len() as u32);
            engine.bsum.push(b.iter().map(|&x| x as u64).sum());
            engine.ccount.push(c.len() as u32);
            engine.csum.push(c.iter().map(|&x| x as u64).sum());
        }
        for id in 0..n as FaceId {
            engine.push_lower(id);
            engine.push_upper(id);
        }
        engine
    }

    fn uses_lower(&self) -> bool {
        matches!(self.policy, Policy::Maximal | Policy::MinMax)
    }

    fn uses_upper(&self) -> bool {
        matches!(self.policy, Policy::Minimal | Policy::MinMax)
    }

    fn push_lower(&mut self, id: FaceId) {
        if !self.uses_lower() {
            return;
        }
        match self.bcount[id as usize] {
            0 => self.coperforations.push(Reverse(id)),
            1 => self
                .coreductions
                .push(Reverse((id, self.bsum[id as usize] as FaceId))),
            _ => return,
        }
        self.pushes += 1;
    }

    fn push_upper(&mut self, id: FaceId) {
        if !self.uses_upper() {
            return;
        }
        match self.ccount[id as usize] {
            0 => self.perforations.push(Reverse(id)),
            1 => self
                .reductions
                .push(Reverse((self.csum[id as usize] as FaceId, id))),
            _ => return,
        }
        self.pushes += 1;
    }

    fn pop_coreduction(&mut self) -> Option<Step> {
        while let Some(Reverse((t, s))) = self.coreductions.pop() {
            let (ti, si) = (t as usize, s as usize);
            if self.alive[ti] && self.alive[si] && self.bcount[ti] == 1 && self.bsum[ti] == s as u64 {
                return Some(Step::Coreduction(s, t));
            }
        }
        None
    }

    fn pop_reduction(&mut self) -> Option<Step> {
        while let Some(Reverse((t, s))) = self.reductions.pop() {
            let (ti, si) = (t as usize, s as usize);
            if self.alive[ti] && self.alive[si] && self.ccount[si] == 1 && self.csum[si] == t as u64 {
                return Some(Step::Reduction(s, t));
            }
        }
        None
    }

    fn pop_coperforation(&mut self) -> Option<Step> {
        while let Some(Reverse(v)) = self.coperforations.pop() {
            if self.alive[v as usize] && self.bcount[v as usize] == 0 {
                return Some(Step::Coperforation(v));
            }
        }
        None
    }

    fn pop_perforation(&mut self) -> Option<Step> {
        while let Some(Reverse(v)) = self.perforations.pop() {
            if self.alive[v as usize] && self.ccount[v as usize] == 0 {
                return Some(Step::Perforation(v));
            }
        }
        None
    }

    fn next_step(&mut self) -> Option<Step> {
        match self.policy {
            Policy::Maximal => self.pop_coreduction().or_else(|| self.pop_coperforation()),
            Policy::Minimal => self.pop_reduction().or_else(|| self.pop_perforation()),
            Policy::MinMax => self
                .pop_coreduction()
                .or_else(|| self.pop_reduction())
                .or_else(|| self.pop_coperforation())
                .or_else(|| self.pop_perforation()),
        }
    }

    fn remove(&mut self, id: FaceId) {
        self.alive[id as usize] = false;
        self.live -= 1;
        let s = self.s;
        for &b in s.boundary_ids(id) {
            if self.alive[b as usize] {
                self.ccount[b as usize] -= 1;
                self.csum[b as usize] -= id as u64;
                self.push_upper(b);
            }
        }
        for &c in s.coboundary_ids(id) {
            if self.alive[c as usize] {
                self.bcount[c as usize] -= 1;
                self.bsum[c as usize] -= id as u64;
                self.push_lower(c);
            }
        }
    }

    fn run(mut self, traced: bool) -> Run {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut steps = Vec::new();
        while self.live > 0 {
            let step = self
                .next_step()
                .expect("a non-empty face set always has a minimal and a maximal face");
            let fs = self.s;
            let face = |id: FaceId| fs.face(id).clone();
            let contraction = match step {
                Step::Coreduction(s, t) => Contraction::Coreduction(face(s), face(t)),
                Step::Reduction(s, t) => Contraction::Reduction(face(s), face(t)),
                Step::Coperforation(v) => Contraction::Coperforation(face(v)),
                Step::Perforation(v) => Contraction::Perforation(face(v)),
            };
            match step {
                Step::Coreduction(s, t) | Step::Reduction(s, t) => {
                    self.remove(s);
                    self.remove(t);
                }
                Step::Coperforation(v) | Step::Perforation(v) => self.remove(v),
            }
            let item = contraction.item();
            if contraction.is_lower() {
                left.push(item);
            } else {
                right.push(item);
            }
            if traced {
                steps.push(contraction);
            }
        }
        right.reverse();
        left.append(&mut right);
        Run {
            items: left,
            trace: traced.then_some(Trace {
                steps,
                queue_pushes: self.pushes,
            }),
        }
    }
}

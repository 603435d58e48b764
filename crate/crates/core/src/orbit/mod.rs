//! δ-chains, lasso pseudo-orbits and the δ-step graph.
//!
//! A chain `x_0, …, x_n` is valid at `δ` when `d(f(x_i), x_{i+1}) < δ` for
//! every step. Lassos (`stem · cycle^ω`) are the finite representation of
//! infinite pseudo-orbits; on a finite space every pseudo-orbit the deciders
//! need is eventually periodic.

mod constructions;
mod step_graph;

pub use constructions::{
    bad_cantor_pseudo_orbit, block_pseudo_orbit, chain_through_component, reverse_chain, BlockError,
};
pub use step_graph::{build_step_graph, StepGraph};

use thiserror::Error;

use crate::rational::Rational;
use crate::space::PointId;
use crate::system::SystemMap;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("chain must contain at least one point")]
    Empty,
    #[error("lasso cycle must be nonempty")]
    EmptyCycle,
    #[error("point index {0} out of range")]
    UnknownPoint(PointId),
    #[error("step {index} violates d(f(x_i), x_(i+1)) < δ")]
    StepViolation { index: usize },
    #[error("chains do not meet: first ends at {end}, second starts at {start}")]
    EndpointMismatch { end: PointId, start: PointId },
    #[error("chains use different δ ({0} vs {1})")]
    DeltaMismatch(Rational, Rational),
    #[error("δ must be positive, got {0}")]
    NonPositiveDelta(Rational),
}

fn step_ok(f: &SystemMap, x: PointId, y: PointId, delta: &Rational) -> bool {
    f.space().dist(f.apply(x), y) < delta
}

/// `Ok` iff every step of `seq` satisfies the strict δ condition; otherwise
/// the index of the first offending step.
pub fn validate_chain(f: &SystemMap, seq: &[PointId], delta: &Rational) -> Result<(), ChainError> {
    if seq.is_empty() {
        return Err(ChainError::Empty);
    }
    if let Some(&bad) = seq.iter().find(|&&p| p >= f.len()) {
        return Err(ChainError::UnknownPoint(bad));
    }
    match seq.windows(2).position(|w| !step_ok(f, w[0], w[1], delta)) {
        Some(index) => Err(ChainError::StepViolation { index }),
        None => Ok(()),
    }
}

/// A validated finite δ-chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    points: Vec<PointId>,
    delta: Rational,
}

impl Chain {
    pub fn new(f: &SystemMap, points: Vec<PointId>, delta: Rational) -> Result<Self, ChainError> {
        validate_chain(f, &points, &delta)?;
        Ok(Chain { points, delta })
    }

    /// The one-point chain `(x)`, the identity for concatenation.
    pub fn singleton(x: PointId, delta: Rational) -> Self {
        Chain { points: vec![x], delta }
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn start(&self) -> PointId {
        self.points[0]
    }

    pub fn end(&self) -> PointId {
        *self.points.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<PointId> {
        self.points
    }
}

/// Joins `c1` (ending at `q`) and `c2` (starting at `q`), sharing `q`.
pub fn concatenate_chains(c1: &Chain, c2: &Chain) -> Result<Chain, ChainError> {
    if c1.delta != c2.delta {
        return Err(ChainError::DeltaMismatch(c1.delta.clone(), c2.delta.clone()));
    }
    if c1.end() != c2.start() {
        return Err(ChainError::EndpointMismatch {
            end: c1.end(),
            start: c2.start(),
        });
    }
    let mut points = c1.points.clone();
    points.extend_from_slice(&c2.points[1..]);
    Ok(Chain {
        points,
        delta: c1.delta.clone(),
    })
}

/// Infinite pseudo-orbit `stem · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoPseudoOrbit {
    stem: Vec<PointId>,
    cycle: Vec<PointId>,
    delta: Rational,
}

impl LassoPseudoOrbit {
    /// Builds a lasso and checks every step, including stem→cycle and the
    /// cycle wrap.
    pub fn new(f: &SystemMap, stem: Vec<PointId>, cycle: Vec<PointId>, delta: Rational) -> Result<Self, ChainError> {
        let lasso = LassoPseudoOrbit { stem, cycle, delta };
        lasso.validate(f)?;
        Ok(lasso)
    }

    pub fn stem(&self) -> &[PointId] {
        &self.stem
    }

    pub fn cycle(&self) -> &[PointId] {
        &self.cycle
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Term `x_i` of the unrolling.
    pub fn at(&self, i: usize) -> PointId {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Canonical position of index `i`: itself in the stem, the stem length
    /// plus the cycle offset afterwards.
    pub fn position(&self, i: usize) -> usize {
        if i < self.stem.len() {
            i
        } else {
            self.stem.len() + (i - self.stem.len()) % self.cycle.len()
        }
    }

    /// First `len` terms.
    pub fn unroll(&self, len: usize) -> Vec<PointId> {
        (0..len).map(|i| self.at(i)).collect()
    }

    /// Number of terms after which every step has been checked once.
    pub fn period_span(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn validate(&self, f: &SystemMap) -> Result<(), ChainError> {
        if self.cycle.is_empty() {
            return Err(ChainError::EmptyCycle);
        }
        // stem, cycle, and the wrap back to the cycle start
        validate_chain(f, &self.unroll(self.period_span() + 1), &self.delta)
    }
}

/// Extends a chain by the true orbit of its last point, `x_{n+j} = f^j(x_n)`.
pub fn extend_to_lasso(f: &SystemMap, chain: &Chain) -> LassoPseudoOrbit {
    let (tail, cycle) = f.orbit_lasso(chain.end());
    let mut stem = chain.points[..chain.len() - 1].to_vec();
    stem.extend(tail);
    LassoPseudoOrbit {
        stem,
        cycle,
        delta: chain.delta.clone(),
    }
}

/// The `g`-orbit of `x` as a lasso at `delta` (checked by the caller).
pub(crate) fn orbit_as_lasso(g: &SystemMap, x: PointId, delta: Rational) -> LassoPseudoOrbit {
    let (stem, cycle) = g.orbit_lasso(x);
    LassoPseudoOrbit { stem, cycle, delta }
}

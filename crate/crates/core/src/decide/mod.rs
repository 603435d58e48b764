//! Exact (ε, δ)-shadowing deciders.
//!
//! The central object is the viable set `W_i`: the possible positions
//! `f^i(z)` of starting points `z` whose orbit has stayed within `ε` of the
//! pseudo-orbit so far. It starts as `ball(x_0, ε)` and evolves by
//! `W_{i+1} = f(W_i) ∩ ball(x_{i+1}, ε)`. A pseudo-orbit is shadowed iff its
//! viable sets never empty, and `(ε, δ)`-shadowing fails iff a state `(x, ∅)`
//! is reachable along δ-steps.

mod cg;
mod constructive;
mod eventual;
mod subset;

pub use cg::{decide_cg_shadowing, CgVerdict};
pub use constructive::{shadowing_delta_from_convergence, shadowing_delta_from_rigidity, ConstructiveDelta};
pub use eventual::{decide_eventual_shadowing, eventually_shadowed, restart_trace, EventualVerdict};
pub use subset::{decide_shadowing, max_delta, unshadowable_witness, Answer, MaxDelta, ShadowingVerdict};

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::orbit::{ChainError, LassoPseudoOrbit};
use crate::rational::Rational;
use crate::space::PointId;
use crate::system::{SystemError, SystemMap};

/// Default cap on explored subset states and enumerated CG maps.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Upper bound on the work a decider may do before giving up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Reads `DYNLAB_BUDGET`, falling back to the default when unset or
    /// unparsable.
    pub fn from_env() -> Self {
        std::env::var("DYNLAB_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: Rational },
    #[error("budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
    #[error("invalid pseudo-orbit: {0}")]
    Chain(Box<ChainError>),
    #[error(transparent)]
    System(#[from] SystemError),
}

impl From<ChainError> for DecideError {
    fn from(e: ChainError) -> Self {
        DecideError::Chain(Box::new(e))
    }
}

pub(crate) fn require_positive(name: &'static str, value: &Rational) -> Result<(), DecideError> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(DecideError::NonPositive {
            name,
            value: value.clone(),
        })
    }
}

/// Precomputed `ε`-balls as bitsets plus the map, for fast viable-set steps.
pub(crate) struct Viability<'a> {
    f: &'a SystemMap,
    balls: Vec<FixedBitSet>,
}

impl<'a> Viability<'a> {
    pub(crate) fn new(f: &'a SystemMap, epsilon: &Rational) -> Self {
        let space = f.space();
        let balls = space
            .points()
            .map(|c| {
                let mut b = FixedBitSet::with_capacity(space.len());
                b.extend(space.points().filter(|&y| space.dist(c, y) < epsilon));
                b
            })
            .collect();
        Viability { f, balls }
    }

    pub(crate) fn start(&self, x: PointId) -> FixedBitSet {
        self.balls[x].clone()
    }

    /// `f(w) ∩ ball(y, ε)`.
    pub(crate) fn step(&self, w: &FixedBitSet, y: PointId) -> FixedBitSet {
        let mut next = FixedBitSet::with_capacity(self.f.len());
        for z in w.ones() {
            let fz = self.f.apply(z);
            if self.balls[y].contains(fz) {
                next.insert(fz);
            }
        }
        next
    }
}

pub(crate) type State = (PointId, FixedBitSet);

/// Breadth-first bookkeeping over subset states with a size budget.
pub(crate) struct Explorer {
    pub(crate) index: HashMap<State, usize>,
    pub(crate) states: Vec<State>,
    pub(crate) parent: Vec<Option<usize>>,
    pub(crate) queue: VecDeque<usize>,
    limit: usize,
}

impl Explorer {
    pub(crate) fn new(budget: Budget) -> Self {
        Explorer {
            index: HashMap::new(),
            states: Vec::new(),
            parent: Vec::new(),
            queue: VecDeque::new(),
            limit: budget.0,
        }
    }

    /// Registers a state; `Some(id)` when it is new.
    pub(crate) fn admit(&mut self, key: State, from: Option<usize>) -> Result<Option<usize>, DecideError> {
        if self.index.contains_key(&key) {
            return Ok(None);
        }
        if self.states.len() >= self.limit {
            return Err(DecideError::BudgetExceeded { limit: self.limit });
        }
        let id = self.states.len();
        self.index.insert(key.clone(), id);
        self.states.push(key);
        self.parent.push(from);
        self.queue.push_back(id);
        Ok(Some(id))
    }

    pub(crate) fn id_of(&self, key: &State) -> usize {
        self.index[key]
    }

    /// Points along the BFS tree path from an initial state to `end`.
    pub(crate) fn path_to(&self, end: usize) -> Vec<PointId> {
        let mut path = vec![self.states[end].0];
        let mut cur = end;
        while let Some(p) = self.parent[cur] {
            path.push(self.states[p].0);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// The run of the viable-set recursion along a finite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViableTrace {
    /// `(x_i, W_i)` with `W_i` ascending.
    pub steps: Vec<(PointId, Vec<PointId>)>,
    /// Indices where an empty set was replaced by a fresh ball (restart mode).
    pub restart_marks: Vec<usize>,
}

impl ViableTrace {
    /// First index whose viable set is empty.
    pub fn first_empty(&self) -> Option<usize> {
        self.steps.iter().position(|(_, w)| w.is_empty())
    }
}

/// Viable sets along `seq`, stopping at the first empty one.
pub fn viable_trace(f: &SystemMap, seq: &[PointId], epsilon: &Rational) -> ViableTrace {
    let kernel = Viability::new(f, epsilon);
    let mut steps = Vec::with_capacity(seq.len());
    let mut w: Option<FixedBitSet> = None;
    for &x in seq {
        let next = match &w {
            None => kernel.start(x),
            Some(prev) => kernel.step(prev, x),
        };
        let empty = next.is_clear();
        steps.push((x, next.ones().collect()));
        if empty {
            break;
        }
        w = Some(next);
    }
    ViableTrace {
        steps,
        restart_marks: Vec::new(),
    }
}

/// Outcome of testing one infinite pseudo-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shadowability {
    /// The orbit of `by` stays within `ε` of every term.
    Shadowed { by: PointId },
    /// The viable set first empties at this index.
    Unshadowable { at: usize },
}

/// Decides whether a single orbit `ε`-shadows the lasso.
///
/// The viable-set recursion runs until the pair (cycle position, `W`)
/// repeats, at which point the sets are periodic and can never empty. The
/// shadowing point is then the least `z ∈ W_0` whose orbit passes a direct
/// check over the joint eventual period of the orbit and the lasso.
pub fn shadowability_of(
    f: &SystemMap,
    lasso: &LassoPseudoOrbit,
    epsilon: &Rational,
) -> Result<Shadowability, DecideError> {
    require_positive("epsilon", epsilon)?;
    lasso.validate(f)?;
    let kernel = Viability::new(f, epsilon);
    let stem_len = lasso.stem().len();
    let mut seen: HashMap<(usize, FixedBitSet), usize> = HashMap::new();
    let mut w = kernel.start(lasso.at(0));
    let mut i = 0;
    loop {
        if w.is_clear() {
            return Ok(Shadowability::Unshadowable { at: i });
        }
        if i >= stem_len && seen.insert((lasso.position(i), w.clone()), i).is_some() {
            break;
        }
        i += 1;
        w = kernel.step(&w, lasso.at(i));
    }
    let by = kernel
        .start(lasso.at(0))
        .ones()
        .find(|&z| orbit_shadows(f, z, lasso, epsilon))
        .expect("non-emptying viable sets admit a shadowing point");
    Ok(Shadowability::Shadowed { by })
}

/// Direct check of `d(f^i z, x_i) < ε` over every index that can differ.
pub fn orbit_shadows(f: &SystemMap, z: PointId, lasso: &LassoPseudoOrbit, epsilon: &Rational) -> bool {
    use num_integer::Integer;
    let (tail, cycle) = f.orbit_lasso(z);
    let span = tail.len().max(lasso.stem().len()) + cycle.len().lcm(&lasso.cycle().len());
    let space = f.space();
    let mut y = z;
    for i in 0..span {
        if space.dist(y, lasso.at(i)) >= epsilon {
            return false;
        }
        y = f.apply(y);
    }
    true
}

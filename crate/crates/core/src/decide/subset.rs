use super::{require_positive, Budget, DecideError, Explorer, Viability};
use crate::orbit::{build_step_graph, extend_to_lasso, Chain, LassoPseudoOrbit};
use crate::rational::Rational;
use crate::system::SystemMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    /// Every δ-pseudo-orbit is ε-shadowed; `reachable_states` counts the
    /// closed set of subset states that certifies it.
    Shadows { reachable_states: usize },
    /// `witness` is a δ-pseudo-orbit whose viable set empties at
    /// `failing_index`.
    Fails {
        witness: LassoPseudoOrbit,
        failing_index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowingVerdict {
    pub epsilon: Rational,
    pub delta: Rational,
    pub answer: Answer,
}

impl ShadowingVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self.answer, Answer::Shadows { .. })
    }

    pub fn witness(&self) -> Option<&LassoPseudoOrbit> {
        match &self.answer {
            Answer::Fails { witness, .. } => Some(witness),
            Answer::Shadows { .. } => None,
        }
    }
}

/// Breadth-first exploration of the states `(x, W)`.
///
/// Initial states are taken in ascending order of `x_0` and successors in
/// ascending order of the next point, so the first empty state discovered ends
/// the lexicographically least among the shortest failing prefixes.
pub fn decide_shadowing(
    f: &SystemMap,
    epsilon: &Rational,
    delta: &Rational,
    budget: Budget,
) -> Result<ShadowingVerdict, DecideError> {
    require_positive("epsilon", epsilon)?;
    require_positive("delta", delta)?;
    let graph = build_step_graph(f, delta);
    let kernel = Viability::new(f, epsilon);

    let mut ex = Explorer::new(budget);
    for x in f.space().points() {
        ex.admit((x, kernel.start(x)), None)?;
    }
    let mut failing = None;
    'search: while let Some(s) = ex.queue.pop_front() {
        let (x, w) = ex.states[s].clone();
        for &y in graph.successors(x) {
            let next = kernel.step(&w, y);
            let empty = next.is_clear();
            if let Some(id) = ex.admit((y, next), Some(s))? {
                if empty {
                    failing = Some(id);
                    break 'search;
                }
            }
        }
    }

    let answer = match failing {
        None => Answer::Shadows {
            reachable_states: ex.states.len(),
        },
        Some(end) => {
            let prefix = ex.path_to(end);
            let failing_index = prefix.len() - 1;
            let chain = Chain::new(f, prefix, delta.clone()).expect("graph walks are δ-chains");
            Answer::Fails {
                witness: extend_to_lasso(f, &chain),
                failing_index,
            }
        }
    };
    Ok(ShadowingVerdict {
        epsilon: epsilon.clone(),
        delta: delta.clone(),
        answer,
    })
}

/// A witness pseudo-orbit when `(ε, δ)`-shadowing fails.
pub fn unshadowable_witness(
    f: &SystemMap,
    epsilon: &Rational,
    delta: &Rational,
    budget: Budget,
) -> Result<Option<LassoPseudoOrbit>, DecideError> {
    Ok(decide_shadowing(f, epsilon, delta, budget)?.witness().cloned())
}

/// Largest workable δ among the candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxDelta {
    /// Largest feasible positive distance; `0` only on a one-point space.
    pub value: Rational,
    /// `false` when every δ works, so no candidate is a true maximum.
    pub attained: bool,
}

/// δ*(ε): the largest positive distance `v` with `(ε, v)`-shadowing.
///
/// Edge sets only change at distance values, and feasibility is down-closed,
/// so a binary search over the positive spectrum is exact. A δ beyond the
/// diameter makes the step graph complete; if even that works, the result is
/// flagged as not attained.
pub fn max_delta(f: &SystemMap, epsilon: &Rational, budget: Budget) -> Result<MaxDelta, DecideError> {
    require_positive("epsilon", epsilon)?;
    let space = f.space();
    let beyond = space.diameter() + Rational::one();
    if decide_shadowing(f, epsilon, &beyond, budget)?.is_yes() {
        return Ok(MaxDelta {
            value: space.diameter(),
            attained: false,
        });
    }
    let candidates = space.positive_spectrum();
    // The least positive distance only admits exact orbits, which shadow
    // themselves, so index 0 is always feasible.
    let (mut lo, mut hi) = (0usize, candidates.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if decide_shadowing(f, epsilon, &candidates[mid], budget)?.is_yes() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(MaxDelta {
        value: candidates[lo].clone(),
        attained: true,
    })
}

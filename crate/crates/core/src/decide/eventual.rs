//! Eventual shadowing: some suffix of every δ-pseudo-orbit is ε-shadowed.
//!
//! The restart construction replaces an emptied viable set by the fresh ball
//! `ball(x_i, ε)` and marks the step. A pseudo-orbit has an ε-shadowed suffix
//! exactly when its restart run is marked only finitely often, so eventual
//! shadowing fails iff a marked transition lies on a cycle of the reachable
//! restart-state graph.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use petgraph::graph::DiGraph;

use super::{require_positive, Budget, DecideError, Explorer, Viability, ViableTrace};
use crate::orbit::{build_step_graph, LassoPseudoOrbit};
use crate::rational::Rational;
use crate::space::PointId;
use crate::system::SystemMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventualVerdict {
    Yes {
        reachable_states: usize,
    },
    /// A δ-pseudo-orbit whose restart run is marked once per cycle pass.
    No {
        witness: LassoPseudoOrbit,
    },
}

impl EventualVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, EventualVerdict::Yes { .. })
    }
}

/// One restart step: the next viable set and whether it had to be reset.
fn restart_step(kernel: &Viability<'_>, w: &FixedBitSet, y: PointId) -> (FixedBitSet, bool) {
    let next = kernel.step(w, y);
    if next.is_clear() {
        (kernel.start(y), true)
    } else {
        (next, false)
    }
}

/// Restart-mode viable sets along a finite sequence.
pub fn restart_trace(f: &SystemMap, seq: &[PointId], epsilon: &Rational) -> ViableTrace {
    let kernel = Viability::new(f, epsilon);
    let mut steps = Vec::with_capacity(seq.len());
    let mut restart_marks = Vec::new();
    let mut w: Option<FixedBitSet> = None;
    for (i, &x) in seq.iter().enumerate() {
        let next = match &w {
            None => kernel.start(x),
            Some(prev) => {
                let (next, marked) = restart_step(&kernel, prev, x);
                if marked {
                    restart_marks.push(i);
                }
                next
            }
        };
        steps.push((x, next.ones().collect()));
        w = Some(next);
    }
    ViableTrace { steps, restart_marks }
}

/// Whether some suffix of the lasso is ε-shadowed by an orbit.
pub fn eventually_shadowed(f: &SystemMap, lasso: &LassoPseudoOrbit, epsilon: &Rational) -> Result<bool, DecideError> {
    require_positive("epsilon", epsilon)?;
    lasso.validate(f)?;
    let kernel = Viability::new(f, epsilon);
    let stem_len = lasso.stem().len();
    let mut seen: HashMap<(usize, FixedBitSet), usize> = HashMap::new();
    let mut last_mark = None;
    let mut w = kernel.start(lasso.at(0));
    let mut i = 0;
    loop {
        if i >= stem_len {
            if let Some(first) = seen.insert((lasso.position(i), w.clone()), i) {
                return Ok(last_mark.is_none_or(|m| m <= first));
            }
        }
        i += 1;
        let (next, marked) = restart_step(&kernel, &w, lasso.at(i));
        if marked {
            last_mark = Some(i);
        }
        w = next;
    }
}

pub fn decide_eventual_shadowing(
    f: &SystemMap,
    epsilon: &Rational,
    delta: &Rational,
    budget: Budget,
) -> Result<EventualVerdict, DecideError> {
    require_positive("epsilon", epsilon)?;
    require_positive("delta", delta)?;
    let graph = build_step_graph(f, delta);
    let kernel = Viability::new(f, epsilon);

    let mut ex = Explorer::new(budget);
    for x in f.space().points() {
        ex.admit((x, kernel.start(x)), None)?;
    }
    // (from, to, marked) in discovery order
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    while let Some(s) = ex.queue.pop_front() {
        let (x, w) = ex.states[s].clone();
        for &y in graph.successors(x) {
            let (next, marked) = restart_step(&kernel, &w, y);
            let key = (y, next);
            let id = match ex.admit(key.clone(), Some(s))? {
                Some(id) => id,
                None => ex.id_of(&key),
            };
            edges.push((s, id, marked));
        }
    }

    let mut g = DiGraph::<(), ()>::with_capacity(ex.states.len(), edges.len());
    let nodes: Vec<_> = (0..ex.states.len()).map(|_| g.add_node(())).collect();
    for &(a, b, _) in &edges {
        g.add_edge(nodes[a], nodes[b], ());
    }
    let mut component = vec![0usize; ex.states.len()];
    for (c, members) in petgraph::algo::tarjan_scc(&g).into_iter().enumerate() {
        for n in members {
            component[n.index()] = c;
        }
    }
    let Some(&(u, v, _)) = edges.iter().find(|&&(a, b, m)| m && component[a] == component[b]) else {
        return Ok(EventualVerdict::Yes {
            reachable_states: ex.states.len(),
        });
    };

    let mut stem = ex.path_to(u);
    stem.pop();
    let mut cycle = vec![ex.states[u].0];
    cycle.extend(state_path(&ex, &edges, v, u).into_iter().map(|s| ex.states[s].0));
    cycle.pop();
    let witness =
        LassoPseudoOrbit::new(f, stem, cycle, delta.clone()).expect("restart-graph cycles are δ-pseudo-orbits");
    Ok(EventualVerdict::No { witness })
}

/// Shortest state path `from → … → to` (inclusive) in the restart graph.
fn state_path(ex: &Explorer, edges: &[(usize, usize, bool)], from: usize, to: usize) -> Vec<usize> {
    let mut adjacency = vec![Vec::new(); ex.states.len()];
    for &(a, b, _) in edges {
        adjacency[a].push(b);
    }
    let mut parent = vec![usize::MAX; ex.states.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            break;
        }
        for &t in &adjacency[s] {
            if parent[t] == usize::MAX {
                parent[t] = s;
                queue.push_back(t);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

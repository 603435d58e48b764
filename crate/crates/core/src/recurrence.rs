//! Recurrence, rigidity and chain structure.
//!
//! On a finite space a point is recurrent exactly when it is periodic, and a
//! system is recurrent exactly when its map is a permutation.

use crate::orbit::build_step_graph;
use crate::rational::Rational;
use crate::space::PointId;
use crate::system::{IterateProfile, SystemError, SystemMap};

/// Points lying on cycles of `f`, ascending.
pub fn periodic_points(f: &SystemMap) -> Vec<PointId> {
    let mut on_cycle = vec![false; f.len()];
    for x in f.space().points() {
        if on_cycle[x] {
            continue;
        }
        for y in f.orbit_lasso(x).1 {
            on_cycle[y] = true;
        }
    }
    (0..f.len()).filter(|&x| on_cycle[x]).collect()
}

/// Least `n > 0` with `d(f^n(x), x) < ε`, if the orbit ever comes back.
pub fn return_time(f: &SystemMap, x: PointId, epsilon: &Rational) -> Option<u64> {
    let (tail, cycle) = f.orbit_lasso(x);
    let horizon = (tail.len() + cycle.len()) as u64;
    let mut y = x;
    (1..=horizon).find(|_| {
        y = f.apply(y);
        f.space().dist(y, x) < epsilon
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnTimes {
    pub epsilon: Rational,
    /// Indexed by point.
    pub times: Vec<Option<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub is_recurrent_system: bool,
    /// Least `n > 0` with `f^n = id`.
    pub period: Option<u64>,
    /// One row per positive distance.
    pub return_times: Vec<ReturnTimes>,
}

pub fn recurrence_report(f: &SystemMap) -> Result<RecurrenceReport, SystemError> {
    let is_recurrent_system = f.is_permutation();
    let period = if is_recurrent_system {
        Some(f.iterate_semigroup()?.cycle_len)
    } else {
        None
    };
    let return_times = f
        .space()
        .positive_spectrum()
        .into_iter()
        .map(|epsilon| {
            let times = f.space().points().map(|x| return_time(f, x, &epsilon)).collect();
            ReturnTimes { epsilon, times }
        })
        .collect();
    Ok(RecurrenceReport {
        is_recurrent_system,
        period,
        return_times,
    })
}

/// `min_{1 ≤ n ≤ N} ρ(f^n, id)`.
///
/// Iterates beyond `t + c` repeat earlier ones, so the scan stops there.
pub fn rigidity_defect(f: &SystemMap, horizon: u64) -> Result<Rational, SystemError> {
    assert!(horizon >= 1, "rigidity horizon must be at least 1");
    let profile = f.iterate_semigroup()?;
    let stop = horizon.min(profile.tail_len + profile.cycle_len);
    let mut power = f.clone();
    let mut best = power.displacement();
    for _ in 1..stop {
        power = power.compose(f)?;
        best = best.min(power.displacement());
        if best.is_zero() {
            break;
        }
    }
    Ok(best)
}

/// Least `l` such that every length-`l` window of the orbit of `x` meets
/// `ball(x, ε)`; `None` when the orbit stops returning.
pub fn almost_periodic_bound(f: &SystemMap, x: PointId, epsilon: &Rational) -> Option<u64> {
    let (tail, cycle) = f.orbit_lasso(x);
    let space = f.space();
    if !cycle.iter().any(|&y| space.dist(y, x) < epsilon) {
        return None;
    }
    // two passes over the cycle expose every gap, including the wrap
    let span = tail.len() + 2 * cycle.len() + 1;
    let mut y = x;
    let mut last_hit = 0u64;
    let mut bound = 1u64;
    for i in 1..span as u64 {
        y = f.apply(y);
        if space.dist(y, x) < epsilon {
            bound = bound.max(i - last_hit);
            last_hit = i;
        }
    }
    Some(bound)
}

/// Points reachable from `p` by δ-chains with at least one step.
pub fn chain_reach(f: &SystemMap, p: PointId, delta: &Rational) -> Vec<PointId> {
    build_step_graph(f, delta).reach(p)
}

/// Intersection of [`chain_reach`] over every positive distance, the chain
/// accessible set of `p` at this resolution.
pub fn chain_accessible_set(f: &SystemMap, p: PointId) -> Vec<PointId> {
    let mut keep = vec![true; f.len()];
    let spectrum = f.space().positive_spectrum();
    if spectrum.is_empty() {
        return chain_reach(f, p, &Rational::one());
    }
    for delta in spectrum {
        let reach = chain_reach(f, p, &delta);
        let mut inside = vec![false; f.len()];
        for y in reach {
            inside[y] = true;
        }
        for (k, i) in keep.iter_mut().zip(inside) {
            *k &= i;
        }
    }
    (0..f.len()).filter(|&y| keep[y]).collect()
}

/// A chain-transitive class at a fixed δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainClass {
    pub members: Vec<PointId>,
    pub delta: Rational,
    pub transitive: bool,
    /// The class is exactly one `f`-cycle.
    pub minimal: bool,
}

/// Strongly connected components of the δ-step graph that carry a closed
/// walk, ordered by least member.
pub fn chain_classes(f: &SystemMap, delta: &Rational) -> Vec<ChainClass> {
    let graph = build_step_graph(f, delta);
    graph
        .components()
        .into_iter()
        .filter(|c| c.len() > 1 || graph.has_edge(c[0], c[0]))
        .map(|members| {
            let (tail, mut cycle) = f.orbit_lasso(members[0]);
            cycle.sort_unstable();
            let minimal = tail.is_empty() && cycle == members;
            ChainClass {
                members,
                delta: delta.clone(),
                transitive: true,
                minimal,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSummary {
    pub delta: Rational,
    pub class_count: usize,
    pub minimal_count: usize,
    pub largest: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub is_permutation: bool,
    pub period: Option<u64>,
    pub horizon: u64,
    pub rigidity_defect: Rational,
    pub iterate_profile: IterateProfile,
    pub chain_summary: Vec<ChainSummary>,
    pub notes: Vec<String>,
}

/// Gathers permutation, period, rigidity and iterate data, chain classes at
/// every positive distance, and the structural predictions they trigger.
pub fn classify_system(f: &SystemMap, horizon: u64) -> Result<ClassificationReport, SystemError> {
    let is_permutation = f.is_permutation();
    let iterate_profile = f.iterate_semigroup()?;
    let period = is_permutation.then_some(iterate_profile.cycle_len);
    let rigidity_defect = rigidity_defect(f, horizon)?;
    let space = f.space();
    let chain_summary: Vec<ChainSummary> = space
        .positive_spectrum()
        .into_iter()
        .map(|delta| {
            let classes = chain_classes(f, &delta);
            ChainSummary {
                class_count: classes.len(),
                minimal_count: classes.iter().filter(|c| c.minimal).count(),
                largest: classes.iter().map(|c| c.members.len()).max().unwrap_or(0),
                delta,
            }
        })
        .collect();

    let mut notes = Vec::new();
    if let Some(p) = period {
        notes.push(format!(
            "periodic with period {p}: f^{p} = id, so the rigidity construction yields a positive δ at every ε admitting a clopen cover"
        ));
        notes.push(
            "permutation: at δ ≤ min gap every chain class is a single f-cycle, so the space splits into minimal sets"
                .to_string(),
        );
    } else if rigidity_defect.is_zero() {
        notes.push(format!("uniformly rigid up to horizon {horizon}"));
    } else {
        notes.push(format!(
            "not a permutation; rigidity defect {rigidity_defect} at horizon {horizon}"
        ));
    }
    if let Some(c) = iterate_profile.limit_constant {
        notes.push(format!(
            "iterates converge to the constant map at {}: a positive δ from convergence is available at every ε",
            space.label(c)
        ));
        if !is_permutation && !rigidity_defect.is_zero() {
            notes.push(
                "non-periodic points feed into the limit: expect δ*(ε) bounded by the gaps between injected points"
                    .to_string(),
            );
        }
    } else {
        let r = &iterate_profile.eventual_image;
        notes.push(format!(
            "eventual image has {} of {} points and f^{} is a retraction onto it",
            r.len(),
            f.len(),
            iterate_profile.idempotent_exp
        ));
    }
    if let Some(min_gap) = space.min_gap() {
        let components = space.h_components(&(&min_gap + &min_gap));
        if components.len() == 1 && f.len() > 1 {
            notes.push(
                "space is chained at twice its minimal gap: connected-like behaviour, expect max_delta to shrink with the mesh"
                    .to_string(),
            );
        }
    }
    Ok(ClassificationReport {
        is_permutation,
        period,
        horizon,
        rigidity_defect,
        iterate_profile,
        chain_summary,
        notes,
    })
}

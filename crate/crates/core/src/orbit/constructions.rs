//! Explicit chain and pseudo-orbit constructions.

use std::collections::VecDeque;

use thiserror::Error;

use super::{validate_chain, Chain, ChainError, LassoPseudoOrbit};
use crate::builders::{build_example, BuildError, ExampleSpec};
use crate::rational::Rational;
use crate::space::PointId;
use crate::system::SystemMap;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("spatial chain is empty")]
    EmptyChain,
    #[error("point index {0} out of range")]
    UnknownPoint(PointId),
    #[error("iterate exponent must be positive")]
    ZeroIterate,
    #[error("spatial step {index} is not shorter than δ/2")]
    SpatialGap { index: usize },
    #[error("ρ(f^N, id) = {rho} is not below δ/2")]
    NotRigid { rho: Rational },
    #[error("δ = {delta} must exceed {needed}")]
    DeltaTooSmall { delta: Rational, needed: Rational },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// δ-chain from `y` back to a periodic point `x`, for `y` close to `f(x)`.
///
/// Uses `a_0 = y`, `a_i = f^{i+1}(x)` for `0 < i < M−1`, `a_{M−1} = x`, with
/// `M` the least multiple of the period of `x` exceeding 2. `None` when `x` is
/// not periodic or `d(f(x), y)` is not below `continuity_modulus(f, δ, 1)`.
pub fn reverse_chain(f: &SystemMap, x: PointId, y: PointId, delta: &Rational) -> Option<Chain> {
    if x >= f.len() || y >= f.len() {
        return None;
    }
    let period = f.period_of(x)? as usize;
    let eta = f.continuity_modulus(delta, 1);
    if !eta.exceeds(f.space().dist(f.apply(x), y)) {
        return None;
    }
    let m = (2 / period + 1) * period;
    let mut points = Vec::with_capacity(m);
    points.push(y);
    let mut z = f.apply(f.apply(x));
    for _ in 1..m - 1 {
        points.push(z);
        z = f.apply(z);
    }
    points.push(x);
    Chain::new(f, points, delta.clone()).ok()
}

/// δ-chain from `p` to `q` inside their common `δ/2`-component, for a
/// permutation `f`.
///
/// A spatial path `p = x_0, …, x_n = q` with steps `< δ/2` is found by
/// breadth-first search; each `x_j` contributes its full periodic orbit
/// before the chain jumps to `x_{j+1}`. For `p = q` the result is the period
/// loop at `p`.
pub fn chain_through_component(f: &SystemMap, p: PointId, q: PointId, delta: &Rational) -> Option<Chain> {
    if !f.is_permutation() || p >= f.len() || q >= f.len() {
        return None;
    }
    let half = delta / &Rational::from_integer(2);
    let period = |x: PointId| f.period_of(x).expect("permutations are periodic") as usize;
    let mut points = Vec::new();
    if p == q {
        let mut z = p;
        for _ in 0..period(p) {
            points.push(z);
            z = f.apply(z);
        }
        points.push(p);
    } else {
        let path = spatial_path(f, p, q, &half)?;
        for &x in &path[..path.len() - 1] {
            let mut z = x;
            for _ in 0..period(x) {
                points.push(z);
                z = f.apply(z);
            }
        }
        points.push(q);
    }
    Chain::new(f, points, delta.clone()).ok()
}

fn spatial_path(f: &SystemMap, p: PointId, q: PointId, h: &Rational) -> Option<Vec<PointId>> {
    let space = f.space();
    let mut parent = vec![usize::MAX; space.len()];
    parent[p] = p;
    let mut queue = VecDeque::from([p]);
    while let Some(x) = queue.pop_front() {
        if x == q {
            let mut path = vec![q];
            let mut y = q;
            while y != p {
                y = parent[y];
                path.push(y);
            }
            path.reverse();
            return Some(path);
        }
        for y in space.points() {
            if parent[y] == usize::MAX && space.dist(x, y) < h {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Block pseudo-orbit `c_i = f^{i−jN}(a_j)` for `jN ≤ i < (j+1)N`, with the
/// spatial chain held at its last point afterwards.
///
/// Requires consecutive spatial distances `< δ/2` and `ρ(f^N, id) < δ/2`. The
/// result's cycle is the first `N` iterates of the final point.
pub fn block_pseudo_orbit(
    f: &SystemMap,
    spatial_chain: &[PointId],
    n: u64,
    delta: &Rational,
) -> Result<LassoPseudoOrbit, BlockError> {
    let (&last, init) = spatial_chain.split_last().ok_or(BlockError::EmptyChain)?;
    if let Some(&bad) = spatial_chain.iter().find(|&&p| p >= f.len()) {
        return Err(BlockError::UnknownPoint(bad));
    }
    if n == 0 {
        return Err(BlockError::ZeroIterate);
    }
    let half = delta / &Rational::from_integer(2);
    let space = f.space();
    if let Some(index) = spatial_chain.windows(2).position(|w| space.dist(w[0], w[1]) >= &half) {
        return Err(BlockError::SpatialGap { index });
    }
    let rho = f.iterate(n).displacement();
    if rho >= half {
        return Err(BlockError::NotRigid { rho });
    }
    let block = |a: PointId| {
        let mut out = Vec::with_capacity(n as usize);
        let mut z = a;
        for _ in 0..n {
            out.push(z);
            z = f.apply(z);
        }
        out
    };
    let stem = init.iter().flat_map(|&a| block(a)).collect();
    Ok(LassoPseudoOrbit::new(f, stem, block(last), delta.clone())?)
}

/// The pseudo-orbit `p_i = 3^{(i mod (M+1))} / 3^M` for the middle-third map,
/// over the points of `build_example(Cantor { level: M })`.
///
/// Needs `δ > 3^{-M}`: the only inexact step jumps from `t(1) = 0` back to
/// `3^{-M}`.
pub fn bad_cantor_pseudo_orbit(level: u32, delta: &Rational) -> Result<LassoPseudoOrbit, BlockError> {
    let f = build_example(&ExampleSpec::Cantor { level })?;
    let needed = Rational::pow(3, -(level as i32));
    if delta <= &needed {
        return Err(BlockError::DeltaTooSmall {
            delta: delta.clone(),
            needed,
        });
    }
    let cycle = (0..=level as i32)
        .map(|j| {
            let value = Rational::pow(3, j - level as i32);
            f.space().point(&value.to_string()).expect("3^-j is a level-M endpoint")
        })
        .collect::<Vec<_>>();
    validate_chain(&f, &cycle, delta)?;
    Ok(LassoPseudoOrbit::new(&f, Vec::new(), cycle, delta.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cantor, circle_grid, interval_grid};
    use crate::rational::q;
    use crate::space::{Embedding, FiniteMetricSpace};
    use std::sync::Arc;

    fn labels(f: &SystemMap, pts: &[PointId]) -> Vec<String> {
        pts.iter().map(|&p| f.space().label(p).to_string()).collect()
    }

    fn rot() -> SystemMap {
        circle_grid(4, &q("1/4")).unwrap()
    }

    #[test]
    fn reverse_chain_on_rotation() {
        let r = rot();
        let c = reverse_chain(&r, 0, 1, &q("1/8")).unwrap();
        assert_eq!(labels(&r, c.points()), ["1/4", "1/2", "3/4", "0"]);
    }

    #[test]
    fn reverse_chain_fixed_point_and_non_periodic() {
        let id = interval_grid(4).unwrap();
        let c = reverse_chain(&id, 2, 2, &q("1/8")).unwrap();
        assert!(c.points().iter().all(|&p| p == 2));
        let t = cantor(2).unwrap();
        let x = t.space().point("1/9").unwrap();
        assert!(reverse_chain(&t, x, t.apply(x), &q("1/2")).is_none());
    }

    #[test]
    fn reverse_chain_refuses_far_points() {
        let r = rot();
        // η = modulus(rot, 1/8, 1) = 1/4; d(f(0), 1/2) = 1/4 is not below it
        assert!(reverse_chain(&r, 0, 2, &q("1/8")).is_none());
    }

    #[test]
    fn component_chain_on_five_cycle() {
        let coords = ["0", "1/5", "2/5", "3/5", "4/5"];
        let space = Arc::new(
            FiniteMetricSpace::from_coordinates(
                coords.iter().map(|c| c.to_string()).collect(),
                coords.iter().map(|c| q(c)).collect(),
                Embedding::Line,
            )
            .unwrap(),
        );
        // 0→2/5→4/5→1/5→3/5→0
        let f = SystemMap::new(space, vec![2, 3, 4, 0, 1]).unwrap();
        let c = chain_through_component(&f, 0, 1, &q("1/2")).unwrap();
        assert_eq!(labels(&f, c.points()), ["0", "2/5", "4/5", "1/5", "3/5", "1/5"]);

        let loop_at_0 = chain_through_component(&f, 0, 0, &q("1/2")).unwrap();
        assert_eq!(labels(&f, loop_at_0.points()), ["0", "2/5", "4/5", "1/5", "3/5", "0"]);
    }

    #[test]
    fn component_chain_needs_permutation_and_component() {
        let t = cantor(1).unwrap();
        assert!(chain_through_component(&t, 0, 1, &q("1")).is_none());
        let id = interval_grid(4).unwrap();
        // δ/2 = 1/8 < spacing: every point is its own component
        assert!(chain_through_component(&id, 0, 1, &q("1/4")).is_none());
        assert!(chain_through_component(&id, 0, 4, &q("3/4")).is_some());
    }

    #[test]
    fn block_orbit_on_rotation() {
        let r = rot();
        let l = block_pseudo_orbit(&r, &[0, 1, 2], 4, &q("3/5")).unwrap();
        assert_eq!(
            labels(&r, l.stem()),
            ["0", "1/4", "1/2", "3/4", "1/4", "1/2", "3/4", "0"]
        );
        assert_eq!(labels(&r, l.cycle()), ["1/2", "3/4", "0", "1/4"]);
    }

    #[test]
    fn block_orbit_identity_and_errors() {
        let id = interval_grid(4).unwrap();
        let l = block_pseudo_orbit(&id, &[0, 1], 1, &q("3/5")).unwrap();
        assert_eq!((l.stem(), l.cycle()), (&[0][..], &[1][..]));
        assert_eq!(
            block_pseudo_orbit(&id, &[0, 2], 1, &q("3/5")),
            Err(BlockError::SpatialGap { index: 0 })
        );
        let r = rot();
        assert_eq!(
            block_pseudo_orbit(&r, &[0], 1, &q("1/2")),
            Err(BlockError::NotRigid { rho: q("1/4") })
        );
    }

    #[test]
    fn bad_cantor_orbit_examples() {
        let l = bad_cantor_pseudo_orbit(2, &q("2/9")).unwrap();
        let t = cantor(2).unwrap();
        assert_eq!(labels(&t, l.cycle()), ["1/9", "1/3", "1"]);
        let l1 = bad_cantor_pseudo_orbit(1, &q("1/2")).unwrap();
        let t1 = cantor(1).unwrap();
        assert_eq!(labels(&t1, l1.cycle()), ["1/3", "1"]);
        assert!(matches!(
            bad_cantor_pseudo_orbit(2, &q("1/9")),
            Err(BlockError::DeltaTooSmall { .. })
        ));
    }
}

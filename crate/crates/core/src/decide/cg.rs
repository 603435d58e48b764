use std::collections::HashMap;

use super::{require_positive, shadowability_of, Budget, DecideError, Shadowability};
use crate::orbit::{build_step_graph, orbit_as_lasso};
use crate::rational::Rational;
use crate::space::PointId;
use crate::system::SystemMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CgVerdict {
    /// Every admissible `g`-orbit is shadowed.
    Yes { maps_checked: usize },
    /// The `g`-orbit of `start` is not `ε`-shadowed by any `f`-orbit.
    No { g: SystemMap, start: PointId, at: usize },
}

impl CgVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, CgVerdict::Yes { .. })
    }
}

/// Shadowing of orbits of maps `g` with `ρ(f, g) < δ`.
///
/// Every such `g` is enumerated in lexicographic order of its image table
/// (last point varying fastest) and each of its orbits is tested with
/// [`shadowability_of`]. Verdicts for identical orbit lassos are cached. The
/// number of maps must not exceed the budget.
pub fn decide_cg_shadowing(
    f: &SystemMap,
    epsilon: &Rational,
    delta: &Rational,
    budget: Budget,
) -> Result<CgVerdict, DecideError> {
    require_positive("epsilon", epsilon)?;
    require_positive("delta", delta)?;
    let graph = build_step_graph(f, delta);
    let n = f.len();
    let options: Vec<&[PointId]> = (0..n).map(|x| graph.successors(x)).collect();
    let total = options
        .iter()
        .try_fold(1usize, |acc, o| acc.checked_mul(o.len()))
        .filter(|&t| t <= budget.0)
        .ok_or(DecideError::BudgetExceeded { limit: budget.0 })?;

    let mut digits = vec![0usize; n];
    let mut cache: HashMap<(Vec<PointId>, Vec<PointId>), Shadowability> = HashMap::new();
    for _ in 0..total {
        let image: Vec<PointId> = digits.iter().zip(&options).map(|(&d, o)| o[d]).collect();
        let g = SystemMap::new(f.space_arc().clone(), image)?;
        for start in 0..n {
            let lasso = orbit_as_lasso(&g, start, delta.clone());
            let key = (lasso.stem().to_vec(), lasso.cycle().to_vec());
            let verdict = match cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = shadowability_of(f, &lasso, epsilon)?;
                    cache.insert(key, v.clone());
                    v
                }
            };
            if let Shadowability::Unshadowable { at } = verdict {
                return Ok(CgVerdict::No { g, start, at });
            }
        }
        // odometer increment, last point fastest
        for x in (0..n).rev() {
            digits[x] += 1;
            if digits[x] < options[x].len() {
                break;
            }
            digits[x] = 0;
        }
    }
    Ok(CgVerdict::Yes { maps_checked: total })
}

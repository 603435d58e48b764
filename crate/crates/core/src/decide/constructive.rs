//! δ values read off explicit shadowing constructions.

use super::{decide_shadowing, require_positive, Budget, DecideError};
use crate::rational::{Rational, Threshold};
use crate::system::SystemMap;

/// A δ produced by a construction, together with the scale and iterate it
/// was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructiveDelta {
    pub delta: Rational,
    /// Block separation for the rigidity route, `ε/(3N)` for convergence.
    pub eta: Rational,
    /// The iterate `N` used by the construction.
    pub iterate: u64,
}

impl ConstructiveDelta {
    /// Runs the decider at the constructed δ.
    pub fn verify(&self, f: &SystemMap, epsilon: &Rational, budget: Budget) -> Result<bool, DecideError> {
        Ok(decide_shadowing(f, epsilon, &self.delta, budget)?.is_yes())
    }
}

/// A finite stand-in for an infinite threshold: strictly above every distance.
fn clamp(f: &SystemMap, t: Threshold) -> Rational {
    match t {
        Threshold::Finite(v) => v,
        Threshold::Infinite => f.space().diameter() + Rational::one(),
    }
}

/// Rigid route: blocks of diameter `< ε` separated by `η`, an iterate with
/// `ρ(f^N, id) < η`, then `δ = min(modulus(f, η, N), η)`.
///
/// `None` when no clopen cover exists at `ε` or no iterate up to the
/// eventual period comes within `η` of the identity.
pub fn shadowing_delta_from_rigidity(
    f: &SystemMap,
    epsilon: &Rational,
) -> Result<Option<ConstructiveDelta>, DecideError> {
    require_positive("epsilon", epsilon)?;
    let Some(cover) = f.space().clopen_cover(epsilon) else {
        return Ok(None);
    };
    let eta = clamp(f, cover.separation);
    let profile = f.iterate_semigroup()?;
    let horizon = profile.tail_len + profile.cycle_len;
    let mut power = f.clone();
    let mut iterate = None;
    for n in 1..=horizon {
        if power.displacement() < eta {
            iterate = Some(n);
            break;
        }
        power = power.compose(f)?;
    }
    let Some(iterate) = iterate else {
        return Ok(None);
    };
    let modulus = clamp(f, f.continuity_modulus(&eta, iterate));
    let delta = modulus.min(eta.clone());
    Ok(Some(ConstructiveDelta { delta, eta, iterate }))
}

/// Convergence route: when `f^n` tends to a constant `c`, take the least `N`
/// with `ρ(f^m, c) < ε/3` for every `m ≥ N` and `δ = modulus(f, ε/(3N), N)`.
pub fn shadowing_delta_from_convergence(
    f: &SystemMap,
    epsilon: &Rational,
) -> Result<Option<ConstructiveDelta>, DecideError> {
    require_positive("epsilon", epsilon)?;
    let profile = f.iterate_semigroup()?;
    let Some(c) = profile.limit_constant else {
        return Ok(None);
    };
    let third = epsilon / &Rational::from_integer(3);
    let constant = SystemMap::constant(f.space_arc().clone(), c);
    // f^m is the constant map for every m ≥ max(t, 1), so only earlier
    // iterates can push N up.
    let settled = profile.tail_len.max(1);
    let mut iterate = settled;
    let mut power = f.clone();
    let mut close: Vec<bool> = Vec::with_capacity(settled as usize);
    for _ in 1..settled {
        close.push(power.rho_distance(&constant)? < third);
        power = power.compose(f)?;
    }
    while iterate > 1 && close[iterate as usize - 2] {
        iterate -= 1;
    }
    let eta = &third / &Rational::from_integer(iterate as i64);
    let delta = clamp(f, f.continuity_modulus(&eta, iterate));
    Ok(Some(ConstructiveDelta { delta, eta, iterate }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cantor, circle_grid, shift_to_limit};
    use crate::rational::q;

    #[test]
    fn rigidity_on_rotation_and_identity() {
        let b = Budget::default();
        let r = circle_grid(4, &q("1/4")).unwrap();
        let c = shadowing_delta_from_rigidity(&r, &q("3/10")).unwrap().unwrap();
        assert_eq!(
            c,
            ConstructiveDelta {
                delta: q("1/4"),
                eta: q("1/4"),
                iterate: 4
            }
        );
        assert!(c.verify(&r, &q("3/10"), b).unwrap());

        let id = SystemMap::identity(cantor(1).unwrap().space_arc().clone());
        let c = shadowing_delta_from_rigidity(&id, &q("1/2")).unwrap().unwrap();
        assert_eq!((c.delta.clone(), c.eta.clone(), c.iterate), (q("1/3"), q("1/3"), 1));
        assert!(c.verify(&id, &q("1/2"), b).unwrap());
    }

    #[test]
    fn cantor_map_is_not_rigid() {
        let t = cantor(2).unwrap();
        assert_eq!(shadowing_delta_from_rigidity(&t, &q("1/2")).unwrap(), None);
    }

    #[test]
    fn convergence_examples() {
        let b = Budget::default();
        let t = cantor(2).unwrap();
        let c = shadowing_delta_from_convergence(&t, &q("1/2")).unwrap().unwrap();
        assert_eq!(c.iterate, 3);
        assert_eq!(c.eta, q("1/18"));
        assert_eq!(c.delta, q("1/9"));
        assert!(c.verify(&t, &q("1/2"), b).unwrap());

        let s = shift_to_limit(2).unwrap();
        let c = shadowing_delta_from_convergence(&s, &q("1/2")).unwrap().unwrap();
        assert_eq!(c.iterate, 3);
        assert!(c.delta.is_positive());
        assert!(c.verify(&s, &q("1/2"), b).unwrap());

        let r = circle_grid(4, &q("1/4")).unwrap();
        assert_eq!(shadowing_delta_from_convergence(&r, &q("1/2")).unwrap(), None);
    }
}

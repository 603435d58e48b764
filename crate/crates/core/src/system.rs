//! Self-maps of finite metric spaces and their iterates.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use thiserror::Error;

use crate::rational::{Rational, Threshold};
use crate::space::{FiniteMetricSpace, PointId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SystemViolation {
    #[error("map table has {got} entries for {expected} points")]
    WrongLength { expected: usize, got: usize },
    #[error("no image given for point {0}")]
    Missing(PointId),
    #[error("image of point {point} is {image}, out of range")]
    OutOfRange { point: PointId, image: PointId },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error(transparent)]
    Invalid(#[from] SystemViolation),
    #[error("maps are defined on different spaces")]
    SpaceMismatch,
    #[error("lcm of cycle lengths overflows u64")]
    PeriodOverflow,
}

/// Checks that a (possibly partial) image table is total and in range.
pub fn validate_system(point_count: usize, image: &[Option<PointId>]) -> Result<(), SystemViolation> {
    if image.len() != point_count {
        return Err(SystemViolation::WrongLength {
            expected: point_count,
            got: image.len(),
        });
    }
    for (point, entry) in image.iter().enumerate() {
        match entry {
            None => return Err(SystemViolation::Missing(point)),
            Some(y) if *y >= point_count => return Err(SystemViolation::OutOfRange { point, image: *y }),
            Some(_) => {}
        }
    }
    Ok(())
}

/// A total self-map given as an index table.
#[derive(Clone)]
pub struct SystemMap {
    space: Arc<FiniteMetricSpace>,
    image: Vec<PointId>,
}

impl PartialEq for SystemMap {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.image == other.image
    }
}

impl Eq for SystemMap {}

impl fmt::Debug for SystemMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for x in self.space.points() {
            m.entry(&self.space.label(x), &self.space.label(self.image[x]));
        }
        m.finish()
    }
}

impl SystemMap {
    pub fn new(space: Arc<FiniteMetricSpace>, image: Vec<PointId>) -> Result<Self, SystemError> {
        let partial: Vec<Option<PointId>> = image.iter().copied().map(Some).collect();
        validate_system(space.len(), &partial)?;
        Ok(SystemMap { space, image })
    }

    pub fn identity(space: Arc<FiniteMetricSpace>) -> Self {
        let image = space.points().collect();
        SystemMap { space, image }
    }

    pub fn constant(space: Arc<FiniteMetricSpace>, c: PointId) -> Self {
        assert!(c < space.len(), "constant value out of range");
        let image = vec![c; space.len()];
        SystemMap { space, image }
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn image_table(&self) -> &[PointId] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: PointId) -> PointId {
        self.image[x]
    }

    /// `f^n(x)` by direct iteration.
    pub fn apply_n(&self, mut x: PointId, n: u64) -> PointId {
        for _ in 0..n {
            x = self.image[x];
        }
        x
    }

    pub fn same_space(&self, other: &SystemMap) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SystemMap) -> Result<SystemMap, SystemError> {
        if !self.same_space(other) {
            return Err(SystemError::SpaceMismatch);
        }
        let image = other.image.iter().map(|&y| self.image[y]).collect();
        Ok(SystemMap {
            space: self.space.clone(),
            image,
        })
    }

    /// `f^n`, by repeated squaring.
    pub fn iterate(&self, mut n: u64) -> SystemMap {
        let mut result = SystemMap::identity(self.space.clone());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = base.compose(&result).expect("same space");
            }
            base = base.compose(&base).expect("same space");
            n >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for &y in &self.image {
            if std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        true
    }

    /// Sorted image set `f(X)`.
    pub fn image_set(&self) -> Vec<PointId> {
        let mut hit = vec![false; self.len()];
        for &y in &self.image {
            hit[y] = true;
        }
        (0..self.len()).filter(|&y| hit[y]).collect()
    }

    /// The orbit of `x` split into its pre-periodic tail and its cycle.
    pub fn orbit_lasso(&self, x: PointId) -> (Vec<PointId>, Vec<PointId>) {
        let mut first_seen = vec![usize::MAX; self.len()];
        let mut orbit = Vec::new();
        let mut y = x;
        while first_seen[y] == usize::MAX {
            first_seen[y] = orbit.len();
            orbit.push(y);
            y = self.image[y];
        }
        let cycle = orbit.split_off(first_seen[y]);
        (orbit, cycle)
    }

    /// Least `n > 0` with `f^n(x) = x`, if `x` lies on a cycle.
    pub fn period_of(&self, x: PointId) -> Option<u64> {
        let (tail, cycle) = self.orbit_lasso(x);
        tail.is_empty().then_some(cycle.len() as u64)
    }

    /// `ρ(f, g) = max_x d(f(x), g(x))`.
    pub fn rho_distance(&self, other: &SystemMap) -> Result<Rational, SystemError> {
        if !self.same_space(other) {
            return Err(SystemError::SpaceMismatch);
        }
        Ok(self.rho_unchecked(other))
    }

    fn rho_unchecked(&self, other: &SystemMap) -> Rational {
        self.space
            .points()
            .map(|x| self.space.dist(self.image[x], other.image[x]))
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `ρ(f, id)`.
    pub fn displacement(&self) -> Rational {
        self.space
            .points()
            .map(|x| self.space.dist(x, self.image[x]))
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Largest `δ` in the spectrum (or `∞`) with
    /// `d(a,b) < δ ⇒ d(f^i a, f^i b) < eta` for every `0 ≤ i ≤ n`.
    pub fn continuity_modulus(&self, eta: &Rational, n: u64) -> Threshold {
        let space = &*self.space;
        let mut bound = Threshold::Infinite;
        for a in space.points() {
            for b in a + 1..space.len() {
                let d = space.dist(a, b);
                if !bound.exceeds(d) {
                    continue;
                }
                if self.pair_breaks(a, b, eta, n) {
                    bound = Threshold::Finite(d.clone());
                }
            }
        }
        bound
    }

    fn pair_breaks(&self, mut a: PointId, mut b: PointId, eta: &Rational, n: u64) -> bool {
        let mut seen = HashSet::new();
        let mut i = 0u64;
        loop {
            if self.space.dist(a, b) >= eta {
                return true;
            }
            if i == n || !seen.insert((a, b)) {
                return false;
            }
            a = self.image[a];
            b = self.image[b];
            i += 1;
        }
    }

    /// Tail, period, idempotent power and eventual image of the iterate
    /// sequence `f, f², …`.
    pub fn iterate_semigroup(&self) -> Result<IterateProfile, SystemError> {
        let mut tail_len = 0u64;
        let mut cycle_len = 1u64;
        let mut on_cycle = vec![false; self.len()];
        for x in self.space.points() {
            let (tail, cycle) = self.orbit_lasso(x);
            tail_len = tail_len.max(tail.len() as u64);
            let c = cycle.len() as u64;
            cycle_len = cycle_len
                .checked_div(cycle_len.gcd(&c))
                .and_then(|q| q.checked_mul(c))
                .ok_or(SystemError::PeriodOverflow)?;
            for y in cycle {
                on_cycle[y] = true;
            }
        }
        let floor = tail_len.max(1);
        let idempotent_exp = floor.div_ceil(cycle_len) * cycle_len;
        let eventual_image: Vec<PointId> = (0..self.len()).filter(|&y| on_cycle[y]).collect();
        let limit_constant = (eventual_image.len() == 1).then(|| eventual_image[0]);
        Ok(IterateProfile {
            tail_len,
            cycle_len,
            idempotent_exp,
            eventual_image,
            limit_constant,
        })
    }
}

/// Shape of the eventually periodic iterate sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterateProfile {
    /// Least `t` with `f^{t+c} = f^t`.
    pub tail_len: u64,
    /// Least such `c`.
    pub cycle_len: u64,
    /// Least multiple of `c` that is `≥ max(t, 1)`; `f^m` is idempotent.
    pub idempotent_exp: u64,
    /// `∩ f^n(X) = f^t(X)`, ascending.
    pub eventual_image: Vec<PointId>,
    /// The point `c` when the iterates converge to the constant map `c`.
    pub limit_constant: Option<PointId>,
}

/// `ρ(f, g)` as a standalone function.
pub fn rho_distance(f: &SystemMap, g: &SystemMap) -> Result<Rational, SystemError> {
    f.rho_distance(g)
}

//! Exact discretizations of the example systems.
//!
//! Coordinate-backed builders label each point by its coordinate (`"1/9"`),
//! so points can be looked up by value.

use std::sync::Arc;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rational::Rational;
use crate::space::{Embedding, FiniteMetricSpace, PointId, SpaceError};
use crate::system::{SystemError, SystemMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExampleSpec {
    /// `{0, 1/n, …, 1}` on the line with the identity.
    IntervalGrid { n: u32 },
    /// `{0, 1/n, …, (n−1)/n}` on the circle rotated by `rotation`.
    CircleGrid { n: u32, rotation: Rational },
    /// Level-`level` Cantor endpoints with the middle-third map `t`.
    Cantor { level: u32 },
    /// `{0} ∪ {2^-j : j ≤ k}` with `1 ↦ 0` and `2^-j ↦ 2^-(j-1)`.
    ShiftToLimit { k: u32 },
    /// Cone over a base system with heights `{2^-j : j ≤ heights} ∪ {0}`.
    Cone { base: Box<ExampleSpec>, heights: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cone metric check failed: {0}")]
    ConeMetric(SpaceError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    System(#[from] SystemError),
}

pub fn build_example(spec: &ExampleSpec) -> Result<SystemMap, BuildError> {
    match spec {
        ExampleSpec::IntervalGrid { n } => interval_grid(*n),
        ExampleSpec::CircleGrid { n, rotation } => circle_grid(*n, rotation),
        ExampleSpec::Cantor { level } => cantor(*level),
        ExampleSpec::ShiftToLimit { k } => shift_to_limit(*k),
        ExampleSpec::Cone { base, heights } => cone(&build_example(base)?, *heights),
    }
}

fn coordinate_space(coords: Vec<Rational>, embedding: Embedding) -> Result<Arc<FiniteMetricSpace>, BuildError> {
    let labels = coords.iter().map(|c| c.to_string()).collect();
    Ok(Arc::new(FiniteMetricSpace::from_coordinates(
        labels, coords, embedding,
    )?))
}

pub fn interval_grid(n: u32) -> Result<SystemMap, BuildError> {
    if n < 1 {
        return Err(BuildError::InvalidParameter("interval grid needs n ≥ 1".into()));
    }
    let coords = (0..=n as i64).map(|k| Rational::new(k, n as i64)).collect();
    Ok(SystemMap::identity(coordinate_space(coords, Embedding::Line)?))
}

pub fn circle_grid(n: u32, rotation: &Rational) -> Result<SystemMap, BuildError> {
    if n < 1 {
        return Err(BuildError::InvalidParameter("circle grid needs n ≥ 1".into()));
    }
    let r = rotation.fract_floor();
    let steps = &r * &Rational::from_integer(n as i64);
    if !steps.is_integer() {
        return Err(BuildError::InvalidParameter(format!(
            "rotation {rotation} does not preserve the {n}-point grid"
        )));
    }
    let shift: usize = steps.floor().try_into().expect("0 ≤ shift < n");
    let coords = (0..n as i64).map(|k| Rational::new(k, n as i64)).collect();
    let space = coordinate_space(coords, Embedding::Circle)?;
    let n = n as usize;
    Ok(SystemMap::new(space, (0..n).map(|x| (x + shift) % n).collect())?)
}

/// Endpoints of the `2^level` level-`level` middle-third intervals, ascending.
pub fn cantor_endpoints(level: u32) -> Vec<Rational> {
    let mut intervals = vec![(Rational::zero(), Rational::one())];
    for _ in 0..level {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in intervals {
            let third = (&b - &a) / Rational::from_integer(3);
            next.push((a.clone(), &a + &third));
            next.push((&b - &third, b));
        }
        intervals = next;
    }
    let mut points: Vec<Rational> = intervals.into_iter().flat_map(|(a, b)| [a, b]).collect();
    points.sort();
    points.dedup();
    points
}

/// The middle-third map: `3x` on `[0, 1/3]`, `0` on `[2/3, 1]`.
pub fn cantor_t(x: &Rational) -> Rational {
    if x <= &Rational::new(1, 3) {
        x * &Rational::from_integer(3)
    } else {
        Rational::zero()
    }
}

pub fn cantor(level: u32) -> Result<SystemMap, BuildError> {
    if level < 1 {
        return Err(BuildError::InvalidParameter("cantor needs level ≥ 1".into()));
    }
    let coords = cantor_endpoints(level);
    let space = coordinate_space(coords.clone(), Embedding::Line)?;
    let image = coords
        .iter()
        .map(|x| space.point(&cantor_t(x).to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SystemMap::new(space, image)?)
}

pub fn shift_to_limit(k: u32) -> Result<SystemMap, BuildError> {
    if k < 1 {
        return Err(BuildError::InvalidParameter("shift_to_limit needs k ≥ 1".into()));
    }
    // ascending: 0, 2^-k, …, 1/2, 1
    let mut coords = vec![Rational::zero()];
    coords.extend((0..=k as i32).rev().map(|j| Rational::pow(2, -j)));
    let n = coords.len();
    let space = coordinate_space(coords, Embedding::Line)?;
    let image = (0..n)
        .map(|x| match x {
            0 => 0,
            x if x == n - 1 => 0,
            x => x + 1,
        })
        .collect();
    Ok(SystemMap::new(space, image)?)
}

/// Cone over `base` with `d((y,s),(y',s')) = |s−s'| + min(s,s')·d(y,y')`.
///
/// The apex is the single point at height 0; each level maps to the next lower
/// one, the lowest level to the apex.
pub fn cone(base: &SystemMap, heights: u32) -> Result<SystemMap, BuildError> {
    if heights < 1 {
        return Err(BuildError::InvalidParameter("cone needs k ≥ 1".into()));
    }
    let y_space = base.space();
    let levels: Vec<Rational> = (0..=heights as i32).map(|j| Rational::pow(2, -j)).collect();
    let mut labels = Vec::new();
    let mut coords: Vec<(PointId, Option<usize>)> = Vec::new();
    for (lvl, s) in levels.iter().enumerate() {
        for y in y_space.points() {
            labels.push(format!("{}@{}", y_space.label(y), s));
            coords.push((y, Some(lvl)));
        }
    }
    labels.push("apex".to_string());
    coords.push((0, None));

    let height = |c: &(PointId, Option<usize>)| c.1.map_or_else(Rational::zero, |l| levels[l].clone());
    let table: Vec<Vec<Rational>> = coords
        .iter()
        .map(|a| {
            coords
                .iter()
                .map(|b| {
                    let (sa, sb) = (height(a), height(b));
                    let low = sa.clone().min(sb.clone());
                    (&sa - &sb).abs() + &low * y_space.dist(a.0, b.0)
                })
                .collect()
        })
        .collect();
    let space = Arc::new(FiniteMetricSpace::from_table(labels, table).map_err(BuildError::ConeMetric)?);

    let per_level = y_space.len();
    let apex = coords.len() - 1;
    let image = coords
        .iter()
        .map(|&(y, lvl)| match lvl {
            Some(l) if l < heights as usize => (l + 1) * per_level + base.apply(y),
            _ => apex,
        })
        .collect();
    Ok(SystemMap::new(space, image)?)
}

/// Seeded random system: points embedded in the line at distinct rational
/// coordinates, map uniform (or a uniform permutation).
pub fn random_system(point_count: usize, seed: u64, permutation: bool) -> SystemMap {
    assert!(point_count >= 1, "random_system needs at least one point");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 4 * point_count;
    let mut picks = index::sample(&mut rng, range, point_count).into_vec();
    picks.sort_unstable();
    let coords: Vec<Rational> = picks.iter().map(|&k| Rational::new(k as i64, range as i64)).collect();
    let labels = (0..point_count).map(|i| format!("p{i}")).collect();
    let space = Arc::new(
        FiniteMetricSpace::from_coordinates(labels, coords, Embedding::Line)
            .expect("distinct line coordinates form a metric"),
    );
    let image = if permutation {
        let mut image: Vec<PointId> = (0..point_count).collect();
        image.shuffle(&mut rng);
        image
    } else {
        (0..point_count).map(|_| rng.gen_range(0..point_count)).collect()
    };
    SystemMap::new(space, image).expect("in-range image")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn labels_of(f: &SystemMap, pts: &[PointId]) -> Vec<String> {
        pts.iter().map(|&p| f.space().label(p).to_string()).collect()
    }

    #[test]
    fn cantor_two_points_and_map() {
        let f = cantor(2).unwrap();
        assert_eq!(
            f.space().labels(),
            &["0", "1/9", "2/9", "1/3", "2/3", "7/9", "8/9", "1"]
        );
        let at = |l: &str| f.space().label(f.apply(f.space().point(l).unwrap())).to_string();
        assert_eq!(at("1/9"), "1/3");
        assert_eq!(at("2/9"), "2/3");
        for l in ["2/3", "7/9", "8/9", "1"] {
            assert_eq!(at(l), "0");
        }
    }

    #[test]
    fn cantor_image_is_previous_level() {
        for m in 2..=5 {
            let f = cantor(m).unwrap();
            let expected: Vec<String> = cantor_endpoints(m - 1).iter().map(|r| r.to_string()).collect();
            let mut got = labels_of(&f, &f.image_set());
            got.sort_by_key(|l| q(l));
            assert_eq!(got, expected, "level {m}");
            assert_eq!(f.len(), 1 << (m + 1));
        }
    }

    #[test]
    fn shift_to_limit_two() {
        let f = shift_to_limit(2).unwrap();
        assert_eq!(f.space().labels(), &["0", "1/4", "1/2", "1"]);
        assert_eq!(f.image_table(), &[0, 2, 3, 0]);
        let p = f.iterate_semigroup().unwrap();
        assert_eq!((p.tail_len, p.cycle_len, p.idempotent_exp), (3, 1, 3));
        assert_eq!(p.limit_constant, Some(0));
    }

    #[test]
    fn interval_and_circle() {
        let f = interval_grid(4).unwrap();
        assert!(f.is_identity());
        assert_eq!(f.len(), 5);
        let r = circle_grid(4, &q("1/4")).unwrap();
        assert_eq!(r.image_table(), &[1, 2, 3, 0]);
        assert!(matches!(
            circle_grid(4, &q("1/3")),
            Err(BuildError::InvalidParameter(_))
        ));
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(cantor(0), Err(BuildError::InvalidParameter(_))));
        assert!(matches!(shift_to_limit(0), Err(BuildError::InvalidParameter(_))));
        assert!(matches!(
            cone(&cantor(1).unwrap(), 0),
            Err(BuildError::InvalidParameter(_))
        ));
    }

    #[test]
    fn cone_over_cantor_is_a_metric_and_collapses_to_apex() {
        let f = cone(&cantor(1).unwrap(), 3).unwrap();
        assert_eq!(f.len(), 4 * 4 + 1);
        assert!(f.space().validate().is_ok());
        let p = f.iterate_semigroup().unwrap();
        assert_eq!(p.limit_constant, Some(f.len() - 1));
        assert_eq!(p.tail_len, 4);
    }

    #[test]
    fn random_systems_are_reproducible() {
        let a = random_system(5, 1, false);
        let b = random_system(5, 1, false);
        assert_eq!(a.image_table(), b.image_table());
        assert_eq!(a.space(), b.space());
        assert!(random_system(5, 1, true).is_permutation());
        let one = random_system(1, 99, false);
        assert_eq!(one.image_table(), &[0]);
    }
}

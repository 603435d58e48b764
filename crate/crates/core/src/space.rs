//! Finite metric spaces with exact distance tables.
//!
//! Balls and threshold components both use strict inequality. A grid with
//! spacing `g` therefore splits into singletons at `h = g` and only merges for
//! `h > g`; this is the most common source of off-by-one-candidate surprises.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::rational::{Rational, Threshold};

/// Index of a point in a [`FiniteMetricSpace`].
pub type PointId = usize;

/// Default cap on the number of points; tables are dense `n × n`.
pub const DEFAULT_MAX_POINTS: usize = 4096;

/// How a coordinate-backed space measures distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    /// `|x − y|`
    Line,
    /// Coordinates taken mod 1, `min(|x − y|, 1 − |x − y|)`.
    Circle,
}

impl Embedding {
    pub fn distance(self, x: &Rational, y: &Rational) -> Rational {
        match self {
            Embedding::Line => (x - y).abs(),
            Embedding::Circle => {
                let diff = (x.fract_floor() - y.fract_floor()).abs();
                let wrap = Rational::one() - &diff;
                diff.min(wrap)
            }
        }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Embedding::Line => "line",
            Embedding::Circle => "circle",
        })
    }
}

/// The first metric axiom found to fail, named by point labels.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MetricViolation {
    #[error("distance table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("d({point},{point}) = {value}, expected 0")]
    NonZeroDiagonal { point: String, value: Rational },
    #[error("d({a},{b}) = {value} but distinct points need positive distance")]
    NotPositive { a: String, b: String, value: Rational },
    #[error("d({a},{b}) = {ab} differs from d({b},{a}) = {ba}")]
    Asymmetric {
        a: String,
        b: String,
        ab: Rational,
        ba: Rational,
    },
    #[error("triangle inequality fails for ({a},{b},{c}): d({a},{c}) = {ac} > {ab} + {bc}")]
    Triangle {
        a: String,
        b: String,
        c: String,
        ab: Rational,
        bc: Rational,
        ac: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("space must contain at least one point")]
    Empty,
    #[error("space has {count} points, limit is {limit}")]
    TooLarge { count: usize, limit: usize },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point `{0}`")]
    UnknownLabel(String),
    #[error("point index {0} out of range")]
    UnknownPoint(PointId),
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(Rational),
    #[error(transparent)]
    Metric(Box<MetricViolation>),
}

impl From<MetricViolation> for SpaceError {
    fn from(v: MetricViolation) -> Self {
        SpaceError::Metric(Box::new(v))
    }
}

/// Checks the four metric axioms on a raw labelled table.
///
/// Violations are a value, not a failure: the first offending pair or triple
/// is reported by label.
pub fn validate_metric(labels: &[String], table: &[Vec<Rational>]) -> Result<(), MetricViolation> {
    let n = labels.len();
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != n {
            return Err(MetricViolation::NotSquare {
                row,
                len: entries.len(),
                expected: n,
            });
        }
    }
    if table.len() != n {
        return Err(MetricViolation::NotSquare {
            row: table.len(),
            len: 0,
            expected: n,
        });
    }
    for a in 0..n {
        if !table[a][a].is_zero() {
            return Err(MetricViolation::NonZeroDiagonal {
                point: labels[a].clone(),
                value: table[a][a].clone(),
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            if !table[a][b].is_positive() {
                return Err(MetricViolation::NotPositive {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                    value: table[a][b].clone(),
                });
            }
            if table[a][b] != table[b][a] {
                return Err(MetricViolation::Asymmetric {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                    ab: table[a][b].clone(),
                    ba: table[b][a].clone(),
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let bound = &table[a][b] + &table[b][c];
                if table[a][c] > bound {
                    return Err(MetricViolation::Triangle {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        c: labels[c].clone(),
                        ab: table[a][b].clone(),
                        bc: table[b][c].clone(),
                        ac: table[a][c].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Labelled points with a validated exact distance table.
#[derive(Clone)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    index: HashMap<String, PointId>,
    dist: Vec<Rational>,
    coordinates: Option<(Embedding, Vec<Rational>)>,
}

impl PartialEq for FiniteMetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl Eq for FiniteMetricSpace {}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricSpace")
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

impl FiniteMetricSpace {
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<Rational>>) -> Result<Self, SpaceError> {
        Self::from_table_with_limit(labels, table, DEFAULT_MAX_POINTS)
    }

    pub fn from_table_with_limit(
        labels: Vec<String>,
        table: Vec<Vec<Rational>>,
        limit: usize,
    ) -> Result<Self, SpaceError> {
        let index = index_labels(&labels, limit)?;
        validate_metric(&labels, &table)?;
        let dist = table.into_iter().flatten().collect();
        Ok(FiniteMetricSpace {
            labels,
            index,
            dist,
            coordinates: None,
        })
    }

    /// Points on the line or circle at the given coordinates.
    pub fn from_coordinates(
        labels: Vec<String>,
        coords: Vec<Rational>,
        embedding: Embedding,
    ) -> Result<Self, SpaceError> {
        Self::from_coordinates_with_limit(labels, coords, embedding, DEFAULT_MAX_POINTS)
    }

    pub fn from_coordinates_with_limit(
        labels: Vec<String>,
        coords: Vec<Rational>,
        embedding: Embedding,
        limit: usize,
    ) -> Result<Self, SpaceError> {
        if coords.len() != labels.len() {
            return Err(SpaceError::CoordinateCount {
                expected: labels.len(),
                got: coords.len(),
            });
        }
        let table: Vec<Vec<Rational>> = coords
            .iter()
            .map(|x| coords.iter().map(|y| embedding.distance(x, y)).collect())
            .collect();
        let mut space = Self::from_table_with_limit(labels, table, limit)?;
        space.coordinates = Some((embedding, coords));
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p]
    }

    pub fn point(&self, label: &str) -> Result<PointId, SpaceError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| SpaceError::UnknownLabel(label.to_string()))
    }

    /// Coordinates and embedding, when the space was built from them.
    pub fn coordinates(&self) -> Option<(Embedding, &[Rational])> {
        self.coordinates.as_ref().map(|(e, c)| (*e, c.as_slice()))
    }

    #[inline]
    pub fn dist(&self, a: PointId, b: PointId) -> &Rational {
        &self.dist[a * self.labels.len() + b]
    }

    pub fn check_point(&self, p: PointId) -> Result<PointId, SpaceError> {
        if p < self.len() {
            Ok(p)
        } else {
            Err(SpaceError::UnknownPoint(p))
        }
    }

    /// Re-checks the metric axioms on the stored table.
    pub fn validate(&self) -> Result<(), MetricViolation> {
        let n = self.len();
        let table: Vec<Vec<Rational>> = (0..n)
            .map(|a| (0..n).map(|b| self.dist(a, b).clone()).collect())
            .collect();
        validate_metric(&self.labels, &table)
    }

    /// Ascending distinct distances, `0` included.
    pub fn distance_spectrum(&self) -> Vec<Rational> {
        let set: BTreeSet<&Rational> = self.dist.iter().collect();
        set.into_iter().cloned().collect()
    }

    /// Distance spectrum without `0`.
    pub fn positive_spectrum(&self) -> Vec<Rational> {
        self.distance_spectrum()
            .into_iter()
            .filter(|r| r.is_positive())
            .collect()
    }

    /// Smallest distance between distinct points.
    pub fn min_gap(&self) -> Option<Rational> {
        self.distance_spectrum().into_iter().nth(1)
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Open ball `{ y : d(center, y) < radius }`, ascending.
    pub fn ball(&self, center: PointId, radius: &Rational) -> Result<Vec<PointId>, SpaceError> {
        self.check_point(center)?;
        if radius.is_negative() {
            return Err(SpaceError::NegativeRadius(radius.clone()));
        }
        Ok(self.points().filter(|&y| self.dist(center, y) < radius).collect())
    }

    /// Classes of the transitive closure of `d(x, y) < h`, each ascending and
    /// ordered by least member.
    pub fn h_components(&self, h: &Rational) -> Vec<Vec<PointId>> {
        let n = self.len();
        let mut class = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            class[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for (y, c) in class.iter_mut().enumerate() {
                    if *c == usize::MAX && self.dist(x, y) < h {
                        *c = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Largest within-block distance.
    pub fn max_block_diameter(&self, blocks: &[Vec<PointId>]) -> Rational {
        blocks
            .iter()
            .flat_map(|b| b.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y))))
            .map(|(x, y)| self.dist(x, y).clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Least distance between points of distinct blocks; infinite for one block.
    pub fn block_separation(&self, blocks: &[Vec<PointId>]) -> Threshold {
        let mut best: Option<Rational> = None;
        for (i, bi) in blocks.iter().enumerate() {
            for bj in &blocks[i + 1..] {
                for &x in bi {
                    for &y in bj {
                        let d = self.dist(x, y);
                        if best.as_ref().is_none_or(|b| d < b) {
                            best = Some(d.clone());
                        }
                    }
                }
            }
        }
        best.map_or(Threshold::Infinite, Threshold::Finite)
    }

    /// The h-component cover with blocks of diameter `< epsilon` and the
    /// largest separation, over all positive `h` in the spectrum. Ties go to
    /// the coarsest cover.
    pub fn clopen_cover(&self, epsilon: &Rational) -> Option<ClopenCover> {
        let mut best: Option<ClopenCover> = None;
        for h in self.positive_spectrum() {
            let blocks = self.h_components(&h);
            let max_diameter = self.max_block_diameter(&blocks);
            if &max_diameter >= epsilon {
                continue;
            }
            let separation = self.block_separation(&blocks);
            if best.as_ref().is_none_or(|b| separation >= b.separation) {
                best = Some(ClopenCover {
                    blocks,
                    separation,
                    max_diameter,
                    scale: h,
                });
            }
        }
        if best.is_none() && self.len() == 1 && epsilon.is_positive() {
            best = Some(ClopenCover {
                blocks: vec![vec![0]],
                separation: Threshold::Infinite,
                max_diameter: Rational::zero(),
                scale: Rational::one(),
            });
        }
        best
    }
}

fn index_labels(labels: &[String], limit: usize) -> Result<HashMap<String, PointId>, SpaceError> {
    if labels.is_empty() {
        return Err(SpaceError::Empty);
    }
    if labels.len() > limit {
        return Err(SpaceError::TooLarge {
            count: labels.len(),
            limit,
        });
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(SpaceError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Partition into blocks of small diameter with positive mutual separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClopenCover {
    pub blocks: Vec<Vec<PointId>>,
    pub separation: Threshold,
    pub max_diameter: Rational,
    /// The `h` whose components form the blocks.
    pub scale: Rational,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn line(coords: &[&str]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_coordinates(
            coords.iter().map(|c| c.to_string()).collect(),
            coords.iter().map(|c| q(c)).collect(),
            Embedding::Line,
        )
        .unwrap()
    }

    fn i4() -> FiniteMetricSpace {
        line(&["0", "1/4", "1/2", "3/4", "1"])
    }

    fn e1() -> FiniteMetricSpace {
        line(&["0", "1/3", "2/3", "1"])
    }

    fn table(rows: &[&[&str]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()
    }

    fn names(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_point_metric_is_valid() {
        assert!(validate_metric(&names(&["0", "1"]), &table(&[&["0", "1"], &["1", "0"]])).is_ok());
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let t = table(&[&["0", "1", "3"], &["1", "0", "1"], &["3", "1", "0"]]);
        match validate_metric(&names(&["a", "b", "c"]), &t) {
            Err(MetricViolation::Triangle { a, b, c, .. }) => {
                assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("a", "b", "c"));
            }
            other => panic!("expected triangle violation, got {other:?}"),
        }
    }

    #[test]
    fn zero_distance_between_distinct_points_is_rejected() {
        let t = table(&[&["0", "0"], &["0", "0"]]);
        assert!(matches!(
            validate_metric(&names(&["a", "b"]), &t),
            Err(MetricViolation::NotPositive { .. })
        ));
    }

    #[test]
    fn asymmetry_and_shape_are_rejected() {
        let t = table(&[&["0", "1"], &["2", "0"]]);
        assert!(matches!(
            validate_metric(&names(&["a", "b"]), &t),
            Err(MetricViolation::Asymmetric { .. })
        ));
        let t = table(&[&["0", "1"], &["1"]]);
        assert!(matches!(
            validate_metric(&names(&["a", "b"]), &t),
            Err(MetricViolation::NotSquare { row: 1, .. })
        ));
    }

    #[test]
    fn duplicate_labels_fail_construction() {
        let err =
            FiniteMetricSpace::from_coordinates(names(&["a", "a"]), vec![q("0"), q("1")], Embedding::Line).unwrap_err();
        assert_eq!(err, SpaceError::DuplicateLabel("a".into()));
    }

    #[test]
    fn size_limit_is_enforced() {
        let err = FiniteMetricSpace::from_coordinates_with_limit(
            names(&["a", "b", "c"]),
            vec![q("0"), q("1"), q("2")],
            Embedding::Line,
            2,
        )
        .unwrap_err();
        assert_eq!(err, SpaceError::TooLarge { count: 3, limit: 2 });
    }

    #[test]
    fn spectra() {
        assert_eq!(
            i4().distance_spectrum(),
            vec![q("0"), q("1/4"), q("1/2"), q("3/4"), q("1")]
        );
        assert_eq!(e1().distance_spectrum(), vec![q("0"), q("1/3"), q("2/3"), q("1")]);
        assert_eq!(line(&["5"]).distance_spectrum(), vec![q("0")]);
        assert_eq!(i4().min_gap(), Some(q("1/4")));
    }

    #[test]
    fn balls_are_open() {
        let s = i4();
        assert_eq!(s.ball(0, &q("1/4")).unwrap(), vec![0]);
        assert_eq!(s.ball(2, &q("3/8")).unwrap(), vec![1, 2, 3]);
        assert!(s.ball(3, &q("0")).unwrap().is_empty());
        assert_eq!(s.ball(9, &q("1")), Err(SpaceError::UnknownPoint(9)));
    }

    #[test]
    fn h_components_use_strict_threshold() {
        let s = i4();
        assert_eq!(s.h_components(&q("1/4")).len(), 5);
        assert_eq!(s.h_components(&q("3/10")), vec![vec![0, 1, 2, 3, 4]]);
        let e = e1();
        assert_eq!(e.h_components(&q("1/3")).len(), 4);
        assert_eq!(e.h_components(&q("1/2")), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn clopen_cover_examples() {
        let e = e1();
        let c = e.clopen_cover(&q("1/2")).unwrap();
        // E_1 has uniform gaps 1/3, so no scale splits it into two halves.
        assert_eq!(c.blocks, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(c.separation, Threshold::Finite(q("1/3")));
        assert_eq!(c.max_diameter, q("0"));
        let s = i4();
        let c = s.clopen_cover(&q("1/8")).unwrap();
        assert_eq!(c.blocks.len(), 5);
        assert_eq!(c.separation, Threshold::Finite(q("1/4")));
        assert_eq!(c.max_diameter, q("0"));
        let c = s.clopen_cover(&q("1/2")).unwrap();
        assert_eq!(c.separation, Threshold::Finite(q("1/4")));
    }

    #[test]
    fn circle_embedding_wraps() {
        let d = Embedding::Circle.distance(&q("0"), &q("3/4"));
        assert_eq!(d, q("1/4"));
        assert_eq!(Embedding::Circle.distance(&q("1/4"), &q("1/2")), q("1/4"));
    }
}

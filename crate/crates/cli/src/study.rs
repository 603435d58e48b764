//! Refinement studies: δ*(ε) tabulated across discretization levels.

use std::fmt;
use std::io;
use std::str::FromStr;

use dynlab_core::builders::{build_example, BuildError, ExampleSpec};
use dynlab_core::decide::{decide_eventual_shadowing, max_delta, Budget, DecideError};
use dynlab_core::{Rational, SystemMap};
use serde::Serialize;

/// Example family indexed by one integer level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "snake_case")]
pub enum Family {
    /// Identity on the level-M Cantor endpoints.
    CantorIdentity,
    /// Middle-third map on the level-M Cantor endpoints.
    CantorT,
    /// Identity on the grid {0, 1/n, …, 1}.
    IntervalIdentity,
    /// Isolated points 2^-j climbing to 1 and dropping to the limit 0.
    ShiftToLimit,
    /// Cone with k height levels over the middle-third map on E_1.
    Cone,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::CantorIdentity => "cantor_identity",
            Family::CantorT => "cantor_t",
            Family::IntervalIdentity => "interval_identity",
            Family::ShiftToLimit => "shift_to_limit",
            Family::Cone => "cone",
        }
    }

    pub fn spec(self, level: u32) -> ExampleSpec {
        match self {
            Family::CantorIdentity | Family::CantorT => ExampleSpec::Cantor { level },
            Family::IntervalIdentity => ExampleSpec::IntervalGrid { n: level },
            Family::ShiftToLimit => ExampleSpec::ShiftToLimit { k: level },
            Family::Cone => ExampleSpec::Cone {
                base: Box::new(ExampleSpec::Cantor { level: 1 }),
                heights: level,
            },
        }
    }

    pub fn build(self, level: u32) -> Result<SystemMap, BuildError> {
        let f = build_example(&self.spec(level))?;
        Ok(match self {
            Family::CantorIdentity => SystemMap::identity(f.space_arc().clone()),
            _ => f,
        })
    }

    fn describe(self, level: u32) -> String {
        match self {
            Family::CantorIdentity => format!("cantor({level}) identity"),
            Family::CantorT => format!("cantor({level}) t"),
            Family::IntervalIdentity => format!("interval_grid({level}) identity"),
            Family::ShiftToLimit => format!("shift_to_limit({level})"),
            Family::Cone => format!("cone(cantor(1) t, k={level})"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `a..b` (inclusive) or a comma-separated list.
pub fn parse_levels(s: &str) -> Result<Vec<u32>, String> {
    let bad = |p: &str| format!("invalid level `{p}`");
    let levels: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad(a))?;
        let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad(b))?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad(p)))
            .collect::<Result<_, _>>()?
    };
    if levels.is_empty() {
        return Err(format!("level range `{s}` is empty"));
    }
    Ok(levels)
}

/// Parses a comma-separated list of positive rationals.
pub fn parse_epsilons(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|p| {
            let r = Rational::from_str(p.trim()).map_err(|e| format!("invalid epsilon `{p}`: {e}"))?;
            if r.is_positive() {
                Ok(r)
            } else {
                Err(format!("epsilon must be positive, got {r}"))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StudyRow {
    pub family: String,
    pub spec: String,
    pub level: u32,
    pub epsilon: String,
    /// Empty when the level ran out of budget.
    pub max_delta: String,
    pub attained: String,
    pub notes: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StudyTable {
    pub rows: Vec<StudyRow>,
}

impl StudyTable {
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// One row per (level, ε) with the exact δ*(ε). Budget exhaustion marks the
/// row and the study moves on; other failures abort.
pub fn run_refinement_study(
    family: Family,
    levels: &[u32],
    epsilons: &[Rational],
    budget: Budget,
) -> Result<StudyTable, StudyError> {
    if levels.is_empty() || epsilons.is_empty() {
        return Err(StudyError::Empty);
    }
    let mut rows = Vec::new();
    for &level in levels {
        let f = family.build(level)?;
        for eps in epsilons {
            let mut row = StudyRow {
                family: family.name().to_string(),
                spec: family.describe(level),
                level,
                epsilon: eps.to_string(),
                max_delta: String::new(),
                attained: String::new(),
                notes: String::new(),
            };
            match study_cell(family, &f, eps, budget) {
                Ok((best, attained, notes)) => {
                    row.max_delta = best.to_string();
                    row.attained = attained.to_string();
                    row.notes = notes;
                }
                Err(DecideError::BudgetExceeded { limit }) => {
                    row.notes = format!("budget exceeded ({limit} states)");
                }
                Err(e) => return Err(e.into()),
            }
            rows.push(row);
        }
    }
    Ok(StudyTable { rows })
}

fn study_cell(
    family: Family,
    f: &SystemMap,
    eps: &Rational,
    budget: Budget,
) -> Result<(Rational, bool, String), DecideError> {
    let best = max_delta(f, eps, budget)?;
    let next = f.space().positive_spectrum().into_iter().find(|d| d > &best.value);
    let mut notes = Vec::new();
    match (&next, best.attained) {
        (Some(n), true) => notes.push(format!("fails at next candidate {n}")),
        (_, false) => notes.push("every delta works".to_string()),
        (None, true) => {}
    }
    if family == Family::Cone {
        if let Some(n) = &next {
            let eventual = decide_eventual_shadowing(f, eps, n, budget)?;
            notes.push(format!(
                "eventual shadowing at {n}: {}",
                if eventual.is_yes() { "yes" } else { "no" }
            ));
        }
    }
    Ok((best.value, best.attained, notes.join("; ")))
}

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error("a study needs at least one level and one epsilon")]
    Empty,
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynlab_core::q;

    fn column(table: &StudyTable) -> Vec<String> {
        table.rows.iter().map(|r| r.max_delta.clone()).collect()
    }

    #[test]
    fn level_syntax() {
        assert_eq!(parse_levels("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_levels("4,8").unwrap(), vec![4, 8]);
        assert!(parse_levels("3..1").is_err());
        assert!(parse_levels("x").is_err());
        assert_eq!(parse_epsilons("1/2, 1/4").unwrap(), vec![q("1/2"), q("1/4")]);
        assert!(parse_epsilons("0").is_err());
    }

    #[test]
    fn cantor_studies() {
        let b = Budget::default();
        let eps = [q("1/2")];
        let id = run_refinement_study(Family::CantorIdentity, &[1, 2, 3], &eps, b).unwrap();
        assert_eq!(column(&id), ["1/3", "1/3", "1/3"]);
        let t = run_refinement_study(Family::CantorT, &[1, 2, 3], &eps, b).unwrap();
        assert_eq!(column(&t), ["1/3", "1/9", "1/27"]);
        let grid = run_refinement_study(Family::IntervalIdentity, &[4, 8], &eps, b).unwrap();
        assert_eq!(column(&grid), ["1/4", "1/8"]);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let t = run_refinement_study(Family::CantorT, &[1], &[q("1/2")], Budget::default()).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("family,spec,level,epsilon,max_delta,attained,notes"));
        assert_eq!(
            lines.next(),
            Some("cantor_t,cantor(1) t,1,1/2,1/3,true,fails at next candidate 2/3")
        );
    }

    #[test]
    fn budget_marks_rows() {
        let t = run_refinement_study(Family::IntervalIdentity, &[8], &[q("1/2")], Budget(2)).unwrap();
        assert!(t.rows[0].max_delta.is_empty());
        assert!(t.rows[0].notes.contains("budget"));
    }
}

//! Command-line surface and command implementations.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dynlab_core::builders::{build_example, BuildError, ExampleSpec};
use dynlab_core::decide::{
    decide_cg_shadowing, decide_eventual_shadowing, decide_shadowing, max_delta, unshadowable_witness, Answer, Budget,
    CgVerdict, DecideError, EventualVerdict,
};
use dynlab_core::orbit::build_step_graph;
use dynlab_core::recurrence::{chain_classes, classify_system, periodic_points};
use dynlab_core::{Rational, SystemMap};
use serde_json::{json, Value};
use thiserror::Error;

use crate::dot::export_dot;
use crate::format::{parse_system_file, serialize_system, FormatError};
use crate::report::{self, Report};
use crate::study::{parse_epsilons, parse_levels, run_refinement_study, Family, StudyError};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dynlab",
    version,
    about = "Exact shadowing and chain analysis for finite dynamical systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a system file and check the metric and map.
    Validate { file: PathBuf },
    /// Decide (ε, δ)-shadowing, or one of its variants.
    Check {
        file: PathBuf,
        #[arg(long)]
        epsilon: Rational,
        #[arg(long)]
        delta: Rational,
        /// Some suffix of every pseudo-orbit must be shadowed.
        #[arg(long, conflicts_with = "cg")]
        eventual: bool,
        /// Only orbits of maps within δ of f are tested.
        #[arg(long)]
        cg: bool,
    },
    /// Largest candidate δ that works for the given ε.
    MaxDelta {
        file: PathBuf,
        #[arg(long)]
        epsilon: Rational,
    },
    /// A pseudo-orbit that no orbit shadows, if one exists.
    Witness {
        file: PathBuf,
        #[arg(long)]
        epsilon: Rational,
        #[arg(long)]
        delta: Rational,
    },
    /// Chain classes of the δ-step graph.
    Chains {
        file: PathBuf,
        #[arg(long)]
        delta: Rational,
        /// Also write the step graph in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Permutation, period, rigidity, iterate and chain summary.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        horizon: u64,
    },
    /// Write one of the built-in example systems.
    Build {
        family: BuildFamily,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        rotation: Option<Rational>,
        /// Use the identity instead of the family's map (cantor only).
        #[arg(long)]
        identity: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tabulate δ*(ε) over a range of levels.
    Study {
        family: Family,
        /// `a..b` or a comma-separated list.
        #[arg(long)]
        levels: String,
        /// One value or a comma-separated list.
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildFamily {
    IntervalGrid,
    CircleGrid,
    Cantor,
    ShiftToLimit,
    Cone,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Study(#[from] StudyError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Decide(DecideError::BudgetExceeded { .. })
            | CliError::Study(StudyError::Decide(DecideError::BudgetExceeded { .. })) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

/// What a command prints and how the process should exit.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn report(report: Report, started: Instant, code: i32) -> Self {
        Outcome {
            stdout: report.timed(started.elapsed()).to_json(),
            code,
        }
    }
}

fn load(path: &Path) -> Result<SystemMap, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_system_file(&text)
        .map(|p| p.system)
        .map_err(|source| CliError::Format {
            path: path.to_path_buf(),
            source,
        })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn file_input(path: &Path) -> Value {
    Value::String(path.display().to_string())
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    run_with_budget(cli, Budget::from_env())
}

pub fn run_with_budget(cli: Cli, budget: Budget) -> Result<Outcome, CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Validate { file } => {
            let f = load(&file)?;
            let space = f.space();
            let cert = json!({
                "points": f.len(),
                "permutation": f.is_permutation(),
                "diameter": report::rational(&space.diameter()),
                "min_gap": space.min_gap().as_ref().map(report::rational),
            });
            let r = Report::new("validate", "valid")
                .input("file", file_input(&file))
                .certificate(cert);
            Ok(Outcome::report(r, started, EXIT_YES))
        }
        Command::Check {
            file,
            epsilon,
            delta,
            eventual,
            cg,
        } => {
            let f = load(&file)?;
            let (operation, mode) = match (eventual, cg) {
                (true, _) => ("check_eventual", "eventual"),
                (_, true) => ("check_cg", "cg"),
                _ => ("check", "plain"),
            };
            let r = Report::new(operation, "")
                .input("file", file_input(&file))
                .input("epsilon", report::rational(&epsilon))
                .input("delta", report::rational(&delta))
                .input("mode", mode);
            let (r, yes) = match mode {
                "eventual" => match decide_eventual_shadowing(&f, &epsilon, &delta, budget)? {
                    EventualVerdict::Yes { reachable_states } => {
                        (r.certificate(json!({ "reachable_states": reachable_states })), true)
                    }
                    EventualVerdict::No { witness } => {
                        (r.witness(json!({ "lasso": report::lasso(&f, &witness) })), false)
                    }
                },
                "cg" => match decide_cg_shadowing(&f, &epsilon, &delta, budget)? {
                    CgVerdict::Yes { maps_checked } => (r.certificate(json!({ "maps_checked": maps_checked })), true),
                    CgVerdict::No { g, start, at } => {
                        let w = json!({
                            "g": report::map_table(&f, &g),
                            "start": f.space().label(start),
                            "failing_index": at,
                        });
                        (r.witness(w), false)
                    }
                },
                _ => {
                    let verdict = decide_shadowing(&f, &epsilon, &delta, budget)?;
                    match &verdict.answer {
                        Answer::Shadows { reachable_states } => {
                            (r.certificate(json!({ "reachable_states": reachable_states })), true)
                        }
                        Answer::Fails { witness, failing_index } => {
                            let w = json!({ "lasso": report::lasso(&f, witness), "failing_index": failing_index });
                            (r.witness(w), false)
                        }
                    }
                }
            };
            let mut r = r;
            r.verdict = if yes { "yes" } else { "no" }.to_string();
            Ok(Outcome::report(r, started, if yes { EXIT_YES } else { EXIT_NO }))
        }
        Command::MaxDelta { file, epsilon } => {
            let f = load(&file)?;
            let best = max_delta(&f, &epsilon, budget)?;
            let r = Report::new("max_delta", "ok")
                .input("file", file_input(&file))
                .input("epsilon", report::rational(&epsilon))
                .certificate(json!({ "max_delta": report::rational(&best.value), "attained": best.attained }));
            Ok(Outcome::report(r, started, EXIT_YES))
        }
        Command::Witness { file, epsilon, delta } => {
            let f = load(&file)?;
            let found = unshadowable_witness(&f, &epsilon, &delta, budget)?;
            let r = Report::new("witness", if found.is_some() { "no" } else { "yes" })
                .input("file", file_input(&file))
                .input("epsilon", report::rational(&epsilon))
                .input("delta", report::rational(&delta));
            Ok(match found {
                Some(w) => Outcome::report(r.witness(json!({ "lasso": report::lasso(&f, &w) })), started, EXIT_NO),
                None => Outcome::report(r, started, EXIT_YES),
            })
        }
        Command::Chains { file, delta, dot } => {
            let f = load(&file)?;
            if !delta.is_positive() {
                return Err(CliError::Input(format!("delta must be positive, got {delta}")));
            }
            let graph = build_step_graph(&f, &delta);
            let classes: Vec<Value> = chain_classes(&f, &delta)
                .iter()
                .map(|c| {
                    json!({
                        "members": report::labels(&f, &c.members),
                        "transitive": c.transitive,
                        "minimal": c.minimal,
                    })
                })
                .collect();
            if let Some(path) = &dot {
                write(path, &export_dot(&f, &graph))?;
            }
            let mut r = Report::new("chains", "ok")
                .input("file", file_input(&file))
                .input("delta", report::rational(&delta))
                .certificate(json!({ "edge_count": graph.edge_count(), "classes": classes }));
            if let Some(path) = &dot {
                r = r.input("dot", file_input(path));
            }
            Ok(Outcome::report(r, started, EXIT_YES))
        }
        Command::Classify { file, horizon } => {
            let f = load(&file)?;
            if horizon == 0 {
                return Err(CliError::Input("horizon must be at least 1".into()));
            }
            let c = classify_system(&f, horizon).map_err(DecideError::from)?;
            let p = &c.iterate_profile;
            let summary: Vec<Value> = c
                .chain_summary
                .iter()
                .map(|s| {
                    json!({
                        "delta": report::rational(&s.delta),
                        "classes": s.class_count,
                        "minimal": s.minimal_count,
                        "largest": s.largest,
                    })
                })
                .collect();
            let cert = json!({
                "is_permutation": c.is_permutation,
                "period": c.period,
                "horizon": c.horizon,
                "rigidity_defect": report::rational(&c.rigidity_defect),
                "periodic_points": report::labels(&f, &periodic_points(&f)),
                "iterate_profile": {
                    "tail_len": p.tail_len,
                    "cycle_len": p.cycle_len,
                    "idempotent_exp": p.idempotent_exp,
                    "eventual_image": report::labels(&f, &p.eventual_image),
                    "limit_constant": p.limit_constant.map(|x| f.space().label(x).to_string()),
                },
                "chain_summary": summary,
                "notes": c.notes,
            });
            let r = Report::new("classify", "ok")
                .input("file", file_input(&file))
                .input("horizon", horizon)
                .certificate(cert);
            Ok(Outcome::report(r, started, EXIT_YES))
        }
        Command::Build {
            family,
            level,
            n,
            k,
            rotation,
            identity,
            output,
        } => {
            let need =
                |v: Option<u32>, flag: &str| v.ok_or_else(|| CliError::Input(format!("this family needs --{flag}")));
            let spec = match family {
                BuildFamily::IntervalGrid => ExampleSpec::IntervalGrid { n: need(n, "n")? },
                BuildFamily::CircleGrid => {
                    let n = need(n, "n")?;
                    let rotation = rotation.ok_or_else(|| CliError::Input("circle-grid needs --rotation".into()))?;
                    ExampleSpec::CircleGrid { n, rotation }
                }
                BuildFamily::Cantor => ExampleSpec::Cantor {
                    level: need(level, "level")?,
                },
                BuildFamily::ShiftToLimit => ExampleSpec::ShiftToLimit { k: need(k, "k")? },
                BuildFamily::Cone => ExampleSpec::Cone {
                    base: Box::new(ExampleSpec::Cantor {
                        level: level.unwrap_or(1),
                    }),
                    heights: need(k, "k")?,
                },
            };
            if identity && family != BuildFamily::Cantor {
                return Err(CliError::Input("--identity only applies to cantor".into()));
            }
            let mut f = build_example(&spec)?;
            if identity {
                f = SystemMap::identity(f.space_arc().clone());
            }
            write(&output, &serialize_system(&f))?;
            let r = Report::new("build", "ok")
                .input("family", family.to_possible_value().map(|v| v.get_name().to_string()))
                .input("output", file_input(&output))
                .certificate(json!({ "points": f.len() }));
            Ok(Outcome::report(r, started, EXIT_YES))
        }
        Command::Study {
            family,
            levels,
            epsilon,
            csv,
        } => {
            let levels = parse_levels(&levels).map_err(CliError::Input)?;
            let epsilons = parse_epsilons(&epsilon).map_err(CliError::Input)?;
            let table = run_refinement_study(family, &levels, &epsilons, budget)?;
            match csv {
                None => Ok(Outcome {
                    stdout: table.to_csv(),
                    code: EXIT_YES,
                }),
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    table.write_csv(file)?;
                    let r = Report::new("study", "ok")
                        .input("family", family.name())
                        .input("levels", levels.iter().map(|l| json!(l)).collect::<Vec<_>>())
                        .input("epsilon", epsilons.iter().map(report::rational).collect::<Vec<_>>())
                        .input("csv", file_input(&path))
                        .certificate(json!({ "rows": table.rows.len() }));
                    Ok(Outcome::report(r, started, EXIT_YES))
                }
            }
        }
    }
}

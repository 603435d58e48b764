//! The line-oriented system description format.
//!
//! ```text
//! format 1
//! metric line            # or: circle; omit when giving dist lines
//! point a 0
//! point b 1
//! map a b
//! map b a
//! ```
//!
//! Spaces are given either by coordinates on every `point` line plus a
//! `metric`, or by bare `point` lines and one `dist <a> <b> <r>` line per
//! unordered pair. Comments start with `#`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use dynlab_core::space::{Embedding, FiniteMetricSpace, SpaceError};
use dynlab_core::system::{validate_system, SystemError};
use dynlab_core::{Rational, SystemMap};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDecl {
    pub label: String,
    pub coordinate: Option<Rational>,
}

/// A parsed system file, before the space is assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDocument {
    pub version: u32,
    pub metric: Option<Embedding>,
    pub points: Vec<PointDecl>,
    pub distances: Vec<(String, String, Rational)>,
    pub maps: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(String),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point `{0}`")]
    UnknownLabel(String),
    #[error("point `{0}` is mapped twice")]
    DuplicateMap(String),
    #[error("map is not total: no image for `{0}`")]
    NonTotalMap(String),
    #[error("missing distance between `{0}` and `{1}`")]
    MissingDistance(String, String),
    #[error("distance between `{0}` and `{1}` given twice")]
    DuplicateDistance(String, String),
    #[error("{0}")]
    Space(#[from] SpaceError),
    #[error("{0}")]
    System(#[from] SystemError),
}

/// A diagnostic with 1-based line and column; line 0 marks whole-file
/// problems.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub kind: FormatErrorKind,
}

fn err(line: usize, column: usize, kind: FormatErrorKind) -> FormatError {
    FormatError { line, column, kind }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    tokens
}

fn rational(line: usize, tok: Token<'_>) -> Result<Rational, FormatError> {
    tok.text
        .parse()
        .map_err(|_| err(line, tok.column, FormatErrorKind::InvalidRational(tok.text.to_string())))
}

/// Where each declaration came from, for diagnostics after parsing.
#[derive(Default)]
struct Spans {
    dist: Vec<(usize, usize, usize)>,
    maps: Vec<(usize, usize, usize)>,
}

/// A system file turned into a validated system.
#[derive(Clone, Debug)]
pub struct ParsedSystem {
    pub document: SystemDocument,
    pub system: SystemMap,
}

pub fn parse_system_file(text: &str) -> Result<ParsedSystem, FormatError> {
    let (document, spans) = parse_document(text)?;
    let system = build_system(&document, &spans)?;
    Ok(ParsedSystem { document, system })
}

fn expect_arity(line: usize, toks: &[Token<'_>], allowed: &[usize], usage: &str) -> Result<(), FormatError> {
    if allowed.contains(&toks.len()) {
        Ok(())
    } else {
        let column = toks.get(allowed[0]).or(toks.last()).map_or(1, |t| t.column);
        Err(err(
            line,
            column,
            FormatErrorKind::Syntax(format!("expected `{usage}`")),
        ))
    }
}

fn parse_document(text: &str) -> Result<(SystemDocument, Spans), FormatError> {
    let mut version = None;
    let mut metric = None;
    let mut points = Vec::new();
    let mut distances = Vec::new();
    let mut maps = Vec::new();
    let mut spans = Spans::default();
    let mut seen_labels: HashSet<String> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        if version.is_none() && head.text != "format" {
            return Err(err(
                line,
                head.column,
                FormatErrorKind::Syntax("file must start with `format 1`".into()),
            ));
        }
        match head.text {
            "format" => {
                expect_arity(line, &toks, &[2], "format <version>")?;
                if version.is_some() {
                    return Err(err(
                        line,
                        head.column,
                        FormatErrorKind::Syntax("repeated `format` line".into()),
                    ));
                }
                if toks[1].text != FORMAT_VERSION.to_string() {
                    return Err(err(
                        line,
                        toks[1].column,
                        FormatErrorKind::UnsupportedVersion(toks[1].text.into()),
                    ));
                }
                version = Some(FORMAT_VERSION);
            }
            "metric" => {
                expect_arity(line, &toks, &[2], "metric line|circle")?;
                if metric.is_some() {
                    return Err(err(
                        line,
                        head.column,
                        FormatErrorKind::Syntax("repeated `metric` line".into()),
                    ));
                }
                metric = Some(match toks[1].text {
                    "line" => Embedding::Line,
                    "circle" => Embedding::Circle,
                    other => {
                        return Err(err(
                            line,
                            toks[1].column,
                            FormatErrorKind::Syntax(format!("unknown metric `{other}`, expected line or circle")),
                        ))
                    }
                });
            }
            "point" => {
                expect_arity(line, &toks, &[2, 3], "point <label> [<rational>]")?;
                let label = toks[1].text.to_string();
                if !seen_labels.insert(label.clone()) {
                    return Err(err(line, toks[1].column, FormatErrorKind::DuplicateLabel(label)));
                }
                let coordinate = toks.get(2).map(|&t| rational(line, t)).transpose()?;
                points.push(PointDecl { label, coordinate });
            }
            "dist" => {
                expect_arity(line, &toks, &[4], "dist <a> <b> <rational>")?;
                let r = rational(line, toks[3])?;
                distances.push((toks[1].text.to_string(), toks[2].text.to_string(), r));
                spans.dist.push((line, toks[1].column, toks[2].column));
            }
            "map" => {
                expect_arity(line, &toks, &[3], "map <from> <to>")?;
                maps.push((toks[1].text.to_string(), toks[2].text.to_string()));
                spans.maps.push((line, toks[1].column, toks[2].column));
            }
            other => {
                return Err(err(
                    line,
                    head.column,
                    FormatErrorKind::Syntax(format!("unknown directive `{other}`")),
                ));
            }
        }
    }
    let version =
        version.ok_or_else(|| err(0, 0, FormatErrorKind::Syntax("empty file, expected `format 1`".into())))?;
    Ok((
        SystemDocument {
            version,
            metric,
            points,
            distances,
            maps,
        },
        spans,
    ))
}

fn build_system(doc: &SystemDocument, spans: &Spans) -> Result<SystemMap, FormatError> {
    let labels: Vec<String> = doc.points.iter().map(|p| p.label.clone()).collect();
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let lookup = |label: &str, line: usize, column: usize| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| err(line, column, FormatErrorKind::UnknownLabel(label.to_string())))
    };
    let whole = |kind: FormatErrorKind| err(0, 0, kind);

    let with_coords = doc.points.iter().filter(|p| p.coordinate.is_some()).count();
    let space = if with_coords > 0 {
        if with_coords < doc.points.len() {
            return Err(whole(FormatErrorKind::Syntax(
                "either every point has a coordinate or none does".into(),
            )));
        }
        if let Some(&(line, column, _)) = spans.dist.first() {
            return Err(err(
                line,
                column,
                FormatErrorKind::Syntax("dist lines cannot be combined with coordinates".into()),
            ));
        }
        let coords = doc
            .points
            .iter()
            .map(|p| p.coordinate.clone().expect("checked"))
            .collect();
        FiniteMetricSpace::from_coordinates(labels.clone(), coords, doc.metric.unwrap_or(Embedding::Line))
            .map_err(|e| whole(e.into()))?
    } else {
        if doc.metric.is_some() && !doc.points.is_empty() {
            return Err(whole(FormatErrorKind::Syntax(
                "`metric` needs coordinates on the point lines".into(),
            )));
        }
        let n = labels.len();
        let mut table: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            row[i] = Some(Rational::zero());
        }
        for ((a, b, r), &(line, ca, cb)) in doc.distances.iter().zip(&spans.dist) {
            let (i, j) = (lookup(a, line, ca)?, lookup(b, line, cb)?);
            if i == j {
                return Err(err(
                    line,
                    ca,
                    FormatErrorKind::Syntax("distance from a point to itself is always 0".into()),
                ));
            }
            if table[i][j].is_some() {
                return Err(err(line, ca, FormatErrorKind::DuplicateDistance(a.clone(), b.clone())));
            }
            table[i][j] = Some(r.clone());
            table[j][i] = Some(r.clone());
        }
        let mut full = Vec::with_capacity(n);
        for (i, row) in table.into_iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (j, entry) in row.into_iter().enumerate() {
                out.push(entry.ok_or_else(|| {
                    whole(FormatErrorKind::MissingDistance(
                        labels[i.min(j)].clone(),
                        labels[i.max(j)].clone(),
                    ))
                })?);
            }
            full.push(out);
        }
        FiniteMetricSpace::from_table(labels.clone(), full).map_err(|e| whole(e.into()))?
    };

    let mut image: Vec<Option<usize>> = vec![None; labels.len()];
    for ((from, to), &(line, cf, ct)) in doc.maps.iter().zip(&spans.maps) {
        let (x, y) = (lookup(from, line, cf)?, lookup(to, line, ct)?);
        if image[x].replace(y).is_some() {
            return Err(err(line, cf, FormatErrorKind::DuplicateMap(from.clone())));
        }
    }
    if let Some(x) = image.iter().position(Option::is_none) {
        return Err(whole(FormatErrorKind::NonTotalMap(labels[x].clone())));
    }
    validate_system(labels.len(), &image).map_err(|v| whole(SystemError::from(v).into()))?;
    let image = image.into_iter().map(|y| y.expect("total")).collect();
    SystemMap::new(Arc::new(space), image).map_err(|e| whole(e.into()))
}

impl SystemDocument {
    /// Canonical document for a system: coordinates when the space has them,
    /// explicit distances otherwise; points and maps in index order.
    pub fn from_system(f: &SystemMap) -> Self {
        let space = f.space();
        let (metric, coords) = match space.coordinates() {
            Some((embedding, coords)) => (Some(embedding), Some(coords)),
            None => (None, None),
        };
        let points = space
            .points()
            .map(|x| PointDecl {
                label: space.label(x).to_string(),
                coordinate: coords.map(|c| c[x].clone()),
            })
            .collect();
        let distances = if coords.is_some() {
            Vec::new()
        } else {
            space
                .points()
                .flat_map(|a| (a + 1..space.len()).map(move |b| (a, b)))
                .map(|(a, b)| {
                    (
                        space.label(a).to_string(),
                        space.label(b).to_string(),
                        space.dist(a, b).clone(),
                    )
                })
                .collect()
        };
        let maps = space
            .points()
            .map(|x| (space.label(x).to_string(), space.label(f.apply(x)).to_string()))
            .collect();
        SystemDocument {
            version: FORMAT_VERSION,
            metric,
            points,
            distances,
            maps,
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "format {}", self.version).unwrap();
        if let Some(m) = self.metric {
            writeln!(out, "metric {m}").unwrap();
        }
        for p in &self.points {
            match &p.coordinate {
                Some(c) => writeln!(out, "point {} {c}", p.label).unwrap(),
                None => writeln!(out, "point {}", p.label).unwrap(),
            }
        }
        for (a, b, r) in &self.distances {
            writeln!(out, "dist {a} {b} {r}").unwrap();
        }
        for (a, b) in &self.maps {
            writeln!(out, "map {a} {b}").unwrap();
        }
        out
    }
}

/// Serialized text for a system.
pub fn serialize_system(f: &SystemMap) -> String {
    SystemDocument::from_system(f).serialize()
}

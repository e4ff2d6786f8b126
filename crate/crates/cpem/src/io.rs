//! Instance and solution file formats, the seeded instance generator,
//! and the SVG drawing emitter.
//!
//! Instance files:
//!
//! ```text
//! # comment lines start with '#'
//! p cpem <nA> <nB> <m> <k> <c>
//! e <a-index> <b-index> <weight-decimal>     (m lines, 1-based indices)
//! x <edge-ordinal> <edge-ordinal>            (k lines, 1-based ordinals)
//! ```
//!
//! Solution files:
//!
//! ```text
//! w <weight-decimal>
//! m <edge-ordinal>        (one per matched edge, ascending)
//! c <ordinal> <ordinal>   (one per realized crossing)
//! ```
//!
//! Weights are fixed-point decimals at a precision declared once per run
//! (default six digits); the writer always emits exactly that many
//! digits, so canonical files round-trip byte for byte.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{crosses, Edge, Instance, Matching, Solution, ValidationError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightParseError {
    #[error("malformed decimal")]
    Malformed,
    #[error("more than {max} decimal digits")]
    TooManyDecimals { max: u32 },
    #[error("value out of the exact 64-bit range")]
    OutOfRange,
}

/// Parses a decimal like `12.5` into a scaled integer at `precision`
/// digits. The fraction may be shorter than the precision, never longer.
pub fn parse_weight(text: &str, precision: u32) -> Result<Weight, WeightParseError> {
    let scale = 10i64
        .checked_pow(precision)
        .ok_or(WeightParseError::OutOfRange)?;
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(WeightParseError::Malformed);
    }
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(WeightParseError::Malformed);
    }
    if frac_part.len() > precision as usize {
        return Err(WeightParseError::TooManyDecimals { max: precision });
    }
    let int_val: i64 = int_part.parse().map_err(|_| WeightParseError::OutOfRange)?;
    let mut frac_val: i64 = 0;
    if !frac_part.is_empty() {
        frac_val = frac_part
            .parse()
            .map_err(|_| WeightParseError::OutOfRange)?;
        frac_val *= 10i64.pow(precision - frac_part.len() as u32);
    }
    let raw = int_val
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or(WeightParseError::OutOfRange)?;
    Ok(Weight::from_scaled(if negative { -raw } else { raw }))
}

/// Formats a scaled integer back to a decimal with exactly `precision`
/// fraction digits.
pub fn format_weight(w: Weight, precision: u32) -> String {
    let scale = 10i64.pow(precision);
    let raw = w.scaled();
    let sign = if raw < 0 { "-" } else { "" };
    let abs = raw.unsigned_abs();
    let int = abs / scale.unsigned_abs();
    let frac = abs % scale.unsigned_abs();
    if precision == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = precision as usize)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `p cpem <nA> <nB> <m> <k> <c>` header")]
    MissingHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("malformed header; expected `p cpem <nA> <nB> <m> <k> <c>`")]
    BadHeader,
    #[error("malformed edge line; expected `e <a> <b> <weight>`")]
    BadEdgeLine,
    #[error("malformed pair line; expected `x <ordinal> <ordinal>`")]
    BadPairLine,
    #[error("unknown line tag `{0}`")]
    UnknownTag(String),
    #[error("{0}")]
    Weight(WeightParseError),
    #[error("pair references edge ordinal {ordinal}, but there are {m} edges")]
    PairOrdinalOutOfRange { ordinal: usize, m: usize },
    #[error("pair references the same edge ordinal twice")]
    SelfPair,
    #[error("header declares {declared} edge lines, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("header declares {declared} pair lines, found {found}")]
    PairCountMismatch { declared: usize, found: usize },
    #[error("{0}")]
    Validation(ValidationError),
    #[error("malformed solution line; expected `w`, `m` or `c`")]
    BadSolutionLine,
    #[error("solution must declare exactly one `w` line")]
    WeightLineCount,
}

struct Header {
    n_a: usize,
    n_b: usize,
    m: usize,
    k: usize,
    c: u8,
    line: usize,
}

/// Parses an instance file; errors carry 1-based line numbers.
pub fn parse_instance(text: &str, precision: u32) -> Result<Instance, Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut header: Option<Header> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    let mut raw_pairs: Vec<(usize, usize)> = Vec::new();
    let mut pair_lines: Vec<usize> = Vec::new();

    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateHeader,
                    });
                    continue;
                }
                let parsed = (tokens.len() == 7 && tokens[1] == "cpem")
                    .then(|| {
                        Some(Header {
                            n_a: tokens[2].parse().ok()?,
                            n_b: tokens[3].parse().ok()?,
                            m: tokens[4].parse().ok()?,
                            k: tokens[5].parse().ok()?,
                            c: tokens[6].parse().ok()?,
                            line,
                        })
                    })
                    .flatten();
                match parsed {
                    Some(h) => header = Some(h),
                    None => errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::BadHeader,
                    }),
                }
            }
            "e" => {
                if tokens.len() != 4 {
                    errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::BadEdgeLine,
                    });
                    continue;
                }
                let (a, b) = match (tokens[1].parse(), tokens[2].parse()) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => {
                        errors.push(ParseError {
                            line,
                            kind: ParseErrorKind::BadEdgeLine,
                        });
                        continue;
                    }
                };
                match parse_weight(tokens[3], precision) {
                    Ok(weight) => {
                        edges.push(Edge::new(a, b, weight));
                        edge_lines.push(line);
                    }
                    Err(e) => errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::Weight(e),
                    }),
                }
            }
            "x" => {
                if tokens.len() != 3 {
                    errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::BadPairLine,
                    });
                    continue;
                }
                let (i, j): (usize, usize) = match (tokens[1].parse(), tokens[2].parse()) {
                    (Ok(i), Ok(j)) => (i, j),
                    _ => {
                        errors.push(ParseError {
                            line,
                            kind: ParseErrorKind::BadPairLine,
                        });
                        continue;
                    }
                };
                if i == j {
                    errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::SelfPair,
                    });
                    continue;
                }
                if i == 0 || j == 0 {
                    errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::BadPairLine,
                    });
                    continue;
                }
                raw_pairs.push((i, j));
                pair_lines.push(line);
            }
            tag => errors.push(ParseError {
                line,
                kind: ParseErrorKind::UnknownTag(tag.to_string()),
            }),
        }
    }

    let header = match header {
        Some(h) => h,
        None => {
            errors.push(ParseError {
                line: 1,
                kind: ParseErrorKind::MissingHeader,
            });
            return Err(errors);
        }
    };
    if edges.len() != header.m {
        errors.push(ParseError {
            line: header.line,
            kind: ParseErrorKind::EdgeCountMismatch {
                declared: header.m,
                found: edges.len(),
            },
        });
    }
    if raw_pairs.len() != header.k {
        errors.push(ParseError {
            line: header.line,
            kind: ParseErrorKind::PairCountMismatch {
                declared: header.k,
                found: raw_pairs.len(),
            },
        });
    }
    for (pos, &(i, j)) in raw_pairs.iter().enumerate() {
        for ordinal in [i, j] {
            if ordinal > edges.len() {
                errors.push(ParseError {
                    line: pair_lines[pos],
                    kind: ParseErrorKind::PairOrdinalOutOfRange {
                        ordinal,
                        m: edges.len(),
                    },
                });
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }

    let pairs0: Vec<(usize, usize)> = raw_pairs.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    Instance::new(
        header.n_a,
        header.n_b,
        edges,
        pairs0.iter().copied(),
        header.c,
        precision,
    )
    .map_err(|list| {
        list.into_iter()
            .map(|err| {
                let line = match &err {
                    ValidationError::EndpointOutOfRange { index, .. }
                    | ValidationError::NonPositiveWeight { index } => edge_lines[*index],
                    ValidationError::DuplicateEdge { second, .. } => edge_lines[*second],
                    ValidationError::PairOutOfRange { i, j }
                    | ValidationError::PairNotCrossing { i, j } => pairs0
                        .iter()
                        .position(|&(a, b)| (a.min(b), a.max(b)) == (*i.min(j), *i.max(j)))
                        .map(|pos| pair_lines[pos])
                        .unwrap_or(header.line),
                    ValidationError::SelfPair { i } => pairs0
                        .iter()
                        .position(|&(a, b)| a == *i && b == *i)
                        .map(|pos| pair_lines[pos])
                        .unwrap_or(header.line),
                    ValidationError::UnsupportedBudget { .. }
                    | ValidationError::WeightSumOverflow => header.line,
                };
                ParseError {
                    line,
                    kind: ParseErrorKind::Validation(err),
                }
            })
            .collect()
    })
}

/// Canonical instance text: header, edges in input order, pairs sorted.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p cpem {} {} {} {} {}",
        inst.n_a(),
        inst.n_b(),
        inst.edge_count(),
        inst.pair_count(),
        inst.c()
    )
    .unwrap();
    for e in inst.edges() {
        writeln!(
            out,
            "e {} {} {}",
            e.a,
            e.b,
            format_weight(e.weight, inst.precision())
        )
        .unwrap();
    }
    for &(i, j) in inst.admissible() {
        writeln!(out, "x {} {}", i + 1, j + 1).unwrap();
    }
    out
}

/// Parsed contents of a solution file, still unverified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub weight: Weight,
    /// 0-based edge ids, in file order.
    pub edges: Vec<usize>,
    /// 0-based normalized crossing pairs, in file order.
    pub crossings: Vec<(usize, usize)>,
}

pub fn parse_solution(text: &str, precision: u32) -> Result<SolutionFile, Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut weight: Option<Weight> = None;
    let mut weight_lines = 0usize;
    let mut edges = Vec::new();
    let mut crossings = Vec::new();
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "w" if tokens.len() == 2 => match parse_weight(tokens[1], precision) {
                Ok(v) => {
                    weight_lines += 1;
                    weight = Some(v);
                }
                Err(e) => errors.push(ParseError {
                    line,
                    kind: ParseErrorKind::Weight(e),
                }),
            },
            "m" if tokens.len() == 2 => match tokens[1].parse::<usize>() {
                Ok(ord) if ord >= 1 => edges.push(ord - 1),
                _ => errors.push(ParseError {
                    line,
                    kind: ParseErrorKind::BadSolutionLine,
                }),
            },
            "c" if tokens.len() == 3 => {
                match (tokens[1].parse::<usize>(), tokens[2].parse::<usize>()) {
                    (Ok(i), Ok(j)) if i >= 1 && j >= 1 && i != j => {
                        crossings.push(((i - 1).min(j - 1), (i - 1).max(j - 1)));
                    }
                    _ => errors.push(ParseError {
                        line,
                        kind: ParseErrorKind::BadSolutionLine,
                    }),
                }
            }
            _ => errors.push(ParseError {
                line,
                kind: ParseErrorKind::BadSolutionLine,
            }),
        }
    }
    if weight_lines != 1 {
        errors.push(ParseError {
            line: 1,
            kind: ParseErrorKind::WeightLineCount,
        });
    }
    if errors.is_empty() {
        Ok(SolutionFile {
            weight: weight.unwrap(),
            edges,
            crossings,
        })
    } else {
        Err(errors)
    }
}

pub fn write_solution(inst: &Instance, sol: &Solution) -> String {
    let mut out = String::new();
    writeln!(out, "w {}", format_weight(sol.weight(), inst.precision())).unwrap();
    for id in sol.matching().iter() {
        writeln!(out, "m {}", id + 1).unwrap();
    }
    for &(i, j) in sol.realized_crossings() {
        writeln!(out, "c {} {}", i + 1, j + 1).unwrap();
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("solution references edge ordinal {ordinal}, but there are {m} edges")]
    OrdinalOutOfRange { ordinal: usize, m: usize },
    #[error("solution lists edge ordinal {ordinal} twice")]
    DuplicateEdge { ordinal: usize },
    #[error("{0}")]
    NotAMatching(crate::model::MatchingError),
    #[error("matching is not feasible for c={c}")]
    NotFeasible { c: u8 },
    #[error("declared weight {declared} but the edges sum to {actual}")]
    WeightMismatch { declared: String, actual: String },
    #[error("declared crossings do not match the realized crossings")]
    CrossingsMismatch,
}

/// Verifies a parsed solution file against an instance: the edges form a
/// feasible matching and the declared weight and crossings match the
/// recomputed ones exactly.
pub fn check_solution(inst: &Instance, file: &SolutionFile) -> Result<Solution, Vec<CheckError>> {
    let mut errors = Vec::new();
    let m = inst.edge_count();
    let mut seen = std::collections::BTreeSet::new();
    for &id in &file.edges {
        if id >= m {
            errors.push(CheckError::OrdinalOutOfRange { ordinal: id + 1, m });
        } else if !seen.insert(id) {
            errors.push(CheckError::DuplicateEdge { ordinal: id + 1 });
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let matching = Matching::new(file.edges.iter().copied());
    match inst.is_c_cpe(&matching) {
        Err(e) => {
            errors.push(CheckError::NotAMatching(e));
            return Err(errors);
        }
        Ok(false) => {
            errors.push(CheckError::NotFeasible { c: inst.c() });
            return Err(errors);
        }
        Ok(true) => {}
    }
    let actual = inst.matching_weight(&matching);
    if actual != file.weight {
        errors.push(CheckError::WeightMismatch {
            declared: format_weight(file.weight, inst.precision()),
            actual: format_weight(actual, inst.precision()),
        });
    }
    let realized: Vec<(usize, usize)> = inst.realized_crossings(&matching).into_iter().collect();
    let mut declared = file.crossings.clone();
    declared.sort_unstable();
    declared.dedup();
    if declared != realized {
        errors.push(CheckError::CrossingsMismatch);
    }
    if errors.is_empty() {
        Ok(Solution::compute(inst, matching).expect("feasibility was just checked"))
    } else {
        Err(errors)
    }
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub n_a: usize,
    pub n_b: usize,
    pub m: usize,
    pub target_k: usize,
    pub c: u8,
    pub w_min: Weight,
    pub w_max: Weight,
    pub seed: u64,
    pub precision: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("cannot place {m} distinct edges on a {n_a}x{n_b} grid")]
    TooManyEdges { m: usize, n_a: usize, n_b: usize },
    #[error("weight range must satisfy 0 < min <= max")]
    BadWeightRange,
    #[error("generated instance failed validation: {0:?}")]
    Invalid(Vec<ValidationError>),
}

/// Deterministic random instance for a fixed seed. Edges are sampled
/// without duplicate endpoint pairs; the admissible set is a uniform
/// sample of the crossing pairs, clamped to however many exist.
pub fn generate(p: &GenParams) -> Result<Instance, GenError> {
    if p.m > p.n_a.saturating_mul(p.n_b) {
        return Err(GenError::TooManyEdges {
            m: p.m,
            n_a: p.n_a,
            n_b: p.n_b,
        });
    }
    if !p.w_min.is_positive() || p.w_min > p.w_max {
        return Err(GenError::BadWeightRange);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let cells = rand::seq::index::sample(&mut rng, p.n_a * p.n_b, p.m);
    let edges: Vec<Edge> = cells
        .iter()
        .map(|cell| {
            let a = cell / p.n_b + 1;
            let b = cell % p.n_b + 1;
            let raw = rng.gen_range(p.w_min.scaled()..=p.w_max.scaled());
            Edge::new(a, b, Weight::from_scaled(raw))
        })
        .collect();
    let mut crossing_pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if crosses(&edges[i], &edges[j]) {
                crossing_pairs.push((i, j));
            }
        }
    }
    crossing_pairs.shuffle(&mut rng);
    crossing_pairs.truncate(p.target_k);
    Instance::new(p.n_a, p.n_b, edges, crossing_pairs, p.c, p.precision).map_err(GenError::Invalid)
}

/// Deterministic SVG drawing: both rows left to right, edges as straight
/// segments, solution edges highlighted and realized crossings marked.
pub fn render_svg(inst: &Instance, sol: Option<&Solution>) -> String {
    const STEP: f64 = 60.0;
    const MARGIN: f64 = 50.0;
    const Y_UPPER: f64 = 60.0;
    const Y_LOWER: f64 = 220.0;
    let cols = inst.n_a().max(inst.n_b()).max(1);
    let width = 2.0 * MARGIN + STEP * (cols - 1) as f64;
    let height = Y_LOWER + 60.0;
    let xa = |i: usize| MARGIN + STEP * (i - 1) as f64;
    let xb = |q: usize| MARGIN + STEP * (q - 1) as f64;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    for (y, n) in [(Y_UPPER, inst.n_a()), (Y_LOWER, inst.n_b())] {
        let x_end = MARGIN + STEP * (n.max(1) - 1) as f64;
        writeln!(
            out,
            r##"  <line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#dddddd"/>"##,
            MARGIN - 20.0,
            x_end + 20.0
        )
        .unwrap();
    }
    let in_solution = |id: usize| sol.map_or(false, |s| s.matching().contains(id));
    for (id, e) in inst.edges().iter().enumerate() {
        if !in_solution(id) {
            writeln!(
                out,
                r##"  <line x1="{:.1}" y1="{Y_UPPER:.1}" x2="{:.1}" y2="{Y_LOWER:.1}" stroke="#999999"/>"##,
                xa(e.a),
                xb(e.b)
            )
            .unwrap();
        }
    }
    for (id, e) in inst.edges().iter().enumerate() {
        if in_solution(id) {
            writeln!(
                out,
                r##"  <line x1="{:.1}" y1="{Y_UPPER:.1}" x2="{:.1}" y2="{Y_LOWER:.1}" stroke="#d62728" stroke-width="3"/>"##,
                xa(e.a),
                xb(e.b)
            )
            .unwrap();
        }
    }
    if let Some(sol) = sol {
        for &(i, j) in sol.realized_crossings() {
            let (e, f) = (inst.edge(i), inst.edge(j));
            // intersection of the two segments
            let (x1, x2) = (xa(e.a), xb(e.b));
            let (x3, x4) = (xa(f.a), xb(f.b));
            let denom = (x2 - x1) - (x4 - x3);
            let t = (x3 - x1) / denom;
            let px = x1 + t * (x2 - x1);
            let py = Y_UPPER + t * (Y_LOWER - Y_UPPER);
            writeln!(
                out,
                r##"  <circle cx="{px:.1}" cy="{py:.1}" r="5" fill="none" stroke="#1f77b4" stroke-width="2"/>"##
            )
            .unwrap();
        }
    }
    for i in 1..=inst.n_a() {
        writeln!(
            out,
            r##"  <circle cx="{:.1}" cy="{Y_UPPER:.1}" r="4" fill="#333333"/>"##,
            xa(i)
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle">a{i}</text>"#,
            xa(i),
            Y_UPPER - 12.0
        )
        .unwrap();
    }
    for q in 1..=inst.n_b() {
        writeln!(
            out,
            r##"  <circle cx="{:.1}" cy="{Y_LOWER:.1}" r="4" fill="#333333"/>"##,
            xb(q)
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle">b{q}</text>"#,
            xb(q),
            Y_LOWER + 24.0
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

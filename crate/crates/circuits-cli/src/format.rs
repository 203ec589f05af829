//! Line-oriented text formats: .poly instances, .vec vectors, .circ circuit
//! sets, and the trace/walk renderings printed by the solver commands.
//!
//! All rationals travel as canonical tokens (reduced, positive denominator,
//! `n` or `n/d`), so parse(serialize(x)) reproduces x bit-exactly. `#`
//! starts a comment, blank lines are ignored, and diagnostics carry the
//! 1-based line number of the offending input line.

use std::fmt::Write as _;

use circuits_core::augment::{AugmentationTrace, Terminal};
use circuits_core::exactnum::parse_rational;
use circuits_core::polyhedron::{CircuitSet, Polyhedron};
use circuits_core::walks::CircuitWalk;
use circuits_core::{RatMatrix, RatVector, Rational};

/// A parse failure with its input location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Non-comment, non-blank lines with their original line numbers.
fn meaningful_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let stripped = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = stripped.split_whitespace().collect();
            if tokens.is_empty() {
                None
            } else {
                Some((idx + 1, tokens))
            }
        })
        .collect()
}

fn parse_row(line: usize, tokens: &[&str], expect: usize, what: &str) -> Result<RatVector, ParseError> {
    if tokens.len() != expect {
        return Err(ParseError::new(
            line,
            format!("expected {expect} {what} tokens, found {}", tokens.len()),
        ));
    }
    tokens
        .iter()
        .map(|t| {
            parse_rational(t).ok_or_else(|| ParseError::new(line, format!("bad rational token {t:?}")))
        })
        .collect()
}

fn parse_count(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("bad {what} {token:?}")))
}

/// Parses a .poly file into a (not yet pointedness-checked) polyhedron.
pub fn parse_poly(text: &str) -> Result<Polyhedron, ParseError> {
    let lines = meaningful_lines(text);
    let mut cursor = lines.iter();
    let (header_line, header) = cursor
        .next()
        .ok_or_else(|| ParseError::new(1, "empty file"))?;
    if header.len() != 4 || header[0] != "poly" {
        return Err(ParseError::new(
            *header_line,
            "expected header `poly <n> <mA> <mB>`",
        ));
    }
    let n = parse_count(*header_line, header[1], "dimension")?;
    let m_a = parse_count(*header_line, header[2], "equality count")?;
    let m_b = parse_count(*header_line, header[3], "inequality count")?;

    let mut take_row = |expect: usize, what: &str| -> Result<(usize, RatVector), ParseError> {
        let (line, tokens) = cursor
            .next()
            .ok_or_else(|| ParseError::new(lines.last().map_or(1, |l| l.0), "unexpected end of file"))?;
        Ok((*line, parse_row(*line, tokens, expect, what)?))
    };

    let mut eq_rows = Vec::with_capacity(m_a);
    for _ in 0..m_a {
        eq_rows.push(take_row(n, "matrix")?.1);
    }
    let eq_rhs = if m_a > 0 {
        take_row(m_a, "right-hand side")?.1
    } else {
        Vec::new()
    };
    let mut ineq_rows = Vec::with_capacity(m_b);
    for _ in 0..m_b {
        ineq_rows.push(take_row(n, "matrix")?.1);
    }
    let (d_line, ineq_rhs) = take_row(m_b, "right-hand side")?;
    if let Some((line, _)) = cursor.next() {
        return Err(ParseError::new(*line, "trailing content after instance"));
    }

    Polyhedron::new(
        RatMatrix::from_rows(eq_rows, n),
        eq_rhs,
        RatMatrix::from_rows(ineq_rows, n),
        ineq_rhs,
    )
    .map_err(|e| ParseError::new(d_line, e.to_string()))
}

pub fn serialize_poly(poly: &Polyhedron) -> String {
    let mut out = String::new();
    let n = poly.dim();
    let m_a = poly.eq_mat().rows();
    let m_b = poly.ineq_mat().rows();
    let _ = writeln!(out, "poly {n} {m_a} {m_b}");
    for r in 0..m_a {
        let _ = writeln!(out, "{}", join_tokens(poly.eq_mat().row(r)));
    }
    if m_a > 0 {
        let _ = writeln!(out, "{}", join_tokens(poly.eq_rhs()));
    }
    for r in 0..m_b {
        let _ = writeln!(out, "{}", join_tokens(poly.ineq_mat().row(r)));
    }
    let _ = writeln!(out, "{}", join_tokens(poly.ineq_rhs()));
    out
}

/// Parses a .vec file: one line of rational tokens.
pub fn parse_vec(text: &str) -> Result<RatVector, ParseError> {
    let lines = meaningful_lines(text);
    match lines.as_slice() {
        [] => Err(ParseError::new(1, "empty vector file")),
        [(line, tokens)] => tokens
            .iter()
            .map(|t| {
                parse_rational(t)
                    .ok_or_else(|| ParseError::new(*line, format!("bad rational token {t:?}")))
            })
            .collect(),
        [_, (line, _), ..] => Err(ParseError::new(*line, "vector file has more than one line")),
    }
}

pub fn serialize_vec(v: &[Rational]) -> String {
    format!("{}\n", join_tokens(v))
}

fn join_tokens(v: &[Rational]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders a circuit set in .circ form: a header with member and total
/// counts followed by one integer row per member, lexicographically sorted.
pub fn serialize_circ(set: &CircuitSet, n: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "circuits {} {} cardinality {}",
        set.len(),
        n,
        set.cardinality()
    );
    for member in set.iter() {
        let row = member
            .direction()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "{row}");
    }
    out
}

fn join_compact(v: &[Rational]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_compact_ints(v: &[circuits_core::Int]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders an augmentation trace, one step per line plus the terminal line.
pub fn render_trace(trace: &AugmentationTrace) -> String {
    let mut out = String::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "step {}: x={} g={} alpha={} steepness={}",
            k + 1,
            join_compact(&step.point),
            join_compact_ints(step.circuit.direction()),
            step.step,
            step.steepness
        );
    }
    match &trace.terminal {
        Terminal::Optimal { value, .. } => {
            let _ = writeln!(out, "terminal: optimal value={value}");
        }
        Terminal::Unbounded { certificate } => {
            let _ = writeln!(
                out,
                "terminal: unbounded g={}",
                join_compact_ints(certificate.direction())
            );
        }
    }
    out
}

/// Renders a circuit walk: header, steps, then the walk points.
pub fn render_walk(walk: &CircuitWalk, n: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "walk {} {}", walk.len(), n);
    for step in &walk.steps {
        let _ = writeln!(
            out,
            "g={} lambda={}",
            join_compact_ints(step.circuit.direction()),
            step.length
        );
    }
    let _ = writeln!(out, "points:");
    for point in &walk.points {
        let _ = writeln!(out, "{}", join_tokens(point));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use circuits_core::circuit_enum::naive_circuits;
    use circuits_core::polyhedron::triangle;

    const TRIANGLE_POLY: &str = "\
# the triangle {x >= 0, x1 + x2 <= 1}
poly 2 0 3

-1 0
0 -1
1 1
0 0 1
";

    #[test]
    fn poly_round_trip_is_bit_exact() {
        let poly = parse_poly(TRIANGLE_POLY).unwrap();
        assert_eq!(poly, triangle());
        let text = serialize_poly(&poly);
        let reparsed = parse_poly(&text).unwrap();
        assert_eq!(reparsed, poly);
        assert_eq!(serialize_poly(&reparsed), text);
    }

    #[test]
    fn poly_with_equalities_round_trips() {
        let text = "poly 2 1 2\n1 1\n0\n1 0\n0 1\n1/2 3/4\n";
        let poly = parse_poly(text).unwrap();
        assert_eq!(serialize_poly(&poly), text);
    }

    #[test]
    fn generated_instances_round_trip() {
        for seed in 0..10 {
            let inst = circuits_core::polyhedron::gen_random(3, 1, 4, seed, 5).unwrap();
            let text = serialize_poly(&inst.poly);
            assert_eq!(parse_poly(&text).unwrap(), inst.poly, "seed {seed}");
            let tp = circuits_core::polyhedron::gen_dual_transportation(
                2,
                2,
                &RatMatrix::from_i64_rows(&[&[1, 2], &[3, 4]], 2),
            );
            assert_eq!(parse_poly(&serialize_poly(&tp)).unwrap(), tp);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_token = "poly 2 0 1\n1 x\n0\n";
        let err = parse_poly(bad_token).unwrap_err();
        assert_eq!(err.line, 2);

        let short_row = "poly 2 0 1\n1\n";
        let err = parse_poly(short_row).unwrap_err();
        assert_eq!(err.line, 2);

        let bad_header = "polyhedron 2 0 1\n";
        let err = parse_poly(bad_header).unwrap_err();
        assert_eq!(err.line, 1);

        let zero_row = "poly 2 0 2\n0 0\n1 1\n0 1\n";
        let err = parse_poly(zero_row).unwrap_err();
        assert!(err.message.contains("zero"));
    }

    #[test]
    fn vec_parsing() {
        assert_eq!(
            parse_vec("1 -2/3  4\n").unwrap(),
            vec![
                parse_rational("1").unwrap(),
                parse_rational("-2/3").unwrap(),
                parse_rational("4").unwrap()
            ]
        );
        assert!(parse_vec("").is_err());
        assert!(parse_vec("1 2\n3\n").is_err());
        let v = parse_vec("# c\n-11/4\n").unwrap();
        assert_eq!(serialize_vec(&v), "-11/4\n");
    }

    #[test]
    fn circ_output_shape() {
        let t = triangle();
        let set = naive_circuits(&t);
        let text = serialize_circ(&set, 2);
        assert_eq!(text, "circuits 3 2 cardinality 6\n0 1\n1 -1\n1 0\n");
    }
}

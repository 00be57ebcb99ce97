//! Text formats: game files and equilibrium profiles.
//!
//! A game file looks like
//!
//! ```text
//! bimatrix v1
//! rows 2 cols 2
//! 1 -1
//! -1 1
//!
//! -1 1
//! 1 -1
//! ```
//!
//! Entries are integers or fractions `p/q`. A profile is two lines,
//! `x=(1/2,1/2)` and `y=(1/2,1/2)`, the same form `solve` prints.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::game::{BimatrixGame, Matrix, MixedProfile, MixedStrategy, Rational};

pub const HEADER: &str = "bimatrix v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected header `{HEADER}`")]
    BadHeader,
    #[error("expected `rows N cols M` with positive integers")]
    BadDimensions,
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("`{0}` is not a rational number")]
    BadToken(String),
    #[error("{matrix}: expected {expected} rows, found {found}")]
    MissingRows {
        matrix: char,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} entries, found {found}")]
    RowLength { expected: usize, found: usize },
    #[error("expected a blank line between the two matrices")]
    MissingSeparator,
    #[error("unexpected content after matrix B")]
    TrailingContent,
    #[error("expected `{0}=(p1,...,pk)`")]
    BadProfileLine(char),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Parses `p` or `p/q`, with an optional leading `-` or `−`.
pub fn parse_rational(token: &str) -> Result<Rational, ParseErrorKind> {
    let bad = || ParseErrorKind::BadToken(token.to_string());
    let (negative, body) = match token.strip_prefix('-').or_else(|| token.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let digits = |s: &str| -> Result<BigInt, ParseErrorKind> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    let (num, den) = match body.split_once('/') {
        Some((p, q)) => (digits(p)?, digits(q)?),
        None => (digits(body)?, BigInt::from(1)),
    };
    if den.is_zero() {
        return Err(ParseErrorKind::ZeroDenominator(token.to_string()));
    }
    let r = Rational::new(num, den);
    Ok(if negative { -r } else { r })
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col, idx)),
            (true, Some((c, s))) => {
                out.push((c + 1, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c + 1, &line[s..]));
    }
    out.into_iter()
}

fn parse_matrix<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    name: char,
    rows: usize,
    cols: usize,
    last_line: usize,
) -> Result<Matrix, ParseError> {
    let mut data = Vec::with_capacity(rows);
    for found in 0..rows {
        let Some((no, line)) = lines.next().filter(|(_, l)| !l.trim().is_empty()) else {
            return Err(err(
                last_line.max(1),
                1,
                ParseErrorKind::MissingRows {
                    matrix: name,
                    expected: rows,
                    found,
                },
            ));
        };
        let mut row = Vec::with_capacity(cols);
        for (col, tok) in tokens(line) {
            row.push(parse_rational(tok).map_err(|k| err(no, col, k))?);
        }
        if row.len() != cols {
            return Err(err(
                no,
                1,
                ParseErrorKind::RowLength {
                    expected: cols,
                    found: row.len(),
                },
            ));
        }
        data.push(row);
    }
    Ok(Matrix::from_rows(data).expect("dimensions checked"))
}

pub fn parse_game(text: &str) -> Result<BimatrixGame, ParseError> {
    let total_lines = text.lines().count();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    match lines.next() {
        Some((_, l)) if l.trim() == HEADER => {}
        _ => return Err(err(1, 1, ParseErrorKind::BadHeader)),
    }
    let Some((dim_line, dims)) = lines.next() else {
        return Err(err(2, 1, ParseErrorKind::BadDimensions));
    };
    let dim_tokens: Vec<(usize, &str)> = tokens(dims).collect();
    let (rows, cols) = match dim_tokens.as_slice() {
        [(_, "rows"), (_, n), (_, "cols"), (_, m)] => match (n.parse::<usize>(), m.parse::<usize>()) {
            (Ok(n), Ok(m)) if n > 0 && m > 0 => (n, m),
            _ => return Err(err(dim_line, 1, ParseErrorKind::BadDimensions)),
        },
        _ => return Err(err(dim_line, 1, ParseErrorKind::BadDimensions)),
    };

    let a = parse_matrix(&mut lines, 'A', rows, cols, total_lines)?;
    match lines.next() {
        Some((_, l)) if l.trim().is_empty() => {}
        Some((no, _)) => return Err(err(no, 1, ParseErrorKind::MissingSeparator)),
        None => return Err(err(total_lines + 1, 1, ParseErrorKind::MissingSeparator)),
    }
    let b = parse_matrix(&mut lines, 'B', rows, cols, total_lines)?;
    if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(no, 1, ParseErrorKind::TrailingContent));
    }
    Ok(BimatrixGame::new(a, b).expect("both matrices are rows x cols"))
}

fn write_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

/// Canonical text form of a game.
pub fn serialize_game(g: &BimatrixGame) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "rows {} cols {}", g.rows(), g.cols()).unwrap();
    write_matrix(&mut out, g.a());
    out.push('\n');
    write_matrix(&mut out, g.b());
    out
}

pub fn format_strategy(s: &MixedStrategy) -> String {
    let parts: Vec<String> = s.probs().iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn format_profile(p: &MixedProfile) -> String {
    format!("x={}\ny={}\n", format_strategy(&p.x), format_strategy(&p.y))
}

fn parse_strategy_line(no: usize, line: &str, name: char) -> Result<MixedStrategy, ParseError> {
    let bad = || err(no, 1, ParseErrorKind::BadProfileLine(name));
    let rest = line.trim().strip_prefix(name).ok_or_else(bad)?;
    let rest = rest.trim_start().strip_prefix('=').ok_or_else(bad)?.trim();
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let probs = inner
        .split(',')
        .map(|t| parse_rational(t.trim()).map_err(|k| err(no, 1, k)))
        .collect::<Result<Vec<_>, _>>()?;
    MixedStrategy::new(probs).map_err(|e| err(no, 1, ParseErrorKind::InvalidStrategy(e.to_string())))
}

/// Reads `x=(...)` and `y=(...)`; blank lines and lines starting with `#`
/// are skipped.
pub fn parse_profile(text: &str) -> Result<MixedProfile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (xl, x) = lines
        .next()
        .ok_or_else(|| err(1, 1, ParseErrorKind::BadProfileLine('x')))?;
    let x = parse_strategy_line(xl, x, 'x')?;
    let (yl, y) = lines
        .next()
        .ok_or_else(|| err(xl + 1, 1, ParseErrorKind::BadProfileLine('y')))?;
    let y = parse_strategy_line(yl, y, 'y')?;
    if let Some((no, _)) = lines.next() {
        return Err(err(no, 1, ParseErrorKind::TrailingContent));
    }
    Ok(MixedProfile::new(x, y))
}

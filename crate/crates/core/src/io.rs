//! Text formats. All rationals are written `p/q` (or `p`); `#` starts a comment.
//!
//! `.msp`, a metric space:
//! ```text
//! points 3 strict
//! a b c
//! 0 1 2
//! 1 0 1
//! 2 1 0
//! ```
//! The second line holds the labels. It may be left out (the labels are then
//! `0 1 2 …`), which is recognized by the file having only `n` further lines. The
//! mode is `strict` or `pseudo` and defaults to `strict`.
//!
//! `.corr`, a correspondence: one `i j` pair of 0-based indices per line.
//!
//! `.hh`, a hedgehog: one `length multiplicity` per line; the multiplicity may be
//! omitted and defaults to 1.

use std::fmt::Write as _;

use thiserror::Error;

use crate::correspondence::{Correspondence, CorrespondenceError};
use crate::hedgehog::{HedgehogError, HedgehogSpec};
use crate::rational::{parse_rational, Rational};
use crate::space::{FiniteMetricSpace, MetricError, Mode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error(transparent)]
    Hedgehog(#[from] HedgehogError),
}

/// A whitespace-separated token with its 1-based line and column.
#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> IoError {
        IoError::Format {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn rational(&self) -> Result<Rational, IoError> {
        parse_rational(self.text).map_err(|e| self.error(e))
    }

    fn usize(&self) -> Result<usize, IoError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found `{}`", self.text)))
    }
}

/// Nonempty lines with comments stripped, split into tokens.
fn lines(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..pos],
                        line: i + 1,
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(tokens);
        }
    }
    out
}

fn end_of_input(text: &str, message: &str) -> IoError {
    IoError::Format {
        line: text.lines().count().max(1),
        column: 1,
        message: message.to_string(),
    }
}

pub fn parse_msp(text: &str) -> Result<FiniteMetricSpace, IoError> {
    let lines = lines(text);
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| end_of_input(text, "missing `points n mode` header"))?;
    if header[0].text != "points" {
        return Err(header[0].error(format!("expected `points`, found `{}`", header[0].text)));
    }
    let n = header
        .get(1)
        .ok_or_else(|| header[0].error("missing point count"))?
        .usize()?;
    let mode = match header.get(2) {
        None => Mode::Strict,
        Some(t) => t.text.parse::<Mode>().map_err(|e| t.error(e))?,
    };
    if let Some(t) = header.get(3) {
        return Err(t.error("unexpected token after mode"));
    }

    let mut rows: Vec<&Vec<Token>> = it.collect();
    let labels = if rows.len() == n + 1 {
        let first = rows.remove(0);
        if first.len() != n {
            let at = first.get(n).unwrap_or(&first[0]);
            return Err(at.error(format!("expected {n} labels, found {}", first.len())));
        }
        first.iter().map(|t| t.text.to_string()).collect()
    } else {
        (0..n).map(|i| i.to_string()).collect()
    };
    if rows.len() != n {
        let message = format!("expected {n} matrix rows, found {}", rows.len());
        return Err(match rows.get(n) {
            Some(extra) => extra[0].error(message),
            None => end_of_input(text, &message),
        });
    }
    let mut matrix = Vec::with_capacity(n);
    for row in rows {
        if row.len() != n {
            let at = row.get(n).unwrap_or(&row[0]);
            return Err(at.error(format!("expected {n} entries, found {}", row.len())));
        }
        matrix.push(row.iter().map(Token::rational).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(FiniteMetricSpace::validate(labels, matrix, mode)?)
}

pub fn write_msp(space: &FiniteMetricSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "points {} {}", space.len(), space.mode());
    let _ = writeln!(out, "{}", space.labels().join(" "));
    for i in 0..space.len() {
        let row: Vec<String> = space.row(i).iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Pairs of a `.corr` file, between spaces of `n` and `m` points.
pub fn parse_correspondence(text: &str, n: usize, m: usize) -> Result<Correspondence, IoError> {
    let mut pairs = Vec::new();
    for line in lines(text) {
        if line.len() != 2 {
            return Err(line[0].error(format!("expected `i j`, found {} tokens", line.len())));
        }
        let (i, j) = (line[0].usize()?, line[1].usize()?);
        if i >= n {
            return Err(line[0].error(format!("index {i} out of range for {n} points")));
        }
        if j >= m {
            return Err(line[1].error(format!("index {j} out of range for {m} points")));
        }
        pairs.push((i, j));
    }
    Ok(Correspondence::new(n, m, pairs)?)
}

pub fn write_correspondence(r: &Correspondence) -> String {
    r.pairs().iter().map(|(i, j)| format!("{i} {j}\n")).collect()
}

pub fn parse_hedgehog(text: &str) -> Result<HedgehogSpec, IoError> {
    let mut needles = Vec::new();
    for line in lines(text) {
        if line.len() > 2 {
            return Err(line[2].error("expected `length multiplicity`"));
        }
        let len = line[0].rational()?;
        let mult = match line.get(1) {
            Some(t) => t
                .text
                .parse::<u32>()
                .map_err(|_| t.error(format!("expected a multiplicity, found `{}`", t.text)))?,
            None => 1,
        };
        if mult == 0 {
            return Err(line[1].error("multiplicity must be positive"));
        }
        if len <= Rational::from_integer(0) {
            return Err(line[0].error(format!("needle length must be positive, got {len}")));
        }
        needles.push((len, mult));
    }
    Ok(HedgehogSpec::new(needles)?)
}

pub fn write_hedgehog(spec: &HedgehogSpec) -> String {
    spec.needles().map(|(l, m)| format!("{l} {m}\n")).collect()
}

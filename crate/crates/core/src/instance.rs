//! Plain-text instance files.
//!
//! ```text
//! # comment
//! m n
//! a11 a12 ... a1n b1
//! ...
//! am1 am2 ... amn bm
//! ```
//!
//! Anything after `#` on a line is ignored, as are blank lines. Integers
//! have arbitrary precision.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::polyhedron::Polyhedron;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_count(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what} must be a nonnegative integer, got `{tok}`")))
}

/// Parses the system `A x <= b` without any rank requirement.
pub fn parse_system(text: &str) -> Result<(IntMatrix, Vec<BigInt>)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `m n` header"))?;
    if header.len() != 2 {
        return Err(parse_err(hline, format!("header needs 2 integers `m n`, found {}", header.len())));
    }
    let m = parse_count(hline, header[0], "m")?;
    let n = parse_count(hline, header[1], "n")?;
    if m == 0 || n == 0 {
        return Err(parse_err(hline, "m and n must be positive"));
    }
    let mut entries = Vec::with_capacity(m * n);
    let mut b = Vec::with_capacity(m);
    let mut last = hline;
    for (line, tokens) in lines {
        if b.len() == m {
            return Err(parse_err(line, format!("more than the declared {m} rows")));
        }
        if tokens.len() != n + 1 {
            return Err(parse_err(
                line,
                format!("expected {} integers, found {}", n + 1, tokens.len()),
            ));
        }
        let mut row = tokens.iter().map(|t| {
            t.parse::<BigInt>()
                .map_err(|_| parse_err(line, format!("invalid integer `{t}`")))
        });
        for _ in 0..n {
            entries.push(row.next().expect("length checked")?);
        }
        b.push(row.next().expect("length checked")?);
        last = line;
    }
    if b.len() < m {
        return Err(parse_err(last + 1, format!("expected {m} rows, found {}", b.len())));
    }
    Ok((IntMatrix::from_vec(m, n, entries)?, b))
}

/// Parses an instance; `A` must have full column rank.
pub fn parse_instance(text: &str) -> Result<Polyhedron> {
    let (a, b) = parse_system(text)?;
    Polyhedron::new(a, b)
}

/// Canonical text form. Parsing the output gives back the same system.
pub fn write_instance(p: &Polyhedron, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}").expect("string write");
        }
    }
    writeln!(out, "{} {}", p.num_constraints(), p.dim()).expect("string write");
    for (row, bi) in p.a().row_iter().zip(p.b()) {
        let fields: Vec<String> = row.iter().chain(std::iter::once(bi)).map(|x| x.to_string()).collect();
        writeln!(out, "{}", fields.join(" ")).expect("string write");
    }
    out
}

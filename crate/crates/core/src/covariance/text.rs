//! Plain-text covariance-matrix files.
//!
//! ```text
//! # comment
//! modes 2
//! omega 1 2
//! 0 1 0 0
//! -1 0 0 0
//! 0 0 0 1
//! 0 0 -1 0
//! ```

use std::fmt::Write as _;

use nalgebra::DMatrix;
use thiserror::Error;

use super::cm::CovarianceMatrix;
use crate::modes::ModeSystem;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Parsed but not yet validated contents of a CM file.
#[derive(Debug, Clone, PartialEq)]
pub struct CmFile {
    pub modes: ModeSystem,
    pub entries: DMatrix<f64>,
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<f64>, ParseError> {
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(line, format!("invalid number `{f}`")))
        })
        .collect()
}

pub fn parse_cm_text(text: &str) -> Result<CmFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| err(0, "empty file, expected `modes n`"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["modes", count] => count
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| err(ln, format!("invalid mode count `{count}`")))?,
        _ => return Err(err(ln, "expected `modes n`")),
    };

    let (ln, omega_line) = lines.next().ok_or_else(|| err(ln, "missing `omega` line"))?;
    let fields: Vec<&str> = omega_line.split_whitespace().collect();
    if fields.first() != Some(&"omega") {
        return Err(err(ln, "expected `omega w1 … wn`"));
    }
    let omegas = numbers(ln, &fields[1..])?;
    if omegas.len() != n {
        return Err(err(ln, format!("expected {n} frequencies, found {}", omegas.len())));
    }
    let modes = ModeSystem::new(omegas).map_err(|e| err(ln, e.to_string()))?;

    let dim = 2 * n;
    let mut entries = DMatrix::zeros(dim, dim);
    let mut last = ln;
    for row in 0..dim {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| err(last, format!("expected {dim} matrix rows, found {row}")))?;
        let fields: Vec<&str> = l.split_whitespace().collect();
        let vals = numbers(ln, &fields)?;
        if vals.len() != dim {
            return Err(err(ln, format!("expected {dim} entries, found {}", vals.len())));
        }
        for (col, v) in vals.into_iter().enumerate() {
            entries[(row, col)] = v;
        }
        last = ln;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "unexpected content after matrix rows"));
    }
    Ok(CmFile { modes, entries })
}

pub fn write_cm_text(cm: &CovarianceMatrix, modes: &ModeSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "modes {}", cm.n_modes());
    let omegas: Vec<String> = modes.omegas().iter().map(|w| format!("{w:e}")).collect();
    let _ = writeln!(out, "omega {}", omegas.join(" "));
    for row in cm.entries().row_iter() {
        let vals: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(out, "{}", vals.join(" "));
    }
    out
}

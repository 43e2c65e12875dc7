//! Text format for a single matrix:
//!
//! ```text
//! ptype 3 1 2
//! 2 0
//! 3 1
//! ```
//!
//! The header gives `p` and the exponents, followed by `s` rows of `s`
//! integers. Entries are reduced modulo the row modulus before validation.
//! Blank lines and `#` comments are ignored.

use super::{AutMatrix, PType};
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<AutMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line, msg: String| Error::Parse { line, msg };
    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty matrix file".into()))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("ptype") {
        return Err(err(hline, "expected `ptype <p> <e_1> ... <e_s>`".into()));
    }
    let nums: Vec<u64> = words
        .map(|w| w.parse::<u64>().map_err(|_| err(hline, format!("bad number `{w}`"))))
        .collect::<Result<_>>()?;
    let Some((&p, exps)) = nums.split_first() else {
        return Err(err(hline, "missing prime".into()));
    };
    let exps: Vec<u32> = exps
        .iter()
        .map(|&e| u32::try_from(e).map_err(|_| err(hline, format!("exponent {e} too large"))))
        .collect::<Result<_>>()?;
    let ptype = PType::new(p, exps).map_err(|e| err(hline, e.to_string()))?;
    let s = ptype.s();
    let mut rows = Vec::with_capacity(s);
    let mut last = hline;
    for (n, line) in lines {
        if rows.len() == s {
            return Err(err(n, format!("more than {s} rows")));
        }
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|w| w.parse::<i64>().map_err(|_| err(n, format!("bad entry `{w}`"))))
            .collect::<Result<_>>()?;
        if row.len() != s {
            return Err(err(n, format!("expected {s} entries, found {}", row.len())));
        }
        rows.push(row);
        last = n;
    }
    if rows.len() != s {
        return Err(err(last, format!("expected {s} rows, found {}", rows.len())));
    }
    AutMatrix::from_integers(&ptype, &rows).map_err(|e| match e {
        Error::MatrixConstraint { row, .. } => {
            // row index counts data lines after the header
            let line = text
                .lines()
                .enumerate()
                .filter(|(i, l)| *i + 1 > hline && !l.split('#').next().unwrap_or("").trim().is_empty())
                .nth(row)
                .map_or(last, |(i, _)| i + 1);
            err(line, e.to_string())
        }
        other => err(hline, other.to_string()),
    })
}

pub fn write_matrix(m: &AutMatrix) -> String {
    let mut out = format!("ptype {}\n", m.ptype());
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

use std::fmt::Write as _;
use std::sync::Arc;

use super::{GroupHandle, SemidirectGroup, SemidirectGroupSpec, TableGroup, TableGroupSpec};
use crate::error::{Error, Result};

/// A parsed group description file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Table(TableGroupSpec),
    Semidirect(SemidirectGroupSpec),
}

impl GroupSpec {
    pub fn into_handle(self) -> GroupHandle {
        match self {
            GroupSpec::Table(t) => GroupHandle::new(Arc::new(TableGroup::new(t))),
            GroupSpec::Semidirect(s) => GroupHandle::new(Arc::new(SemidirectGroup::new(s))),
        }
    }

    pub fn order(&self) -> u128 {
        match self {
            GroupSpec::Table(t) => t.n as u128,
            GroupSpec::Semidirect(s) => s.group_order(),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Attach a line number to validation errors raised while building a spec.
fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    }
}

fn ints(lineno: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| perr(lineno, format!("expected a nonnegative integer, got {t:?}"))))
        .collect()
}

/// Parse a group description: `table <n>` followed by `n` rows, or
/// `semidirect` followed by `A …`, `m …`, the action rows and optional `gens`
/// lines. Lines starting with `#` and blank lines are ignored.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (l0, header) = lines.next().ok_or_else(|| perr(1, "empty group description"))?;
    let mut words = header.split_whitespace();
    match words.next() {
        Some("table") => {
            let n: usize = match (words.next(), words.next()) {
                (Some(w), None) => w.parse().map_err(|_| perr(l0, format!("bad order {w:?}")))?,
                _ => return Err(perr(l0, "expected `table <n>`")),
            };
            if n == 0 {
                return Err(perr(l0, "order must be positive"));
            }
            let mut table = Vec::with_capacity(n * n);
            let mut last = l0;
            for r in 0..n {
                let (ln, row) = lines.next().ok_or_else(|| perr(last, format!("missing table row {r}")))?;
                let vals = ints(ln, row)?;
                if vals.len() != n {
                    return Err(perr(ln, format!("table row has {} entries, expected {n}", vals.len())));
                }
                if let Some(v) = vals.iter().find(|&&v| v >= n as u64) {
                    return Err(perr(ln, format!("entry {v} out of range")));
                }
                table.extend(vals.into_iter().map(|v| v as u32));
                last = ln;
            }
            if let Some((ln, _)) = lines.next() {
                return Err(perr(ln, "trailing content after the table"));
            }
            TableGroupSpec::new(n, table).map(GroupSpec::Table).map_err(|e| at_line(l0, e))
        }
        Some("semidirect") => {
            if words.next().is_some() {
                return Err(perr(l0, "unexpected tokens after `semidirect`"));
            }
            let (la, aline) = lines.next().ok_or_else(|| perr(l0, "missing `A` line"))?;
            let orders = match aline.strip_prefix('A') {
                Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => ints(la, rest)?,
                _ => return Err(perr(la, "expected `A <q_1> … <q_s>`")),
            };
            let (lm, mline) = lines.next().ok_or_else(|| perr(la, "missing `m` line"))?;
            let m = match mline.split_whitespace().collect::<Vec<_>>()[..] {
                ["m", v] => v.parse::<u64>().map_err(|_| perr(lm, format!("bad m {v:?}")))?,
                _ => return Err(perr(lm, "expected `m <m>`")),
            };
            let s = orders.len();
            let mut rows = Vec::with_capacity(s);
            let mut last = lm;
            for i in 0..s {
                let (ln, row) = lines.next().ok_or_else(|| perr(last, format!("missing action row {i}")))?;
                let vals = ints(ln, row)?;
                if vals.len() != s {
                    return Err(perr(ln, format!("action row has {} entries, expected {s}", vals.len())));
                }
                if let Some(v) = vals.iter().find(|&&v| v >= orders[i]) {
                    return Err(perr(ln, format!("entry {v} not reduced mod {}", orders[i])));
                }
                rows.push(vals);
                last = ln;
            }
            let mut gens: Option<Vec<(Vec<u64>, u64)>> = None;
            for (ln, l) in lines {
                let rest = match l.strip_prefix("gens") {
                    Some(r) if r.is_empty() || r.starts_with(char::is_whitespace) => r,
                    _ => return Err(perr(ln, "expected a `gens` line")),
                };
                let list = gens.get_or_insert_with(Vec::new);
                for tuple in split_tuples(ln, rest)? {
                    list.push(parse_tuple(ln, tuple, s)?);
                }
            }
            SemidirectGroupSpec::from_rows(orders.clone(), m, &rows)
                .and_then(|spec| SemidirectGroupSpec::new(spec.orders, spec.m, spec.action, gens))
                .map(GroupSpec::Semidirect)
                .map_err(|e| at_line(la, e))
        }
        _ => Err(perr(l0, "expected `table <n>` or `semidirect`")),
    }
}

fn split_tuples(ln: usize, s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(perr(ln, format!("expected `(` at {rest:?}")));
        }
        let close = rest.find(')').ok_or_else(|| perr(ln, "unclosed tuple"))?;
        out.push(&rest[1..close]);
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

fn parse_tuple(ln: usize, t: &str, s: usize) -> Result<(Vec<u64>, u64)> {
    let (left, right) = t.split_once(';').ok_or_else(|| perr(ln, format!("tuple ({t}) lacks `;`")))?;
    let num = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|_| perr(ln, format!("bad tuple entry {x:?}")))
    };
    let a: Vec<u64> = if left.trim().is_empty() {
        Vec::new()
    } else {
        left.split(',').map(num).collect::<Result<_>>()?
    };
    if a.len() != s {
        return Err(perr(ln, format!("tuple has {} coordinates, expected {s}", a.len())));
    }
    Ok((a, num(right)?))
}

pub fn write_table(spec: &TableGroupSpec) -> String {
    let mut out = format!("table {}\n", spec.n);
    for r in spec.table.chunks(spec.n) {
        let row: Vec<String> = r.iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_semidirect(spec: &SemidirectGroupSpec) -> String {
    let mut out = String::from("semidirect\nA");
    for q in &spec.orders {
        let _ = write!(out, " {q}");
    }
    let _ = writeln!(out, "\nm {}", spec.m);
    for row in spec.action.to_full() {
        let row: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    if let Some(gens) = &spec.gens {
        out.push_str("gens");
        for (a, j) in gens {
            let a: Vec<String> = a.iter().map(u64::to_string).collect();
            let _ = write!(out, " ({};{j})", a.join(","));
        }
        out.push('\n');
    }
    out
}

use std::fmt::Write;

use super::{Backend, ElementCode};
use crate::arith::{gcd, prime_power};
use crate::autring::AutBlocks;
use crate::error::{Error, Result};

/// `A ⋊ Z_m` where `A = Z_{q_1} × … × Z_{q_s}` and the generator of `Z_m`
/// acts on coordinate vectors by `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectGroupSpec {
    pub orders: Vec<u64>,
    pub m: u64,
    pub action: AutBlocks,
    /// Explicit generators `(a, j)`; `None` means the default set.
    pub gens: Option<Vec<(Vec<u64>, u64)>>,
}

/// Largest `m` accepted; `M^j` is precomputed for every `j < m`.
const MAX_M: u64 = 1 << 20;

fn precedes(a: u64, b: u64) -> bool {
    let (pa, ea) = prime_power(a).unwrap();
    let (pb, eb) = prime_power(b).unwrap();
    (pa, ea) <= (pb, eb)
}

impl SemidirectGroupSpec {
    pub fn new(orders: Vec<u64>, m: u64, action: AutBlocks, gens: Option<Vec<(Vec<u64>, u64)>>) -> Result<Self> {
        let spec = SemidirectGroupSpec { orders, m, action, gens };
        spec.validate()?;
        Ok(spec)
    }

    /// Direct product `A × Z_m` (trivial action).
    pub fn direct(orders: Vec<u64>, m: u64) -> Result<Self> {
        let action = AutBlocks::identity(&orders)?;
        Self::new(orders, m, action, None)
    }

    /// Build from a full action matrix over all coordinates.
    pub fn from_rows(orders: Vec<u64>, m: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let action = AutBlocks::from_full(&orders, rows)?;
        Self::new(orders, m, action, None)
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > MAX_M {
            return Err(Error::Malformed(format!("m = {} outside 1..={MAX_M}", self.m)));
        }
        for &q in &self.orders {
            if q < 2 || prime_power(q).is_none() {
                return Err(Error::Malformed(format!("{q} is not a prime power")));
            }
        }
        if self.orders.windows(2).any(|w| !precedes(w[0], w[1])) {
            return Err(Error::Malformed("orders are not ≼-ascending".into()));
        }
        for &q in &self.orders {
            if gcd(q, self.m) != 1 {
                return Err(Error::Malformed(format!("gcd({q}, {}) ≠ 1", self.m)));
            }
        }
        if self.action.orders() != self.orders {
            return Err(Error::Malformed("action type does not match the abelian type".into()));
        }
        if !self.action.is_in_r() {
            return Err(Error::NotInvertible);
        }
        if !self.action.pow(self.m).is_identity() {
            return Err(Error::Malformed(format!("action order does not divide m = {}", self.m)));
        }
        if let Some(gens) = &self.gens {
            for (a, j) in gens {
                if a.len() != self.orders.len() || a.iter().zip(&self.orders).any(|(x, q)| x >= q) || *j >= self.m {
                    return Err(Error::Malformed(format!("generator ({a:?};{j}) out of range")));
                }
            }
        }
        Ok(())
    }

    pub fn group_order(&self) -> u128 {
        self.orders.iter().map(|&q| q as u128).product::<u128>() * self.m as u128
    }
}

/// Backend for [`SemidirectGroupSpec`]. Codes look like `03,12;2`: every
/// coordinate zero-padded to the width of its modulus.
pub struct SemidirectGroup {
    spec: SemidirectGroupSpec,
    widths: Vec<usize>,
    j_width: usize,
    /// `M^j` as full matrices, for `j < m`
    powers: Vec<Vec<Vec<u64>>>,
    code_len: usize,
}

fn width(n: u64) -> usize {
    (n.saturating_sub(1)).to_string().len()
}

impl SemidirectGroup {
    pub fn new(spec: SemidirectGroupSpec) -> Self {
        let widths: Vec<usize> = spec.orders.iter().map(|&q| width(q)).collect();
        let j_width = width(spec.m);
        let mut powers = Vec::with_capacity(spec.m as usize);
        let mut cur = AutBlocks::identity(&spec.orders).expect("validated type");
        for _ in 0..spec.m {
            powers.push(cur.to_full());
            cur = cur.star_mul(&spec.action).expect("same type");
        }
        let code_len = widths.iter().sum::<usize>() + widths.len().saturating_sub(1) + 1 + j_width;
        SemidirectGroup {
            spec,
            widths,
            j_width,
            powers,
            code_len,
        }
    }

    pub fn spec(&self) -> &SemidirectGroupSpec {
        &self.spec
    }

    pub fn encode(&self, a: &[u64], j: u64) -> ElementCode {
        let mut s = String::with_capacity(self.code_len);
        for (i, (&x, &w)) in a.iter().zip(&self.widths).enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{x:0w$}");
        }
        s.push(';');
        let _ = write!(s, "{j:0w$}", w = self.j_width);
        ElementCode::new(s.into_bytes())
    }

    pub fn decode(&self, code: &ElementCode) -> Result<(Vec<u64>, u64)> {
        let bad = || Error::Malformed(format!("unknown element code {code}"));
        if code.as_bytes().len() != self.code_len {
            return Err(bad());
        }
        let text = std::str::from_utf8(code.as_bytes()).map_err(|_| bad())?;
        let (a, j) = self.parse_parts(text, true).ok_or_else(bad)?;
        Ok((a, j))
    }

    /// `strict` demands the canonical padded form.
    fn parse_parts(&self, text: &str, strict: bool) -> Option<(Vec<u64>, u64)> {
        let (left, right) = text.split_once(';')?;
        let coords: Vec<&str> = if left.is_empty() { Vec::new() } else { left.split(',').collect() };
        if coords.len() != self.spec.orders.len() {
            return None;
        }
        let field = |s: &str, w: usize, n: u64| -> Option<u64> {
            let s = if strict { s } else { s.trim() };
            if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) || (strict && s.len() != w) {
                return None;
            }
            let v: u64 = s.parse().ok()?;
            (v < n).then_some(v)
        };
        let a = coords
            .iter()
            .zip(self.widths.iter().zip(&self.spec.orders))
            .map(|(s, (&w, &q))| field(s, w, q))
            .collect::<Option<Vec<u64>>>()?;
        let j = field(right, self.j_width, self.spec.m)?;
        Some((a, j))
    }

    fn act(&self, j: u64, b: &[u64]) -> Vec<u64> {
        let mj = &self.powers[j as usize];
        let orders = &self.spec.orders;
        (0..b.len())
            .map(|i| {
                let q = orders[i] as u128;
                let acc: u128 = mj[i].iter().zip(b).map(|(&x, &y)| x as u128 * y as u128 % q).sum();
                (acc % q) as u64
            })
            .collect()
    }
}

impl Backend for SemidirectGroup {
    fn identity(&self) -> ElementCode {
        self.encode(&vec![0; self.spec.orders.len()], 0)
    }

    fn mul(&self, x: &ElementCode, y: &ElementCode) -> Result<ElementCode> {
        let (a, j) = self.decode(x)?;
        let (b, k) = self.decode(y)?;
        let mb = self.act(j, &b);
        let c: Vec<u64> = a
            .iter()
            .zip(&mb)
            .zip(&self.spec.orders)
            .map(|((&u, &v), &q)| ((u as u128 + v as u128) % q as u128) as u64)
            .collect();
        Ok(self.encode(&c, (j + k) % self.spec.m))
    }

    fn inv(&self, x: &ElementCode) -> Result<ElementCode> {
        // (a, j)^{-1} = (-M^{-j} a, -j) and M^{-j} = M^{m-j}
        let (a, j) = self.decode(x)?;
        let m = self.spec.m;
        let jj = (m - j) % m;
        let c: Vec<u64> = self
            .act(jj, &a)
            .iter()
            .zip(&self.spec.orders)
            .map(|(&v, &q)| (q - v) % q)
            .collect();
        Ok(self.encode(&c, jj))
    }

    fn default_generators(&self) -> Vec<ElementCode> {
        if let Some(gens) = &self.spec.gens {
            return gens.iter().map(|(a, j)| self.encode(a, *j)).collect();
        }
        let s = self.spec.orders.len();
        let mut out: Vec<ElementCode> = (0..s)
            .map(|i| {
                let mut a = vec![0; s];
                a[i] = 1;
                self.encode(&a, 0)
            })
            .collect();
        if self.spec.m > 1 {
            out.push(self.encode(&vec![0; s], 1));
        }
        out
    }

    fn code_len(&self) -> usize {
        self.code_len
    }

    /// Accepts `(a_1,…,a_s;j)` with or without parentheses and padding.
    fn parse_element(&self, literal: &str) -> Result<ElementCode> {
        let t = literal.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        let (a, j) = self
            .parse_parts(t, false)
            .ok_or_else(|| Error::Malformed(format!("bad element literal {literal:?}")))?;
        Ok(self.encode(&a, j))
    }
}

//! Black-box primitives on abelian subgroups: element orders by
//! baby-step/giant-step, bases, orders and discrete decomposition.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{diagonalize, prime_power, trial_factor};
use crate::blackbox::{ElementCode, GroupHandle};
use crate::error::{Error, Result};

/// Independent generators of prime-power order, ascending under ≼.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianBasis {
    pub elements: Vec<ElementCode>,
    pub orders: Vec<u64>,
}

impl AbelianBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Order of the generated group.
    pub fn group_order(&self) -> u128 {
        self.orders.iter().map(|&q| q as u128).product()
    }

    /// `∏ g_i^{a_i}`
    pub fn compose(&self, g: &GroupHandle, a: &[u64]) -> Result<ElementCode> {
        let mut acc = g.identity().clone();
        for (x, &e) in self.elements.iter().zip(a) {
            if e != 0 {
                let t = g.pow(x, e)?;
                acc = g.mul(&acc, &t)?;
            }
        }
        Ok(acc)
    }
}

/// Exponents `(a_1, …, a_t)` with `0 ≤ a_i < |g_i|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u64>);

/// Order of `x` by baby-step/giant-step with a doubling bound.
///
/// Round `r` stores `x^0, …, x^{r-1}` and then walks `x^{r}, x^{2r}, …, x^{r·r}`;
/// the first giant step landing in the table gives the order exactly. If
/// nothing is found the bound doubles, so `r` never exceeds `2·√|x|`.
pub fn element_order(g: &GroupHandle, x: &ElementCode) -> Result<u64> {
    if g.is_identity(x) {
        return Ok(1);
    }
    let mut baby: HashMap<ElementCode, u64> = HashMap::new();
    baby.insert(g.identity().clone(), 0);
    let mut last = g.identity().clone(); // x^{len-1}
    let mut r: u64 = 2;
    loop {
        if r as usize > g.table_limit() {
            return Err(Error::TableLimit(r as usize));
        }
        while (baby.len() as u64) < r {
            let i = baby.len() as u64;
            last = g.mul(&last, x)?;
            if g.is_identity(&last) {
                return Ok(i);
            }
            baby.insert(last.clone(), i);
        }
        let step = g.mul(&last, x)?; // x^r
        let mut cur = step.clone();
        for j in 1..=r {
            if let Some(&i) = baby.get(&cur) {
                return Ok(r * j - i);
            }
            if j < r {
                cur = g.mul(&cur, &step)?;
            }
        }
        r = r
            .checked_mul(2)
            .ok_or_else(|| Error::InvariantBreach("element order overflow".into()))?;
    }
}

/// Meet-in-the-middle decomposition over a fixed basis.
///
/// With `r_i = ⌈√n_i⌉`, every exponent splits as `a_i = b_i r_i + c_i`. The
/// table holds `∏ g_i^{c_i}` for all `c_i < r_i`, sorted by code; a query
/// walks `g · ∏ g_i^{-b_i r_i}` over all `b` and looks each value up.
pub struct Decomposer<'a> {
    g: &'a GroupHandle,
    basis: AbelianBasis,
    r: Vec<u64>,
    b_range: Vec<u64>,
    giant: Vec<ElementCode>,
    table: Vec<(ElementCode, Vec<u64>)>,
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

impl<'a> Decomposer<'a> {
    pub fn new(g: &'a GroupHandle, basis: &AbelianBasis) -> Result<Self> {
        let r: Vec<u64> = basis.orders.iter().map(|&n| ceil_sqrt(n).max(1)).collect();
        let b_range: Vec<u64> = basis.orders.iter().zip(&r).map(|(&n, &ri)| n.div_ceil(ri)).collect();
        let size = r.iter().try_fold(1usize, |acc, &ri| acc.checked_mul(ri as usize));
        match size {
            Some(sz) if sz <= g.table_limit() => {}
            _ => return Err(Error::TableLimit(g.table_limit())),
        }
        let giant = basis
            .elements
            .iter()
            .zip(&r)
            .map(|(x, &ri)| {
                let xi = g.inv(x)?;
                g.pow(&xi, ri)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::with_capacity(size.unwrap());
        let mut c = vec![0u64; r.len()];
        fill_table(g, &basis.elements, &r, 0, g.identity().clone(), &mut c, &mut table)?;
        table.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(Decomposer {
            g,
            basis: basis.clone(),
            r,
            b_range,
            giant,
            table,
        })
    }

    pub fn basis(&self) -> &AbelianBasis {
        &self.basis
    }

    fn lookup(&self, x: &ElementCode) -> Option<&[u64]> {
        self.table
            .binary_search_by(|(k, _)| k.cmp(x))
            .ok()
            .map(|i| self.table[i].1.as_slice())
    }

    /// Exponents of `x` over the basis, or [`Error::NotInSpan`].
    pub fn decompose(&self, x: &ElementCode) -> Result<ExponentVector> {
        let mut b = vec![0u64; self.r.len()];
        match self.walk(0, x.clone(), &mut b)? {
            Some(a) => Ok(ExponentVector(a)),
            None => Err(Error::NotInSpan),
        }
    }

    /// Membership test in the span.
    pub fn contains(&self, x: &ElementCode) -> Result<bool> {
        match self.decompose(x) {
            Ok(_) => Ok(true),
            Err(Error::NotInSpan) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn walk(&self, level: usize, cur: ElementCode, b: &mut Vec<u64>) -> Result<Option<Vec<u64>>> {
        if level == self.r.len() {
            return Ok(self.lookup(&cur).map(|c| {
                (0..c.len())
                    .map(|i| (b[i] * self.r[i] + c[i]) % self.basis.orders[i])
                    .collect()
            }));
        }
        let mut cur = cur;
        for bi in 0..self.b_range[level] {
            b[level] = bi;
            if let Some(a) = self.walk(level + 1, cur.clone(), b)? {
                return Ok(Some(a));
            }
            if bi + 1 < self.b_range[level] {
                cur = self.g.mul(&cur, &self.giant[level])?;
            }
        }
        Ok(None)
    }
}

fn fill_table(
    g: &GroupHandle,
    elems: &[ElementCode],
    r: &[u64],
    level: usize,
    cur: ElementCode,
    c: &mut Vec<u64>,
    out: &mut Vec<(ElementCode, Vec<u64>)>,
) -> Result<()> {
    if level == r.len() {
        out.push((cur, c.clone()));
        return Ok(());
    }
    let mut cur = cur;
    for ci in 0..r[level] {
        c[level] = ci;
        fill_table(g, elems, r, level + 1, cur.clone(), c, out)?;
        if ci + 1 < r[level] {
            cur = g.mul(&cur, &elems[level])?;
        }
    }
    c[level] = 0;
    Ok(())
}

/// Exponents of `x` over `basis`.
pub fn decompose(basis: &AbelianBasis, x: &ElementCode, g: &GroupHandle) -> Result<ExponentVector> {
    Decomposer::new(g, basis)?.decompose(x)
}

/// A basis of `⟨gens⟩`, which must be abelian.
///
/// Generators are split into prime-power parts; for each prime the basis is
/// grown one element at a time. Adding `x` with `x^{p^c}` the first power
/// inside the current span `H` gives the relation lattice of `⟨H, x⟩`, and
/// its diagonal form yields the new cyclic factors.
pub fn abelian_basis(gens: &[ElementCode], g: &GroupHandle) -> Result<AbelianBasis> {
    let mut uniq: Vec<ElementCode> = Vec::new();
    for x in gens {
        if !g.is_identity(x) && !uniq.contains(x) {
            uniq.push(x.clone());
        }
    }
    if !g.all_commute(&uniq)? {
        return Err(Error::NotAbelian);
    }

    // prime -> list of p-parts
    let mut parts: Vec<(u64, Vec<ElementCode>)> = Vec::new();
    for x in &uniq {
        let n = element_order(g, x)?;
        for (p, e) in trial_factor(n).factors {
            let pe = p.pow(e);
            let y = g.pow(x, n / pe)?;
            match parts.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(y),
                None => parts.push((p, vec![y])),
            }
        }
    }
    parts.sort_by_key(|(p, _)| *p);

    let mut basis = AbelianBasis {
        elements: Vec::new(),
        orders: Vec::new(),
    };
    for (p, xs) in parts {
        let sylow = sylow_basis(g, p, &xs)?;
        basis.elements.extend(sylow.elements);
        basis.orders.extend(sylow.orders);
    }
    Ok(basis)
}

fn sylow_basis(g: &GroupHandle, p: u64, xs: &[ElementCode]) -> Result<AbelianBasis> {
    let mut h = AbelianBasis {
        elements: Vec::new(),
        orders: Vec::new(),
    };
    for x in xs {
        let dec = Decomposer::new(g, &h)?;
        // smallest c with x^{p^c} ∈ H
        let mut c = 0u32;
        let mut y = x.clone();
        let coords = loop {
            match dec.decompose(&y) {
                Ok(a) => break a.0,
                Err(Error::NotInSpan) => {
                    c += 1;
                    y = g.pow(&y, p)?;
                }
                Err(e) => return Err(e),
            }
        };
        if c == 0 {
            continue;
        }
        h = extend_basis(g, p, &h, x, c, &coords)?;
    }
    Ok(h)
}

/// Basis of `⟨H, x⟩` given `x^{p^c} = ∏ h_i^{a_i}`.
fn extend_basis(g: &GroupHandle, p: u64, h: &AbelianBasis, x: &ElementCode, c: u32, a: &[u64]) -> Result<AbelianBasis> {
    let t = h.len();
    let n = t + 1;
    let mut rel: Vec<Vec<BigInt>> = vec![vec![BigInt::from(0); n]; n];
    for i in 0..t {
        rel[i][i] = BigInt::from(h.orders[i]);
    }
    for i in 0..t {
        rel[t][i] = -BigInt::from(a[i]);
    }
    rel[t][t] = BigInt::from(p.pow(c));
    let (diag, vinv) = diagonalize(&rel);

    let old: Vec<&ElementCode> = h.elements.iter().chain(std::iter::once(x)).collect();
    let x_order = element_order(g, x)?;
    let old_orders: Vec<u64> = h.orders.iter().copied().chain(std::iter::once(x_order)).collect();
    let mut pairs: Vec<(u64, ElementCode)> = Vec::new();
    for (k, d) in diag.iter().enumerate() {
        let d = d
            .to_u64()
            .ok_or_else(|| Error::InvariantBreach("cyclic factor out of range".into()))?;
        if d <= 1 {
            continue;
        }
        let mut e = g.identity().clone();
        for j in 0..n {
            let exp = vinv[k][j].mod_floor(&BigInt::from(old_orders[j])).to_u64().unwrap();
            if exp != 0 {
                let t = g.pow(old[j], exp)?;
                e = g.mul(&e, &t)?;
            }
        }
        if prime_power(d).is_none_or(|(q, _)| q != p) {
            return Err(Error::InvariantBreach(format!("cyclic factor {d} is not a power of {p}")));
        }
        pairs.push((d, e));
    }
    pairs.sort_by_key(|(d, _)| *d);
    Ok(AbelianBasis {
        orders: pairs.iter().map(|(d, _)| *d).collect(),
        elements: pairs.into_iter().map(|(_, e)| e).collect(),
    })
}

/// `|⟨gens⟩|` for an abelian generating set.
pub fn abelian_order(gens: &[ElementCode], g: &GroupHandle) -> Result<u128> {
    Ok(abelian_basis(gens, g)?.group_order())
}

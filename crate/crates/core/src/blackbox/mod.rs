//! Black-box groups: opaque, uniquely encoded elements reachable only through
//! product and inverse oracles and a generator list.
//!
//! Algorithms in [`crate::abelian`], [`crate::decomp`] and [`crate::iso`] only
//! ever see a [`GroupHandle`]; they compare elements by byte equality of their
//! codes and never look inside a backend.

mod format;
mod semidirect;
mod table;

pub use format::{parse_group, write_semidirect, write_table, GroupSpec};
pub use semidirect::{SemidirectGroup, SemidirectGroupSpec};
pub use table::{TableGroup, TableGroupSpec};

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Opaque element encoding. Two codes are equal iff they encode the same element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementCode(Box<[u8]>);

impl ElementCode {
    pub fn new(bytes: impl Into<Box<[u8]>>) -> Self {
        ElementCode(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for ElementCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Display for ElementCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.0))
    }
}

/// A concrete group implementation behind the oracles.
pub trait Backend: Send + Sync {
    fn identity(&self) -> ElementCode;
    fn mul(&self, a: &ElementCode, b: &ElementCode) -> Result<ElementCode>;
    fn inv(&self, a: &ElementCode) -> Result<ElementCode>;
    fn default_generators(&self) -> Vec<ElementCode>;
    /// Fixed length in bytes of every code.
    fn code_len(&self) -> usize;
    /// Parse a user-facing element literal (an index or a tuple) into a code.
    fn parse_element(&self, literal: &str) -> Result<ElementCode>;
}

const DEFAULT_TABLE_BYTES: usize = 1 << 30;

/// A black-box group: generators plus counted product and inverse oracles.
pub struct GroupHandle {
    backend: Arc<dyn Backend>,
    generators: Vec<ElementCode>,
    identity: ElementCode,
    ops: AtomicU64,
    limit: AtomicU64,
    table_limit: usize,
}

impl fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHandle")
            .field("generators", &self.generators)
            .field("ops", &self.ops())
            .finish()
    }
}

impl GroupHandle {
    pub fn new(backend: Arc<dyn Backend>) -> Self {
        let gens = backend.default_generators();
        Self::with_backend_generators(backend, gens)
    }

    pub fn with_backend_generators(backend: Arc<dyn Backend>, generators: Vec<ElementCode>) -> Self {
        let identity = backend.identity();
        let table_limit = DEFAULT_TABLE_BYTES / (backend.code_len() + 24).max(1);
        GroupHandle {
            backend,
            generators,
            identity,
            ops: AtomicU64::new(0),
            limit: AtomicU64::new(u64::MAX),
            table_limit,
        }
    }

    /// A fresh handle on the same backend with another generating set.
    pub fn with_generators(&self, generators: Vec<ElementCode>) -> Self {
        let mut h = Self::with_backend_generators(self.backend.clone(), generators);
        h.table_limit = self.table_limit;
        h
    }

    pub fn generators(&self) -> &[ElementCode] {
        &self.generators
    }

    pub fn identity(&self) -> &ElementCode {
        &self.identity
    }

    pub fn is_identity(&self, a: &ElementCode) -> bool {
        *a == self.identity
    }

    pub fn backend(&self) -> &Arc<dyn Backend> {
        &self.backend
    }

    pub fn parse_element(&self, literal: &str) -> Result<ElementCode> {
        self.backend.parse_element(literal)
    }

    /// Oracle calls made through this handle so far.
    pub fn ops(&self) -> u64 {
        self.ops.load(Ordering::Relaxed)
    }

    pub fn reset_ops(&self) {
        self.ops.store(0, Ordering::Relaxed);
    }

    /// Abort oracle calls with [`Error::BudgetExceeded`] once the counter
    /// reaches `limit`. `None` removes the limit.
    pub fn set_op_limit(&self, limit: Option<u64>) {
        self.limit.store(limit.unwrap_or(u64::MAX), Ordering::Relaxed);
    }

    /// Maximum number of codes a lookup table may hold.
    pub fn table_limit(&self) -> usize {
        self.table_limit
    }

    pub fn set_table_limit(&mut self, entries: usize) {
        self.table_limit = entries.max(1);
    }

    /// Cap lookup tables to roughly `mb` megabytes.
    pub fn set_table_memory_mb(&mut self, mb: usize) {
        let per_entry = self.backend.code_len() + 24;
        self.set_table_limit(mb.saturating_mul(1 << 20) / per_entry);
    }

    fn tick(&self) -> Result<()> {
        let n = self.ops.fetch_add(1, Ordering::Relaxed);
        if n >= self.limit.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded(n));
        }
        Ok(())
    }

    pub fn mul(&self, a: &ElementCode, b: &ElementCode) -> Result<ElementCode> {
        self.tick()?;
        self.backend.mul(a, b)
    }

    pub fn inv(&self, a: &ElementCode) -> Result<ElementCode> {
        self.tick()?;
        self.backend.inv(a)
    }

    /// `a^n` by square-and-multiply.
    pub fn pow(&self, a: &ElementCode, n: u64) -> Result<ElementCode> {
        let mut acc = self.identity.clone();
        if n == 0 {
            return Ok(acc);
        }
        let mut base = a.clone();
        let mut n = n;
        let mut first = true;
        loop {
            if n & 1 == 1 {
                acc = if first { base.clone() } else { self.mul(&acc, &base)? };
                first = false;
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = self.mul(&base, &base)?;
        }
        Ok(acc)
    }

    /// `a^n` for a possibly negative exponent.
    pub fn pow_signed(&self, a: &ElementCode, n: i64) -> Result<ElementCode> {
        if n >= 0 {
            self.pow(a, n as u64)
        } else {
            let ai = self.inv(a)?;
            self.pow(&ai, n.unsigned_abs())
        }
    }

    /// `b a b^{-1}`
    pub fn conjugate(&self, b: &ElementCode, a: &ElementCode) -> Result<ElementCode> {
        let bi = self.inv(b)?;
        let t = self.mul(b, a)?;
        self.mul(&t, &bi)
    }

    /// `[a, b] = a b a^{-1} b^{-1}`
    pub fn commutator(&self, a: &ElementCode, b: &ElementCode) -> Result<ElementCode> {
        let ab = self.mul(a, b)?;
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        let t = self.mul(&ab, &ai)?;
        self.mul(&t, &bi)
    }

    pub fn commutes(&self, a: &ElementCode, b: &ElementCode) -> Result<bool> {
        Ok(self.mul(a, b)? == self.mul(b, a)?)
    }

    /// True iff every pair in `xs` commutes.
    pub fn all_commute(&self, xs: &[ElementCode]) -> Result<bool> {
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                if !self.commutes(&xs[i], &xs[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Product of a list, left to right.
    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a ElementCode>) -> Result<ElementCode> {
        let mut acc: Option<ElementCode> = None;
        for x in xs {
            acc = Some(match acc {
                None => x.clone(),
                Some(a) => self.mul(&a, x)?,
            });
        }
        Ok(acc.unwrap_or_else(|| self.identity.clone()))
    }
}

/// The commutators `[g_i, g_j]` of generators and their conjugates
/// `g_k [g_i, g_j] g_k^{-1}`. These lie in the derived subgroup but need not
/// generate it; see [`crate::decomp`] for the normal closure.
pub fn commutator_generators(g: &GroupHandle) -> Result<Vec<ElementCode>> {
    let gens = g.generators();
    let inverses: Vec<ElementCode> = gens.iter().map(|x| g.inv(x)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(gens.len().pow(3) + gens.len().pow(2));
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            let ab = g.mul(&gens[i], &gens[j])?;
            let t = g.mul(&ab, &inverses[i])?;
            let c = g.mul(&t, &inverses[j])?;
            out.push(c.clone());
            for k in 0..gens.len() {
                let t = g.mul(&gens[k], &c)?;
                out.push(g.mul(&t, &inverses[k])?);
            }
        }
    }
    Ok(out)
}

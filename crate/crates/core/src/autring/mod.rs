//! Matrix model of the automorphism group of a finite abelian group.
//!
//! For an abelian `p`-group `A = Z_{p^e_1} × … × Z_{p^e_s}` with
//! `e_1 ≤ … ≤ e_s`, an endomorphism is an integer matrix `U` whose column `j`
//! holds the coordinates of the image of the `j`-th basis element. Row `i` is
//! reduced modulo `p^{e_i}` and `p^{e_i - e_min(i,j)}` divides `u_ij`. The
//! invertible ones (determinant nonzero mod `p`) form a group under the
//! row-reduced product, isomorphic to `Aut(A)`. A general abelian group splits
//! into one such block per prime, see [`AutBlocks`].

mod conjugacy;
mod format;
pub mod gf;

pub use conjugacy::conjugacy;
pub use format::{parse_matrix, write_matrix};
pub use gf::{gl_conjugator, rcf, GfMatrix, Poly, RcfResult};

use std::fmt;

use rand::Rng;

use crate::arith::{gcd, is_prime, lcm, mul_mod, prime_power};
use crate::error::{Error, Result};

/// Prime and nondecreasing exponents of an abelian `p`-group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PType {
    p: u64,
    exps: Vec<u32>,
}

/// A maximal run of equal exponents: rows/columns `start..start+len`, all of
/// exponent `f`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Block {
    pub start: usize,
    pub len: usize,
    pub f: u32,
}

impl PType {
    pub fn new(p: u64, exps: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Malformed(format!("{p} is not prime")));
        }
        if exps.contains(&0) {
            return Err(Error::Malformed("exponents must be positive".into()));
        }
        if exps.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Malformed("exponents must be nondecreasing".into()));
        }
        if exps.iter().any(|&e| p.checked_pow(e).is_none_or(|q| q > (1u64 << 62))) {
            return Err(Error::Malformed("prime power exceeds the supported range".into()));
        }
        Ok(PType { p, exps })
    }

    /// From prime powers `p^{e_1}, …` (all of one prime), ascending.
    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        let mut p0 = None;
        let mut exps = Vec::with_capacity(orders.len());
        for &q in orders {
            let (p, e) = prime_power(q).ok_or_else(|| Error::Malformed(format!("{q} is not a prime power")))?;
            if p0.is_some_and(|x| x != p) {
                return Err(Error::Malformed("mixed primes in one block".into()));
            }
            p0 = Some(p);
            exps.push(e);
        }
        let p = p0.ok_or_else(|| Error::Malformed("empty prime type".into()))?;
        PType::new(p, exps)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn s(&self) -> usize {
        self.exps.len()
    }

    /// `p^{e_i}`
    pub fn modulus(&self, i: usize) -> u64 {
        self.p.pow(self.exps[i])
    }

    pub fn orders(&self) -> Vec<u64> {
        (0..self.s()).map(|i| self.modulus(i)).collect()
    }

    /// `|A|`
    pub fn group_order(&self) -> u128 {
        self.orders().iter().map(|&q| q as u128).product()
    }

    /// The runs of equal exponents, in order.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match out.last_mut() {
                Some(b) if b.f == e => b.len += 1,
                _ => out.push(Block { start: i, len: 1, f: e }),
            }
        }
        out
    }

    fn block_of(&self, i: usize) -> usize {
        self.blocks()
            .iter()
            .position(|b| i >= b.start && i < b.start + b.len)
            .expect("index inside the type")
    }

    /// Required power of `p` dividing entry `(i, j)`.
    pub fn divisibility_exp(&self, i: usize, j: usize) -> u32 {
        self.exps[i] - self.exps[i.min(j)].min(self.exps[i])
    }

    /// `|R(A)| = |V(A)| · |N(A)|`, from the block structure.
    pub fn aut_order(&self) -> u128 {
        let p = self.p as u128;
        let mut order: u128 = 1;
        for b in self.blocks() {
            let k = b.len as u32;
            let pk = p.pow(k);
            for i in 0..k {
                order *= pk - p.pow(i);
            }
        }
        // kernel: every entry contributes p^{e_min}, diagonal-block entries p^{e-1}
        let s = self.s();
        for i in 0..s {
            for j in 0..s {
                let e = if self.block_of(i) == self.block_of(j) {
                    self.exps[i] - 1
                } else {
                    self.exps[i].min(self.exps[j])
                };
                order *= p.pow(e);
            }
        }
        order
    }
}

impl fmt::Display for PType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)?;
        for e in &self.exps {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

/// Element of the endomorphism ring of an abelian `p`-group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AutMatrix {
    ptype: PType,
    u: Vec<u64>,
}

impl fmt::Debug for AutMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutMatrix[{}]", self.ptype)?;
        f.debug_list().entries(self.rows()).finish()
    }
}

impl AutMatrix {
    /// Accept `rows` iff entries are in range and satisfy the divisibility
    /// constraints; otherwise report the first violating position (0-based).
    pub fn validate(ptype: &PType, rows: &[Vec<u64>]) -> Result<Self> {
        let s = ptype.s();
        if rows.len() != s || rows.iter().any(|r| r.len() != s) {
            return Err(Error::Malformed(format!("expected a {s}×{s} matrix")));
        }
        for (i, row) in rows.iter().enumerate() {
            let q = ptype.modulus(i);
            for (j, &x) in row.iter().enumerate() {
                if x >= q {
                    return Err(Error::MatrixConstraint {
                        row: i,
                        col: j,
                        msg: format!("{x} is not below {q}"),
                    });
                }
                let d = ptype.p.pow(ptype.divisibility_exp(i, j));
                if x % d != 0 {
                    return Err(Error::MatrixConstraint {
                        row: i,
                        col: j,
                        msg: format!("{x} is not divisible by {d}"),
                    });
                }
            }
        }
        Ok(AutMatrix {
            ptype: ptype.clone(),
            u: rows.iter().flatten().copied().collect(),
        })
    }

    /// Reduce each row modulo its modulus, then validate.
    pub fn from_integers(ptype: &PType, rows: &[Vec<i64>]) -> Result<Self> {
        let reduced: Vec<Vec<u64>> = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let q = ptype.modulus(i.min(ptype.s().saturating_sub(1))) as i128;
                row.iter().map(|&x| (x as i128).rem_euclid(q) as u64).collect()
            })
            .collect();
        Self::validate(ptype, &reduced)
    }

    pub fn identity(ptype: &PType) -> Self {
        let s = ptype.s();
        let mut u = vec![0u64; s * s];
        for i in 0..s {
            u[i * s + i] = 1;
        }
        AutMatrix { ptype: ptype.clone(), u }
    }

    pub(crate) fn from_raw(ptype: &PType, u: Vec<u64>) -> Self {
        AutMatrix { ptype: ptype.clone(), u }
    }

    pub fn ptype(&self) -> &PType {
        &self.ptype
    }

    pub fn s(&self) -> usize {
        self.ptype.s()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.u[i * self.s() + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        let s = self.s();
        (0..s).map(|i| self.u[i * s..(i + 1) * s].to_vec()).collect()
    }

    /// `W = U * U'`: ordinary product with row `i` reduced mod `p^{e_i}`.
    pub fn star_mul(&self, other: &AutMatrix) -> Result<AutMatrix> {
        if self.ptype != other.ptype {
            return Err(Error::PTypeMismatch);
        }
        let s = self.s();
        let mut w = vec![0u64; s * s];
        for i in 0..s {
            let q = self.ptype.modulus(i);
            for j in 0..s {
                let mut acc: u128 = 0;
                for k in 0..s {
                    acc += (self.get(i, k) as u128) * (other.get(k, j) as u128);
                    if acc >= 1u128 << 120 {
                        acc %= q as u128;
                    }
                }
                w[i * s + j] = (acc % q as u128) as u64;
            }
        }
        Ok(AutMatrix { ptype: self.ptype.clone(), u: w })
    }

    pub fn pow(&self, mut e: u64) -> AutMatrix {
        let mut acc = AutMatrix::identity(&self.ptype);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.star_mul(&base).expect("same type");
            }
            e >>= 1;
            if e > 0 {
                base = base.star_mul(&base).expect("same type");
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == AutMatrix::identity(&self.ptype)
    }

    /// Entries reduced mod `p`.
    pub fn mod_p(&self) -> GfMatrix {
        let s = self.s();
        let mut m = GfMatrix::zeros(self.ptype.p, s, s);
        for i in 0..s {
            for j in 0..s {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// Membership in the unit group: determinant nonzero mod `p`.
    pub fn is_in_r(&self) -> bool {
        self.s() == 0 || self.mod_p().det() != 0
    }

    /// Diagonal blocks reduced mod `p`.
    pub fn psi(&self) -> Result<BlockDiagGf> {
        if !self.is_in_r() {
            return Err(Error::NotInvertible);
        }
        let p = self.ptype.p;
        let blocks = self
            .ptype
            .blocks()
            .iter()
            .map(|b| {
                let mut m = GfMatrix::zeros(p, b.len, b.len);
                for i in 0..b.len {
                    for j in 0..b.len {
                        m.set(i, j, self.get(b.start + i, b.start + j));
                    }
                }
                m
            })
            .collect();
        Ok(BlockDiagGf { p, blocks })
    }

    /// Whether `U` has the shape of the kernel of Ψ: diagonal blocks congruent
    /// to the identity mod `p`.
    pub fn is_in_kernel_pattern(&self) -> bool {
        let p = self.ptype.p;
        self.ptype.blocks().iter().all(|b| {
            (0..b.len).all(|i| {
                (0..b.len).all(|j| {
                    let want = u64::from(i == j);
                    self.get(b.start + i, b.start + j) % p == want
                })
            })
        })
    }

    /// Least `n ≤ cap` with `U^n = I`, or `None` past the cap.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut cur = self.clone();
        let mut n = 1u64;
        while !cur.is_identity() {
            n += 1;
            if n > cap {
                return None;
            }
            cur = cur.star_mul(self).expect("same type");
        }
        Some(n)
    }

    /// Inverse in the unit group.
    ///
    /// Lifts the blockwise inverse of Ψ(U) to `Z`, so `N = Z * U` lies in the
    /// kernel, a `p`-group; `N^{p^j} = I` for some `j`, and `U^{-1} = N^{p^j-1} * Z`.
    pub fn inverse(&self) -> Result<AutMatrix> {
        let psi = self.psi()?;
        let inv_blocks: Vec<GfMatrix> = psi
            .blocks
            .iter()
            .map(|b| b.inverse().ok_or(Error::NotInvertible))
            .collect::<Result<_>>()?;
        let z = lift_block_diag(&self.ptype, &inv_blocks);
        let n = z.star_mul(self)?;
        let p = self.ptype.p;
        let mut e: u64 = 1;
        let mut cur = n.clone();
        while !cur.is_identity() {
            cur = cur.pow(p);
            e = e
                .checked_mul(p)
                .ok_or_else(|| Error::InvariantBreach("kernel element order overflow".into()))?;
        }
        let ninv = n.pow(e - 1);
        let inv = ninv.star_mul(&z)?;
        debug_assert!(inv.star_mul(self)?.is_identity());
        Ok(inv)
    }

    /// Image of a coordinate vector (column action).
    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        let s = self.s();
        (0..s)
            .map(|i| {
                let q = self.ptype.modulus(i);
                (0..s).fold(0u64, |acc, j| (acc + mul_mod(self.get(i, j), a[j], q)) % q)
            })
            .collect()
    }
}

/// Matrix with the given `F_p` blocks on the diagonal (entries lifted to
/// `{0, …, p-1}`) and zeros elsewhere.
pub fn lift_block_diag(ptype: &PType, blocks: &[GfMatrix]) -> AutMatrix {
    let s = ptype.s();
    let mut u = vec![0u64; s * s];
    for (b, m) in ptype.blocks().iter().zip(blocks) {
        for i in 0..b.len {
            for j in 0..b.len {
                u[(b.start + i) * s + b.start + j] = m.get(i, j);
            }
        }
    }
    AutMatrix::from_raw(ptype, u)
}

/// `diag(V_1, …, V_t)` over `F_p`, one block per run of equal exponents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockDiagGf {
    pub p: u64,
    pub blocks: Vec<GfMatrix>,
}

impl BlockDiagGf {
    pub fn mul(&self, other: &BlockDiagGf) -> BlockDiagGf {
        BlockDiagGf {
            p: self.p,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(|b| *b == GfMatrix::identity(self.p, b.rows()))
    }
}

/// Accept or reject a candidate matrix for the given type.
pub fn validate_m(ptype: &PType, rows: &[Vec<u64>]) -> Result<AutMatrix> {
    AutMatrix::validate(ptype, rows)
}

pub fn matrix_order(u: &AutMatrix, cap: u64) -> Option<u64> {
    u.order(cap)
}

/// A uniformly random element of `R(A)`, by rejection.
pub fn random_unit(ptype: &PType, rng: &mut impl Rng) -> AutMatrix {
    let s = ptype.s();
    loop {
        let u: Vec<u64> = (0..s * s)
            .map(|k| {
                let (i, j) = (k / s, k % s);
                let step = ptype.p.pow(ptype.divisibility_exp(i, j));
                rng.gen_range(0..ptype.modulus(i) / step) * step
            })
            .collect();
        let m = AutMatrix::from_raw(ptype, u);
        if m.is_in_r() {
            return m;
        }
    }
}

const ENUMERATION_LIMIT: u128 = 1 << 24;

/// All invertible matrices of the given type. Test oracle for small groups.
pub fn enumerate_r(ptype: &PType) -> Result<Vec<AutMatrix>> {
    let s = ptype.s();
    let p = ptype.p;
    // entry (i,j) ranges over multiples of p^{d_ij} below p^{e_i}
    let steps: Vec<(u64, u64)> = (0..s * s)
        .map(|k| {
            let (i, j) = (k / s, k % s);
            let step = p.pow(ptype.divisibility_exp(i, j));
            (step, ptype.modulus(i) / step)
        })
        .collect();
    let total: u128 = steps.iter().map(|&(_, c)| c as u128).product();
    if total > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("{total} candidate matrices")));
    }
    let mut out = Vec::new();
    let mut digits = vec![0u64; s * s];
    loop {
        let u: Vec<u64> = digits.iter().zip(&steps).map(|(&d, &(step, _))| d * step).collect();
        let m = AutMatrix::from_raw(ptype, u);
        if m.is_in_r() {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(out);
            }
            digits[k] += 1;
            if digits[k] < steps[k].1 {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// One ring element per prime dividing `|A|`, primes ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AutBlocks {
    pub blocks: Vec<AutMatrix>,
}

impl AutBlocks {
    pub fn new(blocks: Vec<AutMatrix>) -> Result<Self> {
        if blocks.windows(2).any(|w| w[0].ptype.p >= w[1].ptype.p) {
            return Err(Error::Malformed("blocks must have strictly ascending primes".into()));
        }
        Ok(AutBlocks { blocks })
    }

    /// Split prime-power orders (≼-ascending) into per-prime types.
    pub fn ptypes_for(orders: &[u64]) -> Result<Vec<PType>> {
        let mut groups: Vec<Vec<u64>> = Vec::new();
        let mut last_p = 0;
        for &q in orders {
            let (p, _) = prime_power(q).ok_or_else(|| Error::Malformed(format!("{q} is not a prime power")))?;
            if p != last_p {
                if p < last_p {
                    return Err(Error::Malformed("orders are not ≼-ascending".into()));
                }
                groups.push(Vec::new());
                last_p = p;
            }
            groups.last_mut().unwrap().push(q);
        }
        groups.iter().map(|g| PType::from_orders(g)).collect()
    }

    pub fn identity(orders: &[u64]) -> Result<Self> {
        let types = Self::ptypes_for(orders)?;
        Ok(AutBlocks {
            blocks: types.iter().map(AutMatrix::identity).collect(),
        })
    }

    /// Split a full `s×s` matrix over all coordinates into per-prime blocks.
    /// Cross-prime entries must vanish.
    pub fn from_full(orders: &[u64], rows: &[Vec<u64>]) -> Result<Self> {
        let types = Self::ptypes_for(orders)?;
        let s = orders.len();
        if rows.len() != s || rows.iter().any(|r| r.len() != s) {
            return Err(Error::Malformed(format!("expected a {s}×{s} action matrix")));
        }
        let mut blocks = Vec::new();
        let mut off = 0;
        for t in &types {
            let n = t.s();
            for i in 0..s {
                for j in 0..s {
                    let inside_i = i >= off && i < off + n;
                    let inside_j = j >= off && j < off + n;
                    if inside_i && !inside_j && rows[i][j] != 0 {
                        return Err(Error::MatrixConstraint {
                            row: i,
                            col: j,
                            msg: "entries between different primes must vanish".into(),
                        });
                    }
                }
            }
            let sub: Vec<Vec<u64>> = (off..off + n).map(|i| rows[i][off..off + n].to_vec()).collect();
            blocks.push(AutMatrix::validate(t, &sub).map_err(|e| shift_err(e, off))?);
            off += n;
        }
        Ok(AutBlocks { blocks })
    }

    pub fn to_full(&self) -> Vec<Vec<u64>> {
        let s = self.dim();
        let mut out = vec![vec![0u64; s]; s];
        let mut off = 0;
        for b in &self.blocks {
            for (i, row) in b.rows().into_iter().enumerate() {
                out[off + i][off..off + row.len()].copy_from_slice(&row);
            }
            off += b.s();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(AutMatrix::s).sum()
    }

    pub fn orders(&self) -> Vec<u64> {
        self.blocks.iter().flat_map(|b| b.ptype.orders()).collect()
    }

    pub fn star_mul(&self, other: &AutBlocks) -> Result<AutBlocks> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::PTypeMismatch);
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.star_mul(b))
            .collect::<Result<_>>()?;
        Ok(AutBlocks { blocks })
    }

    pub fn pow(&self, e: u64) -> AutBlocks {
        AutBlocks {
            blocks: self.blocks.iter().map(|b| b.pow(e)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(AutMatrix::is_identity)
    }

    pub fn is_in_r(&self) -> bool {
        self.blocks.iter().all(AutMatrix::is_in_r)
    }

    pub fn inverse(&self) -> Result<AutBlocks> {
        Ok(AutBlocks {
            blocks: self.blocks.iter().map(AutMatrix::inverse).collect::<Result<_>>()?,
        })
    }

    /// Lcm of block orders, or `None` if some block exceeds the cap.
    pub fn order(&self, cap: u64) -> Option<u64> {
        self.blocks
            .iter()
            .try_fold(1u64, |acc, b| b.order(cap).map(|n| lcm(acc, n)))
            .filter(|&n| n <= cap)
    }

    /// Column action on concatenated coordinates.
    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(a.len());
        let mut off = 0;
        for b in &self.blocks {
            out.extend(b.apply(&a[off..off + b.s()]));
            off += b.s();
        }
        out
    }

    /// Whether every block's order is coprime with its prime, given an order bound.
    pub fn orders_coprime_with_primes(&self, cap: u64) -> bool {
        self.blocks
            .iter()
            .all(|b| b.order(cap).is_some_and(|n| gcd(n, b.ptype.p) == 1))
    }
}

fn shift_err(e: Error, off: usize) -> Error {
    match e {
        Error::MatrixConstraint { row, col, msg } => Error::MatrixConstraint {
            row: row + off,
            col: col + off,
            msg,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example_type() -> PType {
        PType::new(3, vec![1, 2, 2, 5]).unwrap()
    }

    pub(crate) fn random_r(rng: &mut ChaCha8Rng, t: &PType) -> AutMatrix {
        random_unit(t, rng)
    }

    #[test]
    fn validate_examples() {
        let t = example_type();
        assert!(AutMatrix::validate(&t, &AutMatrix::identity(&t).rows()).is_ok());
        let mut rows = AutMatrix::identity(&t).rows();
        rows[3][0] = 3;
        assert!(matches!(
            AutMatrix::validate(&t, &rows),
            Err(Error::MatrixConstraint { row: 3, col: 0, .. })
        ));
        let mut rows = AutMatrix::identity(&t).rows();
        rows[1][0] = 3;
        assert!(AutMatrix::validate(&t, &rows).is_ok());
        let mut rows = AutMatrix::identity(&t).rows();
        rows[0][1] = 3;
        assert!(AutMatrix::validate(&t, &rows).is_err(), "out of range for row modulus 3");
    }

    #[test]
    fn psi_of_example_matrix_at_p3() {
        let t = example_type();
        let u = AutMatrix::from_integers(
            &t,
            &[
                vec![2, 1, 3, 3],
                vec![9, 1, 5, 4],
                vec![3, 4, 3, 2],
                vec![243, 27, 54, 10],
            ],
        )
        .unwrap();
        let psi = u.psi().unwrap();
        assert_eq!(psi.blocks.len(), 3);
        assert_eq!(psi.blocks[0].to_rows(), vec![vec![2]]);
        assert_eq!(psi.blocks[1].to_rows(), vec![vec![1, 2], vec![1, 0]]);
        assert_eq!(psi.blocks[2].to_rows(), vec![vec![1]]);
    }

    #[test]
    fn membership_in_units() {
        let t = PType::new(5, vec![1, 1, 2]).unwrap();
        assert!(AutMatrix::identity(&t).is_in_r());
        let zero = AutMatrix::validate(&t, &vec![vec![0; 3]; 3]).unwrap();
        assert!(!zero.is_in_r());
        let mut rows = AutMatrix::identity(&t).rows();
        rows[2][2] = 5;
        assert!(!AutMatrix::validate(&t, &rows).unwrap().is_in_r());
        assert!(AutMatrix::validate(&t, &rows).unwrap().psi().is_err());
    }

    #[test]
    fn star_mul_closure_and_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for t in [example_type(), PType::new(2, vec![1, 2, 3]).unwrap(), PType::new(5, vec![2, 2]).unwrap()] {
            let id = AutMatrix::identity(&t);
            for _ in 0..1000 / 3 {
                let (a, b, c) = (random_r(&mut rng, &t), random_r(&mut rng, &t), random_r(&mut rng, &t));
                let ab = a.star_mul(&b).unwrap();
                assert!(AutMatrix::validate(&t, &ab.rows()).is_ok());
                assert!(ab.is_in_r());
                assert_eq!(a.star_mul(&id).unwrap(), a);
                assert_eq!(ab.star_mul(&c).unwrap(), a.star_mul(&b.star_mul(&c).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn ptype_mismatch_is_rejected() {
        let a = AutMatrix::identity(&PType::new(3, vec![1]).unwrap());
        let b = AutMatrix::identity(&PType::new(3, vec![2]).unwrap());
        assert_eq!(a.star_mul(&b), Err(Error::PTypeMismatch));
    }

    #[test]
    fn order_examples() {
        let z7 = PType::new(7, vec![1]).unwrap();
        let two = AutMatrix::validate(&z7, &[vec![2]]).unwrap();
        assert_eq!(two.order(100), Some(3));
        assert_eq!(two.order(2), None);
        assert_eq!(AutMatrix::identity(&z7).order(1), Some(1));
        let z3sq = PType::new(3, vec![1, 1]).unwrap();
        let w = AutMatrix::validate(&z3sq, &[vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(w.order(100), Some(4));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for t in [example_type(), PType::new(2, vec![1, 2, 3]).unwrap()] {
            for _ in 0..100 {
                let a = random_r(&mut rng, &t);
                let ai = a.inverse().unwrap();
                assert!(ai.star_mul(&a).unwrap().is_identity());
                assert!(a.star_mul(&ai).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn enumeration_counts_match_formula() {
        for (p, e) in [(7u64, vec![1u32]), (2, vec![1, 2]), (3, vec![1, 1]), (3, vec![2]), (2, vec![1, 1, 1]), (2, vec![1, 1, 2])] {
            let t = PType::new(p, e).unwrap();
            assert_eq!(enumerate_r(&t).unwrap().len() as u128, t.aut_order(), "{t}");
        }
        assert_eq!(enumerate_r(&PType::new(3, vec![1, 1]).unwrap()).unwrap().len(), 48);
        assert_eq!(enumerate_r(&PType::new(7, vec![1]).unwrap()).unwrap().len(), 6);
    }

    #[test]
    fn full_matrix_split() {
        let orders = [2, 4, 3, 9];
        let full = vec![vec![1, 0, 0, 0], vec![2, 1, 0, 0], vec![0, 0, 2, 0], vec![0, 0, 3, 1]];
        let b = AutBlocks::from_full(&orders, &full).unwrap();
        assert_eq!(b.blocks.len(), 2);
        assert_eq!(b.to_full(), full);
        let mut bad = full.clone();
        bad[0][2] = 1;
        assert!(AutBlocks::from_full(&orders, &bad).is_err());
    }
}

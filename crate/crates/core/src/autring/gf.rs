//! Dense matrices and polynomials over a prime field, the Frobenius
//! (rational canonical) form with an explicit transform, and conjugators in
//! `GL_n(p)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// Matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl GfMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        GfMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows of arbitrary integers, reducing mod `p`.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    pub fn from_columns(p: u64, n: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, col[i] % p);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.p, other.p, "field mismatch");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + mul_mod(a, other.get(k, j), p)) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u64, |acc, j| (acc + mul_mod(self.get(i, j), v[j], p)) % p)
            })
            .collect()
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn scalar(p: u64, n: usize, c: u64) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn pow(&self, mut e: u64) -> GfMatrix {
        assert!(self.is_square());
        let mut acc = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p).expect("nonzero element of a prime field");
            for j in 0..self.cols {
                let v = mul_mod(self.get(r, j), inv, p);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = (self.get(i, j) + p - mul_mod(f, self.get(r, j), p)) % p;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn det(&self) -> u64 {
        assert!(self.is_square());
        let p = self.p;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| a.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    a.data.swap(pr * n + j, c * n + j);
                }
                det = (p - det) % p;
            }
            let piv = a.get(c, c);
            det = mul_mod(det, piv, p);
            let inv = inv_mod(piv, p).expect("nonzero pivot");
            for i in c + 1..n {
                let f = mul_mod(a.get(i, c), inv, p);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let v = (a.get(i, j) + p - mul_mod(f, a.get(c, j), p)) % p;
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<GfMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u64; self.cols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (p - a.get(r, f)) % p;
                }
                x
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let n = self.cols;
        let mut aug = Self::zeros(self.p, self.rows, n + 1);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n, b[i]);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![0u64; n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, n);
        }
        Some(x)
    }

    /// Block diagonal matrix from square blocks.
    pub fn block_diag(p: u64, blocks: &[GfMatrix]) -> GfMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(p, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        m
    }
}

/// Polynomial over `F_p`, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn one(p: u64) -> Self {
        Poly::new(p, vec![1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn monic(&self) -> Poly {
        let Some(&lead) = self.coeffs.last() else {
            return self.clone();
        };
        let inv = inv_mod(lead, self.p).expect("nonzero leading coefficient");
        Poly::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Poly::new(p, out)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let inv = inv_mod(*d.coeffs.last().unwrap(), p).unwrap();
        if r.len() < d.coeffs.len() {
            return (Poly::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mul_mod(c, dc, p)) % p;
            }
        }
        (Poly::new(p, q), Poly::new(p, r))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic lcm.
    pub fn lcm(&self, other: &Poly) -> Poly {
        let g = self.gcd(other);
        let (q, _) = self.mul(other).div_rem(&g);
        q.monic()
    }

    /// Companion matrix: ones on the subdiagonal, last column holds the
    /// negated low coefficients.
    pub fn companion(&self) -> GfMatrix {
        let f = self.monic();
        let d = f.degree();
        let p = self.p;
        let mut c = GfMatrix::zeros(p, d, d);
        for i in 0..d {
            if i + 1 < d {
                c.set(i + 1, i, 1);
            }
            c.set(i, d - 1, (p - f.coeffs[i]) % p);
        }
        c
    }
}

/// Frobenius normal form `F` of `M` with `T·M = F·T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcfResult {
    pub form: GfMatrix,
    pub transform: GfMatrix,
    /// Monic invariant factors, each dividing the next.
    pub invariant_factors: Vec<Poly>,
}

/// Minimal polynomial of `v` under `m`, with the Krylov vectors `v, Mv, …, M^{d-1}v`.
fn local_minpoly(m: &GfMatrix, v: &[u64]) -> (Poly, Vec<Vec<u64>>) {
    let p = m.p;
    let n = m.rows;
    let mut krylov: Vec<Vec<u64>> = Vec::new();
    let mut cur = v.to_vec();
    loop {
        if krylov.is_empty() && cur.iter().all(|&x| x == 0) {
            return (Poly::one(p), krylov);
        }
        if !krylov.is_empty() {
            let k = GfMatrix::from_columns(p, n, &krylov);
            if let Some(c) = k.solve(&cur) {
                // M^d v = Σ c_i M^i v  =>  x^d - Σ c_i x^i
                let mut coeffs: Vec<u64> = c.iter().map(|&ci| (p - ci) % p).collect();
                coeffs.push(1);
                return (Poly::new(p, coeffs), krylov);
            }
        }
        let next = m.mul_vec(&cur);
        krylov.push(cur);
        cur = next;
    }
}

const MAX_VECTOR_TRIES: usize = 4096;

/// Frobenius normal form with transform.
///
/// Splits off cyclic subspaces generated by vectors whose local minimal
/// polynomial equals the minimal polynomial of the remaining invariant
/// subspace, each time passing to an invariant complement cut out by the
/// functionals `f, fM, …, fM^{d-1}`.
pub fn rcf(m: &GfMatrix) -> RcfResult {
    assert!(m.is_square(), "rcf needs a square matrix");
    let p = m.p;
    let n = m.rows;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // basis of the current invariant subspace, as columns
    let mut w: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut pieces: Vec<(Poly, Vec<Vec<u64>>)> = Vec::new();

    while !w.is_empty() {
        let mu = w
            .iter()
            .map(|v| local_minpoly(m, v).0)
            .fold(Poly::one(p), |acc, f| acc.lcm(&f));
        let d = mu.degree();

        let mut found = None;
        for v in &w {
            let (f, k) = local_minpoly(m, v);
            if f.degree() == d {
                found = Some((f, k));
                break;
            }
        }
        let mut tries = 0;
        while found.is_none() {
            tries += 1;
            assert!(tries <= MAX_VECTOR_TRIES, "no maximal vector found");
            let mut v = vec![0u64; n];
            for b in &w {
                let c = rng.gen_range(0..p);
                for i in 0..n {
                    v[i] = (v[i] + mul_mod(c, b[i], p)) % p;
                }
            }
            let (f, k) = local_minpoly(m, &v);
            if f.degree() == d {
                found = Some((f, k));
            }
        }
        let (f, krylov) = found.unwrap();

        // functional with f(M^i v) = δ_{i, d-1}
        let kt = GfMatrix::from_columns(p, n, &krylov).transpose();
        let mut target = vec![0u64; d];
        target[d - 1] = 1;
        let phi0 = kt.solve(&target).expect("Krylov vectors are independent");
        let mut phis = vec![phi0];
        let mt = m.transpose();
        for _ in 1..d {
            let next = mt.mul_vec(phis.last().unwrap());
            phis.push(next);
        }
        let phi = GfMatrix::from_columns(p, n, &phis).transpose(); // d × n
        let wmat = GfMatrix::from_columns(p, n, &w);
        let kernel = phi.mul(&wmat).nullspace();
        w = kernel.iter().map(|c| wmat.mul_vec(c)).collect();
        pieces.push((f, krylov));
    }

    pieces.reverse();
    let invariant_factors: Vec<Poly> = pieces.iter().map(|(f, _)| f.clone()).collect();
    let blocks: Vec<GfMatrix> = invariant_factors.iter().map(Poly::companion).collect();
    let form = GfMatrix::block_diag(p, &blocks);
    let basis: Vec<Vec<u64>> = pieces.into_iter().flat_map(|(_, k)| k).collect();
    let pmat = GfMatrix::from_columns(p, n, &basis);
    let transform = pmat.inverse().expect("cyclic decomposition spans the space");
    assert_eq!(transform.mul(m), form.mul(&transform), "rcf transform check failed");
    RcfResult {
        form,
        transform,
        invariant_factors,
    }
}

/// `T` with `T·V1 = V2·T`, or `None` when the two are not conjugate.
pub fn gl_conjugator(v1: &GfMatrix, v2: &GfMatrix) -> Option<GfMatrix> {
    if v1.rows != v2.rows || v1.p != v2.p {
        return None;
    }
    let r1 = rcf(v1);
    let r2 = rcf(v2);
    if r1.invariant_factors != r2.invariant_factors {
        return None;
    }
    let t = r2.transform.inverse()?.mul(&r1.transform);
    debug_assert_eq!(t.mul(v1), v2.mul(&t));
    Some(t)
}

/// Inverse of an invertible matrix, as a result.
pub fn invert(m: &GfMatrix) -> Result<GfMatrix> {
    m.inverse().ok_or(Error::NotInvertible)
}

//! Isomorphism test for groups in the class, with an explicit isomorphism.
//!
//! Two groups with standard decompositions `A_1 ⋊ ⟨y_1⟩` and `A_2 ⋊ ⟨y_2⟩`
//! are isomorphic iff `|y_1| = |y_2| = γ`, the abelian parts have the same
//! type, and for some `k` coprime with `γ` there is `X ∈ R(A)` with
//! `X * M_1 = M_2^k * X`, where `M_i` is the matrix of conjugation by `y_i`.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{AbelianBasis, Decomposer};
use crate::arith::gcd;
use crate::autring::{conjugacy, AutBlocks};
use crate::blackbox::{ElementCode, GroupHandle};
use crate::decomp::{standard_decomposition, StandardDecomposition};
use crate::error::{Error, Result};

/// Matrix of `x ↦ y x y^{-1}` on `A`, column `j` holding the coordinates of
/// the image of the `j`-th basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationAction {
    pub matrix: AutBlocks,
}

pub fn conjugation_action(g: &GroupHandle, sd: &StandardDecomposition) -> Result<ConjugationAction> {
    let basis = &sd.a_basis;
    let t = basis.len();
    let dec = Decomposer::new(g, basis)?;
    let mut rows = vec![vec![0u64; t]; t];
    for (j, x) in basis.elements.iter().enumerate() {
        let c = g.conjugate(&sd.y, x)?;
        let a = dec.decompose(&c).map_err(|e| match e {
            Error::NotInSpan => Error::CorruptedDecomposition(format!("conjugate of basis element {j} left A")),
            other => other,
        })?;
        for i in 0..t {
            rows[i][j] = a.0[i];
        }
    }
    let matrix = AutBlocks::from_full(&basis.orders, &rows)
        .map_err(|e| Error::CorruptedDecomposition(format!("action matrix rejected: {e}")))?;
    if !matrix.is_in_r() || !matrix.pow(sd.gamma).is_identity() {
        return Err(Error::CorruptedDecomposition("action matrix is not a unit of order dividing γ".into()));
    }
    Ok(ConjugationAction { matrix })
}

/// `ψ` on basis coordinates is `X`; `μ(x y_1^j) = ψ(x) y_2^{kj}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismWitness {
    pub gamma: u64,
    pub k: u64,
    pub psi: AutBlocks,
    pub sd_g: StandardDecomposition,
    pub sd_h: StandardDecomposition,
    pub m_g: AutBlocks,
    pub m_h: AutBlocks,
}

/// Why two groups are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailReason {
    /// The abelian parts have different types.
    AbelianMismatch { g: Vec<u64>, h: Vec<u64> },
    /// The cyclic parts have different orders.
    GammaMismatch { g: u64, h: u64 },
    /// No `k` makes the actions conjugate.
    NoConjugatingK,
}

impl FailReason {
    /// Roman numeral of the violated condition.
    pub fn condition(&self) -> &'static str {
        match self {
            FailReason::AbelianMismatch { .. } => "i",
            FailReason::GammaMismatch { .. } => "ii",
            FailReason::NoConjugatingK => "iii",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoResult {
    Isomorphic(Box<IsomorphismWitness>),
    NotIsomorphic(FailReason),
}

impl IsoResult {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }
}

/// Which input finished its standard decomposition first, and the oracle
/// calls each one used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleaveStats {
    pub first: usize,
    pub ops: [u64; 2],
}

/// Standard decompositions of both inputs, stepped alternately under a
/// doubling oracle budget. Once one side completes, the other runs without
/// a limit, so every failure reason stays exact.
pub fn interleaved_decompositions(
    g: &GroupHandle,
    h: &GroupHandle,
) -> Result<(StandardDecomposition, StandardDecomposition, InterleaveStats)> {
    let handles = [g, h];
    let mut budget: u64 = 1024;
    loop {
        for (side, x) in handles.iter().enumerate() {
            let start = x.ops();
            x.set_op_limit(Some(start.saturating_add(budget)));
            let r = standard_decomposition(x);
            x.set_op_limit(None);
            match r {
                Ok(sd) => {
                    let other = handles[1 - side];
                    let ostart = other.ops();
                    let osd = standard_decomposition(other)?;
                    let mut ops = [0; 2];
                    ops[side] = x.ops() - start;
                    ops[1 - side] = other.ops() - ostart;
                    let stats = InterleaveStats { first: side, ops };
                    return Ok(if side == 0 { (sd, osd, stats) } else { (osd, sd, stats) });
                }
                Err(Error::BudgetExceeded(_)) => {}
                Err(e) => return Err(e),
            }
        }
        budget = budget.saturating_mul(2);
    }
}

/// Decide whether `g` and `h` are isomorphic.
pub fn isomorphic(g: &GroupHandle, h: &GroupHandle) -> Result<IsoResult> {
    let (sd_g, sd_h, _) = interleaved_decompositions(g, h)?;
    isomorphic_from(g, h, sd_g, sd_h)
}

/// The decision given precomputed standard decompositions.
pub fn isomorphic_from(
    g: &GroupHandle,
    h: &GroupHandle,
    sd_g: StandardDecomposition,
    sd_h: StandardDecomposition,
) -> Result<IsoResult> {
    if sd_g.gamma != sd_h.gamma {
        return Ok(IsoResult::NotIsomorphic(FailReason::GammaMismatch {
            g: sd_g.gamma,
            h: sd_h.gamma,
        }));
    }
    if sd_g.a_basis.orders != sd_h.a_basis.orders {
        return Ok(IsoResult::NotIsomorphic(FailReason::AbelianMismatch {
            g: sd_g.a_basis.orders.clone(),
            h: sd_h.a_basis.orders.clone(),
        }));
    }
    let gamma = sd_g.gamma;
    let m_g = conjugation_action(g, &sd_g)?.matrix;
    let m_h = conjugation_action(h, &sd_h)?.matrix;
    for k in (1..=gamma).filter(|&k| gcd(k, gamma) == 1) {
        if let Some(psi) = conjugate_blocks(&m_g, &m_h.pow(k % gamma), gamma)? {
            return Ok(IsoResult::Isomorphic(Box::new(IsomorphismWitness {
                gamma,
                k,
                psi,
                sd_g,
                sd_h,
                m_g,
                m_h,
            })));
        }
    }
    Ok(IsoResult::NotIsomorphic(FailReason::NoConjugatingK))
}

/// Blockwise `X` with `X * a = b * X`, if one exists.
pub fn conjugate_blocks(a: &AutBlocks, b: &AutBlocks, order_cap: u64) -> Result<Option<AutBlocks>> {
    let mut out = Vec::with_capacity(a.blocks.len());
    for (u1, u2) in a.blocks.iter().zip(&b.blocks) {
        match conjugacy(u1.ptype(), u1, u2, order_cap.max(1))? {
            Some(x) => out.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(AutBlocks { blocks: out }))
}

/// The map `μ` induced by a witness.
pub struct IsoMap<'a> {
    g: &'a GroupHandle,
    h: &'a GroupHandle,
    dec: Decomposer<'a>,
    /// `y_1^{-j}` for `j < γ`
    y1_inv_pows: Vec<ElementCode>,
    /// `y_2^{kj}` for `j < γ`
    y2_pows: Vec<ElementCode>,
    psi: AutBlocks,
    target: AbelianBasis,
}

pub fn build_mu<'a>(g: &'a GroupHandle, h: &'a GroupHandle, w: &IsomorphismWitness) -> Result<IsoMap<'a>> {
    let dec = Decomposer::new(g, &w.sd_g.a_basis)?;
    let y1i = g.inv(&w.sd_g.y)?;
    let y2k = h.pow(&w.sd_h.y, w.k)?;
    let mut y1_inv_pows = vec![g.identity().clone()];
    let mut y2_pows = vec![h.identity().clone()];
    for j in 1..w.gamma as usize {
        y1_inv_pows.push(g.mul(&y1_inv_pows[j - 1], &y1i)?);
        y2_pows.push(h.mul(&y2_pows[j - 1], &y2k)?);
    }
    Ok(IsoMap {
        g,
        h,
        dec,
        y1_inv_pows,
        y2_pows,
        psi: w.psi.clone(),
        target: w.sd_h.a_basis.clone(),
    })
}

impl IsoMap<'_> {
    /// Write `x = a · y_1^j` with `a ∈ A_1`, returning the coordinates of `a` and `j`.
    pub fn split(&self, x: &ElementCode) -> Result<(Vec<u64>, usize)> {
        for (j, yj) in self.y1_inv_pows.iter().enumerate() {
            let a = self.g.mul(x, yj)?;
            match self.dec.decompose(&a) {
                Ok(v) => return Ok((v.0, j)),
                Err(Error::NotInSpan) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::CorruptedDecomposition(format!("{x} lies in no coset of A")))
    }

    pub fn apply(&self, x: &ElementCode) -> Result<ElementCode> {
        let (a, j) = self.split(x)?;
        let b = self.psi.apply(&a);
        let xa = self.target.compose(self.h, &b)?;
        self.h.mul(&xa, &self.y2_pows[j])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64 },
}

/// All elements reachable from the generators.
pub fn enumerate_elements(g: &GroupHandle, cap: usize) -> Result<Vec<ElementCode>> {
    let mut seen: HashSet<ElementCode> = HashSet::from([g.identity().clone()]);
    let mut out = vec![g.identity().clone()];
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for s in g.generators() {
            let y = g.mul(&x, s)?;
            if seen.insert(y.clone()) {
                if out.len() >= cap {
                    return Err(Error::TooLarge(format!("more than {cap} elements")));
                }
                out.push(y);
            }
        }
    }
    Ok(out)
}

const EXHAUSTIVE_CAP: usize = 1 << 16;
const SAMPLED_PAIRS: usize = 10_000;

/// Check that `mu` is a bijective homomorphism `g → h`.
///
/// Exhaustive mode checks every product and injectivity, with `|g| = |h|`.
/// Sampled mode checks every pair of generators and 10^4 random pairs.
pub fn verify_isomorphism(
    g: &GroupHandle,
    h: &GroupHandle,
    mu: &dyn Fn(&ElementCode) -> Result<ElementCode>,
    mode: VerifyMode,
) -> Result<bool> {
    match mode {
        VerifyMode::Exhaustive => {
            let elems = enumerate_elements(g, EXHAUSTIVE_CAP)?;
            let h_order = enumerate_elements(h, EXHAUSTIVE_CAP)?.len();
            if elems.len() != h_order {
                return Ok(false);
            }
            let mut image: HashMap<ElementCode, ElementCode> = HashMap::with_capacity(elems.len());
            let mut seen: HashSet<ElementCode> = HashSet::with_capacity(elems.len());
            for x in &elems {
                let y = mu(x)?;
                if !seen.insert(y.clone()) {
                    return Ok(false);
                }
                image.insert(x.clone(), y);
            }
            for a in &elems {
                for b in &elems {
                    let ab = g.mul(a, b)?;
                    if image[&ab] != h.mul(&image[a], &image[b])? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        VerifyMode::Sampled { seed } => {
            let gens = g.generators();
            let check = |a: &ElementCode, b: &ElementCode| -> Result<bool> {
                let ab = g.mul(a, b)?;
                Ok(mu(&ab)? == h.mul(&mu(a)?, &mu(b)?)?)
            };
            for a in gens {
                for b in gens {
                    if !check(a, b)? {
                        return Ok(false);
                    }
                }
            }
            if !h.is_identity(&mu(g.identity())?) {
                return Ok(false);
            }
            let mut random = RandomElements::new(g, seed)?;
            for _ in 0..SAMPLED_PAIRS {
                let a = random.next()?;
                let b = random.next()?;
                if !check(&a, &b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Random elements by product replacement: a pool seeded with the
/// generators, and an accumulator multiplied by a changing pool entry.
struct RandomElements<'a> {
    g: &'a GroupHandle,
    pool: Vec<ElementCode>,
    acc: ElementCode,
    rng: ChaCha8Rng,
}

const POOL_SIZE: usize = 10;
const WARM_UP: usize = 60;

impl<'a> RandomElements<'a> {
    fn new(g: &'a GroupHandle, seed: u64) -> Result<Self> {
        let gens = g.generators();
        let pool = if gens.is_empty() {
            vec![g.identity().clone()]
        } else {
            (0..POOL_SIZE.max(gens.len())).map(|i| gens[i % gens.len()].clone()).collect()
        };
        let mut r = RandomElements {
            g,
            pool,
            acc: g.identity().clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for _ in 0..WARM_UP {
            r.next()?;
        }
        Ok(r)
    }

    fn next(&mut self) -> Result<ElementCode> {
        let n = self.pool.len();
        let i = self.rng.gen_range(0..n);
        let j = (i + self.rng.gen_range(1..n.max(2))) % n;
        let y = if self.rng.gen_bool(0.5) { self.g.inv(&self.pool[j])? } else { self.pool[j].clone() };
        self.pool[i] = self.g.mul(&self.pool[i], &y)?;
        self.acc = self.g.mul(&self.acc, &self.pool[i])?;
        Ok(self.acc.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::{SemidirectGroup, SemidirectGroupSpec};
    use std::sync::Arc;

    fn semidirect(orders: Vec<u64>, m: u64, rows: &[Vec<u64>]) -> GroupHandle {
        GroupHandle::new(Arc::new(SemidirectGroup::new(
            SemidirectGroupSpec::from_rows(orders, m, rows).unwrap(),
        )))
    }

    #[test]
    fn order21_pair_needs_k_two() {
        let g = semidirect(vec![7], 3, &[vec![2]]);
        let h = semidirect(vec![7], 3, &[vec![4]]);
        let r = isomorphic(&g, &h).unwrap();
        let IsoResult::Isomorphic(w) = r else { panic!("{r:?}") };
        assert_eq!(w.k, 2);
        assert_eq!(w.m_g.to_full(), vec![vec![2]]);
        assert_eq!(w.m_h.to_full(), vec![vec![4]]);
        assert!(conjugate_blocks(&w.m_g, &w.m_h, 3).unwrap().is_none());
        let mu = build_mu(&g, &h, &w).unwrap();
        let y1 = g.parse_element("(0;1)").unwrap();
        assert_eq!(mu.apply(&y1).unwrap(), h.parse_element("(0;2)").unwrap());
        assert!(verify_isomorphism(&g, &h, &|x| mu.apply(x), VerifyMode::Exhaustive).unwrap());
        assert!(verify_isomorphism(&g, &h, &|x| mu.apply(x), VerifyMode::Sampled { seed: 0 }).unwrap());
    }

    #[test]
    fn self_isomorphism_and_identity_map() {
        let g = semidirect(vec![3, 3], 4, &[vec![0, 2], vec![1, 0]]);
        let r = isomorphic(&g, &g).unwrap();
        let IsoResult::Isomorphic(w) = r else { panic!() };
        assert_eq!(w.k, 1);
        assert!(verify_isomorphism(&g, &g, &|x| Ok(x.clone()), VerifyMode::Exhaustive).unwrap());
        // a constant map fails
        let e = g.identity().clone();
        assert!(!verify_isomorphism(&g, &g, &|_| Ok(e.clone()), VerifyMode::Exhaustive).unwrap());
    }

    #[test]
    fn failure_reasons() {
        let z21 = semidirect(vec![3, 7], 1, &[vec![1, 0], vec![0, 1]]);
        let nonab = semidirect(vec![7], 3, &[vec![2]]);
        assert_eq!(
            isomorphic(&z21, &nonab).unwrap(),
            IsoResult::NotIsomorphic(FailReason::GammaMismatch { g: 1, h: 3 })
        );
        let z9 = semidirect(vec![9], 1, &[vec![1]]);
        let z3sq = semidirect(vec![3, 3], 1, &[vec![1, 0], vec![0, 1]]);
        assert!(!isomorphic(&z9, &z3sq).unwrap().is_isomorphic());
        let r = isomorphic(&z9, &z3sq).unwrap();
        assert!(matches!(r, IsoResult::NotIsomorphic(FailReason::AbelianMismatch { .. })));
        // Z_3^2 ⋊ Z_4 acting by W versus by diag(2, 1)
        let w = semidirect(vec![3, 3], 4, &[vec![0, 2], vec![1, 0]]);
        let d = semidirect(vec![3, 3], 4, &[vec![2, 0], vec![0, 1]]);
        let r = isomorphic(&w, &d).unwrap();
        assert_eq!(r, IsoResult::NotIsomorphic(FailReason::NoConjugatingK));
    }
}

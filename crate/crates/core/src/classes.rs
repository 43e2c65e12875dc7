//! Isomorphism classes of `Z_{3^i}^r ⋊ Z_4`.
//!
//! A matrix of order dividing 4 over `F_3` is conjugate to a block diagonal
//! of companion matrices of `X + 1`, `X - 1` and `X^2 + 1`, with `k_1`, `k_2`
//! and `k_3` blocks, `k_1 + k_2 + 2k_3 = r`. Since each block is conjugate to
//! its cube, `M` and `M^3` are conjugate and each triple is one class.

use crate::arith::{gcd, inv_mod};
use crate::autring::{conjugacy, enumerate_r, lift_block_diag, AutBlocks, AutMatrix, GfMatrix, PType};
use crate::blackbox::SemidirectGroupSpec;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassTriple {
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
}

impl std::fmt::Display for ClassTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.k1, self.k2, self.k3)
    }
}

/// All triples with `k1 + k2 + 2 k3 = r`, by descending `k3`, then descending `k2`.
pub fn class_triples(r: usize) -> Vec<ClassTriple> {
    let mut out = Vec::new();
    for k3 in (0..=r / 2).rev() {
        let rest = r - 2 * k3;
        for k2 in (0..=rest).rev() {
            out.push(ClassTriple { k1: rest - k2, k2, k3 });
        }
    }
    out
}

pub fn count_classes(r: usize) -> usize {
    class_triples(r).len()
}

/// The `F_3` blocks `U = (2)`, `V = (1)`, `W = [[0,2],[1,0]]`.
pub fn block_u() -> GfMatrix {
    GfMatrix::from_rows(3, &[vec![2]])
}

pub fn block_v() -> GfMatrix {
    GfMatrix::from_rows(3, &[vec![1]])
}

pub fn block_w() -> GfMatrix {
    GfMatrix::from_rows(3, &[vec![0, 2], vec![1, 0]])
}

fn triple_matrix(t: ClassTriple) -> GfMatrix {
    let mut blocks = Vec::new();
    blocks.extend(std::iter::repeat_n(block_u(), t.k1));
    blocks.extend(std::iter::repeat_n(block_v(), t.k2));
    blocks.extend(std::iter::repeat_n(block_w(), t.k3));
    GfMatrix::block_diag(3, &blocks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRepresentative {
    pub triple: ClassTriple,
    pub action: AutMatrix,
    /// True when the plain integer lift had order above 4 and was replaced
    /// by a power with the same reduction mod 3.
    pub corrected: bool,
}

/// One action per triple on `Z_{3^i}^r`, each of order dividing 4.
///
/// For `i > 1` the lift `L` of the `F_3` matrix may have order `4·3^j`; then
/// `L^N` with `N ≡ 1 (mod 4)` and `3^j | N` keeps the reduction mod 3 and has
/// order dividing 4.
pub fn class_representatives(r: usize, i: u32) -> Result<Vec<ClassRepresentative>> {
    if r == 0 || i == 0 {
        return Err(Error::Malformed("r and i must be positive".into()));
    }
    let ptype = PType::new(3, vec![i; r])?;
    class_triples(r)
        .into_iter()
        .map(|triple| {
            let lift = lift_block_diag(&ptype, &[triple_matrix(triple)]);
            let fourth = lift.pow(4);
            if fourth.is_identity() {
                return Ok(ClassRepresentative {
                    triple,
                    action: lift,
                    corrected: false,
                });
            }
            // the fourth power lies in the kernel, a 3-group
            let mut q: u64 = 1;
            let mut cur = fourth;
            while !cur.is_identity() {
                cur = cur.pow(3);
                q *= 3;
            }
            // N ≡ 1 mod 4, N ≡ 0 mod q
            let n = q * (inv_mod(q % 4, 4).expect("q odd") % 4);
            let action = lift.pow(n);
            if !action.pow(4).is_identity() || action.psi()? != lift.psi()? {
                return Err(Error::InvariantBreach(format!("lift correction failed for {triple}")));
            }
            Ok(ClassRepresentative {
                triple,
                action,
                corrected: true,
            })
        })
        .collect()
}

/// The group `Z_{3^i}^r ⋊ Z_4` for a representative.
pub fn representative_group(rep: &ClassRepresentative) -> Result<SemidirectGroupSpec> {
    let orders = rep.action.ptype().orders();
    SemidirectGroupSpec::new(orders, 4, AutBlocks::new(vec![rep.action.clone()])?, None)
}

/// Count classes of `A ⋊ Z_m` over a single-prime `A` by brute force: every
/// `M ∈ R(A)` with `M^m = I`, grouped by "`M_1` conjugate to `M_2^k` for
/// some `k` coprime with `m`".
pub fn brute_force_class_count(ptype: &PType, m: u64) -> Result<usize> {
    if gcd(ptype.p(), m) != 1 {
        return Err(Error::Malformed("m must be coprime with p".into()));
    }
    let ks: Vec<u64> = (1..=m).filter(|&k| gcd(k, m) == 1).collect();
    let mut reps: Vec<Vec<AutMatrix>> = Vec::new(); // powers M^k of each class representative
    for u in enumerate_r(ptype)? {
        if !u.pow(m).is_identity() {
            continue;
        }
        let mut found = false;
        for powers in &reps {
            for v in powers {
                if conjugacy(ptype, &u, v, m)?.is_some() {
                    found = true;
                    break;
                }
            }
            if found {
                break;
            }
        }
        if !found {
            reps.push(ks.iter().map(|&k| u.pow(k)).collect());
        }
    }
    Ok(reps.len())
}

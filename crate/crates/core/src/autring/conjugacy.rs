use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::gf::{gl_conjugator, GfMatrix};
use super::{lift_block_diag, AutMatrix, PType};
use crate::arith::{gcd, solve_modular_system, ModularLinearSystem};
use crate::error::{Error, Result};

/// Find `U` with `U * u1 = u2 * U`, or `None` if the two are not conjugate.
///
/// Both inputs must be units of order coprime with `p`; orders are checked by
/// powering up to `order_cap`. The search goes through the quotient by the
/// kernel of Ψ: conjugate the diagonal blocks over `F_p`, lift that conjugator
/// to `X`, then solve the linear congruences `X*Y*u1 = u2*X*Y` for `Y` in the
/// kernel.
pub fn conjugacy(ptype: &PType, u1: &AutMatrix, u2: &AutMatrix, order_cap: u64) -> Result<Option<AutMatrix>> {
    if u1.ptype() != ptype || u2.ptype() != ptype {
        return Err(Error::PTypeMismatch);
    }
    if !u1.is_in_r() || !u2.is_in_r() {
        return Err(Error::NotInvertible);
    }
    let p = ptype.p();
    for u in [u1, u2] {
        match u.order(order_cap) {
            Some(n) if gcd(n, p) == 1 => {}
            _ => return Err(Error::Condition3 { cap: order_cap }),
        }
    }

    let (v1, v2) = (u1.psi()?, u2.psi()?);
    let mut ts: Vec<GfMatrix> = Vec::with_capacity(v1.blocks.len());
    for (a, b) in v1.blocks.iter().zip(&v2.blocks) {
        match gl_conjugator(a, b) {
            Some(t) => ts.push(t),
            None => return Ok(None),
        }
    }
    let x = lift_block_diag(ptype, &ts);

    let y = solve_kernel_correction(ptype, &x, u1, u2)?;
    let u = x.star_mul(&y)?;
    if !u.is_in_r() || u.star_mul(u1)? != u2.star_mul(&u)? {
        return Err(Error::InvariantBreach("conjugator failed verification".into()));
    }
    Ok(Some(u))
}

/// Exponent `d_ij` in the kernel parameterisation `Y_ij = δ_ij + p^{d_ij} y_ij`.
fn kernel_shift(ptype: &PType, i: usize, j: usize) -> u32 {
    let blocks = ptype.blocks();
    let bi = blocks.iter().position(|b| i >= b.start && i < b.start + b.len).unwrap();
    let bj = blocks.iter().position(|b| j >= b.start && j < b.start + b.len).unwrap();
    if bi == bj {
        1
    } else {
        ptype.divisibility_exp(i, j)
    }
}

fn solve_kernel_correction(ptype: &PType, x: &AutMatrix, u1: &AutMatrix, u2: &AutMatrix) -> Result<AutMatrix> {
    let s = ptype.s();
    let p = BigInt::from(ptype.p());
    let big = |v: u64| BigInt::from(v);

    // integer products; each entry of row k only matters mod p^{e_k}
    let ux: Vec<Vec<BigInt>> = (0..s)
        .map(|k| (0..s).map(|i| (0..s).map(|t| big(u2.get(k, t)) * big(x.get(t, i))).sum()).collect())
        .collect();
    let xu: Vec<Vec<BigInt>> = (0..s)
        .map(|k| (0..s).map(|l| (0..s).map(|t| big(x.get(k, t)) * big(u1.get(t, l))).sum()).collect())
        .collect();
    let shifts: Vec<BigInt> = (0..s * s)
        .map(|v| p.pow(kernel_shift(ptype, v / s, v % s)))
        .collect();

    // X (I + Σ p^d y E_ij) U1 ≡ U2 X (I + Σ p^d y E_ij), entry (k, l) mod p^{e_k}:
    //   Σ_ij p^{d_ij} (X_ki U1_jl - (U2X)_ki δ_jl) y_ij ≡ (U2X - XU1)_kl
    let mut sys = ModularLinearSystem::new(s * s);
    for k in 0..s {
        let modulus = big(ptype.modulus(k));
        for l in 0..s {
            let mut row = Vec::with_capacity(s * s);
            for i in 0..s {
                for j in 0..s {
                    let mut a = big(x.get(k, i)) * big(u1.get(j, l));
                    if j == l {
                        a -= &ux[k][i];
                    }
                    row.push((a * &shifts[i * s + j]).mod_floor(&modulus));
                }
            }
            let rhs = (&ux[k][l] - &xu[k][l]).mod_floor(&modulus);
            sys.push(row, rhs, modulus.clone());
        }
    }
    let y = solve_modular_system(&sys)
        .ok_or_else(|| Error::InvariantBreach("kernel correction system has no solution".into()))?;

    let mut rows = vec![vec![0i64; s]; s];
    for i in 0..s {
        let q = big(ptype.modulus(i));
        for j in 0..s {
            let v = (BigInt::from(u64::from(i == j)) + &shifts[i * s + j] * &y[i * s + j]).mod_floor(&q);
            rows[i][j] = v.to_i64().expect("entry below the row modulus");
        }
    }
    AutMatrix::from_integers(ptype, &rows)
}

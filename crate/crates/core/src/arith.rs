//! Exact integer utilities: trial-division factoring, divisors, lcm, and a
//! linear solver for systems of congruences with per-row moduli.
//!
//! The congruence solver lifts each equation to a Diophantine one by adding a
//! slack variable with coefficient equal to the modulus, reduces the resulting
//! integer matrix to column echelon form with unimodular column operations, and
//! back-substitutes. Everything runs over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of positive divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }
}

/// Factor `n` by trial division up to `sqrt(n)`.
///
/// Panics if `n == 0`.
pub fn trial_factor(n: u64) -> Factorization {
    assert!(n >= 1, "trial_factor requires n >= 1");
    let mut n = n;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Factorization { factors }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && trial_factor(n).factors == [(n, 1)]
}

/// If `q = p^e` for a prime `p` and `e >= 1`, returns `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    match trial_factor(q).factors.as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let f = trial_factor(n);
    let mut divs = vec![1u64];
    for &(p, e) in &f.factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Least common multiple of a nonempty list.
pub fn lcm_list(xs: &[u64]) -> u64 {
    assert!(!xs.is_empty(), "lcm_list requires a nonempty list");
    xs.iter().fold(1u64, |acc, &x| lcm(acc, x))
}

/// `a * b mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// A system `rows * y ≡ rhs (mod moduli)`, one modulus per equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularLinearSystem {
    pub rows: Vec<Vec<BigInt>>,
    pub rhs: Vec<BigInt>,
    pub moduli: Vec<BigInt>,
    pub n_vars: usize,
}

impl ModularLinearSystem {
    pub fn new(n_vars: usize) -> Self {
        ModularLinearSystem {
            rows: Vec::new(),
            rhs: Vec::new(),
            moduli: Vec::new(),
            n_vars,
        }
    }

    pub fn push(&mut self, row: Vec<BigInt>, rhs: BigInt, modulus: BigInt) {
        assert_eq!(row.len(), self.n_vars, "row length must match n_vars");
        assert!(modulus >= BigInt::one(), "moduli must be positive");
        self.rows.push(row);
        self.rhs.push(rhs);
        self.moduli.push(modulus);
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(rows: &[Vec<i64>], rhs: &[i64], moduli: &[u64]) -> Self {
        let n_vars = rows.first().map_or(0, Vec::len);
        let mut sys = ModularLinearSystem::new(n_vars);
        for ((row, &b), &m) in rows.iter().zip(rhs).zip(moduli) {
            sys.push(
                row.iter().map(|&x| BigInt::from(x)).collect(),
                BigInt::from(b),
                BigInt::from(m),
            );
        }
        sys
    }

    /// True iff `y` satisfies every congruence.
    pub fn is_satisfied_by(&self, y: &[BigInt]) -> bool {
        self.rows
            .iter()
            .zip(&self.rhs)
            .zip(&self.moduli)
            .all(|((row, b), m)| {
                let lhs: BigInt = row.iter().zip(y).map(|(a, x)| a * x).sum();
                (lhs - b).mod_floor(m).is_zero()
            })
    }
}

/// Solve a system of linear congruences.
///
/// Returns `None` when the system is inconsistent. Otherwise the assignment
/// comes from back-substitution with every free variable set to zero, reduced
/// into `[0, L)` where `L` is the lcm of the moduli.
pub fn solve_modular_system(sys: &ModularLinearSystem) -> Option<Vec<BigInt>> {
    let n_eq = sys.rows.len();
    let n_var = sys.n_vars;
    let n_cols = n_var + n_eq;

    // C = [A | diag(moduli)], all reduced: coefficients mod modulus keep the
    // lattice of solutions unchanged.
    let mut c: Vec<Vec<BigInt>> = (0..n_eq)
        .map(|r| {
            let m = &sys.moduli[r];
            let mut row: Vec<BigInt> = sys.rows[r].iter().map(|a| a.mod_floor(m)).collect();
            row.extend((0..n_eq).map(|k| if k == r { m.clone() } else { BigInt::zero() }));
            row
        })
        .collect();
    let b: Vec<BigInt> = (0..n_eq)
        .map(|r| sys.rhs[r].mod_floor(&sys.moduli[r]))
        .collect();

    let (v, pivots) = column_echelon(&mut c, n_cols);

    // Forward substitution through the lower echelon form H = C V.
    let mut w = vec![BigInt::zero(); n_cols];
    for r in 0..n_eq {
        let mut residual = b[r].clone();
        for (col, wv) in w.iter().enumerate() {
            if !wv.is_zero() && !c[r][col].is_zero() {
                residual -= &c[r][col] * wv;
            }
        }
        match pivots[r] {
            Some(col) => {
                let (q, rem) = residual.div_rem(&c[r][col]);
                if !rem.is_zero() {
                    return None;
                }
                w[col] = q;
            }
            None => {
                if !residual.is_zero() {
                    return None;
                }
            }
        }
    }

    let l = sys
        .moduli
        .iter()
        .fold(BigInt::one(), |acc, m| acc.lcm(m));
    let y: Vec<BigInt> = (0..n_var)
        .map(|i| {
            let x: BigInt = (0..n_cols)
                .filter(|&k| !w[k].is_zero())
                .map(|k| &v[i][k] * &w[k])
                .sum();
            x.mod_floor(&l)
        })
        .collect();
    debug_assert!(sys.is_satisfied_by(&y));
    Some(y)
}

/// Reduce `c` in place to lower column-echelon form using unimodular column
/// operations. Returns the accumulated transform `V` (so the result equals the
/// original times `V`) and, for each row, the pivot column if it has one.
fn column_echelon(c: &mut [Vec<BigInt>], n_cols: usize) -> (Vec<Vec<BigInt>>, Vec<Option<usize>>) {
    let n_rows = c.len();
    let mut v: Vec<Vec<BigInt>> = (0..n_cols)
        .map(|i| {
            (0..n_cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivots = vec![None; n_rows];
    let mut next = 0usize;

    let swap_cols = |m: &mut [Vec<BigInt>], a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };
    // col[dst] -= q * col[src]
    let axpy_cols = |m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt| {
        for row in m.iter_mut() {
            if !row[src].is_zero() {
                let t = &row[src] * q;
                row[dst] -= t;
            }
        }
    };

    for r in 0..n_rows {
        if next >= n_cols {
            break;
        }
        loop {
            // smallest nonzero |entry| in row r among columns next..
            let best = (next..n_cols)
                .filter(|&j| !c[r][j].is_zero())
                .min_by(|&a, &b| c[r][a].abs().cmp(&c[r][b].abs()));
            let Some(best) = best else { break };
            if best != next {
                swap_cols(c, best, next);
                swap_cols(&mut v, best, next);
            }
            let pivot = c[r][next].clone();
            let mut done = true;
            for j in next + 1..n_cols {
                if c[r][j].is_zero() {
                    continue;
                }
                let q = c[r][j].div_floor(&pivot);
                axpy_cols(c, j, next, &q);
                axpy_cols(&mut v, j, next, &q);
                if !c[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots[r] = Some(next);
                next += 1;
                break;
            }
        }
        if let Some(col) = pivots[r] {
            if c[r][col].is_negative() {
                for row in c.iter_mut() {
                    row[col] = -row[col].clone();
                }
                for row in v.iter_mut() {
                    row[col] = -row[col].clone();
                }
            }
        }
    }
    (v, pivots)
}

/// Diagonal form of an integer matrix under unimodular row and column
/// operations: returns the diagonal and `V⁻¹`, where `U·M·V = diag`.
///
/// Only the inverse column transform is kept: callers use its rows to express
/// the new cyclic generators in terms of the old ones.
pub fn diagonalize(m: &[Vec<BigInt>]) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut vinv: Vec<Vec<BigInt>> = (0..n_cols)
        .map(|i| {
            (0..n_cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let steps = n_rows.min(n_cols);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n_rows {
                for j in t..n_cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // remaining block is zero
                let diag = (0..steps).map(|k| a[k][k].abs()).collect();
                return (diag, vinv);
            };
            a.swap(t, bi);
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                vinv.swap(t, bj);
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n_rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..n_cols {
                    let s = &a[t][j] * &q;
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n_cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut() {
                    let s = &row[t] * &q;
                    row[j] -= s;
                }
                // col_j -= q col_t  =>  row_t of V⁻¹ += q row_j
                let (lo, hi) = vinv.split_at_mut(j);
                for (x, y) in lo[t].iter_mut().zip(hi[0].iter()) {
                    *x += y * &q;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    let diag = (0..steps).map(|k| a[k][k].abs()).collect();
    (diag, vinv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(trial_factor(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(trial_factor(1).factors, vec![]);
        assert_eq!(trial_factor(21).factors, vec![(3, 1), (7, 1)]);
        assert_eq!(trial_factor(97).factors, vec![(97, 1)]);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(21), vec![1, 3, 7, 21]);
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_list(&[2, 3]), 6);
        assert_eq!(lcm_list(&[4, 6]), 12);
        assert_eq!(lcm_list(&[7, 3, 21]), 21);
    }

    #[test]
    fn factor_and_divisors_consistent_up_to_limit() {
        for n in (1..=1_000_000u64).step_by(997).chain(999_990..=1_000_000) {
            let f = trial_factor(n);
            assert_eq!(f.value(), n);
            assert!(f.primes().all(is_prime_naive));
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            let d = divisors(n);
            assert_eq!(d.len() as u64, f.divisor_count());
            assert_eq!(d.first(), Some(&1));
            assert_eq!(d.last(), Some(&n));
        }
    }

    fn is_prime_naive(p: u64) -> bool {
        p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn single_congruence() {
        let sys = ModularLinearSystem::from_i64(&[vec![3]], &[6], &[9]);
        let y = solve_modular_system(&sys).unwrap();
        assert!(sys.is_satisfied_by(&y));
        assert!([2, 5, 8].contains(&i64::try_from(&y[0]).unwrap()));

        let sys = ModularLinearSystem::from_i64(&[vec![3]], &[1], &[9]);
        assert_eq!(solve_modular_system(&sys), None);
    }

    #[test]
    fn mixed_moduli_system() {
        // y0 + y1 ≡ 1 (4), 2 y0 ≡ 0 (2), y1 ≡ 2 (3)
        let sys = ModularLinearSystem::from_i64(
            &[vec![1, 1], vec![2, 0], vec![0, 1]],
            &[1, 0, 2],
            &[4, 2, 3],
        );
        let y = solve_modular_system(&sys).unwrap();
        assert!(sys.is_satisfied_by(&y));
    }

    #[test]
    fn no_equations() {
        let sys = ModularLinearSystem::new(3);
        assert_eq!(solve_modular_system(&sys), Some(vec![BigInt::zero(); 3]));
    }

    #[test]
    fn diagonalize_relation_matrix() {
        // Z^2 / <(4, 0), (2, 2)>  ≅ Z_2 × Z_4 ... determinant 8
        let (d, vinv) = diagonalize(&[big(&[4, 0]), big(&[2, 2])]);
        let mut ds: Vec<i64> = d.iter().map(|x| i64::try_from(x).unwrap()).collect();
        ds.sort();
        assert_eq!(ds, vec![2, 4]);
        assert_eq!(vinv.len(), 2);
    }
}

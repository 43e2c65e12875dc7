use std::collections::HashSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grpext::arith::{divisors, is_prime, solve_modular_system, trial_factor, ModularLinearSystem};
use grpext::autring::{conjugacy, enumerate_r, random_unit, AutMatrix, PType};
use grpext::oracle::brute_abelian_aut_count;

proptest! {
    #[test]
    fn factorization_reconstructs(n in 1u64..=1_000_000) {
        let f = trial_factor(n);
        let mut prod = 1u64;
        let mut last = 0;
        for &(p, e) in &f.factors {
            prop_assert!(is_prime(p) && p > last && e > 0);
            last = p;
            prod *= p.pow(e);
        }
        prop_assert_eq!(prod, n);
        let d = divisors(n);
        let expected: u64 = f.factors.iter().map(|&(_, e)| u64::from(e) + 1).product();
        prop_assert_eq!(d.len() as u64, expected);
        prop_assert!(d.windows(2).all(|w| w[0] < w[1]) && d.iter().all(|x| n % x == 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn solvable_systems_are_solved(
        seed in any::<u64>(),
        n_eq in 1usize..7,
        n_var in 1usize..7,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moduli = [2u64, 3, 4, 5, 8, 9, 25, 27, 49, 81, 128, 1 << 40];
        let y: Vec<BigInt> = (0..n_var).map(|_| BigInt::from(rng.gen_range(-1000i64..1000))).collect();
        let mut sys = ModularLinearSystem::new(n_var);
        for _ in 0..n_eq {
            let m = BigInt::from(moduli[rng.gen_range(0..moduli.len())]);
            let row: Vec<BigInt> = (0..n_var)
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        // coefficients past the machine word
                        BigInt::from(rng.gen::<u64>()) * BigInt::from(rng.gen::<u64>())
                    } else {
                        BigInt::from(rng.gen_range(-50i64..50))
                    }
                })
                .collect();
            let rhs: BigInt = row.iter().zip(&y).map(|(a, b)| a * b).sum();
            sys.push(row, rhs, m);
        }
        let sol = solve_modular_system(&sys);
        prop_assert!(sol.is_some());
        prop_assert!(sys.is_satisfied_by(&sol.unwrap()));
    }
}

/// Solvability of a 4×4 system by trying every assignment mod the lcm of the moduli.
fn exhaustive_solvable(rows: &[Vec<i64>], rhs: &[i64], moduli: &[u64]) -> bool {
    let l = moduli.iter().fold(1u64, |a, &m| num_integer::lcm(a, m)) as i64;
    let n = rows[0].len();
    let mut y = vec![0i64; n];
    loop {
        let ok = rows.iter().zip(rhs).zip(moduli).all(|((r, b), &m)| {
            let s: i64 = r.iter().zip(&y).map(|(a, x)| a * x).sum();
            (s - b).rem_euclid(m as i64) == 0
        });
        if ok {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            y[k] += 1;
            if y[k] < l {
                break;
            }
            y[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn four_by_four_systems_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    // moduli pools keep the lcm small enough to enumerate
    let pools: [&[u64]; 3] = [&[2, 3, 4, 9], &[3, 9, 27], &[2, 4]];
    let (mut solvable, mut unsolvable) = (0, 0);
    for trial in 0..120 {
        let pool = pools[trial % pools.len()];
        let moduli: Vec<u64> = (0..4).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        let rows: Vec<Vec<i64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(0..27)).collect()).collect();
        let rhs: Vec<i64> = (0..4).map(|_| rng.gen_range(0..27)).collect();
        let sys = ModularLinearSystem::from_i64(&rows, &rhs, &moduli);
        let got = solve_modular_system(&sys);
        if let Some(y) = &got {
            assert!(sys.is_satisfied_by(y));
        }
        let want = exhaustive_solvable(&rows, &rhs, &moduli);
        assert_eq!(got.is_some(), want, "{rows:?} {rhs:?} {moduli:?}");
        if want {
            solvable += 1;
        } else {
            unsolvable += 1;
        }
    }
    assert!(solvable > 0 && unsolvable > 0);
}

#[test]
fn closure_of_ring_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for exps in [vec![1, 2, 2, 5], vec![1, 1, 3], vec![2, 4]] {
        let t = PType::new(3, exps).unwrap();
        for _ in 0..1000 {
            let (u, v) = (random_unit(&t, &mut rng), random_unit(&t, &mut rng));
            let w = u.star_mul(&v).unwrap();
            assert!(AutMatrix::validate(&t, &w.rows()).is_ok());
            assert!(w.is_in_r());
        }
    }
}

/// Matrices act on coordinate vectors; the action must be an automorphism
/// and the ring product must be composition.
#[test]
fn matrices_act_as_automorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for orders in [vec![2, 4], vec![3, 3], vec![9], vec![2, 2, 2], vec![2, 4, 8], vec![3, 9]] {
        let t = PType::from_orders(&orders).unwrap();
        let all: Vec<Vec<u64>> = {
            let size: u64 = orders.iter().product();
            (0..size)
                .map(|mut x| {
                    orders
                        .iter()
                        .map(|&q| {
                            let c = x % q;
                            x /= q;
                            c
                        })
                        .collect()
                })
                .collect()
        };
        let add = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).zip(&orders).map(|((x, y), q)| (x + y) % q).collect() };
        for _ in 0..50 {
            let (u, v) = (random_unit(&t, &mut rng), random_unit(&t, &mut rng));
            let uv = u.star_mul(&v).unwrap();
            let images: HashSet<Vec<u64>> = all.iter().map(|a| u.apply(a)).collect();
            assert_eq!(images.len(), all.len());
            for _ in 0..20 {
                let a = &all[rng.gen_range(0..all.len())];
                let b = &all[rng.gen_range(0..all.len())];
                assert_eq!(u.apply(&add(a, b)), add(&u.apply(a), &u.apply(b)));
                assert_eq!(uv.apply(a), u.apply(&v.apply(a)));
            }
        }
        if orders.iter().product::<u64>() <= 64 {
            assert_eq!(enumerate_r(&t).unwrap().len() as u64, brute_abelian_aut_count(&orders));
        }
    }
}

/// Conjugacy against orbits computed by brute force, over all pairs of
/// elements of order coprime with `p`.
#[test]
fn conjugacy_complete_on_small_types() {
    for orders in [vec![2, 4], vec![3, 3], vec![9], vec![2, 2, 2], vec![5], vec![2, 2], vec![4, 4]] {
        let t = PType::from_orders(&orders).unwrap();
        let ring = enumerate_r(&t).unwrap();
        let inverses: Vec<AutMatrix> = ring.iter().map(|x| x.inverse().unwrap()).collect();
        let cap = ring.len() as u64;
        let regular: Vec<&AutMatrix> = ring
            .iter()
            .filter(|u| u.order(cap).unwrap() % t.p() != 0)
            .collect();
        for u1 in &regular {
            let orbit: HashSet<AutMatrix> = ring
                .iter()
                .zip(&inverses)
                .map(|(x, xi)| x.star_mul(u1).unwrap().star_mul(xi).unwrap())
                .collect();
            for u2 in &regular {
                let got = conjugacy(&t, u1, u2, cap).unwrap();
                assert_eq!(got.is_some(), orbit.contains(*u2), "{orders:?}: {u1:?} vs {u2:?}");
                if let Some(x) = got {
                    assert_eq!(x.star_mul(u1).unwrap(), u2.star_mul(&x).unwrap());
                }
            }
        }
    }
}

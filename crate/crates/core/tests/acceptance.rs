//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grpext::abelian::{element_order, Decomposer};
use grpext::arith::gcd;
use grpext::autring::{conjugacy, enumerate_r, random_unit, AutMatrix, PType};
use grpext::blackbox::{ElementCode, GroupHandle, SemidirectGroup, SemidirectGroupSpec};
use grpext::classes::{brute_force_class_count, count_classes};
use grpext::corpus::{corpus, cyclic_handle};
use grpext::decomp::standard_decomposition;
use grpext::iso::{build_mu, conjugate_blocks, conjugation_action, isomorphic, verify_isomorphism, IsoResult, VerifyMode};
use grpext::oracle::{brute_abelian_aut_count, brute_abelian_part, brute_gamma, brute_isomorphic, random_generating_set, CayleyTable};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit: Duration) -> Result<(), String> {
    ensure(t <= limit, || format!("took {t:?}, limit {limit:?}"))
}

fn e2s<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn c1_headline() -> Outcome {
    let t = Instant::now();
    let n = count_classes(4);
    let elapsed = t.elapsed();
    ensure(n == 9, || format!("count is {n}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("r = 4 gives {n} classes in {elapsed:?}"))
}

fn c2_brute_force_classes() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for (r, want) in [(1usize, 2usize), (2, 4)] {
        let ptype = PType::new(3, vec![1; r]).map_err(e2s)?;
        let brute = brute_force_class_count(&ptype, 4).map_err(e2s)?;
        let fast = count_classes(r);
        ensure(brute == fast && fast == want, || format!("r = {r}: brute {brute}, count {fast}"))?;
        parts.push(format!("r = {r}: {brute}"));
    }
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{} in {:?}", parts.join(", "), t.elapsed()))
}

fn order21(c: u64) -> (Arc<SemidirectGroup>, GroupHandle) {
    let b = Arc::new(SemidirectGroup::new(SemidirectGroupSpec::from_rows(vec![7], 3, &[vec![c]]).unwrap()));
    (b.clone(), GroupHandle::new(b))
}

fn c3_order21_pair() -> Outcome {
    let t = Instant::now();
    let (b1, g1) = order21(2);
    let (b2, g2) = order21(4);
    let IsoResult::Isomorphic(w) = isomorphic(&g1, &g2).map_err(e2s)? else {
        return Err("verdict is not isomorphic".into());
    };
    ensure(w.k == 2, || format!("witness k = {}", w.k))?;
    let m1 = conjugation_action(&g1, &w.sd_g).map_err(e2s)?.matrix;
    let m2 = conjugation_action(&g2, &w.sd_h).map_err(e2s)?.matrix;
    ensure(m1.to_full() == vec![vec![2]] && m2.to_full() == vec![vec![4]], || "unexpected action matrices".into())?;
    ensure(conjugate_blocks(&m1, &m2, 3).map_err(e2s)?.is_none(), || "k = 1 conjugate".into())?;
    ensure(m2.pow(2).to_full() == vec![vec![2]], || "(4)^2 is not (2)".into())?;
    ensure(conjugate_blocks(&m1, &m2.pow(2), 3).map_err(e2s)?.is_some(), || "k = 2 not conjugate".into())?;

    let mu = build_mu(&g1, &g2, &w).map_err(e2s)?;
    let f = |x: &ElementCode| mu.apply(x);
    ensure(verify_isomorphism(&g1, &g2, &f, VerifyMode::Exhaustive).map_err(e2s)?, || "μ failed".into())?;
    // pairs covered by the exhaustive check
    let n = grpext::iso::enumerate_elements(&g1, 1 << 10).map_err(e2s)?.len();
    ensure(n * n == 441, || format!("{} pairs", n * n))?;
    // the literal map x1 ↦ x2, y1 ↦ y2^2
    let literal = |x: &ElementCode| -> grpext::Result<ElementCode> {
        let (a, j) = b1.decode(x)?;
        Ok(b2.encode(&a, (2 * j) % 3))
    };
    ensure(verify_isomorphism(&g1, &g2, &literal, VerifyMode::Exhaustive).map_err(e2s)?, || {
        "literal map failed".into()
    })?;
    ensure(mu.apply(&b1.encode(&[0], 1)).map_err(e2s)? == b2.encode(&[0], 2), || "μ(y1) ≠ y2^2".into())?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!("k = 2, k = 1 rejected, μ checked on {} pairs in {:?}", n * n, t.elapsed()))
}

fn c4_oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let entries = corpus();
    ensure(entries.len() >= 30, || format!("corpus has {} groups", entries.len()))?;
    let handles: Vec<GroupHandle> = entries.iter().map(|e| e.handle()).collect();
    let tables: Vec<CayleyTable> = handles
        .iter()
        .map(|h| CayleyTable::from_handle(h, 1 << 12))
        .collect::<grpext::Result<_>>()
        .map_err(e2s)?;
    let mut pairs = 0;
    let mut yes = 0;
    for i in 0..entries.len() {
        ensure(tables[i].n() <= 200, || format!("{} too large", entries[i].name))?;
        for j in i..entries.len() {
            let (g, h) = (&handles[i], &handles[j]);
            let r = isomorphic(g, h).map_err(|e| format!("{} / {}: {e:?}", entries[i].name, entries[j].name))?;
            let brute = brute_isomorphic(&tables[i], &tables[j]);
            ensure(r.is_isomorphic() == brute, || {
                format!("{} / {}: got {r:?}, oracle {brute}", entries[i].name, entries[j].name)
            })?;
            if let IsoResult::Isomorphic(w) = &r {
                let mu = build_mu(g, h, w).map_err(e2s)?;
                let f = |x: &ElementCode| mu.apply(x);
                ensure(verify_isomorphism(g, h, &f, VerifyMode::Exhaustive).map_err(e2s)?, || {
                    format!("{} / {}: witness fails", entries[i].name, entries[j].name)
                })?;
                yes += 1;
            }
            pairs += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(1800))?;
    Ok(format!(
        "{} groups, {pairs} pairs agree ({yes} isomorphic, witnesses verified) in {:?}",
        entries.len(),
        t.elapsed()
    ))
}

/// A random unit whose order is coprime with `p`: strip the `p`-part of the order.
fn random_p_regular(t: &PType, rng: &mut impl Rng) -> AutMatrix {
    let u = random_unit(t, rng);
    let cap = t.aut_order() as u64;
    let mut n = u.order(cap).expect("order divides |R(A)|");
    let mut v = u;
    while n.is_multiple_of(t.p()) {
        v = v.pow(t.p());
        n /= t.p();
    }
    v
}

fn c5_conjugacy_round_trip() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let types = [
        PType::new(3, vec![1, 2]),
        PType::new(2, vec![1, 1, 1]),
        PType::new(5, vec![1, 1]),
        PType::new(2, vec![1, 2, 3]),
    ];
    let mut total = 0;
    for ptype in types {
        let ptype = ptype.map_err(e2s)?;
        let cap = ptype.aut_order() as u64;
        for _ in 0..30 {
            let u1 = random_p_regular(&ptype, &mut rng);
            let x = random_unit(&ptype, &mut rng);
            let u2 = x.star_mul(&u1).and_then(|y| y.star_mul(&x.inverse()?)).map_err(e2s)?;
            let u = conjugacy(&ptype, &u1, &u2, cap)
                .map_err(e2s)?
                .ok_or_else(|| format!("type {ptype}: no conjugator found"))?;
            let lhs = u.star_mul(&u1).map_err(e2s)?;
            let rhs = u2.star_mul(&u).map_err(e2s)?;
            ensure(u.is_in_r() && lhs == rhs, || format!("type {ptype}: bad conjugator"))?;
            total += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{total} triples over 4 types in {:?}", t.elapsed()))
}

/// A random element of the kernel pattern: diagonal blocks congruent to I mod p.
fn random_kernel(t: &PType, rng: &mut impl Rng) -> AutMatrix {
    let s = t.s();
    let blocks = t.blocks();
    let block = |i: usize| blocks.iter().position(|b| i >= b.start && i < b.start + b.len).unwrap();
    let rows: Vec<Vec<u64>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    let q = t.modulus(i);
                    let d = if block(i) == block(j) { 1 } else { t.divisibility_exp(i, j) };
                    let step = t.p().pow(d).min(q);
                    let v = rng.gen_range(0..q / step) * step;
                    (v + u64::from(i == j)) % q
                })
                .collect()
        })
        .collect();
    AutMatrix::validate(t, &rows).expect("kernel pattern is valid")
}

fn c6_psi() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let types = [
        PType::new(3, vec![1, 2]),
        PType::new(2, vec![1, 1, 1]),
        PType::new(5, vec![1, 1]),
        PType::new(2, vec![1, 2, 3]),
        PType::new(3, vec![1, 2, 2, 5]),
        PType::new(2, vec![2, 2, 3, 3]),
        PType::new(7, vec![1]),
    ];
    let mut kernel_checks = 0;
    for ptype in types {
        let ptype = ptype.map_err(e2s)?;
        for _ in 0..1000 {
            let (u, v) = (random_unit(&ptype, &mut rng), random_unit(&ptype, &mut rng));
            let uv = u.star_mul(&v).map_err(e2s)?;
            let lhs = uv.psi().map_err(e2s)?;
            let rhs = u.psi().map_err(e2s)?.mul(&v.psi().map_err(e2s)?);
            ensure(lhs == rhs, || format!("type {ptype}: Ψ not multiplicative"))?;
            for w in [u, random_kernel(&ptype, &mut rng)] {
                let psi_id = w.psi().map_err(e2s)?.is_identity();
                ensure(psi_id == w.is_in_kernel_pattern(), || format!("type {ptype}: kernel test differs"))?;
                kernel_checks += 1;
            }
        }
    }
    // exhaustive kernel test on small types
    for orders in [vec![2, 4], vec![3, 3], vec![9], vec![2, 2, 2], vec![2, 4, 4]] {
        let ptype = PType::from_orders(&orders).map_err(e2s)?;
        for u in enumerate_r(&ptype).map_err(e2s)? {
            ensure(u.psi().map_err(e2s)?.is_identity() == u.is_in_kernel_pattern(), || {
                format!("type {ptype}: kernel test differs")
            })?;
            kernel_checks += 1;
        }
    }
    Ok(format!("7 types × 1000 pairs, {kernel_checks} kernel checks in {:?}", t.elapsed()))
}

fn c7_ranum_counts() -> Outcome {
    let mut parts = Vec::new();
    for orders in [vec![2, 4], vec![3, 3], vec![9], vec![2, 2, 2]] {
        let ptype = PType::from_orders(&orders).map_err(e2s)?;
        let n = enumerate_r(&ptype).map_err(e2s)?.len() as u64;
        let brute = brute_abelian_aut_count(&orders);
        ensure(n == brute, || format!("{orders:?}: {n} matrices, {brute} automorphisms"))?;
        parts.push(format!("{orders:?}: {n}"));
    }
    Ok(parts.join(", "))
}

/// Fixed in advance; the baby and giant step phases each stay within a few `√n`.
const SCALING_C: f64 = 8.0;

fn c8_scaling() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for n in [100usize, 1_000, 10_000, 100_000, 1_000_000] {
        let g = cyclic_handle(n);
        let gen = g.generators()[0].clone();
        let mut elems = vec![(1u64, gen.clone())];
        for _ in 0..5 {
            let e = rng.gen_range(1..n as u64);
            elems.push((e, g.pow(&gen, e).map_err(e2s)?));
        }
        for (e, x) in elems {
            g.reset_ops();
            let ord = element_order(&g, &x).map_err(e2s)?;
            let count = g.ops() as f64;
            let want = n as u64 / gcd(n as u64, e);
            ensure(ord == want, || format!("n = {n}: order {ord}, expected {want}"))?;
            let bound = (n as f64).sqrt() * (1.0 + (n as f64).log2());
            worst = worst.max(count / bound);
            ensure(count <= SCALING_C * bound, || format!("n = {n}: {count} calls exceed bound {:.0}", SCALING_C * bound))?;
        }
    }
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!("C = {SCALING_C}, largest ratio {worst:.3} in {:?}", t.elapsed()))
}

const GENERATING_SETS: usize = 5;

fn c9_decomposition_contracts() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let entries = corpus();
    for e in &entries {
        let g = e.handle();
        let fail = |msg: String| format!("{}: {msg}", e.name);
        let table = CayleyTable::from_handle(&g, 1 << 14).map_err(e2s)?;
        let sd = standard_decomposition(&g).map_err(|x| fail(e2s(x)))?;
        let basis = &sd.a_basis;
        // abelian and normal
        ensure(g.all_commute(&basis.elements).map_err(e2s)?, || fail("A not abelian".into()))?;
        let dec = Decomposer::new(&g, basis).map_err(e2s)?;
        for s in g.generators() {
            for a in &basis.elements {
                ensure(dec.contains(&g.conjugate(s, a).map_err(e2s)?).map_err(e2s)?, || fail("A not normal".into()))?;
            }
        }
        // cyclic complement of coprime order
        let y_order = element_order(&g, &sd.y).map_err(e2s)?;
        ensure(y_order == sd.gamma, || fail(format!("|y| = {y_order}, γ = {}", sd.gamma)))?;
        let a_order = sd.a_order();
        ensure(gcd(a_order as u64, sd.gamma) == 1, || fail("orders not coprime".into()))?;
        let a_idx: Vec<usize> = basis.elements.iter().map(|x| table.index[x]).collect();
        let a_mask = table.closure(&a_idx);
        let a_size = a_mask.iter().filter(|&&b| b).count() as u128;
        ensure(a_size == a_order, || fail(format!("basis spans {a_size}, claims {a_order}")))?;
        ensure(a_order * sd.gamma as u128 == table.n() as u128, || fail("A⟨y⟩ is not G".into()))?;
        // minimality
        ensure(brute_gamma(&table) == Some(sd.gamma), || fail(format!("γ = {}, oracle differs", sd.gamma)))?;
        ensure(brute_abelian_part(&table, sd.gamma).as_ref() == Some(&a_mask), || fail("A differs from oracle".into()))?;
        // uniqueness of A across generating sets
        for _ in 0..GENERATING_SETS {
            let other = loop {
                let gens = random_generating_set(&table, &mut rng);
                if gens != table.gens {
                    break gens;
                }
            };
            let g2 = g.with_generators(other.iter().map(|&i| table.elements[i].clone()).collect());
            let sd2 = standard_decomposition(&g2).map_err(|x| fail(e2s(x)))?;
            let idx2: Vec<usize> = sd2.a_basis.elements.iter().map(|x| table.index[x]).collect();
            ensure(sd2.gamma == sd.gamma && table.closure(&idx2) == a_mask, || {
                fail(format!("A depends on the generating set {other:?}"))
            })?;
        }
    }
    Ok(format!("{} groups, {GENERATING_SETS} extra generating sets each, in {:?}", entries.len(), t.elapsed()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("class count for r = 4", c1_headline),
        ("class counts vs brute force", c2_brute_force_classes),
        ("order-21 pair", c3_order21_pair),
        ("isomorphism vs oracle on corpus", c4_oracle_equivalence),
        ("conjugacy round trip", c5_conjugacy_round_trip),
        ("Ψ homomorphism and kernel", c6_psi),
        ("matrix ring vs automorphism count", c7_ranum_counts),
        ("element order scaling", c8_scaling),
        ("decomposition contracts", c9_decomposition_contracts),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

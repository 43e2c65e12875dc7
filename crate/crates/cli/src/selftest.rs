//! Small oracle suites: each compares a library result against an
//! exhaustive computation on groups small enough to enumerate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use grpext::autring::{conjugacy, enumerate_r, random_unit, PType};
use grpext::blackbox::{GroupHandle, GroupSpec, SemidirectGroupSpec};
use grpext::classes::{brute_force_class_count, count_classes};
use grpext::corpus::corpus;
use grpext::iso::{build_mu, isomorphic, verify_isomorphism, IsoResult, VerifyMode};
use grpext::oracle::{brute_abelian_aut_count, brute_gamma, brute_isomorphic, CayleyTable};
use grpext::Result;

use crate::report::Report;
use crate::{Failure, Out};

type Check = Result<std::result::Result<String, String>>;
type Suite = (&'static str, fn() -> Check);

fn class_counts() -> Check {
    for r in 1..=2 {
        let brute = brute_force_class_count(&PType::new(3, vec![1; r])?, 4)?;
        if brute != count_classes(r) {
            return Ok(Err(format!("r = {r}: brute force {brute}, formula {}", count_classes(r))));
        }
    }
    Ok(Ok("r = 1, 2".into()))
}

fn order21_pair() -> Check {
    let make = |c| -> Result<GroupHandle> {
        Ok(GroupSpec::Semidirect(SemidirectGroupSpec::from_rows(vec![7], 3, &[vec![c]])?).into_handle())
    };
    let (g, h) = (make(2)?, make(4)?);
    let IsoResult::Isomorphic(w) = isomorphic(&g, &h)? else {
        return Ok(Err("not isomorphic".into()));
    };
    let mu = build_mu(&g, &h, &w)?;
    let ok = verify_isomorphism(&g, &h, &|x| mu.apply(x), VerifyMode::Exhaustive)?;
    Ok(if w.k == 2 && ok { Ok("k 2".into()) } else { Err(format!("k {} check {ok}", w.k)) })
}

fn ring_sizes() -> Check {
    for orders in [vec![2, 4], vec![3, 3], vec![9], vec![2, 2, 2]] {
        let n = enumerate_r(&PType::from_orders(&orders)?)?.len() as u64;
        let brute = brute_abelian_aut_count(&orders);
        if n != brute {
            return Ok(Err(format!("{orders:?}: {n} vs {brute}")));
        }
    }
    Ok(Ok("4 types".into()))
}

fn psi_and_conjugacy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (p, exps) in [(3, vec![1, 2]), (2, vec![1, 1, 1]), (5, vec![1, 1]), (2, vec![1, 2, 3])] {
        let t = PType::new(p, exps)?;
        let cap = t.aut_order() as u64;
        for _ in 0..200 {
            let (u, v) = (random_unit(&t, &mut rng), random_unit(&t, &mut rng));
            if u.star_mul(&v)?.psi()? != u.psi()?.mul(&v.psi()?) {
                return Ok(Err(format!("type {t}: Ψ not multiplicative")));
            }
        }
        for _ in 0..25 {
            let mut u1 = random_unit(&t, &mut rng);
            // drop the p-part of the order so condition 3 holds
            while u1.order(cap).is_some_and(|n| n % p == 0) {
                u1 = u1.pow(p);
            }
            let x = random_unit(&t, &mut rng);
            let u2 = x.star_mul(&u1)?.star_mul(&x.inverse()?)?;
            match conjugacy(&t, &u1, &u2, cap)? {
                Some(c) if c.star_mul(&u1)? == u2.star_mul(&c)? => {}
                _ => return Ok(Err(format!("type {t}: conjugate pair missed"))),
            }
        }
    }
    Ok(Ok("4 types".into()))
}

fn corpus_agreement() -> Check {
    let entries = corpus();
    let handles: Vec<GroupHandle> = entries.iter().map(|e| e.handle()).collect();
    let tables: Vec<CayleyTable> = handles.iter().map(|h| CayleyTable::from_handle(h, 1 << 12)).collect::<Result<_>>()?;
    let mut pairs = 0;
    for i in 0..entries.len() {
        if brute_gamma(&tables[i]) != Some(entries[i].gamma) {
            return Ok(Err(format!("{}: gamma", entries[i].name)));
        }
        for j in i + 1..entries.len() {
            if tables[i].n() != tables[j].n() {
                continue;
            }
            pairs += 1;
            if isomorphic(&handles[i], &handles[j])?.is_isomorphic() != brute_isomorphic(&tables[i], &tables[j]) {
                return Ok(Err(format!("{} / {}", entries[i].name, entries[j].name)));
            }
        }
    }
    Ok(Ok(format!("{} groups, {pairs} equal-order pairs", entries.len())))
}

pub fn run() -> Out {
    let mut r = Report::new("selftest");
    let suites: [Suite; 5] = [
        ("class-counts", class_counts),
        ("order21-pair", order21_pair),
        ("ring-sizes", ring_sizes),
        ("psi-and-conjugacy", psi_and_conjugacy),
        ("corpus-agreement", corpus_agreement),
    ];
    let mut failed = 0;
    for (name, f) in suites {
        match f() {
            Ok(Ok(detail)) => r.line("suite", format!("{name} pass {detail}")),
            Ok(Err(why)) => {
                failed += 1;
                r.line("suite", format!("{name} fail {why}"));
            }
            Err(e) => {
                failed += 1;
                r.line("suite", format!("{name} error {e}"));
            }
        }
    }
    r.line("failed", failed);
    if failed > 0 {
        return Err(Failure {
            code: 1,
            msg: format!("{failed} selftest suites failed"),
            report: Some(r.finish()),
        });
    }
    Ok(r.finish())
}

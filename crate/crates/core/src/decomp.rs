//! Splitting a group in the class as `A ⋊ ⟨z⟩`, and the standard
//! decomposition with the smallest cyclic part.

use crate::abelian::{abelian_basis, element_order, AbelianBasis, Decomposer};
use crate::arith::{divisors, gcd, lcm_list, trial_factor};
use crate::blackbox::{commutator_generators, ElementCode, GroupHandle};
use crate::error::{Error, Result};

/// A pair `(⟨M⟩, ⟨z⟩)` with `⟨M⟩` abelian and normal, `|z| = m` and
/// `gcd(|⟨M⟩|, m) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateDecomposition {
    pub m: u64,
    pub generators: Vec<ElementCode>,
    pub z: ElementCode,
    pub a_basis: AbelianBasis,
    pub a_order: u128,
}

/// Outcome of one divisor in the standard decomposition search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub m: u64,
    /// `m · |⟨M⟩|` on success, or the step that failed.
    pub outcome: std::result::Result<u128, u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardDecomposition {
    pub gamma: u64,
    pub a_basis: AbelianBasis,
    pub y: ElementCode,
    /// `|G|`, the largest `m · |⟨M⟩|` over all divisors.
    pub group_order: u128,
    pub candidates: Vec<CandidateReport>,
}

impl StandardDecomposition {
    pub fn a_order(&self) -> u128 {
        self.a_basis.group_order()
    }
}

/// Data shared by every `m`: a basis of the derived subgroup and generator orders.
struct Prepared {
    derived: Option<AbelianBasis>,
    gen_orders: Vec<u64>,
}

fn prepare(g: &GroupHandle) -> Result<Prepared> {
    let derived = match derived_basis(g) {
        Ok(b) => Some(b),
        Err(Error::NotAbelian) => None,
        Err(e) => return Err(e),
    };
    let gen_orders = g
        .generators()
        .iter()
        .map(|x| element_order(g, x))
        .collect::<Result<_>>()?;
    Ok(Prepared { derived, gen_orders })
}

/// A basis of `G'`, or [`Error::NotAbelian`] if it is not abelian.
///
/// Starts from the generator commutators and their conjugates, then adds
/// conjugates by generators until the span is normal, which makes it the
/// normal closure of the commutators.
pub fn derived_basis(g: &GroupHandle) -> Result<AbelianBasis> {
    let mut elems = commutator_generators(g)?;
    loop {
        let basis = abelian_basis(&elems, g)?;
        let dec = Decomposer::new(g, &basis)?;
        let mut grew = false;
        for s in g.generators() {
            for x in &basis.elements {
                let c = g.conjugate(s, x)?;
                if !dec.contains(&c)? {
                    elems.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            return Ok(basis);
        }
    }
}

/// Look for a decomposition with cyclic part of order `m`; returns
/// [`Error::NoDecomposition`] carrying the failing step when none is found.
pub fn find_decomposition(g: &GroupHandle, m: u64) -> Result<CandidateDecomposition> {
    if m == 0 {
        return Err(Error::Malformed("m must be positive".into()));
    }
    let prep = prepare(g)?;
    find_with(g, m, &prep)
}

fn find_with(g: &GroupHandle, m: u64, prep: &Prepared) -> Result<CandidateDecomposition> {
    let fail = |step| Err(Error::NoDecomposition { m, step });
    // the derived subgroup of a group in the class is abelian
    let Some(derived) = &prep.derived else {
        return fail(1);
    };
    let gens = g.generators();

    let mut gbar = g.identity().clone();
    for (p, e) in trial_factor(m).factors {
        let q = p.pow(e);
        let Some(k) = prep.gen_orders.iter().position(|&n| n % q == 0) else {
            return fail(5);
        };
        let t = g.pow(&gens[k], prep.gen_orders[k] / q)?;
        gbar = g.mul(&gbar, &t)?;
    }
    let n = element_order(g, &gbar)?;
    if n % m != 0 {
        return fail(9);
    }
    let z = g.pow(&gbar, n / m)?;

    let h: Vec<ElementCode> = gens.iter().map(|x| g.pow(x, m)).collect::<Result<_>>()?;
    let mut generators: Vec<ElementCode> = derived.elements.clone();
    generators.extend(h.iter().cloned());
    if !g.all_commute(&generators)? {
        return fail(15);
    }
    if derived.orders.iter().any(|&q| gcd(q, m) != 1) {
        return fail(15);
    }
    for x in &h {
        if gcd(element_order(g, x)?, m) != 1 {
            return fail(15);
        }
    }
    let a_basis = abelian_basis(&generators, g)?;
    Ok(CandidateDecomposition {
        m,
        generators,
        z,
        a_order: a_basis.group_order(),
        a_basis,
    })
}

/// The decomposition with the smallest `m` among those achieving
/// `m · |⟨M⟩| = |G|`, trying every divisor of the lcm of generator orders.
pub fn standard_decomposition(g: &GroupHandle) -> Result<StandardDecomposition> {
    let prep = prepare(g)?;
    let mbar = if prep.gen_orders.is_empty() { 1 } else { lcm_list(&prep.gen_orders) };
    let mut best: Option<CandidateDecomposition> = None;
    let mut best_n: u128 = 0;
    let mut candidates = Vec::new();
    for m in divisors(mbar) {
        match find_with(g, m, &prep) {
            Ok(c) => {
                let n = m as u128 * c.a_order;
                candidates.push(CandidateReport { m, outcome: Ok(n) });
                // divisors ascend, so a strict improvement keeps the smallest m
                if n > best_n {
                    best_n = n;
                    best = Some(c);
                }
            }
            Err(Error::NoDecomposition { step, .. }) => candidates.push(CandidateReport { m, outcome: Err(step) }),
            Err(e) => return Err(e),
        }
    }
    let best = best.ok_or(Error::NotInClass)?;
    if !covers_generators(g, &best)? {
        // only a proper subgroup split; the input is outside the class
        return Err(Error::NotInClass);
    }
    Ok(StandardDecomposition {
        gamma: best.m,
        a_basis: best.a_basis,
        y: best.z,
        group_order: best_n,
        candidates,
    })
}

/// Whether every generator lies in `⟨M⟩·⟨z⟩`, i.e. the candidate splits all of `G`.
fn covers_generators(g: &GroupHandle, c: &CandidateDecomposition) -> Result<bool> {
    let dec = Decomposer::new(g, &c.a_basis)?;
    let zi = g.inv(&c.z)?;
    'gens: for x in g.generators() {
        let mut cur = x.clone();
        for _ in 0..c.m {
            if dec.contains(&cur)? {
                continue 'gens;
            }
            cur = g.mul(&cur, &zi)?;
        }
        return Ok(false);
    }
    Ok(true)
}

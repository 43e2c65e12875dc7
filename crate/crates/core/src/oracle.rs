//! Exhaustive reference implementations for small groups. These work on
//! full Cayley tables and share no code with the black-box algorithms, so
//! they serve as independent checks.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::blackbox::{ElementCode, GroupHandle, TableGroupSpec};
use crate::error::{Error, Result};

/// A Cayley table extracted from a black-box group; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    pub elements: Vec<ElementCode>,
    pub index: HashMap<ElementCode, usize>,
    pub table: Vec<u32>,
    pub gens: Vec<usize>,
}

impl CayleyTable {
    pub fn from_handle(g: &GroupHandle, cap: usize) -> Result<Self> {
        let mut elements = vec![g.identity().clone()];
        let mut index = HashMap::from([(g.identity().clone(), 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for s in g.generators() {
                let y = g.mul(&x, s)?;
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::TooLarge(format!("more than {cap} elements")));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&g.mul(&elements[a], &elements[b])?] as u32;
            }
        }
        let gens = g.generators().iter().map(|x| index[x]).collect();
        Ok(CayleyTable {
            elements,
            index,
            table,
            gens,
        })
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n() + b] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn orders(&self) -> Vec<u64> {
        (0..self.n()).map(|a| self.order(a)).collect()
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n()).find(|&b| self.mul(a, b) == 0).unwrap()
    }

    /// Closure of a set, as a membership mask.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.n()];
        inside[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        inside
    }

    pub fn index_of(&self, x: &ElementCode) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// A table spec on new labels: element `i` becomes `perm[i]`, which must fix 0.
    pub fn relabeled_spec(&self, perm: &[usize]) -> Result<TableGroupSpec> {
        let n = self.n();
        if perm.len() != n || perm[0] != 0 {
            return Err(Error::Malformed("relabeling must fix the identity".into()));
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u32;
            }
        }
        TableGroupSpec::new(n, table)
    }

    /// A relabeling with a random permutation of the non-identity elements.
    pub fn shuffled_spec(&self, rng: &mut impl Rng) -> Result<TableGroupSpec> {
        let mut rest: Vec<usize> = (1..self.n()).collect();
        rest.shuffle(rng);
        let perm: Vec<usize> = std::iter::once(0).chain(rest).collect();
        self.relabeled_spec(&perm)
    }
}

/// Greedy small generating set: add the element of largest order outside the
/// current subgroup.
fn small_generators(t: &CayleyTable, orders: &[u64]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = t.closure(&gens);
    let mut by_order: Vec<usize> = (1..t.n()).collect();
    by_order.sort_by_key(|&a| std::cmp::Reverse(orders[a]));
    while let Some(&x) = by_order.iter().find(|&&a| !inside[a]) {
        gens.push(x);
        inside = t.closure(&gens);
    }
    gens
}

fn histogram(orders: &[u64]) -> Vec<u64> {
    let mut h = orders.to_vec();
    h.sort_unstable();
    h
}

/// An isomorphism `a → b` as an index map, found by backtracking over images
/// of a small generating set of `a`, or `None`.
pub fn brute_isomorphism(a: &CayleyTable, b: &CayleyTable) -> Option<Vec<usize>> {
    if a.n() != b.n() {
        return None;
    }
    let (oa, ob) = (a.orders(), b.orders());
    if histogram(&oa) != histogram(&ob) {
        return None;
    }
    let gens = small_generators(a, &oa);
    let mut images = Vec::with_capacity(gens.len());
    search(a, b, &oa, &ob, &gens, &mut images)
}

fn search(
    a: &CayleyTable,
    b: &CayleyTable,
    oa: &[u64],
    ob: &[u64],
    gens: &[usize],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = images.len();
    {
        let map = extend(a, b, &gens[..k], images)?;
        if k == gens.len() {
            return (map.iter().all(|&x| x != usize::MAX)).then_some(map);
        }
    }
    let want = oa[gens[k]];
    for cand in 0..b.n() {
        if ob[cand] != want || images.contains(&cand) {
            continue;
        }
        images.push(cand);
        if let Some(m) = search(a, b, oa, ob, gens, images) {
            return Some(m);
        }
        images.pop();
    }
    None
}

/// The homomorphism on `⟨gens⟩` determined by `images`, if it is consistent
/// and injective.
fn extend(a: &CayleyTable, b: &CayleyTable, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.n()];
    let mut used = vec![false; b.n()];
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&g, &h) in gens.iter().zip(images) {
            let y = a.mul(x, g);
            let fy = b.mul(map[x], h);
            if map[y] == usize::MAX {
                if used[fy] {
                    return None;
                }
                map[y] = fy;
                used[fy] = true;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

pub fn brute_isomorphic(a: &CayleyTable, b: &CayleyTable) -> bool {
    brute_isomorphism(a, b).is_some()
}

/// Smallest `m` for which the group is `A ⋊ Z_m` with `A` abelian and
/// `gcd(|A|, m) = 1`, or `None` if there is none.
///
/// Such an `A` is a normal Hall subgroup, hence equal to the set of elements
/// whose order divides `|A|`; the test is then closure, commutativity and the
/// existence of an element of order `m`.
pub fn brute_gamma(t: &CayleyTable) -> Option<u64> {
    let n = t.n() as u64;
    let orders = t.orders();
    (1..=n)
        .filter(|m| n.is_multiple_of(*m) && num_integer::gcd(*m, n / m) == 1)
        .find(|&m| split_exists(t, &orders, m))
}

/// The normal Hall subgroup of order `|G|/m`, as a mask, if it exists and
/// has an abelian, cyclic-complement split.
pub fn brute_abelian_part(t: &CayleyTable, m: u64) -> Option<Vec<bool>> {
    let orders = t.orders();
    split_exists(t, &orders, m).then(|| hall_set(t, &orders, m))
}

fn hall_set(t: &CayleyTable, orders: &[u64], m: u64) -> Vec<bool> {
    let a = t.n() as u64 / m;
    (0..t.n()).map(|x| a.is_multiple_of(orders[x])).collect()
}

fn split_exists(t: &CayleyTable, orders: &[u64], m: u64) -> bool {
    let a = t.n() as u64 / m;
    let set: Vec<usize> = (0..t.n()).filter(|&x| a.is_multiple_of(orders[x])).collect();
    if set.len() as u64 != a {
        return false;
    }
    let mask = hall_set(t, orders, m);
    for &x in &set {
        for &y in &set {
            let xy = t.mul(x, y);
            if !mask[xy] || xy != t.mul(y, x) {
                return false;
            }
        }
    }
    orders.contains(&m)
}

/// Number of automorphisms of `Z_{q_1} × … × Z_{q_s}` by enumerating images
/// of the standard generators.
pub fn brute_abelian_aut_count(orders: &[u64]) -> u64 {
    let s = orders.len();
    let size: u64 = orders.iter().product();
    let decode = |mut x: u64| -> Vec<u64> {
        orders
            .iter()
            .map(|&q| {
                let c = x % q;
                x /= q;
                c
            })
            .collect()
    };
    let elem_order = |v: &[u64]| -> u64 {
        let mut k = 1u64;
        while !v.iter().zip(orders).all(|(&c, &q)| (c * k).is_multiple_of(q)) {
            k += 1;
        }
        k
    };
    // candidates for the image of generator j: orders dividing q_j
    let cands: Vec<Vec<Vec<u64>>> = orders
        .iter()
        .map(|&q| {
            (0..size)
                .map(decode)
                .filter(|v| q % elem_order(v) == 0)
                .collect()
        })
        .collect();
    let mut count = 0u64;
    let mut idx = vec![0usize; s];
    loop {
        let imgs: Vec<&Vec<u64>> = (0..s).map(|j| &cands[j][idx[j]]).collect();
        // the image subgroup: all combinations Σ c_j v_j
        let mut seen = vec![false; size as usize];
        let mut c = vec![0u64; s];
        let mut hits = 0u64;
        loop {
            let v: Vec<u64> = (0..orders.len())
                .map(|i| (0..s).map(|j| c[j] * imgs[j][i]).sum::<u64>() % orders[i])
                .collect();
            let key = v.iter().zip(orders).rev().fold(0u64, |acc, (&x, &q)| acc * q + x);
            if !seen[key as usize] {
                seen[key as usize] = true;
                hits += 1;
            }
            let mut k = 0;
            loop {
                if k == s {
                    break;
                }
                c[k] += 1;
                if c[k] < orders[k] {
                    break;
                }
                c[k] = 0;
                k += 1;
            }
            if k == s {
                break;
            }
        }
        if hits == size {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == s {
                return count;
            }
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A random generating set of a small group, built by adding random
/// elements until they generate.
pub fn random_generating_set(t: &CayleyTable, rng: &mut impl Rng) -> Vec<usize> {
    let mut gens = Vec::new();
    loop {
        if t.closure(&gens).iter().all(|&b| b) {
            return gens;
        }
        gens.push(rng.gen_range(1..t.n().max(2)).min(t.n() - 1));
    }
}

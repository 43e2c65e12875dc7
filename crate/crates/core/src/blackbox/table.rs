use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Backend, ElementCode};
use crate::error::{Error, Result};

/// A multiplication table on `{0, .., n-1}` with 0 as the identity, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGroupSpec {
    pub n: usize,
    pub table: Vec<u32>,
}

const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;
const SAMPLED_ASSOC_TRIPLES: usize = 200_000;

impl TableGroupSpec {
    pub fn new(n: usize, table: Vec<u32>) -> Result<Self> {
        let spec = TableGroupSpec { n, table };
        spec.validate()?;
        Ok(spec)
    }

    #[inline]
    fn at(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Malformed("table group of order 0".into()));
        }
        if self.table.len() != n * n {
            return Err(Error::Malformed(format!(
                "table has {} entries, expected {}",
                self.table.len(),
                n * n
            )));
        }
        if let Some(x) = self.table.iter().find(|&&x| x as usize >= n) {
            return Err(Error::Malformed(format!("table entry {x} out of range")));
        }
        for i in 0..n {
            if self.at(0, i) != i || self.at(i, 0) != i {
                return Err(Error::Malformed(format!("index 0 is not an identity at {i}")));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let x = self.at(i, j);
                if seen[x] == i {
                    return Err(Error::Malformed(format!("row {i} repeats entry {x}")));
                }
                seen[x] = i;
            }
        }
        seen.fill(usize::MAX);
        for j in 0..n {
            for i in 0..n {
                let x = self.at(i, j);
                if seen[x] == j {
                    return Err(Error::Malformed(format!("column {j} repeats entry {x}")));
                }
                seen[x] = j;
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.at(self.at(a, b), c) != self.at(a, self.at(b, c)) {
                return Err(Error::Malformed(format!("associativity fails at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }
}

enum Kind {
    Explicit { table: Vec<u32>, inverses: Vec<u32> },
    Cyclic,
}

/// Backend over a Cayley table, or over `Z_n` computed arithmetically when
/// the table would be too large to store.
pub struct TableGroup {
    n: usize,
    width: usize,
    kind: Kind,
    gens: Vec<usize>,
}

fn digits(mut x: usize) -> usize {
    let mut d = 1;
    while x >= 10 {
        x /= 10;
        d += 1;
    }
    d
}

impl TableGroup {
    pub fn new(spec: TableGroupSpec) -> Self {
        let n = spec.n;
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if spec.at(a, b) == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        let gens = greedy_generators(n, |a, b| spec.at(a, b));
        TableGroup {
            n,
            width: digits(n.saturating_sub(1)),
            kind: Kind::Explicit {
                table: spec.table,
                inverses,
            },
            gens,
        }
    }

    /// `Z_n` under addition, generated by 1.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        TableGroup {
            n,
            width: digits(n - 1),
            kind: Kind::Cyclic,
            gens: if n > 1 { vec![1] } else { vec![] },
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn code(&self, index: usize) -> ElementCode {
        ElementCode::new(format!("{:0w$}", index, w = self.width).into_bytes())
    }

    pub fn index(&self, code: &ElementCode) -> Result<usize> {
        let bytes = code.as_bytes();
        if bytes.len() != self.width || !bytes.iter().all(u8::is_ascii_digit) {
            return Err(Error::Malformed(format!("unknown element code {code}")));
        }
        let v = bytes.iter().fold(0usize, |acc, &c| acc * 10 + usize::from(c - b'0'));
        if v >= self.n {
            return Err(Error::Malformed(format!("unknown element code {code}")));
        }
        Ok(v)
    }

    /// Override the generating set by element indices.
    pub fn set_generators(&mut self, gens: Vec<usize>) -> Result<()> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.n) {
            return Err(Error::Malformed(format!("generator {g} out of range")));
        }
        self.gens = gens;
        Ok(())
    }

    fn mul_idx(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            Kind::Explicit { table, .. } => table[a * self.n + b] as usize,
            Kind::Cyclic => {
                let s = a + b;
                if s >= self.n {
                    s - self.n
                } else {
                    s
                }
            }
        }
    }
}

/// Repeatedly add the smallest element outside the current subgroup.
fn greedy_generators(n: usize, mul: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut members = vec![0usize];
    let mut gens = Vec::new();
    for cand in 1..n {
        if inside[cand] {
            continue;
        }
        gens.push(cand);
        // closure of the enlarged set: BFS over right multiplication by generators
        let mut queue: Vec<usize> = members.clone();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in &gens {
                let y = mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                    queue.push(y);
                }
            }
        }
    }
    gens
}

impl Backend for TableGroup {
    fn identity(&self) -> ElementCode {
        self.code(0)
    }

    fn mul(&self, a: &ElementCode, b: &ElementCode) -> Result<ElementCode> {
        let (a, b) = (self.index(a)?, self.index(b)?);
        Ok(self.code(self.mul_idx(a, b)))
    }

    fn inv(&self, a: &ElementCode) -> Result<ElementCode> {
        let a = self.index(a)?;
        let r = match &self.kind {
            Kind::Explicit { inverses, .. } => inverses[a] as usize,
            Kind::Cyclic => (self.n - a) % self.n,
        };
        Ok(self.code(r))
    }

    fn default_generators(&self) -> Vec<ElementCode> {
        self.gens.iter().map(|&g| self.code(g)).collect()
    }

    fn code_len(&self) -> usize {
        self.width
    }

    fn parse_element(&self, literal: &str) -> Result<ElementCode> {
        let v: usize = literal
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("bad element index {literal:?}")))?;
        if v >= self.n {
            return Err(Error::Malformed(format!("element index {v} out of range")));
        }
        Ok(self.code(v))
    }
}

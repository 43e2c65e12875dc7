//! A fixed collection of small groups in the class, in several presentations,
//! used by the test suites and `selftest`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blackbox::{GroupHandle, GroupSpec, SemidirectGroupSpec, TableGroup, TableGroupSpec};
use crate::oracle::CayleyTable;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    /// Isomorphism type label; entries with equal labels are isomorphic.
    pub class: &'static str,
    pub gamma: u64,
    pub spec: GroupSpec,
}

impl CorpusEntry {
    pub fn handle(&self) -> GroupHandle {
        self.spec.clone().into_handle()
    }

    pub fn order(&self) -> u128 {
        self.spec.order()
    }
}

fn diag(orders: &[u64], d: &[u64]) -> Vec<Vec<u64>> {
    (0..orders.len())
        .map(|i| (0..orders.len()).map(|j| if i == j { d[i] } else { 0 }).collect())
        .collect()
}

fn semi(name: &str, class: &'static str, gamma: u64, orders: &[u64], m: u64, rows: Vec<Vec<u64>>) -> CorpusEntry {
    let spec = SemidirectGroupSpec::from_rows(orders.to_vec(), m, &rows).expect("corpus entry is valid");
    CorpusEntry {
        name: name.into(),
        class,
        gamma,
        spec: GroupSpec::Semidirect(spec),
    }
}

fn with_gens(mut e: CorpusEntry, name: &str, gens: Vec<(Vec<u64>, u64)>) -> CorpusEntry {
    if let GroupSpec::Semidirect(s) = &e.spec {
        let s = SemidirectGroupSpec::new(s.orders.clone(), s.m, s.action.clone(), Some(gens)).expect("valid generators");
        e.spec = GroupSpec::Semidirect(s);
    }
    e.name = name.into();
    e
}

fn abelian(name: &str, class: &'static str, orders: &[u64]) -> CorpusEntry {
    semi(name, class, 1, orders, 1, diag(orders, &vec![1; orders.len()]))
}

/// The same group as a shuffled Cayley table.
pub fn as_table(e: &CorpusEntry, seed: u64) -> CorpusEntry {
    let t = CayleyTable::from_handle(&e.handle(), 1 << 16).expect("small corpus group");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = t.shuffled_spec(&mut rng).expect("relabeling");
    CorpusEntry {
        name: format!("{} (table)", e.name),
        class: e.class,
        gamma: e.gamma,
        spec: GroupSpec::Table(spec),
    }
}

fn cyclic_table(name: &str, class: &'static str, n: usize) -> CorpusEntry {
    let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
    CorpusEntry {
        name: name.into(),
        class,
        gamma: 1,
        spec: GroupSpec::Table(TableGroupSpec::new(n, table).unwrap()),
    }
}

/// All corpus groups, each of order at most 200.
pub fn corpus() -> Vec<CorpusEntry> {
    let w = vec![vec![0, 2], vec![1, 0]];
    let mut v = vec![
        // γ = 1
        abelian("Z2xZ4xZ3xZ3", "ab-2-4-3-3", &[2, 4, 3, 3]),
        abelian("Z8xZ9", "ab-8-9", &[8, 9]),
        abelian("Z2xZ4xZ9", "ab-2-4-9", &[2, 4, 9]),
        abelian("Z2xZ3", "ab-2-3", &[2, 3]),
        abelian("Z2^3", "ab-2-2-2", &[2, 2, 2]),
        abelian("Z2xZ4", "ab-2-4", &[2, 4]),
        cyclic_table("Z72 table", "ab-8-9", 72),
        cyclic_table("Z6 table", "ab-2-3", 6),
        // γ = 2
        semi("S3", "S3", 2, &[3], 2, vec![vec![2]]),
        semi("D5", "D5", 2, &[5], 2, vec![vec![4]]),
        semi("D7", "D7", 2, &[7], 2, vec![vec![6]]),
        semi("D9", "D9", 2, &[9], 2, vec![vec![8]]),
        semi("Z3^2 : Z2 by -I", "gen-dihedral-3-3", 2, &[3, 3], 2, diag(&[3, 3], &[2, 2])),
        semi("S3xZ3", "S3xZ3", 2, &[3, 3], 2, diag(&[3, 3], &[2, 1])),
        semi("D15", "D15", 2, &[3, 5], 2, diag(&[3, 5], &[2, 4])),
        semi("D5xZ3", "D5xZ3", 2, &[3, 5], 2, diag(&[3, 5], &[1, 4])),
        semi("Z3xZ9 : Z2 by -I", "gen-dihedral-3-9", 2, &[3, 9], 2, diag(&[3, 9], &[2, 8])),
        semi("Z7 : Z6 by -1", "D7xZ3", 2, &[7], 6, vec![vec![6]]),
        semi("Z3xZ7 : Z2", "D7xZ3", 2, &[3, 7], 2, diag(&[3, 7], &[1, 6])),
        // γ = 3
        semi("Z7 : Z3 by 2", "F21", 3, &[7], 3, vec![vec![2]]),
        semi("Z7 : Z3 by 4", "F21", 3, &[7], 3, vec![vec![4]]),
        semi("Z13 : Z3 by 3", "Z13:Z3", 3, &[13], 3, vec![vec![3]]),
        semi("Z13 : Z3 by 9", "Z13:Z3", 3, &[13], 3, vec![vec![9]]),
        semi("A4", "A4", 3, &[2, 2], 3, vec![vec![0, 1], vec![1, 1]]),
        semi("Z2^2 : Z9", "Z2^2:Z9", 9, &[2, 2], 9, vec![vec![0, 1], vec![1, 1]]),
        semi("Z7 : Z6 by 2", "F21xZ2", 3, &[7], 6, vec![vec![2]]),
        semi("Z2xZ7 : Z3", "F21xZ2", 3, &[2, 7], 3, diag(&[2, 7], &[1, 2])),
        semi("Z4^2 : Z3", "Z4^2:Z3", 3, &[4, 4], 3, vec![vec![0, 3], vec![1, 3]]),
        semi("Z7 : Z9 by 2", "Z7:Z9", 9, &[7], 9, vec![vec![2]]),
        // γ = 4
        semi("Z3 : Z4", "Dic3", 4, &[3], 4, vec![vec![2]]),
        semi("Z5 : Z4 by 2", "F20", 4, &[5], 4, vec![vec![2]]),
        semi("Z5 : Z4 by 3", "F20", 4, &[5], 4, vec![vec![3]]),
        semi("Z5 : Z4 by -1", "Dic5", 4, &[5], 4, vec![vec![4]]),
        semi("Z3^2 : Z4 by W", "Z3^2:Z4-W", 4, &[3, 3], 4, w.clone()),
        semi("Z3^2 : Z4 by -I", "Z3^2:Z4-U2", 4, &[3, 3], 4, diag(&[3, 3], &[2, 2])),
        semi("Z3^2 : Z4 by diag(2,1)", "Z3^2:Z4-UV", 4, &[3, 3], 4, diag(&[3, 3], &[2, 1])),
        semi(
            "Z3^3 : Z4 by U+W",
            "Z3^3:Z4-UW",
            4,
            &[3, 3, 3],
            4,
            vec![vec![2, 0, 0], vec![0, 0, 2], vec![0, 1, 0]],
        ),
        semi(
            "Z3^3 : Z4 by V+W",
            "Z3^3:Z4-VW",
            4,
            &[3, 3, 3],
            4,
            vec![vec![1, 0, 0], vec![0, 0, 2], vec![0, 1, 0]],
        ),
        semi("Z3 : Z8", "Z3:Z8", 8, &[3], 8, vec![vec![2]]),
        // γ = 6, 5 and 7
        semi("Z7 : Z6 by 3", "F42", 6, &[7], 6, vec![vec![3]]),
        semi("Z7 : Z6 by 5", "F42", 6, &[7], 6, vec![vec![5]]),
        semi("Z13 : Z6 by 4", "Z13:Z6", 6, &[13], 6, vec![vec![4]]),
        semi(
            "Z2^3 : Z7",
            "Z2^3:Z7",
            7,
            &[2, 2, 2],
            7,
            vec![vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]],
        ),
        semi("Z11 : Z5 by 3", "Z11:Z5", 5, &[11], 5, vec![vec![3]]),
    ];
    v.push(semi("Z3^3 : Z2", "Z3^3:Z2", 2, &[3, 3, 3], 2, diag(&[3, 3, 3], &[2, 2, 1])));

    // alternative generating sets
    let swap = semi("Z3^2 : Z2 by swap", "S3xZ3", 2, &[3, 3], 2, vec![vec![0, 1], vec![1, 0]]);
    v.push(with_gens(swap, "Z3^2 : Z2 by swap, gens x1y, y", vec![(vec![1, 0], 1), (vec![0, 0], 1)]));
    let d9 = v.iter().find(|e| e.name == "D9").unwrap().clone();
    v.push(with_gens(d9, "D9, gens xy, y", vec![(vec![1], 1), (vec![0], 1)]));
    let f42 = v.iter().find(|e| e.name == "Z7 : Z6 by 3").unwrap().clone();
    v.push(with_gens(f42, "F42, gens x y^2, y^3", vec![(vec![1], 2), (vec![0], 3)]));

    // shuffled tables
    for (k, name) in ["S3", "A4", "Z7 : Z3 by 4", "Z3^2 : Z4 by W", "Dic5", "D5xZ3", "Z2xZ4"].iter().enumerate() {
        if let Some(e) = v.iter().find(|e| e.name == *name || e.class == *name).cloned() {
            v.push(as_table(&e, k as u64 + 1));
        }
    }
    v
}

/// A handle on `Z_n` computed arithmetically, with generator 1.
pub fn cyclic_handle(n: usize) -> GroupHandle {
    GroupHandle::new(Arc::new(TableGroup::cyclic(n)))
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gates::GateSet;
use super::oracle::{decode, encode_config, state_count};
use crate::error::Result;

/// Connected components of the configuration graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrylovReport {
    pub subspace_count: usize,
    /// subspace size -> number of subspaces of that size
    pub size_histogram: BTreeMap<usize, usize>,
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// Union-find over all configurations joined by any rule (bulk and impurity).
pub fn enumerate_krylov(gs: &GateSet, cap: u128) -> Result<KrylovReport> {
    let n = state_count(gs, cap)?;
    let m = gs.local_dim();
    let mut uf = UnionFind::new(n);
    let rules: Vec<_> = gs.all_rules().collect();
    for idx in 0..n {
        let c = decode(idx, m, gs.l);
        for rule in &rules {
            for nb in rule.neighbours(&c, m) {
                uf.union(idx as u32, encode_config(&nb, m) as u32);
            }
        }
    }
    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for i in 0..n as u32 {
        *sizes.entry(uf.find(i)).or_default() += 1;
    }
    let mut hist = BTreeMap::new();
    for &s in sizes.values() {
        *hist.entry(s).or_default() += 1;
    }
    Ok(KrylovReport { subspace_count: sizes.len(), size_histogram: hist })
}

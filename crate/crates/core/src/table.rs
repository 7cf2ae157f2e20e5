//! Quartet cost tables and tree scoring.
//!
//! Sums over quartets are always formed the same way: one partial sum per
//! largest member `d` (quartets in canonical order), then the partials in
//! increasing `d`. The totals `m`, `M` and every tree cost share this order,
//! so a tree that embeds every per-quartet minimum has cost bit-identical to
//! `m` and scores exactly 1, whether or not the blocks run in parallel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quartet::{binomial, quartet_count, Pairing};
use crate::tree::{LeafDistances, Tree};

/// Quartet counts at or above this are scored block-parallel.
const PARALLEL_QUARTETS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuartetCostTable {
    labels: Vec<String>,
    costs: Vec<[f64; 3]>,
    min_total: f64,
    max_total: f64,
}

impl QuartetCostTable {
    /// `costs[q][p]` is the cost of pairing `p` of the quartet with rank `q`.
    pub fn new(labels: Vec<String>, costs: Vec<[f64; 3]>) -> Result<QuartetCostTable> {
        let n = labels.len();
        if n < 4 {
            return Err(Error::TooFewObjects(n));
        }
        if costs.len() != quartet_count(n) {
            return Err(Error::OutOfRange(format!(
                "expected {} quartet cost rows for n = {n}, got {}",
                quartet_count(n),
                costs.len()
            )));
        }
        if let Some(i) = costs.iter().position(|c| c.iter().any(|x| !x.is_finite())) {
            return Err(Error::OutOfRange(format!("non-finite cost in quartet row {i}")));
        }
        let min_total = blocked_sum(n, |d| block_range(d).map(|i| min3(&costs[i])).sum());
        let max_total = blocked_sum(n, |d| block_range(d).map(|i| max3(&costs[i])).sum());
        Ok(QuartetCostTable {
            labels,
            costs,
            min_total,
            max_total,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cost(&self, quartet_rank: usize, pairing: Pairing) -> f64 {
        self.costs[quartet_rank][pairing.index()]
    }

    pub fn costs(&self) -> &[[f64; 3]] {
        &self.costs
    }

    pub fn quartet_min(&self, quartet_rank: usize) -> f64 {
        min3(&self.costs[quartet_rank])
    }

    pub fn quartet_max(&self, quartet_rank: usize) -> f64 {
        max3(&self.costs[quartet_rank])
    }

    /// `m`: sum of per-quartet minimum costs.
    pub fn min_total(&self) -> f64 {
        self.min_total
    }

    /// `M`: sum of per-quartet maximum costs.
    pub fn max_total(&self) -> f64 {
        self.max_total
    }

    pub fn is_degenerate(&self) -> bool {
        self.max_total <= self.min_total
    }

    pub fn check_non_degenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateTable(self.min_total))
        } else {
            Ok(())
        }
    }

    /// `(M - cost) / (M - m)`.
    pub fn normalize(&self, cost: f64) -> Result<f64> {
        self.check_non_degenerate()?;
        if cost == self.min_total {
            return Ok(1.0);
        }
        let s = (self.max_total - cost) / (self.max_total - self.min_total);
        Ok(s.clamp(0.0, 1.0))
    }

    fn check_tree(&self, tree: &Tree) -> Result<()> {
        if tree.leaf_count() != self.n() {
            return Err(Error::DimensionMismatch {
                tree: tree.leaf_count(),
                table: self.n(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredTree {
    pub tree: Tree,
    pub cost: f64,
    pub score: f64,
}

/// `C_T`: the summed cost of every quartet topology embedded in `tree`.
pub fn tree_cost(tree: &Tree, table: &QuartetCostTable) -> Result<f64> {
    table.check_tree(tree)?;
    let mut scratch = Vec::new();
    Ok(evaluate_into(tree, table, &mut scratch))
}

pub fn score(tree: &Tree, table: &QuartetCostTable) -> Result<ScoredTree> {
    table.check_non_degenerate()?;
    let cost = tree_cost(tree, table)?;
    Ok(ScoredTree {
        tree: tree.clone(),
        cost,
        score: table.normalize(cost)?,
    })
}

/// Cost of `tree`, leaving its embedded pairings (canonical order) in `out`.
/// The caller guarantees matching dimensions.
pub(crate) fn evaluate_into(tree: &Tree, table: &QuartetCostTable, out: &mut Vec<Pairing>) -> f64 {
    let n = table.n();
    let dist = tree.leaf_distances();
    out.clear();
    out.resize(quartet_count(n), Pairing::AbCd);
    let costs = &table.costs;

    if quartet_count(n) < PARALLEL_QUARTETS {
        let mut rest = out.as_mut_slice();
        let mut total = 0.0;
        for d in 3..n {
            let (block, tail) = rest.split_at_mut(binomial(d, 3));
            rest = tail;
            total += score_block(&dist, costs, d, block);
        }
        return total;
    }

    let mut blocks = Vec::with_capacity(n - 3);
    let mut rest = out.as_mut_slice();
    for d in 3..n {
        let (block, tail) = rest.split_at_mut(binomial(d, 3));
        rest = tail;
        blocks.push((d, block));
    }
    let partials: Vec<f64> = blocks
        .into_par_iter()
        .map(|(d, block)| score_block(&dist, costs, d, block))
        .collect();
    partials.into_iter().fold(0.0, |acc, x| acc + x)
}

fn score_block(dist: &LeafDistances, costs: &[[f64; 3]], d: usize, out: &mut [Pairing]) -> f64 {
    let rd = dist.row(d);
    let mut i = 0;
    let base = binomial(d, 4);
    let mut sum = 0.0;
    for c in 2..d {
        let rc = dist.row(c);
        let dcd = rd[c];
        for b in 1..c {
            let rb = dist.row(b);
            let (dbc, dbd) = (rc[b], rd[b]);
            for a in 0..b {
                let s0 = rb[a] + dcd;
                let s1 = rc[a] + dbd;
                let s2 = rd[a] + dbc;
                let p = if s0 < s1 && s0 < s2 {
                    Pairing::AbCd
                } else if s1 < s2 {
                    Pairing::AcBd
                } else {
                    Pairing::AdBc
                };
                out[i] = p;
                sum += costs[base + i][p as usize];
                i += 1;
            }
        }
    }
    sum
}

fn block_range(d: usize) -> std::ops::Range<usize> {
    let start = binomial(d, 4);
    start..start + binomial(d, 3)
}

fn blocked_sum(n: usize, block: impl Fn(usize) -> f64) -> f64 {
    (3..n).map(block).fold(0.0, |acc, x| acc + x)
}

fn min3(c: &[f64; 3]) -> f64 {
    c[0].min(c[1]).min(c[2])
}

fn max3(c: &[f64; 3]) -> f64 {
    c[0].max(c[1]).max(c[2])
}

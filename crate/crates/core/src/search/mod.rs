//! Randomized hill climbing over ternary trees.
//!
//! Each step draws a mutation length `k` from the fat-tailed sampler, applies
//! a `k`-mutation to the current best tree and keeps the result when its cost
//! is no worse (ties are accepted). A run halts as soon as it reaches score 1.
//!
//! Two stopping rules are provided: a patience limit on examined trees
//! without strict improvement, and agreement among `r` independent runs on
//! the same embedded quartet set.

mod mutation;
mod sampler;
mod stats;

pub use mutation::{apply_simple_mutation, k_mutation, mutate, MutationKind, MAX_REDRAWS};
pub use sampler::{sample_k, unnormalized_mass, FatTailSampler};
pub use stats::RunStats;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quartet::{quartet_count, Pairing};
use crate::table::{evaluate_into, QuartetCostTable, ScoredTree};
use crate::tree::{StepwiseBuilder, Tree};

pub const DEFAULT_PATIENCE: u64 = 100_000;

/// Agreement runs step in parallel once a tree has this many quartets.
const PARALLEL_RUN_QUARTETS: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Stop after `patience` examined trees without a strict improvement.
    Simple { patience: u64 },
    /// Run `runs` searches (or [`r_for_n`] of them) until they agree.
    Agreement { runs: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub termination: Termination,
    /// Longest k-mutation; defaults to `max(64, 2n)`.
    pub k_max: Option<usize>,
    /// Per-run cap on examined trees.
    pub max_trees: Option<u64>,
}

impl SearchConfig {
    pub fn simple(seed: u64, patience: u64) -> SearchConfig {
        SearchConfig {
            seed,
            termination: Termination::Simple { patience },
            k_max: None,
            max_trees: None,
        }
    }

    pub fn agreement(seed: u64, runs: Option<usize>) -> SearchConfig {
        SearchConfig {
            seed,
            termination: Termination::Agreement { runs },
            k_max: None,
            max_trees: None,
        }
    }

    pub fn with_k_max(mut self, k_max: usize) -> SearchConfig {
        self.k_max = Some(k_max);
        self
    }

    pub fn with_max_trees(mut self, max_trees: u64) -> SearchConfig {
        self.max_trees = Some(max_trees);
        self
    }

    pub fn k_max_for(&self, n: usize) -> usize {
        self.k_max.unwrap_or_else(|| (2 * n).max(64))
    }

    pub fn validate(&self) -> Result<()> {
        match self.termination {
            Termination::Simple { patience: 0 } => {
                return Err(Error::OutOfRange("patience must be at least 1".into()))
            }
            Termination::Agreement { runs: Some(r) } if !(1..=6).contains(&r) => {
                return Err(Error::OutOfRange(format!("agreement runs must be in 1..=6, got {r}")))
            }
            _ => {}
        }
        if self.k_max == Some(0) {
            return Err(Error::OutOfRange("k_max must be at least 1".into()));
        }
        Ok(())
    }

    fn patience(&self) -> u64 {
        match self.termination {
            Termination::Simple { patience } => patience,
            Termination::Agreement { .. } => DEFAULT_PATIENCE,
        }
    }
}

/// Number of agreeing runs required for `n` objects.
pub fn r_for_n(n: usize) -> Result<usize> {
    Ok(match n {
        0..=3 => return Err(Error::TooFewObjects(n)),
        4..=5 => 6,
        6..=9 => 5,
        10..=15 => 4,
        16..=17 => 3,
        _ => 2,
    })
}

/// A uniformly random tree on `n` leaves (stepwise insertion on a uniformly
/// chosen edge).
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Tree> {
    if n < 4 {
        return Err(Error::TooFewObjects(n));
    }
    let mut b = StepwiseBuilder::new(n);
    while !b.is_complete() {
        let c = b.choices();
        b.insert(rng.random_range(0..c));
    }
    Ok(b.build())
}

/// Outcome of a single proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub k: usize,
    pub candidate_cost: f64,
    pub accepted: bool,
    pub improved: bool,
}

/// One hill-climbing run, advanced a proposal at a time.
#[derive(Debug, Clone)]
pub struct HillClimber<'t, R> {
    table: &'t QuartetCostTable,
    sampler: FatTailSampler,
    rng: R,
    current: Tree,
    cost: f64,
    pairings: Vec<Pairing>,
    candidate: Tree,
    candidate_pairings: Vec<Pairing>,
    last_accepted: bool,
    since_improvement: u64,
    stats: RunStats,
}

impl<'t, R: Rng> HillClimber<'t, R> {
    /// Start from a random tree; fails on a degenerate table.
    pub fn new(table: &'t QuartetCostTable, k_max: usize, mut rng: R) -> Result<Self> {
        table.check_non_degenerate()?;
        let current = random_tree(table.n(), &mut rng)?;
        let mut pairings = Vec::new();
        let cost = evaluate_into(&current, table, &mut pairings);
        let mut stats = RunStats::new(k_max);
        stats.trees_examined = 1;
        stats.trajectory.push((1, table.normalize(cost)?));
        Ok(HillClimber {
            table,
            sampler: FatTailSampler::new(k_max),
            rng,
            candidate: current.clone(),
            current,
            cost,
            candidate_pairings: Vec::with_capacity(pairings.len()),
            pairings,
            last_accepted: true,
            since_improvement: 0,
            stats,
        })
    }

    pub fn step(&mut self) -> Step {
        let k = self.sampler.sample(&mut self.rng);
        self.candidate.clone_from(&self.current);
        for _ in 0..k {
            let kind = MutationKind::random(&mut self.rng);
            mutate(&mut self.candidate, kind, &mut self.rng);
        }
        debug_assert!(self.candidate.validate().is_ok());
        let c = evaluate_into(&self.candidate, self.table, &mut self.candidate_pairings);
        self.stats.trees_examined += 1;
        let accepted = c <= self.cost;
        let improved = c < self.cost;
        self.stats.record(k, accepted);
        if accepted {
            std::mem::swap(&mut self.current, &mut self.candidate);
            std::mem::swap(&mut self.pairings, &mut self.candidate_pairings);
            self.cost = c;
        }
        if improved {
            self.since_improvement = 0;
            let s = self.score();
            self.stats.trajectory.push((self.stats.trees_examined, s));
        } else {
            self.since_improvement += 1;
        }
        self.last_accepted = accepted;
        Step {
            k,
            candidate_cost: c,
            accepted,
            improved,
        }
    }

    pub fn current(&self) -> &Tree {
        &self.current
    }

    /// The tree proposed by the most recent step.
    pub fn last_candidate(&self) -> &Tree {
        if self.last_accepted {
            &self.current
        } else {
            &self.candidate
        }
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn score(&self) -> f64 {
        self.table.normalize(self.cost).expect("table checked at construction")
    }

    /// Embedded pairings of the current tree, in canonical quartet order.
    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn is_optimal(&self) -> bool {
        self.cost == self.table.min_total()
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub fn trees_since_improvement(&self) -> u64 {
        self.since_improvement
    }

    pub fn scored(&self) -> ScoredTree {
        ScoredTree {
            tree: self.current.clone(),
            cost: self.cost,
            score: self.score(),
        }
    }

    fn finish(self) -> (ScoredTree, RunStats) {
        let scored = self.scored();
        (scored, self.stats)
    }
}

/// A single run with the patience rule (agreement configs fall back to the
/// default patience). Stops early at score 1 or at `max_trees`.
pub fn hill_climb<R: Rng>(table: &QuartetCostTable, config: &SearchConfig, rng: R) -> Result<(ScoredTree, RunStats)> {
    config.validate()?;
    let patience = config.patience();
    let mut run = HillClimber::new(table, config.k_max_for(table.n()), rng)?;
    while !run.is_optimal()
        && run.trees_since_improvement() < patience
        && config.max_trees.is_none_or(|cap| run.stats().trees_examined < cap)
    {
        run.step();
    }
    Ok(run.finish())
}

/// RNG for run `index` of a search seeded with `seed`. Runs use streams 1
/// and up, so a generator seeded with the same value on the default stream 0
/// never shares random numbers with a search.
pub fn run_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// Best tree plus per-run statistics.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: ScoredTree,
    pub runs: Vec<RunStats>,
}

/// Run `r` independent searches in lockstep until they hold the same tree.
///
/// After every round in which some run accepted a candidate, the runs are
/// compared: first by cost, then by their full canonical pairing lists. A run
/// that reaches score 1 ends the search at once, since no tree can beat it.
/// With `r = 1` this is [`hill_climb`] on the run-0 stream.
pub fn search_with_agreement(table: &QuartetCostTable, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let n = table.n();
    let r = match config.termination {
        Termination::Agreement { runs: Some(r) } => r,
        _ => r_for_n(n)?,
    };
    if r == 1 {
        let (best, stats) = hill_climb(table, config, run_rng(config.seed, 0))?;
        return Ok(SearchOutcome {
            best,
            runs: vec![stats],
        });
    }
    let k_max = config.k_max_for(n);
    let mut runs = (0..r)
        .map(|i| HillClimber::new(table, k_max, run_rng(config.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let parallel = quartet_count(n) >= PARALLEL_RUN_QUARTETS;

    loop {
        if let Some(i) = runs.iter().position(|h| h.is_optimal()) {
            return Ok(finish_runs(runs, i));
        }
        if let Some(cap) = config.max_trees {
            if runs[0].stats().trees_examined >= cap {
                return Err(Error::AgreementTimeout {
                    runs: r,
                    trees: cap,
                    best: runs.iter().map(|h| h.score()).collect(),
                });
            }
        }
        let changed = if parallel {
            runs.par_iter_mut().map(|h| h.step().accepted).reduce(|| false, |a, b| a | b)
        } else {
            runs.iter_mut().fold(false, |acc, h| h.step().accepted | acc)
        };
        if changed && agree(&runs) {
            return Ok(finish_runs(runs, 0));
        }
    }
}

fn agree<R>(runs: &[HillClimber<'_, R>]) -> bool {
    let first = &runs[0];
    runs[1..].iter().all(|h| h.cost == first.cost) && runs[1..].iter().all(|h| h.pairings == first.pairings)
}

fn finish_runs<R: Rng>(runs: Vec<HillClimber<'_, R>>, winner: usize) -> SearchOutcome {
    let best = runs[winner].scored();
    SearchOutcome {
        best,
        runs: runs.into_iter().map(|h| h.stats).collect(),
    }
}

/// Dispatch on the configured termination rule.
pub fn search(table: &QuartetCostTable, config: &SearchConfig) -> Result<SearchOutcome> {
    match config.termination {
        Termination::Simple { .. } => {
            let (best, stats) = hill_climb(table, config, run_rng(config.seed, 0))?;
            Ok(SearchOutcome {
                best,
                runs: vec![stats],
            })
        }
        Termination::Agreement { .. } => search_with_agreement(table, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::counterexample_table;

    #[test]
    fn r_brackets() {
        let got: Vec<usize> = [4, 5, 6, 9, 10, 15, 16, 17, 18, 30].iter().map(|&n| r_for_n(n).unwrap()).collect();
        assert_eq!(got, vec![6, 6, 5, 5, 4, 4, 3, 3, 2, 2]);
        assert!(r_for_n(3).is_err());
    }

    #[test]
    fn random_tree_sizes() {
        let mut rng = run_rng(0, 0);
        let t = random_tree(10, &mut rng).unwrap();
        assert_eq!(t.node_count(), 18);
        t.validate().unwrap();
        assert!(random_tree(3, &mut rng).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::simple(1, 0).validate().is_err());
        assert!(SearchConfig::agreement(1, Some(7)).validate().is_err());
        assert!(SearchConfig::agreement(1, Some(0)).validate().is_err());
        assert!(SearchConfig::agreement(1, None).with_k_max(0).validate().is_err());
        assert_eq!(SearchConfig::agreement(1, None).k_max_for(10), 64);
        assert_eq!(SearchConfig::agreement(1, None).k_max_for(40), 80);
    }

    #[test]
    fn trajectory_is_non_decreasing() {
        let table = counterexample_table(0.1).unwrap();
        let (best, stats) = hill_climb(&table, &SearchConfig::simple(9, 500), run_rng(9, 0)).unwrap();
        assert!(stats.trajectory.windows(2).all(|w| w[0].1 <= w[1].1 && w[0].0 < w[1].0));
        assert_eq!(stats.proposals() + 1, stats.trees_examined);
        assert_eq!(stats.best_score(), Some(best.score));
    }

    #[test]
    fn single_run_agreement_is_hill_climb() {
        let table = counterexample_table(0.1).unwrap();
        let cfg = SearchConfig::agreement(4, Some(1));
        let a = search_with_agreement(&table, &cfg).unwrap();
        let (b, stats) = hill_climb(&table, &cfg, run_rng(4, 0)).unwrap();
        assert_eq!(a.best, b);
        assert_eq!(a.runs, vec![stats]);
    }

    #[test]
    fn agreement_timeout_reports_scores() {
        let table = counterexample_table(0.1).unwrap();
        let cfg = SearchConfig::agreement(2, Some(6)).with_max_trees(1);
        match search_with_agreement(&table, &cfg) {
            Err(Error::AgreementTimeout { runs: 6, trees: 1, best }) => assert_eq!(best.len(), 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_table_rejected() {
        let table = QuartetCostTable::new(crate::cost::default_labels(5), vec![[1.0; 3]; 5]).unwrap();
        assert!(matches!(
            hill_climb(&table, &SearchConfig::simple(1, 10), run_rng(1, 0)),
            Err(Error::DegenerateTable(_))
        ));
    }
}

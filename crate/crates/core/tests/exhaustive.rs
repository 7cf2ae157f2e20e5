mod common;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use common::*;
use quartet_tree::cost::default_labels;
use quartet_tree::oracle::{brute_force_optimum, count_trees, enumerate_trees, enumerate_trees_capped};
use quartet_tree::quartet::{embedded_pairings, quartet_count, quartets};
use quartet_tree::search::{apply_simple_mutation, MutationKind};
use quartet_tree::{
    costs_from_matrix, costs_from_weights, embedded_quartet_set, score, counterexample_table, tree_cost, DistanceMatrix,
    Error, Topology, Tree, WeightMode, WeightedQuartetList,
};
use rand::Rng;

#[test]
fn enumeration_counts_match_double_factorial() {
    for n in 4..=8 {
        assert_eq!(count_trees(n).unwrap(), double_factorial_count(n));
        assert_eq!(enumerate_trees(n).unwrap().count() as u128, double_factorial_count(n));
    }
    assert_eq!(count_trees(8).unwrap(), 10395);
    assert_eq!(count_trees(10).unwrap(), 2_027_025);
}

#[test]
fn enumeration_respects_cap() {
    assert!(matches!(enumerate_trees(11), Err(Error::CapExceeded { n: 11, cap: 10 })));
    assert!(enumerate_trees_capped(6, 5).is_err());
    assert!(enumerate_trees(3).is_err());
}

#[test]
fn embedded_sets_are_injective_up_to_seven_leaves() {
    for n in 4..=7 {
        let mut by_pairings = HashSet::new();
        let mut by_splits = HashSet::new();
        for tree in enumerate_trees(n).unwrap() {
            assert_eq!(check_invariants(&tree), Ok(()));
            assert!(by_pairings.insert(embedded_pairings(&tree)));
            assert!(by_splits.insert(splits(&tree)));
        }
        assert_eq!(by_pairings.len() as u128, double_factorial_count(n));
    }
}

#[test]
fn unit_costs_count_missed_topologies() {
    for n in [5, 6] {
        for seed in 0..10 {
            let mut r = rng(seed);
            let all: Vec<Topology> = quartets(n)
                .flat_map(|q| {
                    let [a, b, c, d] = q.members();
                    [
                        Topology::from_pairs(a, b, c, d).unwrap(),
                        Topology::from_pairs(a, c, b, d).unwrap(),
                        Topology::from_pairs(a, d, b, c).unwrap(),
                    ]
                })
                .collect();
            let p: Vec<Topology> = all.into_iter().filter(|_| r.random_bool(0.4)).collect();
            let list = WeightedQuartetList::unit(default_labels(n), p.iter().copied()).unwrap();
            let table = costs_from_weights(&list, WeightMode::Unit).unwrap();
            let p: HashSet<Topology> = p.into_iter().collect();
            for tree in enumerate_trees(n).unwrap() {
                let hits = embedded_quartet_set(&tree).iter().filter(|t| p.contains(t)).count();
                assert_eq!(tree_cost(&tree, &table).unwrap(), (quartet_count(n) - hits) as f64);
            }
        }
    }
}

fn tree_index(n: usize) -> (Vec<Tree>, HashMap<BTreeSet<Vec<usize>>, usize>) {
    let trees: Vec<Tree> = enumerate_trees(n).unwrap().collect();
    let index = trees.iter().enumerate().map(|(i, t)| (splits(t), i)).collect();
    (trees, index)
}

#[test]
fn single_mutations_connect_all_trees() {
    for n in [5, 6] {
        let (trees, index) = tree_index(n);
        let mut r = rng(n as u64);
        let neighbors: Vec<HashSet<usize>> = trees
            .iter()
            .map(|t| {
                (0..600)
                    .map(|i| index[&splits(&apply_simple_mutation(t, MutationKind::ALL[i % 3], &mut r))])
                    .collect()
            })
            .collect();
        let mut seen = vec![false; trees.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "n={n}: mutation graph is disconnected");
    }
}

#[test]
fn random_trees_are_uniform_at_five_leaves() {
    let (trees, index) = tree_index(5);
    let mut counts = vec![0u32; trees.len()];
    let mut r = rng(55);
    let draws = 15_000;
    for _ in 0..draws {
        counts[index[&splits(&quartet_tree::random_tree(5, &mut r).unwrap())]] += 1;
    }
    let expected = draws as f64 / 15.0;
    let sd = (draws as f64 * (1.0 / 15.0) * (14.0 / 15.0)).sqrt();
    for (i, &c) in counts.iter().enumerate() {
        assert!((c as f64 - expected).abs() < 5.0 * sd, "tree {i} drawn {c} times");
    }
}

#[test]
fn five_object_counterexample_by_brute_force() {
    for eps in [0.01, 0.1, 0.5] {
        let table = counterexample_table(eps).unwrap();
        // independent totals: every quartet has a zero entry, and only the
        // {u,v,w,x} row lacks a cost-1 entry
        let m: f64 = table.costs().iter().map(|r| r.iter().copied().fold(f64::MAX, f64::min)).sum();
        let big_m: f64 = table.costs().iter().map(|r| r.iter().copied().fold(f64::MIN, f64::max)).sum();
        assert_eq!(m, 0.0);
        assert!((big_m - (5.0 - eps)).abs() < 1e-15);

        let costs: Vec<(f64, Tree)> = enumerate_trees(5).unwrap().map(|t| (naive_cost(&t, &table), t)).collect();
        assert_eq!(costs.len(), 15);
        let best = costs.iter().map(|c| c.0).fold(f64::MAX, f64::min);
        let winners: Vec<&Tree> = costs.iter().filter(|c| c.0 == best).map(|c| &c.1).collect();
        assert_eq!(winners.len(), 1);
        assert!((best - (1.0 - eps)).abs() < 1e-15);
        // (y,((u,v),(w,x))) has the splits uv|wxy and wx|uvy
        let want: BTreeSet<Vec<usize>> = [vec![2, 3], vec![2, 3, 4]].into_iter().collect();
        assert_eq!(splits(winners[0]), want);
        // every other tree misses at least one zero-cost topology
        assert!(costs.iter().filter(|c| c.0 != best).all(|c| c.0 >= 1.0));

        let (found, ties) = brute_force_optimum(&table).unwrap();
        assert_eq!(ties, 1);
        assert_eq!(splits(&found.tree), want);
        assert!((found.score - 4.0 / (5.0 - eps)).abs() < 1e-12);
        assert!(found.score > 0.8);
    }
}

fn optimal_set(table: &quartet_tree::QuartetCostTable) -> BTreeSet<BTreeSet<Vec<usize>>> {
    let costs: Vec<(f64, Tree)> = enumerate_trees(table.n()).unwrap().map(|t| (tree_cost(&t, table).unwrap(), t)).collect();
    let best = costs.iter().map(|c| c.0).fold(f64::MAX, f64::min);
    costs.iter().filter(|c| (c.0 - best).abs() < 1e-9).map(|c| splits(&c.1)).collect()
}

#[test]
fn affine_distance_change_keeps_optimal_trees() {
    for seed in 0..8 {
        let mut r = rng(seed);
        let m = DistanceMatrix::from_fn(default_labels(6), |_, _| r.random::<f64>()).unwrap();
        let (a, b) = (0.1 + 5.0 * r.random::<f64>(), 3.0 * r.random::<f64>());
        let moved = DistanceMatrix::from_fn(default_labels(6), |i, j| a * m.get(i, j) + b).unwrap();
        let (t1, t2) = (costs_from_matrix(&m).unwrap(), costs_from_matrix(&moved).unwrap());
        for (x, y) in t1.costs().iter().zip(t2.costs()) {
            for p in 0..3 {
                assert!((a * x[p] + 2.0 * b - y[p]).abs() < 1e-9);
            }
        }
        assert_eq!(optimal_set(&t1), optimal_set(&t2));
        for tree in enumerate_trees(6).unwrap().step_by(7) {
            let (s1, s2) = (score(&tree, &t1).unwrap().score, score(&tree, &t2).unwrap().score);
            assert!((s1 - s2).abs() < 1e-9);
        }
    }
}

/// Tree over new ids whose leaf `i` sits where old leaf `perm[i]` sat.
fn relabel(tree: &Tree, perm: &[usize]) -> Tree {
    let n = tree.leaf_count();
    let mut inverse = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    let map = |v: usize| if v < n { inverse[v] } else { v };
    let edges: Vec<(usize, usize)> = tree.edges().into_iter().map(|(x, y)| (map(x), map(y))).collect();
    Tree::from_edges(n, &edges).unwrap()
}

#[test]
fn brute_force_follows_relabeling() {
    for seed in 0..6 {
        let n = 6 + (seed as usize % 2);
        let mut r = rng(100 + seed);
        let m = DistanceMatrix::from_fn(default_labels(n), |_, _| r.random::<f64>()).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, r.random_range(0..=i));
        }
        let (t1, t2) = (costs_from_matrix(&m).unwrap(), costs_from_matrix(&m.permuted(&perm).unwrap()).unwrap());
        let (o1, c1) = brute_force_optimum(&t1).unwrap();
        let (o2, c2) = brute_force_optimum(&t2).unwrap();
        assert_eq!(c1, c2);
        assert!((o1.score - o2.score).abs() < 1e-12);
        let moved = relabel(&o1.tree, &perm);
        assert!((tree_cost(&moved, &t2).unwrap() - o2.cost).abs() < 1e-9);
    }
}

#[test]
fn identity_relabel_is_a_no_op() {
    let t = tree_from_seed(7, 3);
    let id: Vec<usize> = (0..7).collect();
    assert_eq!(embedded_pairings(&relabel(&t, &id)), embedded_pairings(&t));
}

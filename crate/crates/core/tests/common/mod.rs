//! Reference implementations used as oracles. They work from the adjacency
//! lists only and share no code with the library's scoring path.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use quartet_tree::quartet::quartets;
use quartet_tree::{random_tree, Pairing, Quartet, QuartetCostTable, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tree_from_seed(n: usize, seed: u64) -> Tree {
    random_tree(n, &mut rng(seed)).unwrap()
}

/// Costs drawn uniformly from [0, 1).
pub fn random_table(n: usize, seed: u64) -> QuartetCostTable {
    let mut r = rng(seed);
    let rows = quartets(n).map(|_| [r.random(), r.random(), r.random()]).collect();
    QuartetCostTable::new(labels(n), rows).unwrap()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("L{i}")).collect()
}

fn bfs_parents(tree: &Tree, from: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; tree.node_count()];
    let mut seen = vec![false; tree.node_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in tree.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Vertices on the path from `a` to `b`, both ends included.
pub fn path(tree: &Tree, a: usize, b: usize) -> Vec<usize> {
    let parent = bfs_parents(tree, a);
    let mut out = vec![b];
    let mut v = b;
    while let Some(p) = parent[v] {
        out.push(p);
        v = p;
    }
    assert_eq!(*out.last().unwrap(), a);
    out
}

pub fn edge_distance(tree: &Tree, a: usize, b: usize) -> usize {
    path(tree, a, b).len() - 1
}

fn disjoint(tree: &Tree, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    let p: BTreeSet<usize> = path(tree, a, b).into_iter().collect();
    path(tree, c, d).iter().all(|v| !p.contains(v))
}

/// The pairing whose two sibling paths are vertex-disjoint. Panics unless
/// exactly one pairing qualifies.
pub fn path_crossing_pairing(tree: &Tree, q: Quartet) -> Pairing {
    let [a, b, c, d] = q.members();
    let ok = [
        disjoint(tree, (a, b), (c, d)),
        disjoint(tree, (a, c), (b, d)),
        disjoint(tree, (a, d), (b, c)),
    ];
    assert_eq!(ok.iter().filter(|&&x| x).count(), 1, "{q:?} has {ok:?}");
    Pairing::from_index(ok.iter().position(|&x| x).unwrap())
}

/// Tree cost by the path-crossing definition, summed in quartet order.
pub fn naive_cost(tree: &Tree, table: &QuartetCostTable) -> f64 {
    quartets(tree.leaf_count())
        .map(|q| table.cost(q.rank(), path_crossing_pairing(tree, q)))
        .sum()
}

/// Nontrivial leaf bipartitions, each given by the side without leaf 0.
pub fn splits(tree: &Tree) -> BTreeSet<Vec<usize>> {
    let n = tree.leaf_count();
    let mut out = BTreeSet::new();
    for v in 0..tree.node_count() {
        for &w in tree.neighbors(v) {
            if v < w {
                let mut side = leaves_beyond(tree, w, v);
                if side.contains(&0) {
                    side = (0..n).filter(|x| !side.contains(x)).collect();
                }
                if side.len() >= 2 && side.len() <= n - 2 {
                    out.insert(side);
                }
            }
        }
    }
    out
}

fn leaves_beyond(tree: &Tree, start: usize, blocked: usize) -> Vec<usize> {
    let mut seen = vec![false; tree.node_count()];
    seen[blocked] = true;
    seen[start] = true;
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        if tree.is_leaf(v) {
            out.push(v);
        }
        for &w in tree.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Ternary-tree invariants checked from scratch.
pub fn check_invariants(tree: &Tree) -> Result<(), String> {
    let n = tree.leaf_count();
    let nodes = tree.node_count();
    if nodes != 2 * n - 2 {
        return Err(format!("{nodes} nodes for {n} leaves"));
    }
    let mut edges = 0;
    for v in 0..nodes {
        let deg = tree.neighbors(v).len();
        let want = if v < n { 1 } else { 3 };
        if deg != want {
            return Err(format!("node {v} has degree {deg}"));
        }
        for &w in tree.neighbors(v) {
            if !tree.neighbors(w).contains(&v) {
                return Err(format!("edge {v}-{w} not symmetric"));
            }
        }
        edges += deg;
    }
    if edges / 2 != nodes - 1 {
        return Err("wrong edge count".into());
    }
    if bfs_parents(tree, 0).iter().skip(1).any(Option::is_none) {
        return Err("disconnected".into());
    }
    Ok(())
}

/// One randomly chosen pairing per quartet costs 0, the other two cost 1.
pub fn one_best_table(n: usize, seed: u64) -> QuartetCostTable {
    let mut r = rng(seed);
    let rows = quartets(n)
        .map(|_| {
            let mut row = [1.0; 3];
            row[r.random_range(0..3)] = 0.0;
            row
        })
        .collect();
    QuartetCostTable::new(labels(n), rows).unwrap()
}

/// `(2n-5)!!` by direct multiplication.
pub fn double_factorial_count(n: usize) -> u128 {
    let mut p = 1u128;
    let mut k = 2 * n as u128 - 5;
    while k > 1 {
        p *= k;
        k -= 2;
    }
    p
}

//! Simple mutations on ternary trees: leaf swap, subtree swap and subtree
//! transfer. All three keep every leaf at degree 1 and every internal node at
//! degree 3.
//!
//! A draw that cannot change the tree (two leaves on the same parent, adjacent
//! subtree roots, reattaching onto the edge just vacated) is redrawn up to
//! [`MAX_REDRAWS`] times and then dropped as a no-op.

use std::fmt;

use rand::Rng;

use crate::tree::Tree;

pub const MAX_REDRAWS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationKind {
    LeafSwap,
    SubtreeSwap,
    SubtreeTransfer,
}

impl MutationKind {
    pub const ALL: [MutationKind; 3] = [
        MutationKind::LeafSwap,
        MutationKind::SubtreeSwap,
        MutationKind::SubtreeTransfer,
    ];

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> MutationKind {
        MutationKind::ALL[rng.random_range(0..3)]
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationKind::LeafSwap => "leaf-swap",
            MutationKind::SubtreeSwap => "subtree-swap",
            MutationKind::SubtreeTransfer => "subtree-transfer",
        })
    }
}

/// Apply one mutation of `kind` to a copy of `tree`.
pub fn apply_simple_mutation<R: Rng + ?Sized>(tree: &Tree, kind: MutationKind, rng: &mut R) -> Tree {
    let mut t = tree.clone();
    mutate(&mut t, kind, rng);
    t
}

/// Apply `k` simple mutations, each of a uniformly chosen kind.
pub fn k_mutation<R: Rng + ?Sized>(tree: &Tree, k: usize, rng: &mut R) -> Tree {
    assert!(k >= 1, "a k-mutation needs k >= 1");
    let mut t = tree.clone();
    for _ in 0..k {
        let kind = MutationKind::random(rng);
        mutate(&mut t, kind, rng);
    }
    t
}

/// Mutate in place; returns whether the tree changed.
pub fn mutate<R: Rng + ?Sized>(tree: &mut Tree, kind: MutationKind, rng: &mut R) -> bool {
    for _ in 0..MAX_REDRAWS {
        let done = match kind {
            MutationKind::LeafSwap => leaf_swap(tree, rng),
            MutationKind::SubtreeSwap => subtree_swap(tree, rng),
            MutationKind::SubtreeTransfer => subtree_transfer(tree, rng),
        };
        if done {
            return true;
        }
    }
    false
}

fn relink(adj: &mut [Vec<usize>], v: usize, old: usize, new: usize) {
    let slot = adj[v].iter_mut().find(|x| **x == old).expect("edge present");
    *slot = new;
}

fn pick_two<R: Rng + ?Sized>(lo: usize, hi: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(lo..hi);
    let mut b = rng.random_range(lo..hi - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn leaf_swap<R: Rng + ?Sized>(tree: &mut Tree, rng: &mut R) -> bool {
    let (a, b) = pick_two(0, tree.leaf_count(), rng);
    let adj = &mut tree.adj;
    let (pa, pb) = (adj[a][0], adj[b][0]);
    if pa == pb {
        return false;
    }
    relink(adj, pa, a, b);
    relink(adj, pb, b, a);
    adj[a][0] = pb;
    adj[b][0] = pa;
    true
}

/// Swap the subtree at `x` facing away from `y` with the subtree at `y`
/// facing away from `x`.
fn subtree_swap<R: Rng + ?Sized>(tree: &mut Tree, rng: &mut R) -> bool {
    let n = tree.leaf_count();
    let (x, y) = pick_two(n, tree.node_count(), rng);
    let parent = parents_toward(tree, y);
    let px = parent[x];
    if px == y {
        return false;
    }
    let mut py = x;
    while parent[py] != y {
        py = parent[py];
    }
    if px == py {
        return false;
    }
    let adj = &mut tree.adj;
    relink(adj, x, px, py);
    relink(adj, px, x, y);
    relink(adj, y, py, px);
    relink(adj, py, y, x);
    true
}

/// Detach the subtree at `s` hanging off internal node `p`, splice `p` out,
/// and reinsert `p` on a random edge of the remainder.
fn subtree_transfer<R: Rng + ?Sized>(tree: &mut Tree, rng: &mut R) -> bool {
    let n = tree.leaf_count();
    let s = rng.random_range(0..tree.node_count());
    let anchors: Vec<usize> = tree.adj[s].iter().copied().filter(|&v| v >= n).collect();
    if anchors.is_empty() {
        return false;
    }
    let p = anchors[rng.random_range(0..anchors.len())];

    let mut moving = vec![false; tree.node_count()];
    let mut stack = vec![(s, p)];
    while let Some((v, from)) = stack.pop() {
        moving[v] = true;
        for &w in &tree.adj[v] {
            if w != from {
                stack.push((w, v));
            }
        }
    }
    moving[p] = true;

    let targets: Vec<(usize, usize)> = tree
        .edges()
        .into_iter()
        .filter(|&(a, b)| !moving[a] && !moving[b])
        .collect();
    if targets.is_empty() {
        return false;
    }
    let (e1, e2) = targets[rng.random_range(0..targets.len())];

    let adj = &mut tree.adj;
    let others: Vec<usize> = adj[p].iter().copied().filter(|&v| v != s).collect();
    let (q1, q2) = (others[0], others[1]);
    relink(adj, q1, p, q2);
    relink(adj, q2, p, q1);
    relink(adj, e1, e2, p);
    relink(adj, e2, e1, p);
    adj[p] = vec![s, e1, e2];
    true
}

/// For every node, its neighbor one step closer to `root`.
fn parents_toward(tree: &Tree, root: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; tree.node_count()];
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(v) = stack.pop() {
        for &w in tree.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    parent
}

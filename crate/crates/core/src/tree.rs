//! Unrooted ternary trees with labeled leaves.
//!
//! Nodes `0..n` are the leaves, nodes `n..2n-2` are the internal nodes. Leaves
//! have exactly one neighbor and internal nodes exactly three. Internal node
//! `n + i` is displayed as `k{i}`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    pub(crate) adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Build a tree from an undirected edge list and validate it.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
        if n < 4 {
            return Err(Error::TooFewObjects(n));
        }
        let nodes = 2 * n - 2;
        let mut adj = vec![Vec::with_capacity(3); nodes];
        for &(a, b) in edges {
            if a >= nodes || b >= nodes {
                return Err(Error::InvalidTree(format!("edge ({a}, {b}) out of range")));
            }
            if a == b || adj[a].contains(&b) {
                return Err(Error::InvalidTree(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let tree = Tree { n, adj };
        tree.validate()?;
        Ok(tree)
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// The internal node a leaf hangs from.
    pub fn parent_of_leaf(&self, leaf: usize) -> usize {
        self.adj[leaf][0]
    }

    pub fn node_name(&self, v: usize, labels: &[String]) -> String {
        if v < self.n {
            labels[v].clone()
        } else {
            format!("k{}", v - self.n)
        }
    }

    /// Each undirected edge once, as `(lo, hi)`, in node order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.adj.len() - 1);
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &w in nbrs {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    /// Check degrees, edge count and connectivity.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 4 {
            return Err(Error::TooFewObjects(n));
        }
        if self.adj.len() != 2 * n - 2 {
            return Err(Error::InvalidTree(format!(
                "expected {} nodes, found {}",
                2 * n - 2,
                self.adj.len()
            )));
        }
        for (v, nbrs) in self.adj.iter().enumerate() {
            let want = if v < n { 1 } else { 3 };
            if nbrs.len() != want {
                return Err(Error::InvalidTree(format!(
                    "node {v} has degree {} (expected {want})",
                    nbrs.len()
                )));
            }
            for &w in nbrs {
                if w == v || !self.adj[w].contains(&v) {
                    return Err(Error::InvalidTree(format!("inconsistent edge ({v}, {w})")));
                }
            }
        }
        // 2n-3 edges on 2n-2 nodes: connected iff acyclic.
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != self.adj.len() {
            return Err(Error::InvalidTree("tree is disconnected".into()));
        }
        Ok(())
    }

    /// Path lengths (in edges) between every pair of leaves.
    pub fn leaf_distances(&self) -> LeafDistances {
        let n = self.n;
        let mut d = vec![0u32; n * n];
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::with_capacity(self.adj.len());
        for src in 0..n {
            dist.iter_mut().for_each(|x| *x = u32::MAX);
            dist[src] = 0;
            queue.push_back(src);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            d[src * n..(src + 1) * n].copy_from_slice(&dist[..n]);
        }
        LeafDistances { n, d }
    }

    /// Leaves on the `v` side of the edge `(v, away)`.
    pub fn side_leaves(&self, v: usize, away: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(v, away)];
        while let Some((x, from)) = stack.pop() {
            if x < self.n {
                out.push(x);
            }
            for &y in &self.adj[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Renumber internal nodes in a topology-only order: `k0` is the parent
    /// of leaf 0, the rest follow a preorder walk that visits children by
    /// their smallest descendant leaf.
    pub fn canonicalize(&self) -> Tree {
        let n = self.n;
        let root = self.parent_of_leaf(0);
        let min_leaf = self.min_leaf_below(root);
        let mut order = Vec::with_capacity(n - 2);
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, from)) = stack.pop() {
            if v < n {
                continue;
            }
            order.push(v);
            let mut kids: Vec<usize> = self.adj[v].iter().copied().filter(|&w| w != from).collect();
            kids.sort_by_key(|&w| min_leaf[w]);
            for &w in kids.iter().rev() {
                stack.push((w, v));
            }
        }
        let mut map: Vec<usize> = (0..self.adj.len()).collect();
        for (i, &v) in order.iter().enumerate() {
            map[v] = n + i;
        }
        let mut adj = vec![Vec::new(); self.adj.len()];
        for (v, nbrs) in self.adj.iter().enumerate() {
            let mut m: Vec<usize> = nbrs.iter().map(|&w| map[w]).collect();
            m.sort_unstable();
            adj[map[v]] = m;
        }
        Tree { n, adj }
    }

    /// Smallest leaf id in the subtree hanging below each node, with the tree
    /// rooted at `root`.
    pub(crate) fn min_leaf_below(&self, root: usize) -> Vec<usize> {
        let mut min_leaf = vec![usize::MAX; self.adj.len()];
        let mut post = Vec::with_capacity(self.adj.len());
        let mut stack = vec![(root, usize::MAX)];
        let mut parent = vec![usize::MAX; self.adj.len()];
        while let Some((v, from)) = stack.pop() {
            parent[v] = from;
            post.push(v);
            for &w in &self.adj[v] {
                if w != from {
                    stack.push((w, v));
                }
            }
        }
        for &v in post.iter().rev() {
            if v < self.n {
                min_leaf[v] = v;
            }
            let p = parent[v];
            if p != usize::MAX {
                min_leaf[p] = min_leaf[p].min(min_leaf[v]);
            }
        }
        min_leaf
    }
}

/// Symmetric `n x n` table of leaf-to-leaf path lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafDistances {
    n: usize,
    d: Vec<u32>,
}

impl LeafDistances {
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.d[a * self.n + b]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn row(&self, a: usize) -> &[u32] {
        &self.d[a * self.n..(a + 1) * self.n]
    }
}

/// Grows a tree one leaf at a time by subdividing an existing edge.
///
/// Starts from the star on leaves 0, 1, 2. Inserting leaf `i` consumes
/// internal node `n + i - 2`. The edge list order depends only on the
/// sequence of choices, so a choice vector identifies a tree.
#[derive(Debug, Clone)]
pub(crate) struct StepwiseBuilder {
    n: usize,
    next_leaf: usize,
    edges: Vec<(usize, usize)>,
}

impl StepwiseBuilder {
    pub(crate) fn new(n: usize) -> Self {
        debug_assert!(n >= 4);
        let c = n;
        StepwiseBuilder {
            n,
            next_leaf: 3,
            edges: vec![(0, c), (1, c), (2, c)],
        }
    }

    /// Number of edges available to the next leaf.
    pub(crate) fn choices(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.next_leaf == self.n
    }

    pub(crate) fn insert(&mut self, edge: usize) {
        let leaf = self.next_leaf;
        let p = self.n + leaf - 2;
        let (a, b) = self.edges[edge];
        self.edges[edge] = (a, p);
        self.edges.push((p, b));
        self.edges.push((p, leaf));
        self.next_leaf += 1;
    }

    pub(crate) fn build(&self) -> Tree {
        debug_assert!(self.is_complete());
        let mut adj = vec![Vec::with_capacity(3); 2 * self.n - 2];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        Tree { n: self.n, adj }
    }
}

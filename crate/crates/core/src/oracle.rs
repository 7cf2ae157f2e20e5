//! Exact small-n machinery: tree counting, exhaustive enumeration, and the
//! brute-force minimum-cost tree.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::table::{evaluate_into, QuartetCostTable, ScoredTree};
use crate::tree::{StepwiseBuilder, Tree};

/// Largest `n` enumerated by default: (2*10-5)!! = 2,027,025 trees.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// `(2n-5)!!`, the number of unrooted ternary trees on `n` labeled leaves.
pub fn count_trees(n: usize) -> Result<u128> {
    if n < 4 {
        return Err(Error::TooFewObjects(n));
    }
    Ok((3..=2 * n as u128 - 5).step_by(2).product())
}

/// Every tree on `n` leaves, each exactly once.
///
/// Trees are produced by stepwise leaf insertion: leaf `i` goes onto one of
/// the `2i - 3` edges of the tree on leaves `0..i`. The choice vector is
/// advanced like an odometer, so nothing is stored besides the current
/// choices.
#[derive(Debug, Clone)]
pub struct TreeEnumeration {
    n: usize,
    fixed: usize,
    choices: Vec<usize>,
    done: bool,
}

impl TreeEnumeration {
    fn new(n: usize, prefix: &[usize]) -> TreeEnumeration {
        let mut choices = vec![0; n - 3];
        choices[..prefix.len()].copy_from_slice(prefix);
        TreeEnumeration {
            n,
            fixed: prefix.len(),
            choices,
            done: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Iterator for TreeEnumeration {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.done {
            return None;
        }
        let mut b = StepwiseBuilder::new(self.n);
        for &c in &self.choices {
            b.insert(c);
        }
        let tree = b.build();
        // advance: position j (leaf j + 3) has 2j + 3 options
        let mut j = self.choices.len();
        loop {
            if j == self.fixed {
                self.done = true;
                break;
            }
            j -= 1;
            self.choices[j] += 1;
            if self.choices[j] < 2 * j + 3 {
                break;
            }
            self.choices[j] = 0;
        }
        Some(tree)
    }
}

pub fn enumerate_trees(n: usize) -> Result<TreeEnumeration> {
    enumerate_trees_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_trees_capped(n: usize, cap: usize) -> Result<TreeEnumeration> {
    if n < 4 {
        return Err(Error::TooFewObjects(n));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(TreeEnumeration::new(n, &[]))
}

/// The globally minimum-cost tree and the number of trees attaining that cost.
/// Ties go to the first tree in enumeration order.
pub fn brute_force_optimum(table: &QuartetCostTable) -> Result<(ScoredTree, usize)> {
    brute_force_optimum_capped(table, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_force_optimum_capped(table: &QuartetCostTable, cap: usize) -> Result<(ScoredTree, usize)> {
    let n = table.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    table.check_non_degenerate()?;

    // fan out over fixed choices for the first few inserted leaves
    let depth = (n - 3).min(3);
    let mut prefixes: Vec<Vec<usize>> = vec![vec![]];
    for j in 0..depth {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                (0..2 * j + 3).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }

    let partials: Vec<(f64, Tree, usize)> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut scratch = Vec::new();
            let mut best: Option<(f64, Tree, usize)> = None;
            for tree in TreeEnumeration::new(n, prefix) {
                let c = evaluate_into(&tree, table, &mut scratch);
                match &mut best {
                    Some((bc, _, count)) if c == *bc => *count += 1,
                    Some((bc, _, _)) if c > *bc => {}
                    _ => best = Some((c, tree, 1)),
                }
            }
            best.expect("every prefix has at least one completion")
        })
        .collect();

    let mut iter = partials.into_iter();
    let (mut cost, mut tree, mut count) = iter.next().expect("at least one prefix");
    for (c, t, k) in iter {
        if c < cost {
            (cost, tree, count) = (c, t, k);
        } else if c == cost {
            count += k;
        }
    }
    let score = table.normalize(cost)?;
    Ok((ScoredTree { tree, cost, score }, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartet::embedded_pairings;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        assert_eq!(count_trees(4).unwrap(), 3);
        assert_eq!(count_trees(5).unwrap(), 15);
        assert_eq!(count_trees(6).unwrap(), 105);
        assert_eq!(count_trees(8).unwrap(), 10395);
        assert_eq!(count_trees(10).unwrap(), 2_027_025);
        assert!(count_trees(3).is_err());
    }

    #[test]
    fn enumeration_is_distinct() {
        for n in 4..=7 {
            let sets: HashSet<_> = enumerate_trees(n).unwrap().map(|t| embedded_pairings(&t)).collect();
            assert_eq!(sets.len() as u128, count_trees(n).unwrap());
        }
    }

    #[test]
    fn four_leaves_give_the_three_topologies() {
        let trees: Vec<_> = enumerate_trees(4).unwrap().map(|t| embedded_pairings(&t)[0]).collect();
        assert_eq!(trees.len(), 3);
        let set: HashSet<_> = trees.into_iter().collect();
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(enumerate_trees(11), Err(Error::CapExceeded { n: 11, cap: 10 })));
        assert!(enumerate_trees_capped(11, 11).is_ok());
    }
}

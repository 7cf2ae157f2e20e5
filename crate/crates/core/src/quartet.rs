//! Quartets, their three pairings, and the topology a tree embeds for each.
//!
//! Quartets are enumerated in colexicographic order of their sorted members
//! (`d` outermost, then `c`, `b`, `a`). Every per-quartet table in the crate
//! uses this order, so two trees embed the same quartet set exactly when their
//! pairing vectors are equal.

use std::fmt;

use crate::error::{Error, Result};
use crate::tree::{LeafDistances, Tree};

/// Four distinct leaf ids, stored ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quartet([usize; 4]);

impl Quartet {
    pub fn new(mut ids: [usize; 4]) -> Result<Quartet> {
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidQuartet(format!("repeated member in {ids:?}")));
        }
        Ok(Quartet(ids))
    }

    pub fn members(&self) -> [usize; 4] {
        self.0
    }

    /// Position of this quartet in the canonical order.
    pub fn rank(&self) -> usize {
        let [a, b, c, d] = self.0;
        binomial(a, 1) + binomial(b, 2) + binomial(c, 3) + binomial(d, 4)
    }
}

/// Which member the smallest element of a quartet is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Pairing {
    /// `ab|cd`
    AbCd = 0,
    /// `ac|bd`
    AcBd = 1,
    /// `ad|bc`
    AdBc = 2,
}

impl Pairing {
    pub const ALL: [Pairing; 3] = [Pairing::AbCd, Pairing::AcBd, Pairing::AdBc];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pairing {
        Pairing::ALL[i]
    }
}

/// A quartet split into two sibling pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Topology {
    pub quartet: Quartet,
    pub pairing: Pairing,
}

impl Topology {
    /// The topology `ab|cd`, in any member order.
    pub fn from_pairs(a: usize, b: usize, c: usize, d: usize) -> Result<Topology> {
        let quartet = Quartet::new([a, b, c, d])?;
        let lo = quartet.0[0];
        let partner = if a == lo {
            b
        } else if b == lo {
            a
        } else if c == lo {
            d
        } else {
            c
        };
        let pairing = match quartet.0.iter().position(|&x| x == partner) {
            Some(1) => Pairing::AbCd,
            Some(2) => Pairing::AcBd,
            _ => Pairing::AdBc,
        };
        Ok(Topology { quartet, pairing })
    }

    /// The two sibling pairs, each ascending.
    pub fn pairs(&self) -> ([usize; 2], [usize; 2]) {
        let [a, b, c, d] = self.quartet.0;
        match self.pairing {
            Pairing::AbCd => ([a, b], [c, d]),
            Pairing::AcBd => ([a, c], [b, d]),
            Pairing::AdBc => ([a, d], [b, c]),
        }
    }

    pub fn display_with(&self, labels: &[String]) -> String {
        let ([a, b], [c, d]) = self.pairs();
        format!("{}{}|{}{}", labels[a], labels[b], labels[c], labels[d])
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ([a, b], [c, d]) = self.pairs();
        write!(f, "{a} {b}|{c} {d}")
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

pub fn quartet_count(n: usize) -> usize {
    binomial(n, 4)
}

/// All quartets on `n` leaves, in canonical order.
pub fn quartets(n: usize) -> impl Iterator<Item = Quartet> {
    (3..n).flat_map(|d| {
        (2..d).flat_map(move |c| (1..c).flat_map(move |b| (0..b).map(move |a| Quartet([a, b, c, d]))))
    })
}

/// The pairing with the smallest path-length sum. On a ternary tree this
/// minimum is strict and the other two sums are equal.
#[inline]
pub(crate) fn min_pairing(dist: &LeafDistances, [a, b, c, d]: [usize; 4]) -> Pairing {
    let s0 = dist.get(a, b) + dist.get(c, d);
    let s1 = dist.get(a, c) + dist.get(b, d);
    let s2 = dist.get(a, d) + dist.get(b, c);
    if s0 < s1 && s0 < s2 {
        Pairing::AbCd
    } else if s1 < s2 {
        Pairing::AcBd
    } else {
        Pairing::AdBc
    }
}

/// The topology of `q` that `tree` is consistent with.
pub fn consistent_topology(tree: &Tree, q: Quartet) -> Topology {
    consistent_with_distances(&tree.leaf_distances(), q)
}

pub fn consistent_with_distances(dist: &LeafDistances, q: Quartet) -> Topology {
    Topology {
        quartet: q,
        pairing: min_pairing(dist, q.0),
    }
}

/// Embedded pairing per quartet, in canonical quartet order.
pub fn embedded_pairings(tree: &Tree) -> Vec<Pairing> {
    let dist = tree.leaf_distances();
    let n = tree.leaf_count();
    let mut out = Vec::with_capacity(quartet_count(n));
    for d in 3..n {
        let rd = dist.row(d);
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
                    out.push(if s0 < s1 && s0 < s2 {
                        Pairing::AbCd
                    } else if s1 < s2 {
                        Pairing::AcBd
                    } else {
                        Pairing::AdBc
                    });
                }
            }
        }
    }
    out
}

/// The full embedded quartet set of `tree`, in canonical order.
pub fn embedded_quartet_set(tree: &Tree) -> Vec<Topology> {
    quartets(tree.leaf_count())
        .zip(embedded_pairings(tree))
        .map(|(quartet, pairing)| Topology { quartet, pairing })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_enumeration_order() {
        for (i, q) in quartets(9).enumerate() {
            assert_eq!(q.rank(), i);
        }
        assert_eq!(quartets(9).count(), 126);
    }

    #[test]
    fn topology_encoding_is_order_independent() {
        let t = Topology::from_pairs(3, 7, 1, 5).unwrap();
        assert_eq!(t.quartet.members(), [1, 3, 5, 7]);
        assert_eq!(t.pairing, Pairing::AcBd);
        for (a, b, c, d) in [(7, 3, 5, 1), (1, 5, 3, 7), (5, 1, 7, 3), (3, 7, 5, 1)] {
            assert_eq!(Topology::from_pairs(a, b, c, d).unwrap(), t);
        }
        assert_eq!(t.pairs(), ([1, 5], [3, 7]));
    }

    #[test]
    fn repeated_member_rejected() {
        assert!(Quartet::new([1, 2, 2, 3]).is_err());
    }

    #[test]
    fn single_quartet_tree() {
        let t = Tree::from_edges(4, &[(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap();
        let set = embedded_quartet_set(&t);
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].pairing, Pairing::AbCd);
        let q = Quartet::new([0, 1, 2, 3]).unwrap();
        assert_eq!(consistent_topology(&t, q).pairing, Pairing::AbCd);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(18, 4), 3060);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(quartet_count(4), 1);
    }
}

//! Building quartet cost tables from distances or from weighted topology sets.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::quartet::{quartet_count, quartets, Topology};
use crate::table::QuartetCostTable;

/// Entries closer than this to their mirror are averaged; anything further
/// apart is rejected as asymmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// A labeled `n x n` distance matrix, symmetric after construction.
///
/// Diagonal entries are kept as given (real compressors rarely report exact
/// zeros) but never enter a quartet cost.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, mut entries: Vec<f64>) -> Result<DistanceMatrix> {
        let n = labels.len();
        validate_labels(&labels)?;
        if entries.len() != n * n {
            return Err(Error::OutOfRange(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        for i in 0..n {
            let v = entries[i * n + i];
            if !v.is_finite() {
                return Err(Error::InvalidDistance { row: i, col: i, value: v });
            }
            for j in i + 1..n {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                for (row, col, value) in [(i, j, a), (j, i, b)] {
                    if !value.is_finite() || value < 0.0 {
                        return Err(Error::InvalidDistance { row, col, value });
                    }
                }
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::Asymmetric { row: i, col: j, a, b });
                }
                if a != b {
                    let mean = 0.5 * (a + b);
                    entries[i * n + j] = mean;
                    entries[j * n + i] = mean;
                }
            }
        }
        Ok(DistanceMatrix { labels, entries })
    }

    /// Build from a distance function over index pairs; the diagonal is 0.
    pub fn from_fn(labels: Vec<String>, mut f: impl FnMut(usize, usize) -> f64) -> Result<DistanceMatrix> {
        let n = labels.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        DistanceMatrix::new(labels, entries)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.labels.len() + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// The same matrix with objects reordered so that new object `i` is old
    /// object `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<DistanceMatrix> {
        let n = self.n();
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        DistanceMatrix::new(labels, entries)
    }
}

pub(crate) fn validate_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if l.is_empty() {
            return Err(Error::InvalidLabels("empty label".into()));
        }
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidLabels(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

/// `C(ab|cd) = d(a,b) + d(c,d)` for every quartet and pairing.
pub fn costs_from_matrix(m: &DistanceMatrix) -> Result<QuartetCostTable> {
    let n = m.n();
    if n < 4 {
        return Err(Error::TooFewObjects(n));
    }
    let costs = quartets(n)
        .map(|q| {
            let [a, b, c, d] = q.members();
            [
                m.get(a, b) + m.get(c, d),
                m.get(a, c) + m.get(b, d),
                m.get(a, d) + m.get(b, c),
            ]
        })
        .collect();
    QuartetCostTable::new(m.labels.clone(), costs)
}

/// A set of quartet topologies with weights to be maximized.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedQuartetList {
    labels: Vec<String>,
    entries: Vec<(Topology, f64)>,
}

impl WeightedQuartetList {
    pub fn new(labels: Vec<String>, entries: Vec<(Topology, f64)>) -> Result<WeightedQuartetList> {
        validate_labels(&labels)?;
        let n = labels.len();
        if n < 4 {
            return Err(Error::TooFewObjects(n));
        }
        let mut seen = HashSet::new();
        for (t, w) in &entries {
            if t.quartet.members()[3] >= n {
                return Err(Error::InvalidQuartet(format!("{t} has a member >= {n}")));
            }
            if !w.is_finite() {
                return Err(Error::OutOfRange(format!("weight of {t} is {w}")));
            }
            if !seen.insert(*t) {
                return Err(Error::DuplicateTopology(t.display_with(&labels)));
            }
        }
        Ok(WeightedQuartetList { labels, entries })
    }

    /// Every listed topology with weight 1.
    pub fn unit(labels: Vec<String>, topologies: impl IntoIterator<Item = Topology>) -> Result<WeightedQuartetList> {
        WeightedQuartetList::new(labels, topologies.into_iter().map(|t| (t, 1.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[(Topology, f64)] {
        &self.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// Listed topologies cost 0, unlisted cost 1; weights are ignored.
    #[default]
    Unit,
    /// Costs are weights reflected about the largest listed weight `w_max`:
    /// listed topologies cost `w_max - w`, unlisted ones `w_max`.
    Weighted,
}

/// Cost table whose minimum-cost trees are the maximum-consistency trees.
pub fn costs_from_weights(w: &WeightedQuartetList, mode: WeightMode) -> Result<QuartetCostTable> {
    let n = w.n();
    let ceiling = match mode {
        WeightMode::Unit => 1.0,
        WeightMode::Weighted => w
            .entries
            .iter()
            .map(|&(_, x)| x)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
            .unwrap_or(1.0),
    };
    let mut costs = vec![[ceiling; 3]; quartet_count(n)];
    for &(t, weight) in &w.entries {
        let c = match mode {
            WeightMode::Unit => 0.0,
            WeightMode::Weighted => ceiling - weight,
        };
        costs[t.quartet.rank()][t.pairing.index()] = c;
    }
    QuartetCostTable::new(w.labels.clone(), costs)
}

/// The five-object table on which no tree embeds every minimum-cost topology.
///
/// Objects are `u, v, w, x, y` (ids 0..5). `uv|wx` costs `1 - epsilon`, the
/// other two pairings of `{u,v,w,x}` cost 0, and for each quartet containing
/// `y` one pairing costs 0 (`uv|xy`, `uv|wy`, `uy|wx`, `vy|wx`) and the rest 1.
/// The optimum is `(y,((u,v),(w,x)))` with cost `1 - epsilon`.
pub fn counterexample_table(epsilon: f64) -> Result<QuartetCostTable> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::OutOfRange(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let labels: Vec<String> = ["u", "v", "w", "x", "y"].iter().map(|s| s.to_string()).collect();
    let (u, v, w, x, y) = (0, 1, 2, 3, 4);
    let mut costs = vec![[1.0; 3]; quartet_count(5)];
    let mut set = |t: Topology, c: f64| costs[t.quartet.rank()][t.pairing.index()] = c;
    set(Topology::from_pairs(u, v, w, x)?, 1.0 - epsilon);
    set(Topology::from_pairs(u, w, x, v)?, 0.0);
    set(Topology::from_pairs(u, x, v, w)?, 0.0);
    set(Topology::from_pairs(x, y, u, v)?, 0.0);
    set(Topology::from_pairs(w, y, u, v)?, 0.0);
    set(Topology::from_pairs(u, y, w, x)?, 0.0);
    set(Topology::from_pairs(v, y, w, x)?, 0.0);
    QuartetCostTable::new(labels, costs)
}

/// Label helper: `o0, o1, ...`.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("o{i}")).collect()
}

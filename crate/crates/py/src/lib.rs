//! Python bindings. Build with `maturin develop --release` from this crate's
//! directory.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quartet_tree::datagen::{self, MetricScale, TagCorpusConfig};
use quartet_tree::io;
use quartet_tree::ncd::{self, compressor_by_name, Corpus};
use quartet_tree::oracle;
use quartet_tree::quartet::embedded_pairings;
use quartet_tree::search::DEFAULT_PATIENCE;
use quartet_tree::{Error, SearchConfig, Termination};

create_exception!(quartet_py, QuartetError, PyValueError);
create_exception!(quartet_py, DegenerateTableError, QuartetError);
create_exception!(quartet_py, AgreementTimeoutError, QuartetError);
create_exception!(quartet_py, CapExceededError, QuartetError);

fn err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::DegenerateTable(_) => DegenerateTableError::new_err(msg),
        Error::AgreementTimeout { .. } => AgreementTimeoutError::new_err(msg),
        Error::CapExceeded { .. } => CapExceededError::new_err(msg),
        Error::Io(_) | Error::Compression { .. } => PyIOError::new_err(msg),
        _ => QuartetError::new_err(msg),
    }
}

/// Symmetric distance matrix with labels.
#[pyclass(module = "quartet_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct DistanceMatrix {
    inner: quartet_tree::DistanceMatrix,
}

#[pymethods]
impl DistanceMatrix {
    #[new]
    fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(QuartetError::new_err(format!("expected a {n}x{n} matrix")));
        }
        let inner = quartet_tree::DistanceMatrix::new(labels, rows.concat()).map_err(err)?;
        Ok(DistanceMatrix { inner })
    }

    /// Parse the whitespace matrix format used by the `qtree` CLI.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(DistanceMatrix {
            inner: io::parse_matrix(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> PyResult<String> {
        io::write_matrix(&self.inner).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(QuartetError::new_err(format!("index out of range for n = {n}")));
        }
        Ok(self.inner.get(i, j))
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        self.inner.entries().chunks(self.inner.n()).map(|r| r.to_vec()).collect()
    }

    fn __repr__(&self) -> String {
        format!("DistanceMatrix(n={})", self.inner.n())
    }
}

/// Cost of each of the three pairings of every quartet.
#[pyclass(module = "quartet_py", frozen)]
struct CostTable {
    inner: quartet_tree::QuartetCostTable,
}

#[pymethods]
impl CostTable {
    /// `cost(ab|cd) = d(a,b) + d(c,d)`.
    #[staticmethod]
    fn from_matrix(m: &DistanceMatrix) -> PyResult<Self> {
        Ok(CostTable {
            inner: quartet_tree::costs_from_matrix(&m.inner).map_err(err)?,
        })
    }

    /// From weighted-topology text (`labels ...` then `a b | c d [w]` lines).
    #[staticmethod]
    fn from_weights(text: &str) -> PyResult<Self> {
        let list = io::parse_weights(text).map_err(err)?;
        let inner = quartet_tree::costs_from_weights(&list, io::weight_mode_for(&list)).map_err(err)?;
        Ok(CostTable { inner })
    }

    /// The five-object table whose best tree misses a minimum-cost topology.
    #[staticmethod]
    fn counterexample(epsilon: f64) -> PyResult<Self> {
        Ok(CostTable {
            inner: quartet_tree::counterexample_table(epsilon).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn min_total(&self) -> f64 {
        self.inner.min_total()
    }

    #[getter]
    fn max_total(&self) -> f64 {
        self.inner.max_total()
    }

    /// Rows in canonical quartet order, each `[ab|cd, ac|bd, ad|bc]`.
    fn costs(&self) -> Vec<[f64; 3]> {
        self.inner.costs().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "CostTable(n={}, m={}, M={})",
            self.inner.n(),
            self.inner.min_total(),
            self.inner.max_total()
        )
    }
}

/// Unrooted ternary tree over labeled leaves.
#[pyclass(module = "quartet_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Tree {
    inner: quartet_tree::Tree,
    labels: Vec<String>,
}

#[pymethods]
impl Tree {
    #[staticmethod]
    fn from_newick(text: &str) -> PyResult<Self> {
        let (inner, labels) = io::parse_newick(text).map_err(err)?;
        Ok(Tree { inner, labels })
    }

    fn newick(&self) -> String {
        io::to_newick(&self.inner, &self.labels)
    }

    fn dot(&self) -> String {
        io::to_dot(&self.inner, &self.labels)
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.labels.clone()
    }

    #[getter]
    fn leaf_count(&self) -> usize {
        self.inner.leaf_count()
    }

    /// Embedded topologies as `"ab|cd"` strings, in canonical order.
    fn quartets(&self) -> Vec<String> {
        quartet_tree::embedded_quartet_set(&self.inner)
            .iter()
            .map(|t| {
                let ([a, b], [c, d]) = t.pairs();
                let l = &self.labels;
                format!("{} {}|{} {}", l[a], l[b], l[c], l[d])
            })
            .collect()
    }

    /// Same label set and the same embedded quartets, whatever the leaf order.
    fn same_topology(&self, other: &Tree) -> bool {
        if self.labels == other.labels {
            return embedded_pairings(&self.inner) == embedded_pairings(&other.inner);
        }
        match io::parse_newick_with_labels(&other.newick(), &self.labels) {
            Ok(t) => embedded_pairings(&self.inner) == embedded_pairings(&t),
            Err(_) => false,
        }
    }

    fn score(&self, table: &CostTable) -> PyResult<f64> {
        Ok(quartet_tree::score(&self.inner, &table.inner).map_err(err)?.score)
    }

    fn __repr__(&self) -> String {
        format!("Tree({})", self.newick())
    }
}

/// Search for a high-scoring tree. `termination` is `"agreement"` or
/// `"simple"`; returns `(tree, score)`.
#[pyfunction]
#[pyo3(signature = (table, seed=0, termination="agreement", runs=None, patience=None, k_max=None, max_trees=None))]
#[allow(clippy::too_many_arguments)]
fn search(
    py: Python<'_>,
    table: &CostTable,
    seed: u64,
    termination: &str,
    runs: Option<usize>,
    patience: Option<u64>,
    k_max: Option<usize>,
    max_trees: Option<u64>,
) -> PyResult<(Tree, f64)> {
    let termination = match termination {
        "agreement" => Termination::Agreement { runs },
        "simple" => Termination::Simple {
            patience: patience.unwrap_or(DEFAULT_PATIENCE),
        },
        other => return Err(QuartetError::new_err(format!("unknown termination {other:?}"))),
    };
    let config = SearchConfig {
        seed,
        termination,
        k_max,
        max_trees,
    };
    let out = py.detach(|| quartet_tree::search(&table.inner, &config)).map_err(err)?;
    Ok((
        Tree {
            inner: out.best.tree,
            labels: table.inner.labels().to_vec(),
        },
        out.best.score,
    ))
}

/// Exhaustive optimum: `(tree, score, number_of_optimal_trees)`.
#[pyfunction]
#[pyo3(signature = (table, cap=oracle::DEFAULT_ENUMERATION_CAP))]
fn brute_force_optimum(py: Python<'_>, table: &CostTable, cap: usize) -> PyResult<(Tree, f64, usize)> {
    let (best, count) = py
        .detach(|| oracle::brute_force_optimum_capped(&table.inner, cap))
        .map_err(err)?;
    Ok((
        Tree {
            inner: best.tree,
            labels: table.inner.labels().to_vec(),
        },
        best.score,
        count,
    ))
}

#[pyfunction]
fn count_trees(n: usize) -> PyResult<u128> {
    oracle::count_trees(n).map_err(err)
}

#[pyfunction]
fn r_for_n(n: usize) -> PyResult<usize> {
    quartet_tree::r_for_n(n).map_err(err)
}

/// A random tree and its distance matrix `(L + 1) / 18` (or `/ 2n` with
/// `scale="two-n"`).
#[pyfunction]
#[pyo3(signature = (n, seed=0, scale="fixed18"))]
fn random_tree_metric(n: usize, seed: u64, scale: &str) -> PyResult<(Tree, DistanceMatrix)> {
    let scale = match scale {
        "fixed18" => MetricScale::Fixed18,
        "two-n" => MetricScale::TwoN,
        other => return Err(QuartetError::new_err(format!("unknown scale {other:?}"))),
    };
    let (tree, m) = datagen::random_tree_metric(n, &mut ChaCha8Rng::seed_from_u64(seed), scale).map_err(err)?;
    Ok((
        Tree {
            inner: tree,
            labels: m.labels().to_vec(),
        },
        DistanceMatrix { inner: m },
    ))
}

/// Write a tagged random-file corpus into `out_dir`; returns the file names.
#[pyfunction]
#[pyo3(signature = (out_dir, seed=0, ci_scale=true))]
fn tag_corpus(out_dir: PathBuf, seed: u64, ci_scale: bool) -> PyResult<Vec<String>> {
    let cfg = if ci_scale {
        TagCorpusConfig::ci_scale()
    } else {
        TagCorpusConfig::full_size()
    };
    let corpus = datagen::tag_corpus(&cfg, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?;
    corpus.write_to_dir(&out_dir).map_err(err)?;
    Ok(corpus.labels())
}

#[pyfunction]
#[pyo3(signature = (x, y, compressor="bzip2"))]
fn ncd_pair(x: &Bound<'_, PyBytes>, y: &Bound<'_, PyBytes>, compressor: &str) -> PyResult<f64> {
    let c = compressor_by_name(compressor).map_err(err)?;
    ncd::ncd_pair(x.as_bytes(), y.as_bytes(), c.as_ref()).map_err(err)
}

/// NCD matrix over a directory of files or a `label path` manifest.
#[pyfunction]
#[pyo3(signature = (path, compressor="bzip2"))]
fn ncd_matrix(py: Python<'_>, path: PathBuf, compressor: &str) -> PyResult<DistanceMatrix> {
    let c = compressor_by_name(compressor).map_err(err)?;
    let inner = py
        .detach(|| {
            let corpus = if path.is_dir() {
                Corpus::from_dir(&path)?
            } else {
                Corpus::from_manifest(&path)?
            };
            ncd::ncd_matrix(&corpus, c.as_ref())
        })
        .map_err(err)?;
    Ok(DistanceMatrix { inner })
}

#[pymodule]
fn quartet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("QuartetError", py.get_type::<QuartetError>())?;
    m.add("DegenerateTableError", py.get_type::<DegenerateTableError>())?;
    m.add("AgreementTimeoutError", py.get_type::<AgreementTimeoutError>())?;
    m.add("CapExceededError", py.get_type::<CapExceededError>())?;
    m.add_class::<DistanceMatrix>()?;
    m.add_class::<CostTable>()?;
    m.add_class::<Tree>()?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(count_trees, m)?)?;
    m.add_function(wrap_pyfunction!(r_for_n, m)?)?;
    m.add_function(wrap_pyfunction!(random_tree_metric, m)?)?;
    m.add_function(wrap_pyfunction!(tag_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(ncd_pair, m)?)?;
    m.add_function(wrap_pyfunction!(ncd_matrix, m)?)?;
    Ok(())
}

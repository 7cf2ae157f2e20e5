//! Normalized compression distance.
//!
//! `NCD(x, y) = (C(xy) - min(C(x), C(y))) / max(C(x), C(y))`, where `C` is the
//! compressed size in bytes and `xy` is plain concatenation. Matrix entries use
//! the larger of the two concatenation orders so the result is symmetric.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use bzip2::write::BzEncoder;
use flate2::write::DeflateEncoder;
use rayon::prelude::*;

use crate::cost::{validate_labels, DistanceMatrix};
use crate::error::{Error, Result};

pub trait Compressor: Send + Sync {
    fn name(&self) -> &str;

    /// Length of the complete compressed stream, headers included.
    fn compressed_size(&self, data: &[u8]) -> io::Result<usize>;

    /// Human-readable parameter summary, e.g. `level=9`.
    fn parameters(&self) -> String;
}

/// Raw deflate (the zlib/gzip family).
#[derive(Debug, Clone, Copy)]
pub struct Deflate {
    pub level: u32,
}

impl Default for Deflate {
    fn default() -> Self {
        Deflate { level: 9 }
    }
}

impl Compressor for Deflate {
    fn name(&self) -> &str {
        "deflate"
    }

    fn compressed_size(&self, data: &[u8]) -> io::Result<usize> {
        let mut enc = DeflateEncoder::new(CountingSink(0), flate2::Compression::new(self.level));
        enc.write_all(data)?;
        Ok(enc.finish()?.0)
    }

    fn parameters(&self) -> String {
        format!("level={}", self.level)
    }
}

/// bzip2 block-sorting compression. `block_size` is in units of 100 kB
/// (1..=9); inputs longer than one block are compressed block by block, so
/// shared content further apart than that is not seen.
#[derive(Debug, Clone, Copy)]
pub struct Bzip2 {
    pub block_size: u32,
}

impl Default for Bzip2 {
    fn default() -> Self {
        Bzip2 { block_size: 9 }
    }
}

impl Compressor for Bzip2 {
    fn name(&self) -> &str {
        "bzip2"
    }

    fn compressed_size(&self, data: &[u8]) -> io::Result<usize> {
        let mut enc = BzEncoder::new(CountingSink(0), bzip2::Compression::new(self.block_size));
        enc.write_all(data)?;
        Ok(enc.finish()?.0)
    }

    fn parameters(&self) -> String {
        format!("block_size={}00k", self.block_size)
    }
}

struct CountingSink(usize);

impl Write for CountingSink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0 += buf.len();
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

pub const COMPRESSOR_NAMES: [&str; 2] = ["bzip2", "deflate"];

pub fn compressor_by_name(name: &str) -> Result<Box<dyn Compressor>> {
    match name {
        "bzip2" | "bzlib" => Ok(Box::new(Bzip2::default())),
        "deflate" | "zlib" | "gzip" => Ok(Box::new(Deflate::default())),
        other => Err(Error::OutOfRange(format!(
            "unknown compressor {other:?} (expected one of {COMPRESSOR_NAMES:?})"
        ))),
    }
}

/// Ordered, labeled byte contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    items: Vec<(String, Vec<u8>)>,
}

impl Corpus {
    pub fn new(items: Vec<(String, Vec<u8>)>) -> Result<Corpus> {
        let labels: Vec<String> = items.iter().map(|(l, _)| l.clone()).collect();
        validate_labels(&labels)?;
        if let Some((l, _)) = items.iter().find(|(_, d)| d.is_empty()) {
            return Err(Error::InvalidLabels(format!("object {l:?} is empty")));
        }
        Ok(Corpus { items })
    }

    /// Every regular file in `dir`, labeled by file name, sorted by name.
    pub fn from_dir(dir: &Path) -> Result<Corpus> {
        let mut items = Vec::new();
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            if !entry.file_type()?.is_file() {
                continue;
            }
            let label = entry.file_name().to_string_lossy().into_owned();
            items.push((label, fs::read(entry.path())?));
        }
        items.sort_by(|a, b| a.0.cmp(&b.0));
        Corpus::new(items)
    }

    /// A manifest lists one `label path` pair per line; relative paths are
    /// taken from the manifest's directory. Blank lines and `#` comments are
    /// skipped.
    pub fn from_manifest(path: &Path) -> Result<Corpus> {
        let text = fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut items = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(2, char::is_whitespace);
            let (label, file) = match (parts.next(), parts.next()) {
                (Some(l), Some(f)) => (l, f.trim()),
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "expected `label path`".into(),
                    })
                }
            };
            let p = base.join(file);
            let data = fs::read(&p).map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("cannot read {}: {e}", p.display()),
            })?;
            items.push((label.to_string(), data));
        }
        Corpus::new(items)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.items.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn items(&self) -> &[(String, Vec<u8>)] {
        &self.items
    }

    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (label, data) in &self.items {
            fs::write(dir.join(label), data)?;
        }
        Ok(())
    }
}

fn ncd_from_sizes(cx: usize, cy: usize, cxy: usize) -> f64 {
    let (lo, hi) = (cx.min(cy) as f64, cx.max(cy) as f64);
    ((cxy as f64 - lo) / hi).max(0.0)
}

/// NCD of `x` and `y` with `x` first in the concatenation.
pub fn ncd_pair(x: &[u8], y: &[u8], c: &dyn Compressor) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::OutOfRange("NCD needs non-empty inputs".into()));
    }
    let wrap = |source| Error::Compression {
        label: c.name().to_string(),
        source,
    };
    let cx = c.compressed_size(x).map_err(wrap)?;
    let cy = c.compressed_size(y).map_err(wrap)?;
    let cxy = c.compressed_size(&[x, y].concat()).map_err(wrap)?;
    Ok(ncd_from_sizes(cx, cy, cxy))
}

/// Pairwise NCD over a corpus. Off-diagonal entries take the larger of the
/// two concatenation orders; the diagonal holds `NCD(x, x)`.
pub fn ncd_matrix(corpus: &Corpus, c: &dyn Compressor) -> Result<DistanceMatrix> {
    let n = corpus.len();
    if n < 4 {
        return Err(Error::TooFewObjects(n));
    }
    let items = corpus.items();
    let singles: Vec<usize> = items
        .par_iter()
        .map(|(label, data)| {
            c.compressed_size(data).map_err(|source| Error::Compression {
                label: label.clone(),
                source,
            })
        })
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&items[i].1, &items[j].1);
            let size = |a: &[u8], b: &[u8]| {
                c.compressed_size(&[a, b].concat()).map_err(|source| Error::Compression {
                    label: format!("{} + {}", items[i].0, items[j].0),
                    source,
                })
            };
            let xy = ncd_from_sizes(singles[i], singles[j], size(x, y)?);
            if i == j {
                return Ok(xy);
            }
            let yx = ncd_from_sizes(singles[i], singles[j], size(y, x)?);
            Ok(xy.max(yx))
        })
        .collect::<Result<_>>()?;

    let mut entries = vec![0.0; n * n];
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        entries[i * n + j] = v;
        entries[j * n + i] = v;
    }
    DistanceMatrix::new(corpus.labels(), entries)
}

/// `|NCD(x,y) - NCD(y,x)|` for every unordered pair, the largest value.
pub fn max_order_asymmetry(corpus: &Corpus, c: &dyn Compressor) -> Result<f64> {
    let items = corpus.items();
    let n = items.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let diffs: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = ncd_pair(&items[i].1, &items[j].1, c)?;
            let b = ncd_pair(&items[j].1, &items[i].1, c)?;
            Ok((a - b).abs())
        })
        .collect::<Result<_>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bytes(seed: u64, len: usize) -> Vec<u8> {
        let mut v = vec![0u8; len];
        ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut v);
        v
    }

    #[test]
    fn self_distance_is_positive_and_below_independent_pairs() {
        let x = random_bytes(1, 20_000);
        let y = random_bytes(5, 20_000);
        for c in [&Bzip2::default() as &dyn Compressor, &Deflate::default()] {
            let same = ncd_pair(&x, &x, c).unwrap();
            let other = ncd_pair(&x, &y, c).unwrap();
            assert!(same > 0.0 && same < 0.5 * other, "{}: {same} vs {other}", c.name());
        }
        // deflate sees the whole repeat inside its window
        assert!(ncd_pair(&x, &x, &Deflate::default()).unwrap() < 0.05);
    }

    #[test]
    fn independent_random_blocks_are_far_apart() {
        let x = random_bytes(2, 100 * 1024);
        let y = random_bytes(3, 100 * 1024);
        for c in [&Bzip2::default() as &dyn Compressor, &Deflate::default()] {
            let d = ncd_pair(&x, &y, c).unwrap();
            assert!(d >= 0.9, "{} gave {d}", c.name());
        }
    }

    #[test]
    fn compressed_size_is_deterministic() {
        let x = random_bytes(4, 5000);
        let c = Bzip2::default();
        assert_eq!(c.compressed_size(&x).unwrap(), c.compressed_size(&x).unwrap());
        assert!(c.compressed_size(b"a").unwrap() >= 1);
        assert!(Deflate::default().compressed_size(b"a").unwrap() >= 1);
    }

    #[test]
    fn identical_files_give_equal_small_entries() {
        let x = random_bytes(5, 4000);
        let corpus = Corpus::new((0..4).map(|i| (format!("f{i}"), x.clone())).collect()).unwrap();
        let m = ncd_matrix(&corpus, &Deflate::default()).unwrap();
        let v = m.get(0, 1);
        assert!(v < 0.1);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(m.get(i, j), v);
                }
            }
        }
        let table = crate::cost::costs_from_matrix(&m).unwrap();
        assert!(table.is_degenerate());
    }

    #[test]
    fn corpus_validation() {
        assert!(Corpus::new(vec![("a".into(), vec![])]).is_err());
        assert!(Corpus::new(vec![("a".into(), vec![1]), ("a".into(), vec![2])]).is_err());
        let c = Corpus::new((0..3).map(|i| (format!("f{i}"), vec![i as u8])).collect()).unwrap();
        assert!(matches!(ncd_matrix(&c, &Deflate::default()), Err(Error::TooFewObjects(3))));
        assert!(compressor_by_name("ppmz").is_err());
        assert_eq!(compressor_by_name("zlib").unwrap().name(), "deflate");
    }
}

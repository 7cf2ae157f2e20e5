//! Generators for controlled experiments where the right answer is known.

use rand::Rng;

use crate::cost::{default_labels, DistanceMatrix};
use crate::error::{Error, Result};
use crate::ncd::Corpus;
use crate::search::random_tree;
use crate::tree::Tree;

/// How path lengths are turned into distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricScale {
    /// `(L + 1) / 18` for every `n`.
    #[default]
    Fixed18,
    /// `(L + 1) / (2n)`, which stays at most 1 for any `n`.
    TwoN,
}

/// A random tree and the distance matrix read off its leaf path lengths:
/// `d(a, b) = (L(a, b) + 1) / divisor` for `a != b`, `d(a, a) = 0`.
pub fn random_tree_metric<R: Rng + ?Sized>(n: usize, rng: &mut R, scale: MetricScale) -> Result<(Tree, DistanceMatrix)> {
    let tree = random_tree(n, rng)?;
    let dist = tree.leaf_distances();
    let divisor = match scale {
        MetricScale::Fixed18 => 18.0,
        MetricScale::TwoN => (2 * n) as f64,
    };
    let m = DistanceMatrix::from_fn(default_labels(n), |a, b| (dist.get(a, b) as f64 + 1.0) / divisor)?;
    Ok((tree, m))
}

/// Files of random bytes overwritten with copies of shared random "tags".
///
/// Tags are named `a`, `b`, ... and a file named `abd` carries tags a, b
/// and d, applied in that order, so later tags may overwrite earlier ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagCorpusConfig {
    pub num_tags: usize,
    pub tag_size: usize,
    pub file_size: usize,
    pub copies_per_tag: usize,
    pub files: Vec<String>,
}

pub const MAX_TAGS_PER_FILE: usize = 4;

/// 22 files over 11 tags in two families (tags a-e and f-k). No file named
/// plain `b`.
pub const DEFAULT_TAG_FILES: [&str; 22] = [
    "a", "ab", "abc", "abcd", "abce", "abd", "ac", "acde", "ad", "cd", "cde", //
    "f", "fg", "fgh", "fghi", "fgi", "gh", "ghij", "hij", "hijk", "ij", "k",
];

impl TagCorpusConfig {
    /// 80 KiB files with 1 KiB tags.
    pub fn full_size() -> TagCorpusConfig {
        TagCorpusConfig {
            num_tags: 11,
            tag_size: 1024,
            file_size: 80 * 1024,
            copies_per_tag: 10,
            files: DEFAULT_TAG_FILES.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// 8 KiB files with 128-byte tags, same combinatorial structure.
    pub fn ci_scale() -> TagCorpusConfig {
        TagCorpusConfig {
            tag_size: 128,
            file_size: 8 * 1024,
            ..TagCorpusConfig::full_size()
        }
    }

    /// Tag indices carried by each file.
    pub fn file_tags(&self) -> Result<Vec<Vec<usize>>> {
        self.files
            .iter()
            .map(|name| {
                let tags: Vec<usize> = name.bytes().map(|b| b.wrapping_sub(b'a') as usize).collect();
                if tags.is_empty() || tags.len() > MAX_TAGS_PER_FILE {
                    return Err(Error::OutOfRange(format!(
                        "file {name:?} must use 1..={MAX_TAGS_PER_FILE} tags"
                    )));
                }
                if let Some(&t) = tags.iter().find(|&&t| t >= self.num_tags) {
                    return Err(Error::OutOfRange(format!(
                        "file {name:?} uses tag {t} but only {} tags exist",
                        self.num_tags
                    )));
                }
                let mut sorted = tags.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != tags.len() {
                    return Err(Error::OutOfRange(format!("file {name:?} repeats a tag")));
                }
                Ok(tags)
            })
            .collect()
    }

    fn validate(&self) -> Result<Vec<Vec<usize>>> {
        if self.num_tags > 26 || self.num_tags == 0 {
            return Err(Error::OutOfRange("num_tags must be in 1..=26".into()));
        }
        if self.tag_size == 0 || self.tag_size > self.file_size {
            return Err(Error::OutOfRange("tag_size must be in 1..=file_size".into()));
        }
        self.file_tags()
    }
}

/// Generate the tagged corpus. Output order follows `config.files`.
pub fn tag_corpus<R: Rng + ?Sized>(config: &TagCorpusConfig, rng: &mut R) -> Result<Corpus> {
    let file_tags = config.validate()?;
    let tags: Vec<Vec<u8>> = (0..config.num_tags)
        .map(|_| {
            let mut t = vec![0u8; config.tag_size];
            rng.fill_bytes(&mut t);
            t
        })
        .collect();
    let mut items = Vec::with_capacity(config.files.len());
    for (name, carried) in config.files.iter().zip(&file_tags) {
        let mut data = vec![0u8; config.file_size];
        rng.fill_bytes(&mut data);
        for &t in carried {
            for _ in 0..config.copies_per_tag {
                let at = rng.random_range(0..=config.file_size - config.tag_size);
                data[at..at + config.tag_size].copy_from_slice(&tags[t]);
            }
        }
        items.push((name.clone(), data));
    }
    Corpus::new(items)
}

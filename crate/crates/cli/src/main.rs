use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quartet_tree::datagen::{random_tree_metric, tag_corpus, MetricScale, TagCorpusConfig};
use quartet_tree::io::{
    looks_like_weights, parse_matrix, parse_weights, to_dot, to_newick, weight_mode_for, write_matrix,
};
use quartet_tree::ncd::{compressor_by_name, ncd_matrix, Corpus};
use quartet_tree::oracle::{brute_force_optimum_capped, DEFAULT_ENUMERATION_CAP};
use quartet_tree::search::{search, DEFAULT_PATIENCE};
use quartet_tree::{costs_from_matrix, costs_from_weights, Error, QuartetCostTable, SearchConfig, Termination};

/// Quartet-tree hierarchical clustering.
#[derive(Parser)]
#[command(name = "qtree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a high-scoring tree for a distance matrix or weight file.
    Maketree(MaketreeArgs),
    /// Build a pairwise NCD matrix from a directory or manifest.
    Ncd(NcdArgs),
    /// Find the optimal tree by exhaustive enumeration (small n only).
    Exact(ExactArgs),
    /// Generate synthetic inputs.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Args)]
struct TreeOutput {
    /// Also write the Newick tree here.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write a Graphviz node/edge list here.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct MaketreeArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `simple:PATIENCE`, `simple`, `agreement` or `agreement:R`.
    #[arg(long, default_value = "agreement", value_parser = parse_termination)]
    termination: Termination,
    /// Longest k-mutation (default max(64, 2n)).
    #[arg(long)]
    kmax: Option<usize>,
    /// Give up after this many examined trees per run.
    #[arg(long)]
    max_trees: Option<u64>,
    /// Write score trajectory and k histogram here.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    out: TreeOutput,
}

#[derive(Args)]
struct NcdArgs {
    /// Directory of files, or a manifest of `label path` lines.
    input: PathBuf,
    #[arg(long, default_value = "bzip2")]
    compressor: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    #[command(flatten)]
    out: TreeOutput,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Fixed18,
    TwoN,
}

#[derive(Subcommand)]
enum GenCommand {
    /// A random tree and its path-length distance matrix.
    RandomTree {
        #[arg(long, default_value_t = 18)]
        leaves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Scale::Fixed18)]
        scale: Scale,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Random files sharing random tags.
    Tags {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 8 KiB files with 128-byte tags instead of 80 KiB and 1 KiB.
        #[arg(long)]
        ci_scale: bool,
        #[arg(long)]
        tag_size: Option<usize>,
        #[arg(long)]
        file_size: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        /// Comma-separated tag combinations, e.g. `a,ab,abc`.
        #[arg(long, value_delimiter = ',')]
        files: Option<Vec<String>>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn parse_termination(s: &str) -> Result<Termination, String> {
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let num = |a: &str| a.parse::<u64>().map_err(|_| format!("bad number {a:?}"));
    match (kind, arg) {
        ("simple", None) => Ok(Termination::Simple {
            patience: DEFAULT_PATIENCE,
        }),
        ("simple", Some(p)) => Ok(Termination::Simple { patience: num(p)? }),
        ("agreement", None) => Ok(Termination::Agreement { runs: None }),
        ("agreement", Some(r)) => Ok(Termination::Agreement {
            runs: Some(num(r)? as usize),
        }),
        _ => Err(format!("expected simple[:PATIENCE] or agreement[:R], got {s:?}")),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateTable(_) => 3,
        Error::AgreementTimeout { .. } => 4,
        Error::CapExceeded { .. } => 5,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn load_table(path: &Path) -> Result<QuartetCostTable, Error> {
    let text = read(path)?;
    if looks_like_weights(&text) {
        let list = parse_weights(&text)?;
        costs_from_weights(&list, weight_mode_for(&list))
    } else {
        costs_from_matrix(&parse_matrix(&text)?)
    }
}

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn say(text: &str) -> Result<(), Error> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn emit_tree(newick: &str, dot: Option<String>, out: &TreeOutput) -> Result<(), Error> {
    say(&format!("{newick}\n"))?;
    if let Some(p) = &out.output {
        fs::write(p, format!("{newick}\n"))?;
    }
    if let (Some(p), Some(d)) = (&out.dot, dot) {
        fs::write(p, d)?;
    }
    Ok(())
}

fn maketree(args: &MaketreeArgs) -> Result<(), Error> {
    let table = load_table(&args.input)?;
    let config = SearchConfig {
        seed: args.seed,
        termination: args.termination,
        k_max: args.kmax,
        max_trees: args.max_trees,
    };
    let outcome = search(&table, &config)?;
    let tree = &outcome.best.tree;
    let dot = args.out.dot.as_ref().map(|_| to_dot(tree, table.labels()));
    emit_tree(&to_newick(tree, table.labels()), dot, &args.out)?;
    say(&format!("S(T) = {:.6}\n", outcome.best.score))?;
    if let Some(p) = &args.stats {
        let mut text = String::new();
        for (i, run) in outcome.runs.iter().enumerate() {
            text.push_str(&format!("# run {i} trees_examined {}\n", run.trees_examined));
            text.push_str(&run.to_text());
        }
        fs::write(p, text)?;
    }
    Ok(())
}

fn ncd(args: &NcdArgs) -> Result<(), Error> {
    let compressor = compressor_by_name(&args.compressor)?;
    let corpus = if args.input.is_dir() {
        Corpus::from_dir(&args.input)?
    } else {
        Corpus::from_manifest(&args.input)?
    };
    let text = write_matrix(&ncd_matrix(&corpus, compressor.as_ref())?)?;
    match &args.output {
        Some(p) => fs::write(p, text)?,
        None => say(&text)?,
    }
    Ok(())
}

fn exact(args: &ExactArgs) -> Result<(), Error> {
    let table = load_table(&args.input)?;
    let (best, count) = brute_force_optimum_capped(&table, args.cap)?;
    let dot = args.out.dot.as_ref().map(|_| to_dot(&best.tree, table.labels()));
    emit_tree(&to_newick(&best.tree, table.labels()), dot, &args.out)?;
    say(&format!("S(T) = {:.6}\noptimal trees: {count}\n", best.score))?;
    Ok(())
}

fn generate(cmd: &GenCommand) -> Result<(), Error> {
    match cmd {
        GenCommand::RandomTree {
            leaves,
            seed,
            scale,
            out_dir,
        } => {
            let scale = match scale {
                Scale::Fixed18 => MetricScale::Fixed18,
                Scale::TwoN => MetricScale::TwoN,
            };
            let (tree, m) = random_tree_metric(*leaves, &mut ChaCha8Rng::seed_from_u64(*seed), scale)?;
            fs::create_dir_all(out_dir)?;
            fs::write(out_dir.join("matrix.txt"), write_matrix(&m)?)?;
            fs::write(out_dir.join("tree.nwk"), format!("{}\n", to_newick(&tree, m.labels())))?;
            say(&format!(
                "wrote {} and {}\n",
                out_dir.join("matrix.txt").display(),
                out_dir.join("tree.nwk").display()
            ))?;
        }
        GenCommand::Tags {
            seed,
            ci_scale,
            tag_size,
            file_size,
            copies,
            files,
            out_dir,
        } => {
            let mut cfg = if *ci_scale {
                TagCorpusConfig::ci_scale()
            } else {
                TagCorpusConfig::full_size()
            };
            cfg.tag_size = tag_size.unwrap_or(cfg.tag_size);
            cfg.file_size = file_size.unwrap_or(cfg.file_size);
            cfg.copies_per_tag = copies.unwrap_or(cfg.copies_per_tag);
            if let Some(f) = files {
                cfg.files = f.clone();
            }
            let corpus = tag_corpus(&cfg, &mut ChaCha8Rng::seed_from_u64(*seed))?;
            corpus.write_to_dir(out_dir)?;
            say(&format!("wrote {} files to {}\n", corpus.len(), out_dir.display()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Maketree(a) => maketree(a),
        Command::Ncd(a) => ncd(a),
        Command::Exact(a) => exact(a),
        Command::Gen(g) => generate(g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtree: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

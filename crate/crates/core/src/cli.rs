//! Command-line surface. Every flag can also be set through a `RADTREE_`
//! environment variable.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::corpus::{read_labels, read_tsv};
use crate::metrics::{evaluate, BucketSpec, EvalOptions, SimDenominator};
use crate::radical_tree::{ArityTable, RadicalTree};
use crate::stats::{
    count_occurrences_par, occn_distribution, rssl_distribution, Histogram, StatsError,
};
use crate::table::DecompositionTable;
use crate::targets::{build_vocab_for, export_targets, format_sig17, radical_weights, WeightMode};
use crate::treesim::char_sim;
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "radtree",
    version,
    about = "Radical trees, TreeSim and structure-aware OCR evaluation"
)]
pub struct Cli {
    /// Decomposition table (`<char>\t<token> <token> ...`).
    #[arg(long, global = true, env = "RADTREE_TABLE")]
    pub table: Option<PathBuf>,

    /// Arity table (`<token>\t<arity>`) replacing the default twelve IDCs.
    #[arg(long, global = true, env = "RADTREE_ARITIES")]
    pub arities: Option<PathBuf>,

    /// Write results here instead of stdout.
    #[arg(long, global = true, env = "RADTREE_OUTPUT")]
    pub output: Option<PathBuf>,

    /// Indent JSON output.
    #[arg(long, global = true, env = "RADTREE_PRETTY")]
    pub pretty: bool,

    /// Treat a ground-truth id without a prediction as an error.
    #[arg(long, global = true, env = "RADTREE_STRICT")]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the radical tree of a character or of a preorder sequence.
    Parse(ParseArgs),
    /// TreeSim between two characters.
    Treesim(TreesimArgs),
    /// Per-node loss weights of one character.
    Weights(WeightsArgs),
    /// Occurrence counts and RSSL/OccN distributions of a label corpus.
    Stats(StatsArgs),
    /// Score predictions against ground truth.
    Eval(EvalArgs),
    /// Padded radical targets as JSON lines, one per character.
    ExportTargets(ExportArgs),
    /// Re-serialize the loaded decomposition table.
    ExportTable,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    /// A single character to look up.
    #[arg(required_unless_present = "seq", conflicts_with = "seq")]
    pub input: Option<String>,

    /// Space-separated preorder sequence, e.g. "⿰ 女 子".
    #[arg(long, env = "RADTREE_SEQ")]
    pub seq: Option<String>,
}

#[derive(Debug, Args)]
pub struct TreesimArgs {
    pub first: String,
    pub second: String,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// `naive` or `treesim`.
    #[arg(long, default_value = "treesim", env = "RADTREE_MODE")]
    pub mode: WeightMode,

    #[arg(long, default_value_t = 1.0, env = "RADTREE_LAMBDA")]
    pub lambda: f64,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long = "char", env = "RADTREE_CHAR")]
    pub ch: String,

    #[command(flatten)]
    pub weight: WeightArgs,
}

#[derive(Debug, Args)]
pub struct BucketArgs {
    /// RSSL bounds `SIMPLE_MAX,SUB_COMPLEX_MAX`.
    #[arg(long, env = "RADTREE_RSSL_BOUNDS", value_delimiter = ',', num_args = 2)]
    pub rssl_bounds: Option<Vec<usize>>,

    /// OccN bounds `HEAD_MIN,MID_MIN,LOW_MIN`.
    #[arg(long, env = "RADTREE_OCCN_BOUNDS", value_delimiter = ',', num_args = 3)]
    pub occn_bounds: Option<Vec<u64>>,
}

impl BucketArgs {
    fn spec(&self) -> Result<BucketSpec, Error> {
        let mut spec = BucketSpec::default();
        if let Some(b) = &self.rssl_bounds {
            spec = spec.with_rssl(b[0], b[1])?;
        }
        if let Some(b) = &self.occn_bounds {
            spec = spec.with_occn(b[0], b[1], b[2])?;
        }
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Training labels.
    #[arg(long, env = "RADTREE_INPUT")]
    pub input: PathBuf,

    /// Input holds one label per line instead of `<id>\t<text>`.
    #[arg(long, env = "RADTREE_PLAIN")]
    pub plain: bool,

    /// Characters to leave out of the counts.
    #[arg(long, env = "RADTREE_EXCLUDE")]
    pub exclude: Option<String>,

    #[command(flatten)]
    pub buckets: BucketArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Ground truth, `<id>\t<text>`.
    #[arg(long, env = "RADTREE_GT")]
    pub gt: PathBuf,

    /// Predictions, `<id>\t<text>`.
    #[arg(long, env = "RADTREE_PRED")]
    pub pred: PathBuf,

    /// Training labels for OccN buckets.
    #[arg(long, env = "RADTREE_TRAIN")]
    pub train: Option<PathBuf>,

    /// Training labels are one per line.
    #[arg(long, env = "RADTREE_TRAIN_PLAIN")]
    pub train_plain: bool,

    /// Average TreeSim over aligned characters only instead of all
    /// ground-truth characters.
    #[arg(long, env = "RADTREE_ALIGNED_ONLY")]
    pub aligned_only: bool,

    /// Also print a plain-text summary to stderr.
    #[arg(long, env = "RADTREE_HUMAN")]
    pub human: bool,

    #[command(flatten)]
    pub buckets: BucketArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Characters to export, one per line. Defaults to every table entry.
    #[arg(long, env = "RADTREE_CHARSET")]
    pub charset: Option<PathBuf>,

    /// Padded length R, EOS included.
    #[arg(long, env = "RADTREE_MAX_LEN")]
    pub max_len: usize,

    /// Also write the vocabulary as `<token>\t<index>`.
    #[arg(long, env = "RADTREE_VOCAB_OUT")]
    pub vocab_out: Option<PathBuf>,

    #[command(flatten)]
    pub weight: WeightArgs,
}

fn open(path: &Path) -> Result<BufReader<File>, Error> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn single_char(s: &str) -> Result<char, Error> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Usage(format!(
            "expected a single character, got `{s}`"
        ))),
    }
}

fn to_json<T: Serialize>(value: &T, pretty: bool) -> String {
    let s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    s.expect("report types serialize")
}

#[derive(Serialize)]
struct ParseOutput<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    char: Option<String>,
    sequence: String,
    rssl: usize,
    tree: &'a RadicalTree,
}

#[derive(Serialize)]
struct CharCount {
    char: String,
    count: u64,
}

#[derive(Serialize)]
struct StatsOutput {
    total: u64,
    distinct: usize,
    radical_classes: usize,
    occn_distribution: Histogram,
    rssl_distribution: Histogram,
    occurrences: Vec<CharCount>,
}

impl Cli {
    fn load_table(&self) -> Result<DecompositionTable, Error> {
        let arities = match &self.arities {
            Some(p) => ArityTable::from_reader(open(p)?)?,
            None => ArityTable::default(),
        };
        Ok(match &self.table {
            Some(p) => DecompositionTable::from_reader(open(p)?, arities)?,
            None => DecompositionTable::new(arities),
        })
    }

    /// Runs the command, writing its result to `--output` or `stdout`.
    pub fn run<W: Write>(&self, stdout: &mut W) -> Result<(), Error> {
        let body = self.execute()?;
        match &self.output {
            Some(path) => {
                let mut f = create(path)?;
                f.write_all(body.as_bytes())?;
                f.flush()?;
            }
            None => {
                stdout.write_all(body.as_bytes())?;
                stdout.flush()?;
            }
        }
        Ok(())
    }

    fn execute(&self) -> Result<String, Error> {
        let table = self.load_table()?;
        let mut out = match &self.command {
            Command::Parse(args) => {
                let (ch, tree) = match (&args.input, &args.seq) {
                    (_, Some(seq)) => (None, RadicalTree::parse(seq, table.arities())?),
                    (Some(input), None) => {
                        let c = single_char(input)?;
                        (Some(c.to_string()), table.lookup(c).into_owned())
                    }
                    (None, None) => return Err(Error::Usage("nothing to parse".into())),
                };
                to_json(
                    &ParseOutput {
                        char: ch,
                        sequence: tree.to_string(),
                        rssl: tree.rssl(),
                        tree: &tree,
                    },
                    self.pretty,
                )
            }
            Command::Treesim(args) => {
                let a = single_char(&args.first)?;
                let b = single_char(&args.second)?;
                format!("{:.12}", char_sim(a, b, &table).value())
            }
            Command::Weights(args) => {
                let c = single_char(&args.ch)?;
                let w = radical_weights(c, &table, args.weight.mode, args.weight.lambda)?;
                let items: Vec<String> = w.iter().map(|&x| format_sig17(x)).collect();
                format!("[{}]", items.join(","))
            }
            Command::Stats(args) => {
                let buckets = args.buckets.spec()?;
                let labels = read_labels(open(&args.input)?, args.plain)?;
                let exclude: BTreeSet<char> =
                    args.exclude.as_deref().unwrap_or("").chars().collect();
                let freq = count_occurrences_par(&labels, &exclude);
                if freq.total() == 0 {
                    return Err(StatsError::EmptyCorpus.into());
                }
                let chars = freq.chars();
                let mut occurrences: Vec<CharCount> = freq
                    .iter()
                    .map(|(c, n)| CharCount {
                        char: c.to_string(),
                        count: n,
                    })
                    .collect();
                // stable sort keeps codepoint order among equal counts
                occurrences.sort_by_key(|c| std::cmp::Reverse(c.count));
                to_json(
                    &StatsOutput {
                        total: freq.total(),
                        distinct: freq.distinct(),
                        radical_classes: table.radical_inventory().len(),
                        occn_distribution: occn_distribution(&chars, &freq, &buckets)?,
                        rssl_distribution: rssl_distribution(&chars, &table, &buckets)?,
                        occurrences,
                    },
                    self.pretty,
                )
            }
            Command::Eval(args) => {
                let gt = read_tsv(open(&args.gt)?)?;
                let pred = read_tsv(open(&args.pred)?)?;
                let occn = match &args.train {
                    Some(p) => {
                        let labels = read_labels(open(p)?, args.train_plain)?;
                        Some(count_occurrences_par(&labels, &BTreeSet::new()))
                    }
                    None => None,
                };
                let opts = EvalOptions {
                    strict: self.strict,
                    denominator: if args.aligned_only {
                        SimDenominator::Aligned
                    } else {
                        SimDenominator::AllGt
                    },
                    buckets: args.buckets.spec()?,
                };
                let report = evaluate(&gt, &pred, &table, occn.as_ref(), &opts)?;
                if args.human {
                    eprint!("{}", report.render_table());
                }
                to_json(&report, self.pretty)
            }
            Command::ExportTargets(args) => {
                let charset: Vec<char> = match &args.charset {
                    Some(p) => read_charset(open(p)?)?,
                    None => table.iter().map(|(c, _)| c).collect(),
                };
                let vocab = build_vocab_for(&table, &charset);
                let records = export_targets(
                    &charset,
                    &table,
                    &vocab,
                    args.max_len,
                    args.weight.mode,
                    args.weight.lambda,
                )?;
                if let Some(path) = &args.vocab_out {
                    let mut f = create(path)?;
                    vocab.write_tsv(&mut f)?;
                    f.flush()?;
                }
                let mut s = String::new();
                for r in &records {
                    s.push_str(&r.to_json_line());
                    s.push('\n');
                }
                return Ok(s);
            }
            Command::ExportTable => {
                let mut buf = Vec::new();
                table.write_to(&mut buf)?;
                return Ok(String::from_utf8(buf).expect("table text is UTF-8"));
            }
        };
        out.push('\n');
        Ok(out)
    }
}

/// One character per line; blank lines skipped, repeats dropped.
fn read_charset<R: io::BufRead>(reader: R) -> Result<Vec<char>, Error> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let c = single_char(line).map_err(|_| {
            Error::Usage(format!("charset line {}: expected one character", idx + 1))
        })?;
        if seen.insert(c) {
            out.push(c);
        }
    }
    Ok(out)
}

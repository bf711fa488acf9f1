use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taylor_core::experiment::DT_SWEEP_TOKEN_CAP;
use taylor_core::{TokenizerConfig, TokenizerMode, DEFAULT_DT};

/// Taylor's-law analysis of word sequences.
///
/// Text inputs may be given as `-` to read standard input. Data goes to
/// standard output (or `--output`), diagnostics to standard error.
#[derive(Debug, Parser)]
#[command(name = "taylor", version)]
pub struct Cli {
    /// Worker threads for sweeps and batch runs (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit sigma = c * mu^alpha over the words of one text.
    Analyze(AnalyzeArgs),
    /// Fit the exponent at several segment lengths.
    SweepDt(SweepDtArgs),
    /// Fit the exponent on growing prefixes of one text.
    SweepSize(SweepSizeArgs),
    /// Fit many texts and summarize them by group.
    Batch(BatchArgs),
    /// Write a random permutation of a text's tokens.
    Shuffle(ShuffleArgs),
    /// Fit a bigram model to a text and sample from it.
    BigramGen(BigramArgs),
    /// Sample i.i.d. tokens from a Zipf distribution.
    IidGen(IidArgs),
    /// Brunner-Munzel test between two samples of exponents.
    Compare(CompareArgs),
    /// Strip the Project Gutenberg header and footer from a text.
    TrimGutenberg(TrimArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct TokenArgs {
    /// Input is already tokenized: split on whitespace only.
    #[arg(long)]
    pub pretokenized: bool,

    /// Lowercase every token.
    #[arg(long)]
    pub case_fold: bool,

    /// Keep punctuation marks as tokens of their own instead of dropping them.
    #[arg(long)]
    pub keep_punct: bool,
}

impl TokenArgs {
    pub fn config(&self) -> TokenizerConfig {
        TokenizerConfig {
            mode: if self.pretokenized {
                TokenizerMode::PreTokenized
            } else {
                TokenizerMode::RawText
            },
            case_folding: self.case_fold,
            strip_punctuation: !self.keep_punct,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,

    /// Write data here instead of standard output.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,

    /// Segment length in tokens.
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: usize,

    /// Also write the per-word (mu, sigma) table as CSV.
    #[arg(long, value_name = "PATH")]
    pub scatter: Option<PathBuf>,

    #[command(flatten)]
    pub tokens: TokenArgs,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepDtArgs {
    pub input: PathBuf,

    /// Segment lengths, comma separated [default: log grid from 10 to min(10^4, N/10)].
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub dts: Option<Vec<usize>>,

    /// Analyze only the first N tokens.
    #[arg(long, default_value_t = DT_SWEEP_TOKEN_CAP, value_name = "N")]
    pub max_tokens: usize,

    #[command(flatten)]
    pub tokens: TokenArgs,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepSizeArgs {
    pub input: PathBuf,

    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: usize,

    /// Prefix lengths, comma separated [default: log grid from 10*dt to N].
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub sizes: Option<Vec<usize>>,

    #[command(flatten)]
    pub tokens: TokenArgs,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Text files; each is identified by its path.
    pub inputs: Vec<PathBuf>,

    /// Group label for the positional files.
    #[arg(long, default_value = "default", value_name = "LABEL")]
    pub group: String,

    /// CSV with header `id,path,group`; relative paths are taken from the manifest's directory.
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: usize,

    /// With `--format csv`, write the group summary and failures here as JSON.
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,

    #[command(flatten)]
    pub tokens: TokenArgs,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ShuffleArgs {
    pub input: PathBuf,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub tokens: TokenArgs,

    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BigramArgs {
    pub input: PathBuf,

    /// Number of tokens to generate.
    #[arg(long, default_value_t = 300_000)]
    pub length: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub tokens: TokenArgs,

    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IidArgs {
    /// Vocabulary size.
    #[arg(long, default_value_t = 20_000)]
    pub vocab: usize,

    /// Zipf exponent s in p_k ~ k^-s.
    #[arg(long, default_value_t = 1.0)]
    pub exponent: f64,

    #[arg(long, default_value_t = 1_000_000)]
    pub length: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Values of the first group: a batch CSV (its `alpha` column) or one number per line.
    pub a: PathBuf,

    /// Values of the second group, same formats.
    pub b: PathBuf,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TrimArgs {
    pub input: PathBuf,

    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use taylor_core::baseline::{fit_bigram, generate_bigram, generate_iid, shuffle, IidModel};
use taylor_core::corpus::{tokenize, trim_gutenberg};
use taylor_core::experiment::{
    batch, default_dt_grid, default_size_grid, dt_sweep, size_sweep, BatchFailure, BatchInput,
    GroupSummary, SweepResult,
};
use taylor_core::export::{
    read_values, to_json, write_batch_csv, write_scatter_csv, write_sweep_csv, FitReport,
};
use taylor_core::stats::brunner_munzel;
use taylor_core::taylor::taylor_analysis;
use taylor_core::{Error, ErrorKind, TokenSequence, TokenizerConfig};

use crate::args::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn kind(&self) -> ErrorKind {
        match self {
            CliError::Usage(_) => ErrorKind::Usage,
            CliError::Precondition(_) => ErrorKind::Precondition,
            CliError::Io { .. } => ErrorKind::Io,
            CliError::Core(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            ErrorKind::Usage => 1,
            ErrorKind::Io => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Degenerate => 4,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self.kind() {
            ErrorKind::Usage => "usage",
            ErrorKind::Io => "io",
            ErrorKind::Precondition => "precondition",
            ErrorKind::Degenerate => "degenerate",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    if is_stdio(path) {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(io_err(Path::new("<stdin>")))?;
    } else {
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(io_err(path))?;
    }
    Ok(text)
}

fn load(path: &Path, config: &TokenizerConfig) -> Result<TokenSequence> {
    Ok(tokenize(&read_text(path)?, config)?)
}

/// Runs `body` against the output file (or standard output) and flushes it.
fn with_output(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let shown = path.unwrap_or(Path::new("<stdout>"));
    match path.filter(|p| !is_stdio(p)) {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(io_err(p))?);
            body(&mut w)?;
            w.flush().map_err(io_err(shown))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush().map_err(io_err(shown))
        }
    }
}

fn write_line(path: Option<&Path>, line: &str) -> Result<()> {
    let shown = path.unwrap_or(Path::new("<stdout>")).to_owned();
    with_output(path, |w| writeln!(w, "{line}").map_err(io_err(&shown)))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    let shown = path.unwrap_or(Path::new("<stdout>")).to_owned();
    with_output(path, |w| {
        w.write_all(text.as_bytes()).map_err(io_err(&shown))
    })
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Analyze(a) => analyze(a),
        Command::SweepDt(a) => sweep_dt(a),
        Command::SweepSize(a) => sweep_size(a),
        Command::Batch(a) => run_batch(a),
        Command::Shuffle(a) => {
            let seq = load(&a.input, &a.tokens.config())?;
            write_text(a.output.as_deref(), &shuffle(&seq, a.seed).render())
        }
        Command::BigramGen(a) => {
            let seq = load(&a.input, &a.tokens.config())?;
            let out = generate_bigram(&fit_bigram(&seq), a.length, a.seed)?;
            write_text(a.output.as_deref(), &out.render())
        }
        Command::IidGen(a) => {
            let model = IidModel::zipf(a.vocab, a.exponent)?;
            let out = generate_iid(&model, a.length, a.seed)?;
            write_text(a.output.as_deref(), &out.render())
        }
        Command::Compare(a) => compare(a),
        Command::TrimGutenberg(a) => {
            let text = read_text(&a.input)?;
            write_text(a.output.as_deref(), trim_gutenberg(&text)?)
        }
    }
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    if a.dt == 0 {
        return Err(CliError::Usage("--dt must be positive".into()));
    }
    let seq = load(&a.input, &a.tokens.config())?;
    let (moments, fit) = taylor_analysis(&seq, a.dt)?;
    if let Some(path) = &a.scatter {
        with_output(Some(path), |w| Ok(write_scatter_csv(w, &seq, &moments)?))?;
    }
    let report = FitReport::new(&seq, &moments, &fit);
    match a.out.format {
        Format::Json => write_line(a.out.output.as_deref(), &to_json(&report)),
        Format::Csv => with_output(a.out.output.as_deref(), |w| Ok(report.write_csv(w)?)),
    }
}

fn write_sweep(out: &OutputArgs, sweep: &SweepResult) -> Result<()> {
    for p in &sweep.points {
        if let taylor_core::experiment::PointOutcome::Failed { error } = &p.outcome {
            eprintln!("warning: x={}: {error}", p.x);
        }
    }
    match out.format {
        Format::Json => write_line(out.output.as_deref(), &to_json(sweep)),
        Format::Csv => with_output(out.output.as_deref(), |w| Ok(write_sweep_csv(w, sweep)?)),
    }
}

fn check_grid(values: &[usize], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(CliError::Usage(format!("no {what} given")));
    }
    if values.contains(&0) {
        return Err(CliError::Usage(format!("{what} must be positive")));
    }
    Ok(())
}

fn sweep_dt(a: SweepDtArgs) -> Result<()> {
    let mut seq = load(&a.input, &a.tokens.config())?;
    if a.max_tokens == 0 {
        return Err(CliError::Usage("--max-tokens must be positive".into()));
    }
    if seq.len() > a.max_tokens {
        seq = TokenSequence::from_words(seq.iter().take(a.max_tokens))?;
    }
    let dts = match a.dts {
        Some(d) => d,
        None => {
            let grid = default_dt_grid(seq.len());
            if grid.is_empty() {
                return Err(CliError::Precondition(format!(
                    "{} tokens is too short for the default grid (needs more than 100)",
                    seq.len()
                )));
            }
            grid
        }
    };
    check_grid(&dts, "segment lengths")?;
    write_sweep(&a.out, &dt_sweep(&seq, &dts))
}

fn sweep_size(a: SweepSizeArgs) -> Result<()> {
    if a.dt == 0 {
        return Err(CliError::Usage("--dt must be positive".into()));
    }
    let seq = load(&a.input, &a.tokens.config())?;
    let sizes = match a.sizes {
        Some(s) => s,
        None => {
            let grid = default_size_grid(seq.len(), a.dt);
            if grid.is_empty() {
                return Err(CliError::Precondition(format!(
                    "{} tokens is too short for two segments of {}",
                    seq.len(),
                    a.dt
                )));
            }
            grid
        }
    };
    check_grid(&sizes, "prefix sizes")?;
    write_sweep(&a.out, &size_sweep(&seq, a.dt, &sizes))
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    id: String,
    path: PathBuf,
    group: String,
}

fn read_manifest(path: &Path) -> Result<Vec<BatchInput>> {
    let base = path.parent().unwrap_or(Path::new("")).to_owned();
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(BufReader::new(file));
    let mut inputs = Vec::new();
    for (i, row) in rdr.deserialize::<ManifestRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            path: path.to_owned(),
            line: i + 2,
            msg: e.to_string(),
        })?;
        inputs.push(BatchInput {
            id: row.id,
            path: base.join(row.path),
            group: row.group,
        });
    }
    Ok(inputs)
}

#[derive(Serialize)]
struct GroupReport<'a> {
    dt: usize,
    groups: &'a [GroupSummary],
    failures: &'a [BatchFailure],
}

fn run_batch(a: BatchArgs) -> Result<()> {
    if a.dt == 0 {
        return Err(CliError::Usage("--dt must be positive".into()));
    }
    let mut inputs: Vec<BatchInput> = a
        .inputs
        .iter()
        .map(|p| BatchInput {
            id: p.display().to_string(),
            path: p.clone(),
            group: a.group.clone(),
        })
        .collect();
    if let Some(m) = &a.manifest {
        inputs.extend(read_manifest(m)?);
    }
    if inputs.is_empty() {
        return Err(CliError::Usage(
            "no input files (give paths or --manifest)".into(),
        ));
    }

    let summary = batch(&inputs, a.dt, &a.tokens.config());
    for f in &summary.failures {
        eprintln!("warning: {}: {}", f.id, f.error);
    }
    if summary.texts.is_empty() {
        return Err(CliError::Precondition("no input could be analyzed".into()));
    }

    if let Some(path) = &a.summary {
        let report = GroupReport {
            dt: summary.dt,
            groups: &summary.groups,
            failures: &summary.failures,
        };
        write_line(Some(path), &to_json(&report))?;
    }
    match a.out.format {
        Format::Json => write_line(a.out.output.as_deref(), &to_json(&summary)),
        Format::Csv => with_output(a.out.output.as_deref(), |w| {
            Ok(write_batch_csv(w, &summary)?)
        }),
    }
}

fn read_sample(path: &Path) -> Result<Vec<f64>> {
    let values = if is_stdio(path) {
        read_values(io::stdin().lock(), Path::new("<stdin>"))?
    } else {
        let file = File::open(path).map_err(io_err(path))?;
        read_values(BufReader::new(file), path)?
    };
    if values.is_empty() {
        return Err(CliError::Precondition(format!(
            "{}: no values",
            path.display()
        )));
    }
    Ok(values)
}

fn compare(a: CompareArgs) -> Result<()> {
    let r = brunner_munzel(&read_sample(&a.a)?, &read_sample(&a.b)?)?;
    match a.out.format {
        Format::Json => write_line(a.out.output.as_deref(), &to_json(&r)),
        Format::Csv => {
            let fields = taylor_core::export::fmt_f64;
            let text = format!(
                "statistic,df,p_value,superiority,n_a,n_b\n{},{},{},{},{},{}",
                fields(r.statistic),
                fields(r.df),
                fields(r.p_value),
                fields(r.superiority),
                r.n_a,
                r.n_b
            );
            write_line(a.out.output.as_deref(), &text)
        }
    }
}

//! Machine-readable output: CSV tables and JSON objects with every float
//! written to 17 significant digits, so CSV and JSON carry the same numbers
//! and re-parsing recovers the exact doubles.

use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::Serialize;

use crate::corpus::TokenSequence;
use crate::error::{Error, Result};
use crate::experiment::{BatchSummary, PointOutcome, SweepResult};
use crate::taylor::{TaylorFit, WordMoments};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Compact JSON formatter that writes floats via [`fmt_f64`].
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as one line of JSON (no trailing newline).
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// The fit record exchanged by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub alpha: f64,
    pub c: f64,
    pub epsilon: f64,
    pub points_used: usize,
    pub points_excluded_sigma_zero: usize,
    pub dt: usize,
    pub num_segments: usize,
    pub n_tokens: usize,
    pub vocab: usize,
}

impl FitReport {
    pub fn new(seq: &TokenSequence, moments: &WordMoments, fit: &TaylorFit) -> Self {
        FitReport {
            alpha: fit.alpha,
            c: fit.c,
            epsilon: fit.epsilon,
            points_used: fit.points_used,
            points_excluded_sigma_zero: fit.points_excluded_sigma_zero,
            dt: moments.dt,
            num_segments: moments.num_segments,
            n_tokens: seq.len(),
            vocab: seq.vocab_size(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let res = (|| {
            w.write_record([
                "alpha",
                "c",
                "epsilon",
                "points_used",
                "points_excluded_sigma_zero",
                "dt",
                "num_segments",
                "n_tokens",
                "vocab",
            ])?;
            w.write_record([
                fmt_f64(self.alpha),
                fmt_f64(self.c),
                fmt_f64(self.epsilon),
                self.points_used.to_string(),
                self.points_excluded_sigma_zero.to_string(),
                self.dt.to_string(),
                self.num_segments.to_string(),
                self.n_tokens.to_string(),
                self.vocab.to_string(),
            ])?;
            w.flush()?;
            Ok::<_, csv::Error>(())
        })();
        res.map_err(csv_err)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::io("<output>", io::Error::other(e))
}

/// Scatter table `word,mu,sigma,total_count`, one row per word with `sigma > 0`.
pub fn write_scatter_csv<W: Write>(
    out: W,
    seq: &TokenSequence,
    moments: &WordMoments,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let res = (|| {
        w.write_record(["word", "mu", "sigma", "total_count"])?;
        for m in moments.entries.iter().filter(|m| m.sigma > 0.0) {
            w.write_record([
                seq.word(m.word).to_owned(),
                fmt_f64(m.mu),
                fmt_f64(m.sigma),
                m.total_count.to_string(),
            ])?;
        }
        w.flush()?;
        Ok::<_, csv::Error>(())
    })();
    res.map_err(csv_err)
}

/// Sweep table `x,alpha,c,epsilon,points_used`; failed points keep their `x`
/// and leave the other columns empty.
pub fn write_sweep_csv<W: Write>(out: W, sweep: &SweepResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let res = (|| {
        w.write_record(["x", "alpha", "c", "epsilon", "points_used"])?;
        for p in &sweep.points {
            match &p.outcome {
                PointOutcome::Ok(f) => w.write_record([
                    p.x.to_string(),
                    fmt_f64(f.alpha),
                    fmt_f64(f.c),
                    fmt_f64(f.epsilon),
                    f.points_used.to_string(),
                ])?,
                PointOutcome::Failed { .. } => w.write_record([
                    p.x.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?,
            }
        }
        w.flush()?;
        Ok::<_, csv::Error>(())
    })();
    res.map_err(csv_err)
}

/// Per-text batch table `id,group,alpha,c,epsilon,n_tokens,vocab`.
pub fn write_batch_csv<W: Write>(out: W, summary: &BatchSummary) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let res = (|| {
        w.write_record(["id", "group", "alpha", "c", "epsilon", "n_tokens", "vocab"])?;
        for r in &summary.texts {
            w.write_record([
                r.id.clone(),
                r.group.clone(),
                fmt_f64(r.alpha),
                fmt_f64(r.c),
                fmt_f64(r.epsilon),
                r.n_tokens.to_string(),
                r.vocab.to_string(),
            ])?;
        }
        w.flush()?;
        Ok::<_, csv::Error>(())
    })();
    res.map_err(csv_err)
}

/// Reads a column of numbers for group comparison.
///
/// Accepts either a CSV with a header containing an `alpha` column (such as
/// the batch table) or a bare list with one number per line. Blank lines and
/// lines starting with `#` are skipped.
pub fn read_values<R: BufRead>(reader: R, path: &Path) -> Result<Vec<f64>> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(|e| Error::io(path, e)))
        .filter(|r| match r {
            Ok((_, l)) => !l.trim().is_empty() && !l.trim_start().starts_with('#'),
            Err(_) => true,
        });

    let Some(first) = lines.next() else {
        return Ok(Vec::new());
    };
    let (first_no, first) = first?;
    let parse = |line_no: usize, field: &str| -> Result<f64> {
        field.trim().parse::<f64>().map_err(|_| Error::Parse {
            path: path.to_owned(),
            line: line_no,
            msg: format!("not a number: {:?}", field.trim()),
        })
    };

    let header: Vec<String> = first.split(',').map(|f| f.trim().to_owned()).collect();
    if let Some(col) = header.iter().position(|h| h == "alpha") {
        let mut body = String::new();
        for l in lines {
            let (_, l) = l?;
            body.push_str(&l);
            body.push('\n');
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(body.as_bytes());
        let mut values = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse {
                path: path.to_owned(),
                line: first_no + i + 1,
                msg: e.to_string(),
            })?;
            let field = rec.get(col).ok_or_else(|| Error::Parse {
                path: path.to_owned(),
                line: first_no + i + 1,
                msg: "missing alpha column".into(),
            })?;
            values.push(parse(first_no + i + 1, field)?);
        }
        return Ok(values);
    }

    let mut values = vec![parse(first_no, &first)?];
    for l in lines {
        let (no, l) = l?;
        values.push(parse(no, &l)?);
    }
    Ok(values)
}

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::ErrorReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "method,n,n1,alpha,level,j,theta,lambda_ref,lambda_approx,abs_err";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// One row per eigenvalue.
    Csv,
    /// Max and normalized max per method/level, one column per order.
    Table,
    /// `j log10(eps_j)` blocks, one per method/order/level.
    PlotData,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Table => "table",
            OutputFormat::PlotData => "plotdata",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            "plotdata" => Ok(OutputFormat::PlotData),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// Writes `reports` in `format`.
pub fn emit<W: Write>(reports: &[ErrorReport], format: OutputFormat, mut out: W) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::Config("nothing to emit: empty report set".into()));
    }
    match format {
        OutputFormat::Csv => write_csv(reports, &mut out)?,
        OutputFormat::Table => write_table(reports, &mut out)?,
        OutputFormat::PlotData => write_plotdata(reports, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

pub fn emit_to_path(reports: &[ErrorReport], format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::Config("nothing to emit: empty report set".into()));
    }
    emit(reports, format, BufWriter::new(File::create(path)?))
}

fn write_csv<W: Write>(reports: &[ErrorReport], out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        for j in 0..r.n {
            writeln!(
                out,
                "{},{},{},{},{},{},{:e},{:e},{:e},{:e}",
                r.method,
                r.n,
                r.n1,
                r.alpha,
                r.level,
                j + 1,
                r.theta[j],
                r.reference[j],
                r.approx[j],
                r.errors[j]
            )?;
        }
    }
    Ok(())
}

fn write_table<W: Write>(reports: &[ErrorReport], out: &mut W) -> Result<()> {
    let sizes: BTreeSet<usize> = reports.iter().map(|r| r.n).collect();
    let mut groups: Vec<_> = reports.iter().map(|r| (r.symbol.to_string(), r.method, r.level)).collect();
    groups.sort();
    groups.dedup();
    let symbols: BTreeSet<&str> = groups.iter().map(|g| g.0.as_str()).collect();

    for symbol in symbols {
        let first = reports.iter().find(|r| r.symbol.to_string() == symbol).expect("symbol present");
        writeln!(out, "# {symbol}  n1={}  alpha={}", first.n1, first.alpha)?;
        write!(out, "{:<24}", "n")?;
        for n in &sizes {
            write!(out, " {n:>12}")?;
        }
        writeln!(out)?;
        for (_, method, level) in groups.iter().filter(|g| g.0 == symbol) {
            let cell = |n: usize| {
                reports
                    .iter()
                    .find(|r| r.symbol.to_string() == symbol && r.method == *method && r.level == *level && r.n == n)
            };
            write!(out, "{:<24}", format!("eps[{method},k={level}]"))?;
            for &n in &sizes {
                match cell(n) {
                    Some(r) => write!(out, " {:>12.4e}", r.max_error())?,
                    None => write!(out, " {:>12}", "-")?,
                }
            }
            writeln!(out)?;
            write!(out, "{:<24}", format!("(n+1)^{level}*eps[{method}]"))?;
            for &n in &sizes {
                match cell(n) {
                    Some(r) => write!(out, " {:>12.4e}", r.normalized())?,
                    None => write!(out, " {:>12}", "-")?,
                }
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

fn write_plotdata<W: Write>(reports: &[ErrorReport], out: &mut W) -> Result<()> {
    for (idx, r) in reports.iter().enumerate() {
        if idx > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# method={} symbol={} n={} level={}", r.method, r.symbol, r.n, r.level)?;
        for (j, e) in r.errors.iter().enumerate() {
            writeln!(out, "{} {:.6}", j + 1, e.log10())?;
        }
    }
    Ok(())
}

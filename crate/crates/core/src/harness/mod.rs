//! Error metrics and experiment orchestration.
//!
//! An experiment precomputes the coefficient tables it needs once, obtains a
//! reference spectrum for every target order (dense solve up to a ceiling, or
//! a spectrum file), then compares each method and level against it.

mod config;
mod emit;
pub mod known;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

pub use config::{
    parse_levels, ExperimentConfig, Method, DEFAULT_REFERENCE_CEILING, HEAVY_REFERENCE_CEILING,
};
pub use emit::{emit, emit_to_path, OutputFormat};

use crate::baselines::{na_approximate_all, na_precompute, sl_approximate_all};
use crate::error::{Error, Result};
use crate::matrixless::{approximate_all, precompute, ApproximationResult, CoefficientTable, ExtrapolationGrid};
use crate::symbols::SymbolSpec;
use crate::toeplitz::{SpectrumVector, ToeplitzMatrix};

/// Per-index errors of one method at one order and level.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub method: Method,
    pub symbol: SymbolSpec,
    pub n: usize,
    pub n1: usize,
    pub alpha: usize,
    pub level: usize,
    /// `theta_{j,n}`, `j = 1..=n`.
    pub theta: Vec<f64>,
    pub reference: Vec<f64>,
    pub approx: Vec<f64>,
    /// `|reference_j - approx_j|`.
    pub errors: Vec<f64>,
}

impl ErrorReport {
    pub fn new(
        method: Method,
        symbol: SymbolSpec,
        n1: usize,
        alpha: usize,
        reference: &SpectrumVector,
        approx: ApproximationResult,
    ) -> Result<Self> {
        if reference.len() != approx.n || approx.eigenvalues.len() != approx.n {
            return Err(Error::SpectrumLength {
                expected: approx.n,
                got: reference.len(),
            });
        }
        let n = approx.n;
        let h = crate::symbols::step(n);
        let theta = (1..=n).map(|j| j as f64 * std::f64::consts::PI * h).collect();
        let errors = reference
            .as_slice()
            .iter()
            .zip(&approx.eigenvalues)
            .map(|(r, a)| (r - a).abs())
            .collect();
        Ok(Self {
            method,
            symbol,
            n,
            n1,
            alpha,
            level: approx.level,
            theta,
            reference: reference.as_slice().to_vec(),
            approx: approx.eigenvalues,
            errors,
        })
    }

    /// `max_j eps_j`.
    pub fn max_error(&self) -> f64 {
        self.errors.iter().fold(0.0, |m, &e| m.max(e))
    }

    /// 1-based index attaining [`Self::max_error`] (first on ties).
    pub fn argmax(&self) -> usize {
        let max = self.max_error();
        self.errors.iter().position(|&e| e == max).map_or(0, |i| i + 1)
    }

    /// `(n+1)^level * max_error`.
    pub fn normalized(&self) -> f64 {
        (self.n as f64 + 1.0).powi(self.level as i32) * self.max_error()
    }

    /// Maximum over the 1-based index range `lo..=hi` (clamped to `1..=n`).
    pub fn max_error_between(&self, lo: usize, hi: usize) -> f64 {
        let lo = lo.max(1);
        let hi = hi.min(self.n);
        if lo > hi {
            return 0.0;
        }
        self.errors[lo - 1..hi].iter().fold(0.0, |m, &e| m.max(e))
    }
}

/// Reads a spectrum: one eigenvalue per line, `#` comments and blank lines
/// ignored. The result is sorted.
pub fn load_spectrum(path: impl AsRef<Path>) -> Result<SpectrumVector> {
    let path = path.as_ref();
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let v: f64 = text.parse().map_err(|_| {
            Error::Config(format!("{}:{}: bad eigenvalue `{text}`", path.display(), idx + 1))
        })?;
        if !v.is_finite() {
            return Err(Error::Config(format!("{}:{}: non-finite eigenvalue", path.display(), idx + 1)));
        }
        values.push(v);
    }
    Ok(SpectrumVector::new(values))
}

/// Reference spectrum of `T_n(f_n)`: loaded when `config` names a file for
/// `n`, otherwise solved densely if `n <= config.ceiling`.
pub fn reference_spectrum(config: &ExperimentConfig, n: usize) -> Result<SpectrumVector> {
    if let Some(path) = config.references.get(&n) {
        let spectrum = load_spectrum(path)?;
        if spectrum.len() != n {
            return Err(Error::SpectrumLength {
                expected: n,
                got: spectrum.len(),
            });
        }
        return Ok(spectrum);
    }
    if n > config.ceiling {
        return Err(Error::InfeasibleReference {
            n,
            ceiling: config.ceiling,
        });
    }
    ToeplitzMatrix::build(&config.symbol.at_order(n), n).eigenvalues_sorted()
}

/// Coefficient tables an experiment can reuse.
#[derive(Clone, Debug, Default)]
pub struct Tables {
    pub shift: Option<CoefficientTable>,
    pub eigenvalue: Option<CoefficientTable>,
}

/// Runs `config`, computing any missing tables.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ErrorReport>> {
    run_experiment_with(config, Tables::default())
}

/// Runs `config` with caller-supplied tables where given. Reports are ordered
/// by order `n`, then method, then level.
pub fn run_experiment_with(config: &ExperimentConfig, tables: Tables) -> Result<Vec<ErrorReport>> {
    config.validate()?;
    // fail on unreachable references before the expensive precompute
    for &n in &config.sizes {
        if n > config.ceiling && !config.references.contains_key(&n) {
            return Err(Error::InfeasibleReference {
                n,
                ceiling: config.ceiling,
            });
        }
    }
    let grid = ExtrapolationGrid::new(config.n1, config.alpha)?;
    let check = |table: &CoefficientTable| -> Result<()> {
        if table.spec() != config.symbol || *table.grid() != grid {
            return Err(Error::Config(format!(
                "coefficient table is for {} on n1={}, alpha={}; experiment needs {} on n1={}, alpha={}",
                table.spec(),
                table.grid().base_size(),
                table.grid().levels(),
                config.symbol,
                config.n1,
                config.alpha
            )));
        }
        Ok(())
    };

    let shift = match (config.methods.contains(&Method::Nas), tables.shift) {
        (false, _) => None,
        (true, Some(t)) => {
            check(&t)?;
            Some(t)
        }
        (true, None) => Some(precompute(&config.symbol, &grid)?),
    };
    let eigenvalue = match (config.methods.contains(&Method::Na), tables.eigenvalue) {
        (false, _) => None,
        (true, Some(t)) => {
            check(&t)?;
            Some(t)
        }
        (true, None) => Some(na_precompute(&config.symbol, &grid)?),
    };

    let mut methods = config.methods.clone();
    methods.sort();
    methods.dedup();
    let mut sizes = config.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut levels = config.levels.clone();
    levels.sort_unstable();
    levels.dedup();

    let mut references = BTreeMap::new();
    for &n in &sizes {
        references.insert(n, reference_spectrum(config, n)?);
    }

    let mut reports = Vec::new();
    for &n in &sizes {
        let symbol = config.symbol.at_order(n);
        let reference = &references[&n];
        for &method in &methods {
            for &level in &levels {
                let approx = match method {
                    Method::Nas => approximate_all(&symbol, n, shift.as_ref().expect("shift table"), level)?,
                    Method::Na => na_approximate_all(&symbol, n, eigenvalue.as_ref().expect("eigenvalue table"), level)?,
                    Method::Sl => sl_approximate_all(&config.symbol, n, level)?,
                };
                reports.push(ErrorReport::new(
                    method,
                    config.symbol,
                    config.n1,
                    config.alpha,
                    reference,
                    approx,
                )?);
            }
        }
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn small(methods: Vec<Method>) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(SymbolSpec::Kms { rho: 0.5 }, vec![64, 32]);
        cfg.n1 = 20;
        cfg.alpha = 3;
        cfg.levels = vec![1, 2, 3];
        cfg.methods = methods;
        cfg
    }

    #[test]
    fn report_invariants() {
        let reports = run_experiment(&small(vec![Method::Sl, Method::Nas, Method::Na])).unwrap();
        assert_eq!(reports.len(), 2 * 3 * 3);
        assert_eq!((reports[0].n, reports[0].method, reports[0].level), (32, Method::Nas, 1));
        for r in &reports {
            assert_eq!(r.errors.len(), r.n);
            assert!(r.errors.iter().all(|&e| e >= 0.0));
            let max = r.errors.iter().cloned().fold(f64::MIN, f64::max);
            assert_eq!(r.max_error(), max);
            assert_eq!(r.errors[r.argmax() - 1], max);
            assert_eq!(r.max_error_between(1, r.n), max);
        }
        // level 1 coincides across methods
        let level_one: Vec<&ErrorReport> = reports.iter().filter(|r| r.n == 64 && r.level == 1).collect();
        assert_eq!(level_one.len(), 3);
        assert!(level_one.windows(2).all(|w| w[0].approx == w[1].approx));
    }

    #[test]
    fn infeasible_reference_is_reported_before_work() {
        let mut cfg = small(vec![Method::Nas]);
        cfg.sizes = vec![5000];
        assert!(matches!(
            run_experiment(&cfg),
            Err(Error::InfeasibleReference { n: 5000, ceiling: 2048 })
        ));
    }

    #[test]
    fn reference_spectrum_from_file() {
        let cfg = small(vec![Method::Nas]);
        let exact = ToeplitzMatrix::build(&cfg.symbol.at_order(32), 32).eigenvalues_sorted().unwrap();
        let dir = std::env::temp_dir().join(format!("matrixless-ref-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ref32.txt");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "# n = 32").unwrap();
        for v in exact.as_slice().iter().rev() {
            writeln!(f, "{v:.17e}").unwrap();
        }
        drop(f);
        let mut with_file = cfg.clone();
        with_file.sizes = vec![32];
        with_file.ceiling = 1;
        with_file.references.insert(32, path.clone());
        let from_file = run_experiment(&with_file).unwrap();
        let mut computed = cfg.clone();
        computed.sizes = vec![32];
        assert_eq!(from_file, run_experiment(&computed).unwrap());

        with_file.references.insert(32, dir.join("missing.txt"));
        assert!(matches!(run_experiment(&with_file), Err(Error::Io(_))));
        std::fs::write(&path, "1.0\n2.0\n").unwrap();
        with_file.references.insert(32, path);
        assert!(matches!(run_experiment(&with_file), Err(Error::SpectrumLength { .. })));
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn mismatched_table_is_rejected() {
        let cfg = small(vec![Method::Nas]);
        let other = precompute(&SymbolSpec::Kms { rho: 0.3 }, &ExtrapolationGrid::new(20, 3).unwrap()).unwrap();
        let tables = Tables {
            shift: Some(other),
            eigenvalue: None,
        };
        assert!(matches!(run_experiment_with(&cfg, tables), Err(Error::Config(_))));
    }
}

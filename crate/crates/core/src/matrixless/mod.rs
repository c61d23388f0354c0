//! Matrix-less eigenvalue approximation in the shifted variable `s`.
//!
//! For an even symbol `f` increasing on `[0, pi]`, write
//! `lambda_j(T_n(f)) = f(s_{j,n})` with
//! `s_{j,n} = theta_{j,n} + r_1(theta) h + r_2(theta) h^2 + ...`,
//! `h = 1/(n+1)` and `theta_{j,n} = j pi h`. The coefficients `r_k` are
//! estimated once on a few small nested grids (see [`ExtrapolationGrid`]) and
//! then reused for any `n`:
//!
//! 1. [`precompute_spectra`] solves `T_{n_k}(f)` for `k = 1..=alpha`;
//! 2. [`extrapolate_coefficients`] solves one small power system per base
//!    node to obtain `r_1..r_alpha` there;
//! 3. [`approximate_all`] interpolates the coefficients to `theta_{j,n}` and
//!    evaluates `f` at the corrected abscissa.

mod grid;
pub mod interpolation;
mod table;
pub mod vandermonde;

use std::f64::consts::PI;

pub use grid::{ExtrapolationGrid, MAX_LEVELS, MIN_BASE_SIZE, MIN_LEVELS};
pub use table::{CoefficientTable, ExpansionVariable};

use crate::error::{Error, Result};
use crate::par;
use crate::symbols::{step, Symbol, SymbolSpec, DEFAULT_INVERSE_TOL};
use crate::toeplitz::{SpectrumVector, ToeplitzMatrix};
use vandermonde::solve_power_system;

/// Approximated eigenvalues of `T_n(f)` at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximationResult {
    pub n: usize,
    pub level: usize,
    /// Corrected abscissae `s_hat_{j,n}`, `j = 1..=n`.
    pub abscissae: Vec<f64>,
    /// Approximations `lambda_hat_{j}`, `j = 1..=n`.
    pub eigenvalues: Vec<f64>,
}

/// `s_{j,n} = [f|[0,pi]]^{-1}(lambda_j)` for a sorted spectrum.
pub fn compute_s_values(symbol: &Symbol, spectrum: &SpectrumVector) -> Result<Vec<f64>> {
    par::map_slice(spectrum.as_slice(), |&lambda| {
        symbol.inverse_on_half_period(lambda, DEFAULT_INVERSE_TOL)
    })
    .into_iter()
    .collect()
}

/// Full spectra of `T_{n_k}(f_{n_k})` for every grid level.
pub fn precompute_spectra(spec: &SymbolSpec, grid: &ExtrapolationGrid) -> Result<Vec<SpectrumVector>> {
    let sizes = grid.sizes();
    par::map_slice(&sizes, |&n| {
        ToeplitzMatrix::build(&spec.at_order(n), n).eigenvalues_sorted()
    })
    .into_iter()
    .collect()
}

/// How the coefficient rows at `theta = 0` and `theta = pi` are filled.
///
/// No eigenvalue sits exactly at an endpoint, so those rows are never solved
/// for. For a simple-loop symbol (`f'(0) = 0`, `f''(0) > 0`) the coefficients
/// vanish there. When `f` is flatter at the origin (`rctp` with `l >= 2`, the
/// order-dependent family) they do not, and forcing zeros spoils the
/// interpolant near the ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointRule {
    /// Endpoint rows are zero.
    Zero,
    /// Endpoint row of coefficient `k` is the polynomial through the nearest
    /// `alpha - k + 5` interior nodes, evaluated at the endpoint. Interpolation
    /// near the ends then uses interior data only.
    Extrapolated,
}

impl EndpointRule {
    /// `Zero` for simple-loop families, `Extrapolated` otherwise.
    pub fn for_spec(spec: &SymbolSpec) -> Self {
        match spec {
            SymbolSpec::Kms { .. } | SymbolSpec::Rctp { ell: 1 } => Self::Zero,
            _ => Self::Extrapolated,
        }
    }
}

impl std::str::FromStr for EndpointRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Self::Zero),
            "extrapolated" => Ok(Self::Extrapolated),
            other => Err(Error::Config(format!("unknown endpoint rule `{other}`"))),
        }
    }
}

/// Estimates `r_1..r_alpha` at every base node from the grid spectra.
///
/// For each interior node `j_1` with `sigma = theta_{j_1,n_1}`, solves
/// `sum_l r_l h_m^l = s_{j_m,n_m} - sigma` for `m = 1..=alpha`. Endpoint
/// rows follow [`EndpointRule::for_spec`].
pub fn extrapolate_coefficients(
    spec: &SymbolSpec,
    grid: &ExtrapolationGrid,
    spectra: &[SpectrumVector],
) -> Result<CoefficientTable> {
    extrapolate(spec, grid, spectra, ExpansionVariable::Shift)
}

/// Shared extrapolation driver for either expansion variable. With
/// [`ExpansionVariable::Eigenvalue`] the right-hand side is
/// `lambda_{j_m}(T_{n_m}) - f_{n_m}(sigma)`.
pub fn extrapolate(
    spec: &SymbolSpec,
    grid: &ExtrapolationGrid,
    spectra: &[SpectrumVector],
    variable: ExpansionVariable,
) -> Result<CoefficientTable> {
    extrapolate_with(spec, grid, spectra, variable, EndpointRule::for_spec(spec))
}

/// [`extrapolate`] with an explicit endpoint rule.
pub fn extrapolate_with(
    spec: &SymbolSpec,
    grid: &ExtrapolationGrid,
    spectra: &[SpectrumVector],
    variable: ExpansionVariable,
    endpoints: EndpointRule,
) -> Result<CoefficientTable> {
    let alpha = grid.levels();
    if spectra.len() != alpha {
        return Err(Error::InvalidGrid(format!(
            "expected {alpha} spectra, got {}",
            spectra.len()
        )));
    }
    for (k, spectrum) in (1..=alpha).zip(spectra) {
        if spectrum.len() != grid.size(k) {
            return Err(Error::SpectrumLength {
                expected: grid.size(k),
                got: spectrum.len(),
            });
        }
    }

    // Level samples in the chosen variable: samples[k-1][j-1].
    let symbols: Vec<Symbol> = (1..=alpha).map(|k| spec.at_order(grid.size(k))).collect();
    let samples: Vec<Vec<f64>> = match variable {
        ExpansionVariable::Shift => symbols
            .iter()
            .zip(spectra)
            .map(|(sym, spectrum)| compute_s_values(sym, spectrum))
            .collect::<Result<_>>()?,
        ExpansionVariable::Eigenvalue => spectra.iter().map(|s| s.as_slice().to_vec()).collect(),
    };

    let steps = grid.steps();
    let base = grid.base_size();
    let interior = par::map_range(base, |i| {
        let j1 = i + 1;
        let sigma = grid.node(j1);
        let rhs: Vec<f64> = (1..=alpha)
            .map(|k| {
                let sample = samples[k - 1][grid.index(j1, k) - 1];
                match variable {
                    ExpansionVariable::Shift => sample - sigma,
                    ExpansionVariable::Eigenvalue => sample - symbols[k - 1].eval(sigma),
                }
            })
            .collect();
        solve_power_system(&steps, &rhs).ok_or(Error::SingularSystem { node: j1 })
    });

    let interior = interior.into_iter().collect::<Result<Vec<_>>>()?;
    let (first, last) = match endpoints {
        EndpointRule::Zero => (vec![0.0; alpha], vec![0.0; alpha]),
        EndpointRule::Extrapolated => endpoint_rows(&interior, alpha, grid.node_count()),
    };
    let mut rows = Vec::with_capacity(grid.node_count());
    rows.push(first);
    rows.extend(interior);
    rows.push(last);
    CoefficientTable::from_rows(*spec, *grid, variable, &rows)
}

fn endpoint_rows(interior: &[Vec<f64>], alpha: usize, node_count: usize) -> (Vec<f64>, Vec<f64>) {
    let base = interior.len();
    let mut first = Vec::with_capacity(alpha);
    let mut last = Vec::with_capacity(alpha);
    for k in 1..=alpha {
        let p = interpolation::stencil_size(alpha, k, node_count).min(base);
        let head: Vec<f64> = interior[..p].iter().map(|row| row[k - 1]).collect();
        let tail: Vec<f64> = interior[base - p..].iter().map(|row| row[k - 1]).collect();
        first.push(interpolation::lagrange_unit_nodes(&head, -1.0));
        last.push(interpolation::lagrange_unit_nodes(&tail, p as f64));
    }
    (first, last)
}

/// Runs the full precomputation for `spec` on an `(n1, alpha)` grid.
pub fn precompute(spec: &SymbolSpec, grid: &ExtrapolationGrid) -> Result<CoefficientTable> {
    precompute_with(spec, grid, EndpointRule::for_spec(spec))
}

/// [`precompute`] with an explicit endpoint rule.
pub fn precompute_with(
    spec: &SymbolSpec,
    grid: &ExtrapolationGrid,
    endpoints: EndpointRule,
) -> Result<CoefficientTable> {
    let spectra = precompute_spectra(spec, grid)?;
    extrapolate_with(spec, grid, &spectra, ExpansionVariable::Shift, endpoints)
}

/// Approximates every eigenvalue of `T_n(f)` at `level`:
/// `s_hat = theta_{j,n} + sum_{l<level} r_hat_l(theta_{j,n}) h^l`,
/// `lambda_hat = f(clamp(s_hat, 0, pi))`. Level 1 is `f(theta_{j,n})`.
///
/// `symbol` must be the symbol at order `n` (relevant for order-dependent
/// families).
pub fn approximate_all(
    symbol: &Symbol,
    n: usize,
    table: &CoefficientTable,
    level: usize,
) -> Result<ApproximationResult> {
    let alpha = table.grid().levels();
    if level == 0 || level > alpha {
        return Err(Error::InvalidLevel { level, alpha });
    }
    if table.variable() != ExpansionVariable::Shift {
        return Err(Error::Config(
            "shifted-variable approximation needs a shift coefficient table".into(),
        ));
    }
    let h = step(n);
    let pairs = par::map_range(n, |i| {
        let j = i + 1;
        let theta = j as f64 * PI * h;
        let mut correction = 0.0;
        let mut hk = 1.0;
        for k in 1..level {
            hk *= h;
            correction += table.interpolate_at(k, j, n) * hk;
        }
        let s = theta + correction;
        (s, symbol.eval(s.clamp(0.0, PI)))
    });
    let (abscissae, eigenvalues) = pairs.into_iter().unzip();
    Ok(ApproximationResult {
        n,
        level,
        abscissae,
        eigenvalues,
    })
}

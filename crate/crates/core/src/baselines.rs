//! Comparator methods.
//!
//! * `SL`: the exact simple-loop expansion of the KMS symbol, with the
//!   coefficients `r_1..r_4` assembled from the phase function `eta` and its
//!   first three derivatives.
//! * `NA`: extrapolation in the eigenvalue variable,
//!   `lambda_j = f(theta_{j,n}) + sum_l c_l(theta_{j,n}) h^l`, built on the same
//!   grid and interpolation machinery as the shifted-variable algorithm.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrixless::{
    extrapolate, precompute_spectra, ApproximationResult, CoefficientTable, ExpansionVariable,
    ExtrapolationGrid,
};
use crate::par;
use crate::symbols::{eta_kms, step, Symbol, SymbolSpec};

/// Highest level the exact expansion supports (`r_1..r_4`).
pub const SL_MAX_LEVEL: usize = 5;

/// Closed-form expansion coefficients for `KMS(rho)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SLCoefficients {
    rho: f64,
}

impl SLCoefficients {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidSymbol(format!("kms:rho={rho}")));
        }
        Ok(Self { rho })
    }

    pub fn for_spec(spec: &SymbolSpec) -> Result<Self> {
        match *spec {
            SymbolSpec::Kms { rho } => Self::new(rho),
            other => Err(Error::UnsupportedSymbol(other.to_string())),
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eta(&self, s: f64) -> f64 {
        eta_kms(self.rho, s)
    }

    // D = 1 - 2 rho cos s + rho^2 throughout.
    fn denom(&self, s: f64) -> f64 {
        1.0 - 2.0 * self.rho * s.cos() + self.rho * self.rho
    }

    /// `eta'(s) = 2 (rho cos s - rho^2) / D`
    pub fn eta_d1(&self, s: f64) -> f64 {
        let r = self.rho;
        2.0 * (r * s.cos() - r * r) / self.denom(s)
    }

    /// `eta''(s) = -2 rho (1 - rho^2) sin s / D^2`
    pub fn eta_d2(&self, s: f64) -> f64 {
        let r = self.rho;
        let d = self.denom(s);
        -2.0 * r * (1.0 - r * r) * s.sin() / (d * d)
    }

    /// `eta'''(s) = -2 rho (1 - rho^2) (D cos s - 4 rho sin^2 s) / D^3`
    pub fn eta_d3(&self, s: f64) -> f64 {
        let r = self.rho;
        let d = self.denom(s);
        let sin = s.sin();
        -2.0 * r * (1.0 - r * r) * (d * s.cos() - 4.0 * r * sin * sin) / (d * d * d)
    }

    /// `[r_1, r_2, r_3, r_4]` at `s`.
    pub fn coefficients(&self, s: f64) -> [f64; 4] {
        let e = self.eta(s);
        let e1 = self.eta_d1(s);
        let e2 = self.eta_d2(s);
        let e3 = self.eta_d3(s);
        [
            -e,
            e * e1,
            -e * e1 * e1 - 0.5 * e * e * e2,
            e * e1 * e1 * e1 + 1.5 * e * e * e1 * e2 + e * e * e * e3 / 6.0,
        ]
    }

    /// `r_k(s)` for `k = 1..=4`.
    pub fn r(&self, k: usize, s: f64) -> f64 {
        self.coefficients(s)[k - 1]
    }
}

fn check_level(level: usize, max: usize) -> Result<()> {
    if level == 0 || level > max {
        return Err(Error::InvalidLevel { level, alpha: max });
    }
    Ok(())
}

/// `f(theta_{j,n} + sum_{k<level} r_k(theta_{j,n}) h^k)` for a KMS symbol.
pub fn sl_approximation(spec: &SymbolSpec, n: usize, j: usize, level: usize) -> Result<f64> {
    let coeffs = SLCoefficients::for_spec(spec)?;
    check_level(level, SL_MAX_LEVEL)?;
    if j == 0 || j > n {
        return Err(Error::Config(format!("index {j} outside 1..={n}")));
    }
    let symbol = spec.at_order(n);
    Ok(sl_point(&coeffs, &symbol, n, j, level).1)
}

fn sl_point(coeffs: &SLCoefficients, symbol: &Symbol, n: usize, j: usize, level: usize) -> (f64, f64) {
    let h = step(n);
    let theta = j as f64 * PI * h;
    let r = coeffs.coefficients(theta);
    let mut correction = 0.0;
    let mut hk = 1.0;
    for rk in &r[..level - 1] {
        hk *= h;
        correction += rk * hk;
    }
    let s = theta + correction;
    (s, symbol.eval(s.clamp(0.0, PI)))
}

/// [`sl_approximation`] for every `j = 1..=n`.
pub fn sl_approximate_all(spec: &SymbolSpec, n: usize, level: usize) -> Result<ApproximationResult> {
    let coeffs = SLCoefficients::for_spec(spec)?;
    check_level(level, SL_MAX_LEVEL)?;
    let symbol = spec.at_order(n);
    let pairs = par::map_range(n, |i| sl_point(&coeffs, &symbol, n, i + 1, level));
    let (abscissae, eigenvalues) = pairs.into_iter().unzip();
    Ok(ApproximationResult {
        n,
        level,
        abscissae,
        eigenvalues,
    })
}

/// Eigenvalue-variable coefficient table `c_1..c_alpha` on `grid`.
pub fn na_precompute(spec: &SymbolSpec, grid: &ExtrapolationGrid) -> Result<CoefficientTable> {
    let spectra = precompute_spectra(spec, grid)?;
    extrapolate(spec, grid, &spectra, ExpansionVariable::Eigenvalue)
}

/// `lambda_hat_j = f(theta_{j,n}) + sum_{l<level} c_hat_l(theta_{j,n}) h^l`.
///
/// `symbol` must be the symbol at order `n`. The returned abscissae are the
/// uncorrected grid points.
pub fn na_approximate_all(
    symbol: &Symbol,
    n: usize,
    table: &CoefficientTable,
    level: usize,
) -> Result<ApproximationResult> {
    check_level(level, table.grid().levels())?;
    if table.variable() != ExpansionVariable::Eigenvalue {
        return Err(Error::Config(
            "eigenvalue-variable approximation needs an eigenvalue coefficient table".into(),
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
        (theta, symbol.eval(theta) + correction)
    });
    let (abscissae, eigenvalues) = pairs.into_iter().unzip();
    Ok(ApproximationResult {
        n,
        level,
        abscissae,
        eigenvalues,
    })
}

//! Even real symbols on `[-pi, pi]` that increase on `[0, pi]`.
//!
//! A [`Symbol`] knows how to evaluate itself and its derivative, produce its
//! exact Fourier coefficients and invert its increasing branch. A
//! [`SymbolSpec`] is the order-free description parsed from strings such as
//! `kms:rho=0.5`; order-dependent families are turned into a concrete
//! [`Symbol`] with [`SymbolSpec::at_order`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default relative step tolerance for [`Symbol::inverse_on_half_period`].
pub const DEFAULT_INVERSE_TOL: f64 = 1e-14;

const MAX_INVERSE_ITERATIONS: usize = 300;

/// Symbol family without a matrix order attached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymbolSpec {
    /// Rational symbol `(1+rho)^2/2 * (1-cos t)/(1-2 rho cos t+rho^2)`.
    Kms { rho: f64 },
    /// Real cosine trigonometric polynomial `(2-2cos t)^l`.
    Rctp { ell: u32 },
    /// `f_2(t) + a1 f_1(t) h^2 + a0 h^4` with `h = 1/(n+1)`.
    OrderDependent { a0: f64, a1: f64 },
}

impl SymbolSpec {
    /// The concrete symbol used for matrices of order `n`.
    pub fn at_order(&self, n: usize) -> Symbol {
        match *self {
            SymbolSpec::Kms { rho } => Symbol::kms(rho),
            SymbolSpec::Rctp { ell } => Symbol::rctp(ell),
            SymbolSpec::OrderDependent { a0, a1 } => Symbol::order_dependent(a0, a1, n),
        }
    }

    pub fn is_kms(&self) -> bool {
        matches!(self, SymbolSpec::Kms { .. })
    }

    fn validate(self) -> Result<Self> {
        let ok = match self {
            SymbolSpec::Kms { rho } => rho > 0.0 && rho < 1.0,
            SymbolSpec::Rctp { ell } => ell >= 1,
            SymbolSpec::OrderDependent { a0, a1 } => a0.is_finite() && a1.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidSymbol(self.to_string()))
        }
    }
}

impl fmt::Display for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolSpec::Kms { rho } => write!(f, "kms:rho={rho}"),
            SymbolSpec::Rctp { ell } => write!(f, "rctp:l={ell}"),
            SymbolSpec::OrderDependent { a0, a1 } => write!(f, "fdep:a0={a0},a1={a1}"),
        }
    }
}

impl FromStr for SymbolSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSymbol(s.to_string());
        let (family, params) = s.trim().split_once(':').ok_or_else(bad)?;

        let mut pairs = Vec::new();
        for item in params.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            pairs.push((key.trim(), value.trim()));
        }
        let get = |name: &str| -> Result<&str> {
            let mut found = pairs.iter().filter(|(k, _)| *k == name);
            match (found.next(), found.next()) {
                (Some((_, v)), None) => Ok(v),
                _ => Err(bad()),
            }
        };
        let real = |name: &str| -> Result<f64> { get(name)?.parse::<f64>().map_err(|_| bad()) };

        let spec = match family.trim().to_ascii_lowercase().as_str() {
            "kms" if pairs.len() == 1 => SymbolSpec::Kms { rho: real("rho")? },
            "rctp" if pairs.len() == 1 => SymbolSpec::Rctp {
                ell: get("l")?.parse().map_err(|_| bad())?,
            },
            "fdep" if pairs.len() == 2 => SymbolSpec::OrderDependent {
                a0: real("a0")?,
                a1: real("a1")?,
            },
            _ => return Err(bad()),
        };
        spec.validate().map_err(|_| bad())
    }
}

/// Concrete symbol variant, including the matrix order for
/// order-dependent families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymbolKind {
    Kms { rho: f64 },
    Rctp { ell: u32 },
    OrderDependent { a0: f64, a1: f64, n: usize },
}

/// An even symbol together with its range `[f(0), f(pi)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Symbol {
    kind: SymbolKind,
    lower: f64,
    upper: f64,
}

impl Symbol {
    /// # Panics
    /// If `rho` is not in `(0, 1)`.
    pub fn kms(rho: f64) -> Self {
        assert!(rho > 0.0 && rho < 1.0, "KMS parameter must lie in (0, 1)");
        Self::from_kind(SymbolKind::Kms { rho })
    }

    /// # Panics
    /// If `ell == 0`.
    pub fn rctp(ell: u32) -> Self {
        assert!(ell >= 1, "RCTP degree must be positive");
        Self::from_kind(SymbolKind::Rctp { ell })
    }

    pub fn order_dependent(a0: f64, a1: f64, n: usize) -> Self {
        Self::from_kind(SymbolKind::OrderDependent { a0, a1, n })
    }

    fn from_kind(kind: SymbolKind) -> Self {
        let mut sym = Symbol {
            kind,
            lower: 0.0,
            upper: 0.0,
        };
        sym.lower = sym.eval(0.0);
        sym.upper = sym.eval(PI);
        sym
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    /// The order-free family this symbol belongs to.
    pub fn spec(&self) -> SymbolSpec {
        match self.kind {
            SymbolKind::Kms { rho } => SymbolSpec::Kms { rho },
            SymbolKind::Rctp { ell } => SymbolSpec::Rctp { ell },
            SymbolKind::OrderDependent { a0, a1, .. } => SymbolSpec::OrderDependent { a0, a1 },
        }
    }

    /// `f(0)`.
    pub fn min_value(&self) -> f64 {
        self.lower
    }

    /// `f(pi)`.
    pub fn max_value(&self) -> f64 {
        self.upper
    }

    /// Evaluates the symbol at `theta` in `[-pi, pi]`.
    pub fn eval(&self, theta: f64) -> f64 {
        // 1 - cos t = 2 sin^2(t/2) keeps full relative accuracy near t = 0.
        let half_sin = (0.5 * theta).sin();
        let sin2 = half_sin * half_sin;
        match self.kind {
            SymbolKind::Kms { rho } => {
                let c = 0.5 * (1.0 + rho) * (1.0 + rho);
                let denom = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * sin2;
                c * 2.0 * sin2 / denom
            }
            SymbolKind::Rctp { ell } => (4.0 * sin2).powi(ell as i32),
            SymbolKind::OrderDependent { a0, a1, n } => {
                let h = step(n);
                let f1 = 4.0 * sin2;
                f1 * f1 + a1 * f1 * h * h + a0 * h.powi(4)
            }
        }
    }

    /// First derivative of the symbol.
    pub fn derivative(&self, theta: f64) -> f64 {
        let sin = theta.sin();
        match self.kind {
            SymbolKind::Kms { rho } => {
                let c = 0.5 * (1.0 + rho) * (1.0 + rho);
                let half_sin = (0.5 * theta).sin();
                let denom = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * half_sin * half_sin;
                c * (1.0 - rho) * (1.0 - rho) * sin / (denom * denom)
            }
            SymbolKind::Rctp { ell } => {
                let half_sin = (0.5 * theta).sin();
                let g = 4.0 * half_sin * half_sin;
                f64::from(ell) * g.powi(ell as i32 - 1) * 2.0 * sin
            }
            SymbolKind::OrderDependent { a1, n, .. } => {
                let h = step(n);
                let half_sin = (0.5 * theta).sin();
                let g = 4.0 * half_sin * half_sin;
                (2.0 * g + a1 * h * h) * 2.0 * sin
            }
        }
    }

    /// Exact Fourier coefficient `a_k(f)`.
    pub fn fourier_coeff(&self, k: i64) -> f64 {
        let k = k.unsigned_abs();
        match self.kind {
            SymbolKind::Kms { rho } => {
                if k == 0 {
                    0.5 * (1.0 + rho)
                } else {
                    0.25 * (rho * rho - 1.0) * rho.powi((k - 1) as i32)
                }
            }
            SymbolKind::Rctp { ell } => rctp_coeff(ell, k),
            SymbolKind::OrderDependent { a0, a1, n } => {
                let h = step(n);
                let mut c = rctp_coeff(2, k) + a1 * h * h * rctp_coeff(1, k);
                if k == 0 {
                    c += a0 * h.powi(4);
                }
                c
            }
        }
    }

    /// Index beyond which every Fourier coefficient vanishes, if any.
    pub fn bandwidth(&self) -> Option<usize> {
        match self.kind {
            SymbolKind::Kms { .. } => None,
            SymbolKind::Rctp { ell } => Some(ell as usize),
            SymbolKind::OrderDependent { .. } => Some(2),
        }
    }

    /// Inverts the increasing branch `f|[0, pi]` at `y`.
    ///
    /// `y` is clamped to `[f(0), f(pi)]` first. Newton steps with the analytic
    /// derivative are kept inside a shrinking bisection bracket; iteration
    /// stops once a step falls below `tol` relative to the iterate.
    pub fn inverse_on_half_period(&self, y: f64, tol: f64) -> Result<f64> {
        if !(self.lower < self.upper) {
            return Err(Error::NonMonotoneSymbol {
                f0: self.lower,
                fpi: self.upper,
            });
        }
        let tol = tol.max(f64::EPSILON);
        let y = y.clamp(self.lower, self.upper);
        if y == self.lower {
            return Ok(0.0);
        }
        if y == self.upper {
            return Ok(PI);
        }

        let (mut lo, mut hi) = (0.0_f64, PI);
        let mut x = self.initial_guess(y).clamp(0.0, PI);
        if x <= lo || x >= hi {
            x = 0.5 * (lo + hi);
        }

        for _ in 0..MAX_INVERSE_ITERATIONS {
            let r = self.eval(x) - y;
            if r == 0.0 {
                return Ok(x);
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.derivative(x);
            let newton = x - r / d;
            let next = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let step = (next - x).abs();
            x = next;
            if step <= tol * x.abs() || hi - lo <= 2.0 * f64::EPSILON * hi {
                break;
            }
        }
        Ok(x)
    }

    fn initial_guess(&self, y: f64) -> f64 {
        match self.kind {
            SymbolKind::Kms { rho } => {
                let c = 0.5 * (1.0 + rho) * (1.0 + rho);
                let t = y * (1.0 - rho) * (1.0 - rho) / (2.0 * c - 4.0 * rho * y);
                2.0 * t.clamp(0.0, 1.0).sqrt().asin()
            }
            SymbolKind::Rctp { ell } => {
                let g = y.powf(1.0 / f64::from(ell));
                2.0 * (0.5 * g.sqrt()).min(1.0).asin()
            }
            SymbolKind::OrderDependent { .. } => {
                let g = y.max(0.0).sqrt();
                2.0 * (0.5 * g.sqrt()).min(1.0).asin()
            }
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::OrderDependent { n, .. } => write!(f, "{}@n={n}", self.spec()),
            _ => write!(f, "{}", self.spec()),
        }
    }
}

/// Grid step `h = 1/(n+1)`.
#[inline]
pub fn step(n: usize) -> f64 {
    1.0 / (n as f64 + 1.0)
}

/// `(-1)^k C(2l, l+k)` for `|k| <= l`, zero otherwise.
fn rctp_coeff(ell: u32, k: u64) -> f64 {
    let ell = u64::from(ell);
    if k > ell {
        return 0.0;
    }
    let n = 2 * ell;
    let r = (ell + k).min(n - ell - k);
    let mut binom = 1.0_f64;
    for i in 0..r {
        binom = binom * (n - i) as f64 / (i + 1) as f64;
    }
    let binom = binom.round();
    if k.is_multiple_of(2) {
        binom
    } else {
        -binom
    }
}

/// The phase function of the KMS symbol,
/// `eta(s) = 2 atan(rho sin s / (1 - rho cos s))`.
pub fn eta_kms(rho: f64, s: f64) -> f64 {
    2.0 * (rho * s.sin()).atan2(1.0 - rho * s.cos())
}

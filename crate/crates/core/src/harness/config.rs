use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::symbols::SymbolSpec;

/// Largest order solved densely for a reference spectrum by default.
pub const DEFAULT_REFERENCE_CEILING: usize = 2048;
/// Ceiling used when heavy runs are requested.
pub const HEAVY_REFERENCE_CEILING: usize = 4096;

/// Approximation method compared against the reference spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Shifted-variable matrix-less algorithm.
    Nas,
    /// Eigenvalue-variable extrapolation.
    Na,
    /// Exact simple-loop expansion (KMS only).
    Sl,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Nas => "NAS",
            Method::Na => "NA",
            Method::Sl => "SL",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NAS" => Ok(Method::Nas),
            "NA" => Ok(Method::Na),
            "SL" => Ok(Method::Sl),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

/// Parses `1..4` (inclusive), `2` or `1,3,4`.
pub fn parse_levels(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    let bad = || Error::Config(format!("bad level list `{text}`"));
    if text.is_empty() {
        return Err(Error::EmptyLevels);
    }
    if let Some((lo, hi)) = text.split_once("..") {
        // `a..b` and `a..=b` both include `b`
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        let levels: Vec<usize> = (lo..=hi).collect();
        if levels.is_empty() {
            return Err(Error::EmptyLevels);
        }
        return Ok(levels);
    }
    parse_list(text).map_err(|_| bad())
}

fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad list entry `{}`", s.trim())))
        })
        .collect()
}

/// Everything needed to run one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub symbol: SymbolSpec,
    pub sizes: Vec<usize>,
    pub n1: usize,
    pub alpha: usize,
    pub levels: Vec<usize>,
    pub methods: Vec<Method>,
    /// Orders above this are not solved densely.
    pub ceiling: usize,
    /// Reference spectra loaded from disk instead of computed, by order.
    pub references: BTreeMap<usize, PathBuf>,
}

impl ExperimentConfig {
    /// Defaults: `n1 = 100`, `alpha = 5`, levels `1..=4`, NAS only.
    pub fn new(symbol: SymbolSpec, sizes: Vec<usize>) -> Self {
        Self {
            symbol,
            sizes,
            n1: 100,
            alpha: 5,
            levels: (1..=4).collect(),
            methods: vec![Method::Nas],
            ceiling: DEFAULT_REFERENCE_CEILING,
            references: BTreeMap::new(),
        }
    }

    /// Parses flat `key = value` text. `#` starts a comment. Keys: `symbol`,
    /// `n`, `n1`, `alpha`, `levels`, `methods`, `ceiling`, `reference.<n>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", idx + 1)))?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        let symbol = pairs
            .iter()
            .find(|(k, _)| k == "symbol")
            .map(|(_, v)| v.parse::<SymbolSpec>())
            .transpose()?
            .ok_or_else(|| Error::Config("missing `symbol`".into()))?;
        let mut config = Self::new(symbol, Vec::new());
        for (key, value) in &pairs {
            config.set(key, value)?;
        }
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        self.set(key.trim(), value.trim())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let number = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| Error::Config(format!("`{key}` expects an integer, got `{v}`")))
        };
        match key {
            "symbol" => self.symbol = value.parse()?,
            "n" => self.sizes = parse_list(value)?,
            "n1" => self.n1 = number(value)?,
            "alpha" => self.alpha = number(value)?,
            "levels" => self.levels = parse_levels(value)?,
            "methods" => self.methods = parse_list(value)?,
            "ceiling" => self.ceiling = number(value)?,
            _ => match key.strip_prefix("reference.") {
                Some(n) => {
                    self.references.insert(number(n)?, PathBuf::from(value));
                }
                None => return Err(Error::Config(format!("unknown key `{key}`"))),
            },
        }
        Ok(())
    }

    /// Checks the combination before any work is done.
    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::EmptyLevels);
        }
        if self.sizes.is_empty() {
            return Err(Error::Config("no matrix orders requested".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods requested".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n == 0) {
            return Err(Error::Config(format!("matrix order must be positive, got {n}")));
        }
        for &level in &self.levels {
            if level == 0 || level > self.alpha {
                return Err(Error::InvalidLevel {
                    level,
                    alpha: self.alpha,
                });
            }
        }
        if self.methods.contains(&Method::Sl) && !self.symbol.is_kms() {
            return Err(Error::UnsupportedSymbol(self.symbol.to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_lists() {
        assert_eq!(parse_levels("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_levels("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_levels("1,3").unwrap(), vec![1, 3]);
        assert_eq!(parse_levels("5").unwrap(), vec![5]);
        assert!(matches!(parse_levels(""), Err(Error::EmptyLevels)));
        assert!(matches!(parse_levels("4..2"), Err(Error::EmptyLevels)));
        assert!(parse_levels("a..b").is_err());
    }

    #[test]
    fn parses_file_and_overrides() {
        let text = "\
# KMS run
symbol = kms:rho=0.5
n = 256, 512
levels = 1..3   # three levels
methods = nas,sl
reference.512 = spectra/512.txt
";
        let mut cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.symbol, SymbolSpec::Kms { rho: 0.5 });
        assert_eq!(cfg.sizes, vec![256, 512]);
        assert_eq!(cfg.levels, vec![1, 2, 3]);
        assert_eq!(cfg.methods, vec![Method::Nas, Method::Sl]);
        assert_eq!(cfg.n1, 100);
        assert_eq!(cfg.references[&512], PathBuf::from("spectra/512.txt"));
        cfg.apply_override("alpha=4").unwrap();
        cfg.apply_override("ceiling = 1024").unwrap();
        assert_eq!((cfg.alpha, cfg.ceiling), (4, 1024));
        cfg.validate().unwrap();
        assert!(cfg.apply_override("colour=blue").is_err());
        assert!(cfg.apply_override("n1").is_err());
    }

    #[test]
    fn validation_errors() {
        assert!(ExperimentConfig::parse("n = 3").is_err());
        let mut cfg = ExperimentConfig::new(SymbolSpec::Rctp { ell: 2 }, vec![64]);
        cfg.validate().unwrap();
        cfg.levels.clear();
        assert!(matches!(cfg.validate(), Err(Error::EmptyLevels)));
        cfg.levels = vec![6];
        assert!(matches!(cfg.validate(), Err(Error::InvalidLevel { level: 6, alpha: 5 })));
        cfg.levels = vec![1];
        cfg.methods = vec![Method::Sl];
        assert!(matches!(cfg.validate(), Err(Error::UnsupportedSymbol(_))));
    }

    #[test]
    fn method_names() {
        for m in [Method::Nas, Method::Na, Method::Sl] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("MNA".parse::<Method>().is_err());
    }
}

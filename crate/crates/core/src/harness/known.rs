//! Published NAS error tables for the four benchmark symbols, used as
//! reproduction targets.

use std::io::Write;

use super::{run_experiment, ErrorReport, ExperimentConfig, Method, DEFAULT_REFERENCE_CEILING, HEAVY_REFERENCE_CEILING};
use crate::error::{Error, Result};
use crate::symbols::SymbolSpec;

pub const SIZES: [usize; 5] = [256, 512, 1024, 2048, 4096];

/// Max errors `eps_{n,k}` and normalized `(n+1)^k eps_{n,k}` for `k = 1..=4`
/// (rows) over [`SIZES`] (columns), computed with `n1 = 100`, `alpha = 5`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KnownTable {
    pub id: u8,
    pub symbol: SymbolSpec,
    pub max_error: [[f64; 5]; 4],
    pub normalized: [[f64; 5]; 4],
}

impl KnownTable {
    pub const N1: usize = 100;
    pub const ALPHA: usize = 5;

    pub fn get(id: u8) -> Result<&'static KnownTable> {
        TABLES
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::Config(format!("no reference table {id}; expected 1..=4")))
    }

    /// Column of `n` in [`SIZES`].
    pub fn column(n: usize) -> Option<usize> {
        SIZES.iter().position(|&s| s == n)
    }

    pub fn max_error_at(&self, n: usize, level: usize) -> Option<f64> {
        Some(self.max_error[level.checked_sub(1)?][Self::column(n)?])
    }

    pub fn normalized_at(&self, n: usize, level: usize) -> Option<f64> {
        Some(self.normalized[level.checked_sub(1)?][Self::column(n)?])
    }
}

pub static TABLES: [KnownTable; 4] = [
    KnownTable {
        id: 1,
        symbol: SymbolSpec::Kms { rho: 0.5 },
        max_error: [
            [3.0897e-3, 1.5494e-3, 7.7577e-4, 3.8816e-4, 1.9415e-4],
            // 512 entry listed as 3.4113e-5 at the source; its normalized value pins e-6
            [1.3575e-5, 3.4113e-6, 8.5515e-7, 2.1407e-7, 5.3553e-8],
            [5.4356e-8, 6.8619e-9, 8.6153e-10, 1.0794e-10, 1.3507e-11],
            [3.4700e-10, 2.1887e-11, 1.3740e-12, 8.6077e-14, 5.4131e-15],
        ],
        normalized: [
            [7.9405e-1, 7.9482e-1, 7.9517e-1, 7.9534e-1, 7.9542e-1],
            [8.9661e-1, 8.9775e-1, 8.9844e-1, 8.9875e-1, 8.9890e-1],
            [9.2267e-1, 9.2640e-1, 9.2778e-1, 9.2852e-1, 9.2887e-1],
            [1.5138, 1.5158, 1.5166, 1.5172, 1.5252],
        ],
    },
    KnownTable {
        id: 2,
        symbol: SymbolSpec::Rctp { ell: 2 },
        max_error: [
            [1.6269e-2, 8.1578e-3, 4.0848e-3, 2.0439e-3, 1.0223e-3],
            [2.7270e-5, 6.8421e-6, 1.7136e-6, 4.2880e-7, 1.0725e-7],
            [6.9024e-8, 8.6696e-9, 1.0863e-9, 1.3595e-10, 1.7004e-11],
            [2.7800e-9, 1.3631e-10, 7.4328e-12, 4.5503e-13, 5.4968e-14],
        ],
        normalized: [
            [4.1811, 4.1850, 4.1869, 4.1878, 4.1883],
            [1.8011, 1.8006, 1.8004, 1.8003, 1.8002],
            [1.1717, 1.1704, 1.1698, 1.1695, 1.1694],
            [1.2128e1, 9.4408, 8.2044, 8.2044, 1.5487e1],
        ],
    },
    KnownTable {
        id: 3,
        symbol: SymbolSpec::Rctp { ell: 3 },
        max_error: [
            [9.1868e-2, 4.6172e-2, 2.3146e-2, 1.1588e-2, 5.7978e-3],
            [3.0497e-4, 7.6550e-5, 1.9176e-5, 4.7989e-6, 1.2003e-6],
            [1.3355e-6, 1.6765e-7, 2.1002e-8, 2.6281e-9, 3.2868e-10],
            [7.6467e-9, 4.8020e-10, 3.0083e-11, 1.8824e-12, 1.1772e-13],
        ],
        normalized: [
            [2.3610e1, 2.3686e1, 2.3725e1, 2.3744e1, 2.3753e1],
            [2.0143e1, 2.0146e1, 2.0147e1, 2.0148e1, 2.0148e1],
            [2.2669e1, 2.2634e1, 2.2617e1, 2.2608e1, 2.2604e1],
            [3.3358e1, 3.3258e1, 3.3206e1, 3.3181e1, 3.3168e1],
        ],
    },
    KnownTable {
        id: 4,
        symbol: SymbolSpec::OrderDependent { a0: 3.0, a1: 2.0 },
        max_error: [
            [6.0007e-3, 3.0088e-3, 1.5065e-3, 7.5377e-4, 3.7702e-4],
            [1.5208e-5, 3.7944e-6, 9.4766e-7, 2.3679e-7, 5.9184e-8],
            [8.9731e-8, 1.1313e-8, 1.4203e-9, 1.7792e-10, 2.2264e-11],
            [4.3281e-9, 2.7008e-10, 1.8110e-11, 2.3324e-12, 2.9853e-13],
        ],
        normalized: [
            [1.5422, 1.5435, 1.5442, 1.5445, 1.5446],
            [1.0045, 9.9858e-1, 9.9563e-1, 9.9416e-1, 9.9342e-1],
            [1.5231, 1.5274, 1.5295, 1.5306, 1.5311],
            [1.8881e1, 1.8705e1, 1.9990e1, 4.1112e1, 8.4112e1],
        ],
    },
];

/// Experiment regenerating table `id`: NAS, levels `1..=4`, orders up to
/// 2048, or 4096 when `heavy`.
pub fn reproduction_config(id: u8, heavy: bool) -> Result<ExperimentConfig> {
    let table = KnownTable::get(id)?;
    let ceiling = if heavy {
        HEAVY_REFERENCE_CEILING
    } else {
        DEFAULT_REFERENCE_CEILING
    };
    let mut config = ExperimentConfig::new(
        table.symbol,
        SIZES.iter().copied().filter(|&n| n <= ceiling).collect(),
    );
    config.n1 = KnownTable::N1;
    config.alpha = KnownTable::ALPHA;
    config.levels = (1..=4).collect();
    config.methods = vec![Method::Nas];
    config.ceiling = ceiling;
    Ok(config)
}

pub fn reproduce(id: u8, heavy: bool) -> Result<Vec<ErrorReport>> {
    run_experiment(&reproduction_config(id, heavy)?)
}

/// Side-by-side listing of computed and published values with relative
/// differences.
pub fn write_comparison<W: Write>(table: &KnownTable, reports: &[ErrorReport], mut out: W) -> Result<()> {
    writeln!(out, "# {}  n1={}  alpha={}", table.symbol, KnownTable::N1, KnownTable::ALPHA)?;
    writeln!(
        out,
        "{:>5} {:>5} {:>12} {:>12} {:>9} {:>12} {:>12} {:>9}",
        "level", "n", "eps", "published", "rel", "normalized", "published", "rel"
    )?;
    for r in reports {
        let (Some(eps), Some(norm)) = (table.max_error_at(r.n, r.level), table.normalized_at(r.n, r.level)) else {
            continue;
        };
        writeln!(
            out,
            "{:>5} {:>5} {:>12.4e} {:>12.4e} {:>+9.3} {:>12.4e} {:>12.4e} {:>+9.3}",
            r.level,
            r.n,
            r.max_error(),
            eps,
            r.max_error() / eps - 1.0,
            r.normalized(),
            norm,
            r.normalized() / norm - 1.0
        )?;
    }
    out.flush()?;
    Ok(())
}

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::grid::ExtrapolationGrid;
use super::interpolation::{interpolate_at_index, interpolate_local, stencil_size};
use crate::error::{Error, Result};
use crate::symbols::SymbolSpec;

/// Which quantity the extrapolated expansion describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionVariable {
    /// `s_{j,n} - theta_{j,n}`: the shifted abscissa.
    Shift,
    /// `lambda_j - f(theta_{j,n})`: the eigenvalue itself.
    Eigenvalue,
}

/// Estimated expansion coefficients at every base-grid node, endpoints
/// included.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    spec: SymbolSpec,
    grid: ExtrapolationGrid,
    variable: ExpansionVariable,
    // columns[k-1][j] = coefficient k at node j
    columns: Vec<Vec<f64>>,
}

impl CoefficientTable {
    /// Builds a table from per-node rows `rows[j][k-1]`, `j = 0..=n1+1`.
    pub fn from_rows(
        spec: SymbolSpec,
        grid: ExtrapolationGrid,
        variable: ExpansionVariable,
        rows: &[Vec<f64>],
    ) -> Result<Self> {
        if rows.len() != grid.node_count() {
            return Err(Error::InvalidGrid(format!(
                "expected {} node rows, got {}",
                grid.node_count(),
                rows.len()
            )));
        }
        let alpha = grid.levels();
        let mut columns = vec![Vec::with_capacity(rows.len()); alpha];
        for (j, row) in rows.iter().enumerate() {
            if row.len() != alpha {
                return Err(Error::InvalidGrid(format!(
                    "node {j} has {} coefficients, expected {alpha}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidGrid(format!("non-finite coefficient {bad} at node {j}")));
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Ok(Self {
            spec,
            grid,
            variable,
            columns,
        })
    }

    pub fn spec(&self) -> SymbolSpec {
        self.spec
    }

    pub fn grid(&self) -> &ExtrapolationGrid {
        &self.grid
    }

    pub fn variable(&self) -> ExpansionVariable {
        self.variable
    }

    /// Stored coefficient `k` (1-based) at base node `j`.
    pub fn value(&self, j: usize, k: usize) -> f64 {
        self.columns[k - 1][j]
    }

    /// All node values of coefficient `k`.
    pub fn column(&self, k: usize) -> &[f64] {
        &self.columns[k - 1]
    }

    /// Largest stored coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.columns
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Coefficient `k` at `theta` by local Lagrange interpolation through the
    /// `alpha - k + 5` nearest base nodes.
    pub fn interpolate(&self, k: usize, theta: f64) -> f64 {
        let col = self.column(k);
        interpolate_local(col, self.stencil(k), theta)
    }

    /// Coefficient `k` at `theta_{j,n}`, with exact node detection.
    pub fn interpolate_at(&self, k: usize, j: usize, n: usize) -> f64 {
        let col = self.column(k);
        interpolate_at_index(col, self.stencil(k), j, n)
    }

    fn stencil(&self, k: usize) -> usize {
        stencil_size(self.grid.levels(), k, self.grid.node_count())
    }

    /// Writes the plain-text form: a header `n1 alpha symbol-spec`, then one
    /// line `j theta r1 .. r_alpha` per node with 17 significant digits.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        if self.variable != ExpansionVariable::Shift {
            return Err(Error::Config(
                "only shift-variable coefficient tables can be serialized".into(),
            ));
        }
        writeln!(out, "{} {} {}", self.grid.base_size(), self.grid.levels(), self.spec)?;
        for j in 0..self.grid.node_count() {
            write!(out, "{j} {:.16e}", self.grid.node(j))?;
            for col in &self.columns {
                write!(out, " {:.16e}", col[j])?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let fmt_err = |line: usize, message: String| Error::TableFormat {
            line: line + 1,
            message,
        };

        let (_, header) = lines
            .next()
            .ok_or_else(|| fmt_err(0, "missing header".into()))?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(fmt_err(0, format!("expected `n1 alpha symbol`, got `{header}`")));
        }
        let base: usize = fields[0]
            .parse()
            .map_err(|_| fmt_err(0, format!("bad n1 `{}`", fields[0])))?;
        let alpha: usize = fields[1]
            .parse()
            .map_err(|_| fmt_err(0, format!("bad alpha `{}`", fields[1])))?;
        let spec: SymbolSpec = fields[2].parse().map_err(|e: Error| fmt_err(0, e.to_string()))?;
        let grid = ExtrapolationGrid::new(base, alpha).map_err(|e| fmt_err(0, e.to_string()))?;

        let mut rows = Vec::with_capacity(grid.node_count());
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != alpha + 2 {
                return Err(fmt_err(idx, format!("expected {} fields, got {}", alpha + 2, values.len())));
            }
            let j: usize = values[0]
                .parse()
                .map_err(|_| fmt_err(idx, format!("bad node index `{}`", values[0])))?;
            if j != rows.len() {
                return Err(fmt_err(idx, format!("expected node {}, got {j}", rows.len())));
            }
            let row = values[2..]
                .iter()
                .map(|v| v.parse::<f64>().map_err(|_| fmt_err(idx, format!("bad number `{v}`"))))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Self::from_rows(spec, grid, ExpansionVariable::Shift, &rows)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(rows: Vec<Vec<f64>>) -> CoefficientTable {
        CoefficientTable::from_rows(
            SymbolSpec::Kms { rho: 0.5 },
            ExtrapolationGrid::new(6, 3).unwrap(),
            ExpansionVariable::Shift,
            &rows,
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        let grid = ExtrapolationGrid::new(6, 3).unwrap();
        let spec = SymbolSpec::Rctp { ell: 1 };
        let short = vec![vec![0.0; 3]; 7];
        assert!(CoefficientTable::from_rows(spec, grid, ExpansionVariable::Shift, &short).is_err());
        let mut nan = vec![vec![0.0; 3]; 8];
        nan[3][1] = f64::NAN;
        assert!(CoefficientTable::from_rows(spec, grid, ExpansionVariable::Shift, &nan).is_err());
    }

    #[test]
    fn malformed_text_is_reported_with_line() {
        let text = "6 3 kms:rho=0.5\n0 0 0 0 0\n1 0.4 0 0\n";
        match CoefficientTable::read_from(text.as_bytes()) {
            Err(Error::TableFormat { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(CoefficientTable::read_from("6 3 bogus\n".as_bytes()).is_err());
        assert!(CoefficientTable::read_from("".as_bytes()).is_err());
    }

    #[test]
    fn eigenvalue_tables_are_not_serialized() {
        let grid = ExtrapolationGrid::new(6, 3).unwrap();
        let t = CoefficientTable::from_rows(
            SymbolSpec::Rctp { ell: 1 },
            grid,
            ExpansionVariable::Eigenvalue,
            &vec![vec![0.0; 3]; 8],
        )
        .unwrap();
        assert!(t.write_to(Vec::new()).is_err());
    }

    #[test]
    fn header_layout() {
        let t = table(vec![vec![0.25, -1.0, 3.5]; 8]);
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("6 3 kms:rho=0.5"));
        assert_eq!(
            lines.next(),
            Some("0 0.0000000000000000e0 2.5000000000000000e-1 -1.0000000000000000e0 3.5000000000000000e0")
        );
        assert_eq!(text.lines().count(), 9);
    }

    proptest! {
        #[test]
        fn text_round_trip(values in prop::collection::vec(-1e3f64..1e3, 24)) {
            let rows: Vec<Vec<f64>> = values.chunks(3).map(|c| c.to_vec()).collect();
            let t = table(rows);
            let mut buf = Vec::new();
            t.write_to(&mut buf).unwrap();
            let back = CoefficientTable::read_from(buf.as_slice()).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}

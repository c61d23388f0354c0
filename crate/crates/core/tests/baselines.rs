//! Comparisons between the shifted-variable algorithm and the baselines on
//! the standard grid (n1 = 100, alpha = 5).

use std::sync::OnceLock;

use matrixless::baselines::{na_approximate_all, na_precompute, sl_approximate_all, SLCoefficients};
use matrixless::matrixless::{approximate_all, precompute, CoefficientTable, ExtrapolationGrid};
use matrixless::symbols::{Symbol, SymbolSpec};
use matrixless::toeplitz::{SpectrumVector, ToeplitzMatrix};

const SPEC: SymbolSpec = SymbolSpec::Kms { rho: 0.5 };
const N: usize = 1024;

struct Fixture {
    grid: ExtrapolationGrid,
    shift: CoefficientTable,
    lambda: CoefficientTable,
    reference: SpectrumVector,
}

fn fixture() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    CELL.get_or_init(|| {
        let grid = ExtrapolationGrid::new(100, 5).unwrap();
        Fixture {
            grid,
            shift: precompute(&SPEC, &grid).unwrap(),
            lambda: na_precompute(&SPEC, &grid).unwrap(),
            reference: ToeplitzMatrix::build(&SPEC.at_order(N), N).eigenvalues_sorted().unwrap(),
        }
    })
}

fn errors(approx: &[f64], reference: &SpectrumVector) -> Vec<f64> {
    approx.iter().zip(reference.as_slice()).map(|(a, r)| (a - r).abs()).collect()
}

fn max(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(x))
}

#[test]
fn first_eigenvalue_coefficient_matches_closed_form() {
    let fx = fixture();
    let sym = Symbol::kms(0.5);
    let sl = SLCoefficients::new(0.5).unwrap();
    for j in 1..=fx.grid.base_size() {
        let sigma = fx.grid.node(j);
        let expected = -sym.derivative(sigma) * sl.eta(sigma);
        let got = fx.lambda.value(j, 1);
        assert!((got - expected).abs() <= 1e-3, "node {j}: {got} vs {expected}");
    }
}

#[test]
fn shifted_variable_beats_eigenvalue_variable() {
    let fx = fixture();
    let sym = SPEC.at_order(N);
    let nas = approximate_all(&sym, N, &fx.shift, 4).unwrap();
    let na = na_approximate_all(&sym, N, &fx.lambda, 4).unwrap();
    let e_nas = max(&errors(&nas.eigenvalues, &fx.reference));
    let e_na = max(&errors(&na.eigenvalues, &fx.reference));
    assert!(e_nas <= e_na, "NAS {e_nas:e} > NA {e_na:e}");
}

#[test]
fn matches_exact_expansion_mid_spectrum() {
    let fx = fixture();
    let sym = SPEC.at_order(N);
    let nas = errors(&approximate_all(&sym, N, &fx.shift, 4).unwrap().eigenvalues, &fx.reference);
    let sl = errors(&sl_approximate_all(&SPEC, N, 4).unwrap().eigenvalues, &fx.reference);
    // pointwise errors cross zero, so compare the window maxima
    let window = N / 4 - 1..3 * N / 4;
    let (a, b) = (max(&nas[window.clone()]), max(&sl[window]));
    assert!(a <= 10.0 * b && b <= 10.0 * a, "NAS {a:e} vs SL {b:e}");
}

#[test]
fn level_one_agrees_across_methods() {
    let fx = fixture();
    let sym = SPEC.at_order(N);
    let nas = approximate_all(&sym, N, &fx.shift, 1).unwrap();
    let na = na_approximate_all(&sym, N, &fx.lambda, 1).unwrap();
    let sl = sl_approximate_all(&SPEC, N, 1).unwrap();
    assert_eq!(nas.eigenvalues, na.eigenvalues);
    assert_eq!(nas.eigenvalues, sl.eigenvalues);
}

//! Solver for the `alpha x alpha` extrapolation systems `V r = d` with
//! `V[m][l] = h_m^(l+1)`.

/// Solves `sum_l r_l h_m^l = d_m` for `r_1..r_alpha`.
///
/// Columns are rescaled by `h_max^l` before a dense LU factorization with
/// partial pivoting, which keeps every entry of the scaled matrix in `(0, 1]`.
/// Returns `None` when a pivot vanishes or the result is not finite.
pub fn solve_power_system(steps: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = steps.len();
    assert_eq!(rhs.len(), n, "right-hand side length must match the number of steps");
    if n == 0 {
        return Some(Vec::new());
    }
    let scale = steps.iter().fold(0.0_f64, |acc, h| acc.max(h.abs()));
    if !(scale > 0.0) {
        return None;
    }

    let mut a = vec![0.0; n * n];
    for (m, &h) in steps.iter().enumerate() {
        let t = h / scale;
        let mut p = 1.0;
        for l in 0..n {
            p *= t;
            a[m * n + l] = p;
        }
    }
    let mut x = rhs.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if a[pivot_row * n + col] == 0.0 {
            return None;
        }
        if pivot_row != col {
            for l in 0..n {
                a.swap(col * n + l, pivot_row * n + l);
            }
            x.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for l in col..n {
                a[row * n + l] -= factor * a[col * n + l];
            }
            x[row] -= factor * x[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for l in col + 1..n {
            acc -= a[col * n + l] * x[l];
        }
        x[col] = acc / a[col * n + col];
    }

    // undo the column scaling: r_l = q_l / scale^l
    let mut p = 1.0;
    for v in x.iter_mut() {
        p *= scale;
        *v /= p;
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixless::ExtrapolationGrid;
    use proptest::prelude::*;

    #[test]
    fn recovers_linear_and_quadratic_terms() {
        let steps = ExtrapolationGrid::new(100, 5).unwrap().steps();
        let rhs: Vec<f64> = steps.iter().map(|h| 2.0 * h - 3.0 * h * h).collect();
        let r = solve_power_system(&steps, &rhs).unwrap();
        assert!((r[0] - 2.0).abs() <= 1e-10);
        assert!((r[1] + 3.0).abs() <= 1e-10);
        for v in &r[2..] {
            assert!(v.abs() <= 1e-10 * 1e6, "{v}");
        }
    }

    #[test]
    fn degenerate_steps_are_rejected() {
        assert!(solve_power_system(&[0.1, 0.1], &[1.0, 2.0]).is_none());
        assert!(solve_power_system(&[0.0, 0.0], &[1.0, 2.0]).is_none());
    }

    // Power-of-two steps (n1 + 1 = 8) and dyadic coefficients make the
    // right-hand side exact, so only the solver's own rounding is measured.
    fn dyadic() -> impl Strategy<Value = f64> {
        (7i32..=640, any::<bool>()).prop_map(|(m, neg)| if neg { -m as f64 } else { m as f64 } / 64.0)
    }

    proptest! {
        #[test]
        fn polynomial_reproduction(alpha in 2usize..=6, coeffs in prop::collection::vec(dyadic(), 6)) {
            let steps = ExtrapolationGrid::new(7, alpha).unwrap().steps();
            let coeffs = &coeffs[..alpha];
            let rhs: Vec<f64> = steps
                .iter()
                .map(|h| coeffs.iter().rev().fold(0.0, |acc, c| (acc + c) * h))
                .collect();
            let r = solve_power_system(&steps, &rhs).unwrap();
            for (got, want) in r.iter().zip(coeffs) {
                prop_assert!(((got - want) / want).abs() <= 1e-9, "{got} vs {want}");
            }
        }

        // Any base size: with p(h) = sum a_l (h/h_1)^l the scaled system is
        // the same, so recovery of a_l is uniform in n1.
        #[test]
        fn scaled_polynomial_recovery(
            alpha in 2usize..=6,
            base in 4usize..=400,
            a in prop::collection::vec(-1.0f64..1.0, 6),
        ) {
            let steps = ExtrapolationGrid::new(base, alpha).unwrap().steps();
            let h1 = steps[0];
            let a = &a[..alpha];
            let rhs: Vec<f64> = steps
                .iter()
                .map(|h| a.iter().rev().fold(0.0, |acc, x| (acc + x) * (h / h1)))
                .collect();
            let r = solve_power_system(&steps, &rhs).unwrap();
            let scale = a.iter().fold(1e-3_f64, |m, x| m.max(x.abs()));
            for (l, (got, want)) in r.iter().zip(a).enumerate() {
                let scaled = got * h1.powi(l as i32 + 1);
                prop_assert!((scaled - want).abs() <= 1e-9 * scale, "{scaled} vs {want}");
            }
        }

        // On the production grid the solve is backward stable: the recovered
        // coefficients reproduce the data to rounding level.
        #[test]
        fn residual_is_small(
            alpha in 2usize..=8,
            base in 4usize..=200,
            coeffs in prop::collection::vec(-10.0f64..10.0, 8),
        ) {
            let steps = ExtrapolationGrid::new(base, alpha).unwrap().steps();
            let coeffs = &coeffs[..alpha];
            let eval = |c: &[f64], h: f64| c.iter().rev().fold(0.0, |acc, x| (acc + x) * h);
            let rhs: Vec<f64> = steps.iter().map(|&h| eval(coeffs, h)).collect();
            let r = solve_power_system(&steps, &rhs).unwrap();
            for (&h, d) in steps.iter().zip(&rhs) {
                let scale: f64 = coeffs.iter().enumerate().map(|(l, c)| (c * h.powi(l as i32 + 1)).abs()).sum();
                prop_assert!((eval(&r, h) - d).abs() <= 1e-13 * scale);
            }
        }
    }
}

//! Finite-difference radial solver, the numerical oracle for every closed form.
//!
//! The Hamiltonian `-(hbar^2/2m) d^2/dr^2 + V_eff(r)` is discretized with the
//! three-point Laplacian on a uniform grid starting at `r = h`, with
//! Dirichlet zeros at `r = 0` and one step past `r_max`.

mod eigen;
mod grid;

pub use eigen::{eigen_lowest, solve_tridiagonal, EigenOptions, EigenResult, SymTridiagonal};
pub use grid::{
    build_grid, evaluate_state, normalize, overlap, GridFunction, GridOverrides, RadialGrid,
    MIN_NODES,
};

use crate::error::{Error, Result};
use crate::laurent::LaurentForm;
use crate::model::PhysicalParams;
use crate::susy::ClosedFormState;

/// Discrete `H f` with Dirichlet ends.
pub fn hamiltonian_apply(v: &LaurentForm, f: &GridFunction, phys: &PhysicalParams) -> GridFunction {
    let ham = SymTridiagonal::radial_hamiltonian(v, &f.grid, phys);
    GridFunction {
        grid: f.grid,
        values: ham.apply(&f.values),
    }
}

/// `|H f - E f| / |f|` over interior nodes, skipping `skip` nodes at each end.
pub fn h_residual(
    f: &GridFunction,
    energy: f64,
    v: &LaurentForm,
    phys: &PhysicalParams,
    skip: usize,
) -> Result<f64> {
    let n = f.values.len();
    if n <= 2 * skip {
        return Err(Error::GridTooSmall { count: n });
    }
    let hf = hamiltonian_apply(v, f, phys);
    let (mut num, mut den) = (0.0, 0.0);
    for i in skip..n - skip {
        let r = hf.values[i] - energy * f.values[i];
        num += r * r;
        den += f.values[i] * f.values[i];
    }
    if !(den > 0.0) {
        return Err(Error::ZeroNorm { norm: den.sqrt() });
    }
    Ok((num / den).sqrt())
}

/// [`h_residual`] of a closed form sampled on `grid`.
pub fn state_residual(
    state: &ClosedFormState,
    energy: f64,
    v: &LaurentForm,
    grid: &RadialGrid,
    phys: &PhysicalParams,
    skip: usize,
) -> Result<f64> {
    let f = evaluate_state(state, grid)?;
    h_residual(&f, energy, v, phys, skip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ground_state;
    use crate::model::{dimension_reduce, effective_potential, PotentialParams};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn p1() -> (PotentialParams, crate::model::DimensionSpec) {
        (
            PotentialParams::new(1.0, 1.0, 0.5).unwrap(),
            dimension_reduce(3, 0).unwrap(),
        )
    }

    #[test]
    fn default_grid_and_overrides() {
        let (p, d) = p1();
        let g = build_grid(&p, &d, &unit(), GridOverrides::default(), 20_000).unwrap();
        assert!(g.r_max() >= 10.0);
        assert_eq!(g.count(), 20_000);
        assert!((g.h() - g.r_max() / 20_000.0).abs() < 1e-15);

        let g = build_grid(
            &p,
            &d,
            &unit(),
            GridOverrides {
                r_max: Some(40.0),
                h: Some(0.002),
            },
            20_000,
        )
        .unwrap();
        assert_eq!((g.r_max(), g.h(), g.count()), (40.0, 0.002, 20_000));

        let osc = PotentialParams::new(0.0, 0.0, 0.5).unwrap();
        let g = build_grid(&osc, &d, &unit(), GridOverrides::default(), 20_000).unwrap();
        assert!(g.r_max() >= 10.0);

        let zero = PotentialParams::new(0.0, 0.0, 0.0).unwrap();
        assert!(build_grid(&zero, &d, &unit(), GridOverrides::default(), 20_000).is_err());
        assert!(matches!(
            RadialGrid::new(1.0, 0.1),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn evaluate_closed_form() {
        let (p, d) = p1();
        let g = ground_state(&p, &d, &unit(), 1e-10).unwrap();
        assert!((g.psi.eval(1.0) - 0.22313016014842982).abs() < 1e-15);
        let grid = RadialGrid::new(1.0, 0.001).unwrap();
        let f = evaluate_state(&g.psi, &grid).unwrap();
        // linear vanishing at the origin
        assert!((f.values[0] / grid.node(0) - 1.0).abs() < 1e-2);
        let bad = ClosedFormState::pure(-0.5, 1.0, 0.0);
        assert!(evaluate_state(&bad, &grid).is_err());
    }

    #[test]
    fn normalization() {
        let (p, d) = p1();
        let g = ground_state(&p, &d, &unit(), 1e-10).unwrap();
        let grid = build_grid(&p, &d, &unit(), GridOverrides::default(), 20_000).unwrap();
        let f = evaluate_state(&g.psi, &grid).unwrap();
        let (u, n0) = normalize(&f).unwrap();
        assert!((u.norm_sq() - 1.0).abs() < 1e-8);
        let (u2, n0_double) = normalize(&f.scale(2.0)).unwrap();
        assert!((n0_double - n0 / 2.0).abs() < 1e-15 * n0);
        for (a, b) in u.values.iter().zip(&u2.values) {
            assert!((a - b).abs() < 1e-15);
        }
        let (again, n1) = normalize(&u).unwrap();
        assert!((n1 - 1.0).abs() < 1e-14);
        for (a, b) in u.values.iter().zip(&again.values) {
            assert!((a - b).abs() < 1e-14);
        }

        let box_grid = RadialGrid::new(1.0, 1e-4).unwrap();
        let ones = GridFunction::from_fn(box_grid, |_| 1.0);
        let (_, n0) = normalize(&ones).unwrap();
        assert!((n0 - 1.0).abs() < 1e-3);

        let zeros = GridFunction::from_fn(box_grid, |_| 0.0);
        assert!(normalize(&zeros).is_err());
    }

    #[test]
    fn sine_mode_is_discrete_eigenvector() {
        let grid = RadialGrid::new(10.0, 0.01).unwrap();
        let len = (grid.count() + 1) as f64 * grid.h();
        let f = GridFunction::from_fn(grid, |r| (PI * r / len).sin());
        let hf = hamiltonian_apply(&LaurentForm::zero(), &f, &unit());
        let k = PI / len;
        let exact_discrete = 0.5 * (2.0 - 2.0 * (k * grid.h()).cos()) / (grid.h() * grid.h());
        let continuum = 0.5 * k * k;
        for (a, b) in hf.values.iter().zip(&f.values) {
            assert!((a - exact_discrete * b).abs() < 1e-10);
        }
        assert!((exact_discrete - continuum).abs() < continuum * (k * grid.h()).powi(2));
    }

    #[test]
    fn sine_modes_are_orthogonal() {
        let grid = RadialGrid::new(10.0, 0.01).unwrap();
        let len = (grid.count() + 1) as f64 * grid.h();
        let f1 = GridFunction::from_fn(grid, |r| (PI * r / len).sin());
        let f2 = GridFunction::from_fn(grid, |r| (2.0 * PI * r / len).sin());
        assert!(overlap(&f1, &f2).unwrap().abs() <= 1e-10);
        assert!((overlap(&f1, &f1).unwrap() - 1.0).abs() < 1e-14);
        let other = GridFunction::from_fn(RadialGrid::new(10.0, 0.02).unwrap(), |r| r);
        assert_eq!(overlap(&f1, &other), Err(Error::GridMismatch));
    }

    #[test]
    fn closed_form_residual_is_discretization_limited() {
        let (p, d) = p1();
        let g = ground_state(&p, &d, &unit(), 1e-10).unwrap();
        let grid = build_grid(&p, &d, &unit(), GridOverrides::default(), 20_000).unwrap();
        let v = effective_potential(&p, &d, &unit());
        let res = state_residual(&g.psi, 1.0, &v, &grid, &unit(), 3).unwrap();
        assert!(res <= 1e-6, "{res}");
        let res_half = state_residual(&g.psi, 1.0, &v, &grid.halved(), &unit(), 3).unwrap();
        assert!(res_half <= 2.6e-7, "{res_half}");
        let wrong = state_residual(&g.psi, 1.1, &v, &grid, &unit(), 3).unwrap();
        assert!((wrong - 0.1).abs() < 1e-3);
    }

    #[test]
    fn eigen_examples() {
        let d = dimension_reduce(3, 0).unwrap();
        let hydrogen =
            effective_potential(&PotentialParams::new(1.0, 0.0, 0.0).unwrap(), &d, &unit());
        let grid = RadialGrid::new(40.0, 0.002).unwrap();
        let opts = EigenOptions {
            richardson: true,
            vectors: false,
        };
        let e = eigen_lowest(&hydrogen, &grid, &unit(), 1, 1e-12, opts).unwrap();
        assert!((e.values[0] + 0.5).abs() <= 5e-5, "{:?}", e.values);

        let (p, d) = p1();
        let v = effective_potential(&p, &d, &unit());
        let grid = build_grid(&p, &d, &unit(), GridOverrides::default(), 20_000).unwrap();
        let e = eigen_lowest(&v, &grid, &unit(), 3, 1e-12, EigenOptions::default()).unwrap();
        assert!((e.values[0] - 1.0).abs() <= 1e-4, "{:?}", e.values);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));

        assert!(eigen_lowest(&v, &grid, &unit(), 0, 1e-12, EigenOptions::default()).is_err());
    }

    #[test]
    fn radial_oscillator_levels() {
        // l = 0 radial oscillator with hbar*omega = 1: 1.5, 3.5, 5.5
        let d = dimension_reduce(3, 0).unwrap();
        let osc = PotentialParams::new(0.0, 0.0, 0.5).unwrap();
        let v = effective_potential(&osc, &d, &unit());
        let grid = build_grid(&osc, &d, &unit(), GridOverrides::default(), 20_000).unwrap();
        let opts = EigenOptions {
            richardson: true,
            vectors: false,
        };
        let e = eigen_lowest(&v, &grid, &unit(), 3, 1e-12, opts).unwrap();
        for (got, want) in e.values.iter().zip([1.5, 3.5, 5.5]) {
            assert!((got - want).abs() <= 5e-5, "{got} vs {want}");
        }
    }

    #[test]
    fn hydrogen_converges_at_second_order() {
        let d = dimension_reduce(3, 0).unwrap();
        let hydrogen =
            effective_potential(&PotentialParams::new(1.0, 0.0, 0.0).unwrap(), &d, &unit());
        let grid = RadialGrid::new(40.0, 0.01).unwrap();
        let opts = EigenOptions::default();
        let coarse = eigen_lowest(&hydrogen, &grid, &unit(), 1, 1e-12, opts)
            .unwrap()
            .values[0];
        let fine = eigen_lowest(&hydrogen, &grid.halved(), &unit(), 1, 1e-12, opts)
            .unwrap()
            .values[0];
        let ratio = (coarse + 0.5) / (fine + 0.5);
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn eigenvectors_solve_the_discrete_problem() {
        let (p, d) = p1();
        let v = effective_potential(&p, &d, &unit());
        let grid = RadialGrid::new(14.0, 0.005).unwrap();
        let opts = EigenOptions {
            richardson: false,
            vectors: true,
        };
        let e = eigen_lowest(&v, &grid, &unit(), 2, 1e-12, opts).unwrap();
        let vecs = e.vectors.unwrap();
        for (val, vec) in e.values.iter().zip(&vecs) {
            assert!((vec.norm_sq() - 1.0).abs() < 1e-10);
            let res = h_residual(vec, *val, &v, &unit(), 0).unwrap();
            assert!(res < 1e-8, "{res}");
        }
        assert!(overlap(&vecs[0], &vecs[1]).unwrap().abs() < 1e-8);
        // ground state agrees with the normalized closed form
        let g = ground_state(&p, &d, &unit(), 1e-10).unwrap();
        let exact = evaluate_state(&g.psi, &grid).unwrap();
        assert!(overlap(&exact, &vecs[0]).unwrap() > 1.0 - 1e-6);
    }

    #[test]
    fn pivoted_tridiagonal_solve() {
        let sub = [1.0, 4.0, -2.0];
        let diag = [1e-20, 3.0, 1.0, 5.0];
        let sup = [2.0, -1.0, 0.5];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut y = diag[i] * x_true[i];
                if i > 0 {
                    y += sub[i - 1] * x_true[i - 1];
                }
                if i < 3 {
                    y += sup[i] * x_true[i + 1];
                }
                y
            })
            .collect();
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        for (a, b) in x.iter().zip(x_true) {
            assert!((a - b).abs() < 1e-12, "{x:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn sturm_counts_bracket_eigenvalues(shift in -5.0..60.0f64) {
            let (p, d) = p1();
            let v = effective_potential(&p, &d, &unit());
            let grid = RadialGrid::new(12.0, 0.02).unwrap();
            let ham = SymTridiagonal::radial_hamiltonian(&v, &grid, &unit());
            let k = ham.count_below(shift);
            if k > 0 {
                prop_assert!(ham.eigenvalue(k - 1, 1e-12) < shift);
            }
            prop_assert!(ham.eigenvalue(k, 1e-12) >= shift - 1e-9);
        }

        #[test]
        fn hamiltonian_is_linear(alpha in -3.0..3.0f64, beta in -3.0..3.0f64, seed in 0u64..1000) {
            let (p, d) = p1();
            let v = effective_potential(&p, &d, &unit());
            let grid = RadialGrid::new(5.0, 0.01).unwrap();
            let f = GridFunction::from_fn(grid, |r| (r * 7.3 + seed as f64).sin());
            let g = GridFunction::from_fn(grid, |r| (r * 2.1 - seed as f64).cos());
            let comb = GridFunction {
                grid,
                values: f.values.iter().zip(&g.values).map(|(a, b)| alpha * a + beta * b).collect(),
            };
            let lhs = hamiltonian_apply(&v, &comb, &unit());
            let hf = hamiltonian_apply(&v, &f, &unit());
            let hg = hamiltonian_apply(&v, &g, &unit());
            // relative to the operator scale |H| (|alpha| + |beta|)
            let ham = SymTridiagonal::radial_hamiltonian(&v, &grid, &unit());
            let (lo, hi) = ham.bounds();
            let scale = lo.abs().max(hi.abs()) * (alpha.abs() + beta.abs()).max(1.0);
            for i in 0..lhs.values.len() {
                let rhs = alpha * hf.values[i] + beta * hg.values[i];
                prop_assert!((lhs.values[i] - rhs).abs() <= 1e-13 * scale);
            }
        }
    }
}

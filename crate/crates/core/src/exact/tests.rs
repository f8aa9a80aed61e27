use super::*;
use crate::model::dimension_reduce;
use crate::susy::{perturbation_residual, riccati_residual};
use proptest::prelude::*;

fn unit() -> PhysicalParams {
    PhysicalParams::default()
}

fn dim_m(m: u32) -> DimensionSpec {
    // N = M, l = 0
    dimension_reduce(m as i64, 0).unwrap()
}

fn params(a: f64, b: f64, c: f64) -> PotentialParams {
    PotentialParams::new(a, b, c).unwrap()
}

const TOL: f64 = 1e-10;

#[test]
fn constraint_b_examples() {
    assert_eq!(constraint_b(1.0, 0.5, &dim_m(3), &unit()).unwrap(), 1.0);
    assert_eq!(constraint_b(1.0, 0.5, &dim_m(5), &unit()).unwrap(), 0.5);
    assert_eq!(constraint_b(2.0, 2.0, &dim_m(3), &unit()).unwrap(), 4.0);
    assert_eq!(
        constraint_b(0.0, 0.5, &dim_m(3), &unit()),
        Err(Error::ConstraintDomain)
    );
    assert_eq!(
        constraint_b(1.0, 0.0, &dim_m(3), &unit()),
        Err(Error::ConstraintDomain)
    );
}

#[test]
fn constraint_a_examples() {
    assert_eq!(constraint_a(1.0, 0.5, &dim_m(3), &unit(), 0).unwrap(), 1.0);
    assert_eq!(constraint_a(1.0, 0.5, &dim_m(3), &unit(), 1).unwrap(), 2.0);
    assert_eq!(constraint_a(0.5, 0.5, &dim_m(5), &unit(), 0).unwrap(), 1.0);
}

#[test]
fn constraint_c_inverts_constraint_b() {
    let phys = PhysicalParams::new(0.7, 1.3).unwrap();
    let d = dim_m(6);
    let c = constraint_c(1.4, 0.9, &d, &phys).unwrap();
    let b = constraint_b(1.4, c, &d, &phys).unwrap();
    assert!((b - 0.9).abs() < 1e-14);
}

#[test]
fn coulomb_ground_examples() {
    let (_, chi, eps) = coulomb_ground(1.0, &dim_m(3), &unit()).unwrap();
    assert_eq!((eps, chi.q, chi.lambda), (-0.5, 1.0, 1.0));
    let (_, chi, eps) = coulomb_ground(1.0, &dim_m(5), &unit()).unwrap();
    assert_eq!((eps, chi.q, chi.lambda), (-0.125, 2.0, 0.5));
    let (_, chi, eps) = coulomb_ground(2.0, &dim_m(3), &unit()).unwrap();
    assert_eq!((eps, chi.lambda), (-2.0, 2.0));
    assert!(matches!(
        coulomb_ground(0.0, &dim_m(3), &unit()),
        Err(Error::NoBoundState { .. })
    ));
}

#[test]
fn perturbation_ground_examples() {
    let (dw, phi, de) =
        perturbation_ground_coulomb(&params(1.0, 1.0, 0.5), &dim_m(3), &unit(), TOL).unwrap();
    assert_eq!(dw.linear(), 0.5f64.sqrt());
    assert_eq!((de, phi.kappa), (1.5, 0.5));

    let (_, phi, de) =
        perturbation_ground_coulomb(&params(1.0, 0.5, 0.5), &dim_m(5), &unit(), TOL).unwrap();
    assert_eq!((de, phi.kappa), (2.5, 0.5));

    match perturbation_ground_coulomb(&params(1.0, 2.0, 0.5), &dim_m(3), &unit(), TOL) {
        Err(Error::ConstraintViolation {
            violation,
            required,
            ..
        }) => {
            assert_eq!(violation, 1.0);
            assert_eq!(required, 1.0);
        }
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn ground_state_examples() {
    let g = ground_state(&params(1.0, 1.0, 0.5), &dim_m(3), &unit(), TOL).unwrap();
    assert_eq!(g.energy.total, 1.0);
    assert_eq!((g.psi.q, g.psi.lambda, g.psi.kappa), (1.0, 1.0, 0.5));

    let g = ground_state(&params(1.0, 0.5, 0.5), &dim_m(5), &unit(), TOL).unwrap();
    assert_eq!(g.energy.epsilon, -0.125);
    assert_eq!(g.energy.total, 2.375);

    let g = ground_state(&params(1.0, 0.0, 0.0), &dim_m(3), &unit(), TOL).unwrap();
    assert_eq!(g.energy.total, -0.5);
    assert_eq!(g.energy.delta_epsilon, 0.0);
    assert_eq!(g.psi, ClosedFormState::pure(1.0, 1.0, 0.0));

    assert_eq!(
        ground_state(&params(0.0, 0.0, 0.0), &dim_m(3), &unit(), TOL),
        Err(Error::TrivialPotential)
    );
}

#[test]
fn psi_is_chi_times_phi() {
    let g = ground_state(&params(1.0, 1.0, 0.5), &dim_m(3), &unit(), TOL).unwrap();
    for r in [0.2, 1.0, 3.0] {
        let want = g.chi.eval(r) * g.phi.eval(r);
        assert!((g.psi.eval(r) - want).abs() < 1e-15);
    }
    // closed-form evaluation at r = 1: e^{-1.5}
    assert!((g.psi.eval(1.0) - (-1.5f64).exp()).abs() < 1e-15);
}

#[test]
fn oscillator_view_examples() {
    let g = oscillator_view_ground(&params(1.0, 1.0, 0.5), &dim_m(3), &unit(), TOL).unwrap();
    assert!((g.energy.epsilon - 1.5).abs() < 1e-15);
    assert!((g.energy.delta_epsilon + 0.5).abs() < 1e-15);
    assert!((g.energy.total - 1.0).abs() < 1e-15);

    let g = oscillator_view_ground(&params(1.0, 0.5, 0.5), &dim_m(5), &unit(), TOL).unwrap();
    assert!((g.energy.epsilon - 2.5).abs() < 1e-15);
    assert!((g.energy.delta_epsilon + 0.125).abs() < 1e-15);

    let g = oscillator_view_ground(&params(0.0, 0.0, 0.5), &dim_m(3), &unit(), TOL).unwrap();
    assert!((g.energy.epsilon - 1.5).abs() < 1e-15);
    assert_eq!(g.energy.delta_epsilon, 0.0);

    assert!(matches!(
        oscillator_view_ground(&params(1.0, 0.0, 0.0), &dim_m(3), &unit(), TOL),
        Err(Error::OscillatorUndefined { .. })
    ));
}

#[test]
fn zero_a_routes_to_oscillator() {
    let g = ground_state(&params(0.0, 0.0, 0.5), &dim_m(3), &unit(), TOL).unwrap();
    assert_eq!(g.view, ViewTag::Oscillator);
}

#[test]
fn dual_view_examples() {
    for (p, d) in [
        (params(1.0, 1.0, 0.5), dim_m(3)),
        (params(1.0, 0.5, 0.5), dim_m(5)),
    ] {
        let chk = dual_view_check(&p, &d, &unit(), TOL).unwrap();
        assert!(chk.energy_diff <= 1e-12);
        assert!(chk.psi_param_diff <= 1e-12);
    }
    assert!(dual_view_check(&params(1.0, 2.0, 0.5), &dim_m(3), &unit(), TOL).is_err());
}

#[test]
fn riccati_residuals_vanish_for_both_views() {
    let phys = PhysicalParams::new(1.7, 0.6).unwrap();
    let d = dim_m(4);
    let b = constraint_b(1.3, 0.8, &d, &phys).unwrap();
    let p = params(1.3, b, 0.8);
    for g in ViewRegistry::with_defaults()
        .solve_all(&p, &d, &phys, TOL)
        .unwrap()
    {
        let e = g.energy.total;
        let scale = 1e-12 * e.abs().max(1.0);
        let full = riccati_residual(&g.superpotential(), &g.potential(), e, &phys);
        assert!(full.max_abs_coeff() <= scale, "{:?}: {full}", g.view);
        let base = riccati_residual(&g.base, &g.solvable, g.energy.epsilon, &phys);
        assert!(base.max_abs_coeff() <= scale, "{:?}: {base}", g.view);
        let pert = perturbation_residual(
            &g.base,
            &g.correction,
            &g.perturbation,
            g.energy.delta_epsilon,
            &phys,
        );
        assert!(pert.max_abs_coeff() <= scale, "{:?}: {pert}", g.view);
        assert_eq!(
            g.potential(),
            crate::model::effective_potential(&p, &d, &phys)
        );
    }
}

#[test]
fn spectrum_examples() {
    let levels = spectrum(1.0, 0.5, &dim_m(3), &unit(), 2).unwrap();
    let e: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    let a: Vec<f64> = levels.iter().map(|l| l.a_n).collect();
    assert_eq!(e, vec![1.0, 2.0, 3.0]);
    assert_eq!(a, vec![1.0, 2.0, 3.0]);

    let e: Vec<f64> = spectrum(0.0, 0.5, &dim_m(3), &unit(), 2)
        .unwrap()
        .iter()
        .map(|l| l.energy)
        .collect();
    assert_eq!(e, vec![1.5, 2.5, 3.5]);

    let e: Vec<f64> = spectrum(1.0, 0.5, &dim_m(5), &unit(), 2)
        .unwrap()
        .iter()
        .map(|l| l.energy)
        .collect();
    assert_eq!(e, vec![2.0, 3.0, 4.0]);

    assert!(spectrum(1.0, 0.0, &dim_m(3), &unit(), 2).is_err());
}

#[test]
fn hierarchy_examples() {
    let st = hierarchy_states(1.0, 0.5, &dim_m(3), &unit(), 1).unwrap();
    assert_eq!((st.q, st.lambda, st.kappa), (1.0, 1.0, 0.5));
    let p = st.poly.coeffs();
    let lead = p[2];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    for (got, want) in monic.iter().zip([-1.5, 1.0, 1.0]) {
        assert!((got - want).abs() < 1e-14);
    }

    let st0 = hierarchy_states(1.0, 0.5, &dim_m(3), &unit(), 0).unwrap();
    assert_eq!(st0, ClosedFormState::pure(1.0, 1.0, 0.5));

    // pure oscillator: r^2 - 3/2, node at sqrt(3/2) as for the first radial excitation
    let st = hierarchy_states(0.0, 0.5, &dim_m(3), &unit(), 1).unwrap();
    let p = st.poly.coeffs();
    assert_eq!(p[1], 0.0);
    assert!((p[0] / p[2] + 1.5).abs() < 1e-14);
    assert_eq!(st.node_count(), 1);

    let st = hierarchy_states(1.0, 0.5, &dim_m(3), &unit(), 3).unwrap();
    assert_eq!(st.degree(), 6);
    assert_eq!(st.q, 1.0);
}

#[test]
fn view_registry_lookup() {
    let reg = ViewRegistry::with_defaults();
    assert_eq!(reg.names(), vec!["coulomb", "oscillator"]);
    assert_eq!(reg.get("oscillator").unwrap().tag(), ViewTag::Oscillator);
    assert!(reg.get("numerov").is_none());
    // hydrogen: only the Coulomb view applies
    let sols = reg
        .solve_all(&params(1.0, 0.0, 0.0), &dim_m(3), &unit(), TOL)
        .unwrap();
    assert_eq!(sols.len(), 1);
}

#[test]
fn equal_m_is_bitwise_identical() {
    let a = dimension_reduce(3, 1).unwrap();
    let b = dimension_reduce(5, 0).unwrap();
    let p = params(1.0, 0.5, 0.5);
    assert_eq!(
        ground_state(&p, &a, &unit(), TOL).unwrap(),
        ground_state(&p, &b, &unit(), TOL).unwrap()
    );
    assert_eq!(
        spectrum(0.5, 0.5, &a, &unit(), 4).unwrap(),
        spectrum(0.5, 0.5, &b, &unit(), 4).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn views_agree_on_constraint_surface(a in 0.1..10.0f64, c in 0.1..10.0f64, m in 2u32..=12) {
        let d = dim_m(m);
        let phys = unit();
        let b = constraint_b(a, c, &d, &phys).unwrap();
        let p = params(a, b, c);
        let e_c = coulomb_view_ground(&p, &d, &phys, TOL).unwrap();
        let e_o = oscillator_view_ground(&p, &d, &phys, TOL).unwrap();
        let rel = (e_c.energy.total - e_o.energy.total).abs() / e_c.energy.total.abs().max(1e-300);
        prop_assert!(rel <= 1e-12, "rel {rel}");
        // psi parameters
        let k = d.lambda() + 1.0;
        prop_assert!((e_c.psi.kappa - (2.0 * c).sqrt() / 2.0).abs() <= 1e-12 * e_c.psi.kappa);
        prop_assert_eq!(e_c.psi.lambda, a / k);
    }

    #[test]
    fn spectrum_spacing_is_uniform(b in 0.0..5.0f64, c in 0.1..10.0f64, m in 2u32..=12) {
        let phys = unit();
        let levels = spectrum(b, c, &dim_m(m), &phys, 5).unwrap();
        let step = 2.0 * phys.derivative_scale() * c.sqrt();
        for w in levels.windows(2) {
            prop_assert!(w[1].energy > w[0].energy);
            prop_assert!((w[1].energy - w[0].energy - step).abs() <= 1e-12 * step.max(1.0));
        }
    }

    #[test]
    fn constraint_b_is_homogeneous(a in 0.1..10.0f64, c in 0.1..10.0f64, m in 2u32..=12) {
        let d = dim_m(m);
        let base = constraint_b(a, c, &d, &unit()).unwrap();
        for s in [2.0f64, 5.0] {
            let scaled = constraint_b(s * a, s * s * c, &d, &unit()).unwrap();
            prop_assert!((scaled / base - s * s).abs() <= 1e-12 * s * s);
        }
    }
}

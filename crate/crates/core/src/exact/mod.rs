//! Closed-form solutions of `-a/r + b r + c r^2` in `N` dimensions.
//!
//! The ground state is built twice: once as a perturbed Coulomb problem
//! (hydrogenic `chi` times a Gaussian moderating factor) and once as a
//! perturbed oscillator (Gaussian `chi` times an exponential factor). Both
//! exist only on the constraint surface `b = 2a sqrt(2mc) / ((M-1) hbar)`.
//! Excited levels come from the superpotential hierarchy `alpha_k = Lambda + k`
//! with `b, c` held fixed.

mod views;

pub use views::{CoulombView, GroundView, OscillatorView, ViewRegistry};

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::laurent::LaurentForm;
use crate::model::{barrier, DimensionSpec, PhysicalParams, PotentialParams};
use crate::report::Real;
use crate::susy::{ladder_apply, ClosedFormState, Superpotential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub epsilon: f64,
    pub delta_epsilon: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(epsilon: f64, delta_epsilon: f64) -> Self {
        Self {
            epsilon,
            delta_epsilon,
            total: epsilon + delta_epsilon,
        }
    }
}

impl Serialize for EnergyBreakdown {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EnergyBreakdown", 3)?;
        st.serialize_field("epsilon", &Real(self.epsilon))?;
        st.serialize_field("delta_epsilon", &Real(self.delta_epsilon))?;
        st.serialize_field("E", &Real(self.total))?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViewTag {
    Coulomb,
    Oscillator,
}

impl ViewTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViewTag::Coulomb => "coulomb",
            ViewTag::Oscillator => "oscillator",
        }
    }
}

/// One view of the exact ground state. `solvable + perturbation` is the full
/// effective potential; `base` solves the first part with energy `epsilon`,
/// `correction` the perturbation equation with `delta_epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSolution {
    pub view: ViewTag,
    pub base: Superpotential,
    pub correction: Superpotential,
    pub chi: ClosedFormState,
    pub phi: ClosedFormState,
    pub psi: ClosedFormState,
    pub energy: EnergyBreakdown,
    pub solvable: LaurentForm,
    pub perturbation: LaurentForm,
}

impl GroundSolution {
    pub fn superpotential(&self) -> Superpotential {
        self.base + self.correction
    }

    pub fn potential(&self) -> LaurentForm {
        self.solvable + self.perturbation
    }
}

/// `2a sqrt(2mc) / ((M-1) hbar)` without domain checks.
fn required_b(a: f64, c: f64, dim: &DimensionSpec, phys: &PhysicalParams) -> f64 {
    2.0 * a * (2.0 * phys.mass * c).sqrt() / ((dim.m() as f64 - 1.0) * phys.hbar)
}

/// The linear coupling for which the closed-form ground state exists.
pub fn constraint_b(a: f64, c: f64, dim: &DimensionSpec, phys: &PhysicalParams) -> Result<f64> {
    if !(a > 0.0 && c > 0.0) {
        return Err(Error::ConstraintDomain);
    }
    Ok(required_b(a, c, dim, phys))
}

/// Coulomb strength for hierarchy level `n`: `(Lambda + n + 1) hbar b / sqrt(2mc)`.
/// For `n = 0` this inverts [`constraint_b`]. For `n >= 1` it is the
/// level-advanced rule, not an exact constraint; see [`crate::qes`].
pub fn constraint_a(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    n: u32,
) -> Result<f64> {
    if !(b > 0.0 && c > 0.0) {
        return Err(Error::ConstraintDomain);
    }
    Ok(level_a(b, c, dim, phys, n))
}

fn level_a(b: f64, c: f64, dim: &DimensionSpec, phys: &PhysicalParams, n: u32) -> f64 {
    (dim.lambda() + n as f64 + 1.0) * phys.hbar * b / (2.0 * phys.mass * c).sqrt()
}

/// Quadratic coupling solving the constraint for given `a, b`.
pub fn constraint_c(a: f64, b: f64, dim: &DimensionSpec, phys: &PhysicalParams) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::ConstraintDomain);
    }
    let root = b * (dim.m() as f64 - 1.0) * phys.hbar / (2.0 * a);
    Ok(root * root / (2.0 * phys.mass))
}

/// Absolute distance `|b - b_required|`; the constraint holds when this is
/// within `tol` relative to the larger of the two.
pub fn constraint_violation(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
) -> f64 {
    (params.b - required_b(params.a, params.c, dim, phys)).abs()
}

pub fn check_constraint(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    tol: f64,
) -> Result<()> {
    let required = required_b(params.a, params.c, dim, phys);
    let violation = (params.b - required).abs();
    let scale = params.b.abs().max(required.abs());
    if violation > tol * scale {
        return Err(Error::ConstraintViolation {
            given: params.b,
            required,
            violation,
        });
    }
    Ok(())
}

/// Hydrogenic part: `W`, `chi = r^(Lambda+1) exp(-m a r / ((Lambda+1) hbar^2))`
/// and `epsilon = -m a^2 / (2 hbar^2 (Lambda+1)^2)`.
pub fn coulomb_ground(
    a: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
) -> Result<(Superpotential, ClosedFormState, f64)> {
    if !(a > 0.0) {
        return Err(Error::NoBoundState { a });
    }
    let k = dim.lambda() + 1.0;
    let (m, hbar) = (phys.mass, phys.hbar);
    let w = Superpotential::from_coeffs(
        -k * phys.derivative_scale(),
        (m / 2.0).sqrt() * a / (k * hbar),
        0.0,
    );
    let chi = ClosedFormState::pure(k, m * a / (k * hbar * hbar), 0.0);
    let eps = -m * a * a / (2.0 * hbar * hbar * k * k);
    Ok((w, chi, eps))
}

/// Perturbation part of the Coulomb view: `dW = sqrt(c) r`,
/// `phi = exp(-b (M-1) r^2 / (4a))`, `d_eps = M (M-1) b hbar^2 / (4 m a)`.
pub fn perturbation_ground_coulomb(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    tol: f64,
) -> Result<(Superpotential, ClosedFormState, f64)> {
    if !(params.a > 0.0) {
        return Err(Error::NoBoundState { a: params.a });
    }
    check_constraint(params, dim, phys, tol)?;
    let m_dim = dim.m() as f64;
    let dw = Superpotential::from_coeffs(0.0, 0.0, params.c.sqrt());
    let kappa = params.b * (m_dim - 1.0) / (4.0 * params.a);
    let phi = ClosedFormState::pure(0.0, 0.0, kappa);
    let d_eps =
        m_dim * (m_dim - 1.0) * params.b * phys.hbar * phys.hbar / (4.0 * phys.mass * params.a);
    Ok((dw, phi, d_eps))
}

/// Coulomb-view ground solution (`a > 0`), the pure Coulomb problem when `b = c = 0`.
pub fn coulomb_view_ground(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    tol: f64,
) -> Result<GroundSolution> {
    let (w, chi, eps) = coulomb_ground(params.a, dim, phys)?;
    let (dw, phi, d_eps) = if params.b == 0.0 && params.c == 0.0 {
        (
            Superpotential::zero(),
            ClosedFormState::pure(0.0, 0.0, 0.0),
            0.0,
        )
    } else {
        perturbation_ground_coulomb(params, dim, phys, tol)?
    };
    let psi = chi.product(&phi);
    Ok(GroundSolution {
        view: ViewTag::Coulomb,
        base: w,
        correction: dw,
        chi,
        phi,
        psi,
        energy: EnergyBreakdown::new(eps, d_eps),
        solvable: barrier(dim, phys) + LaurentForm::from_terms(&[(-1, -params.a)]).unwrap(),
        perturbation: LaurentForm::from_terms(&[(1, params.b), (2, params.c)]).unwrap(),
    })
}

/// Oscillator-view ground solution: `W = sqrt(c) r - (Lambda+1) hbar / (sqrt(2m) r)`,
/// `dW = b / (2 sqrt(c))`, `epsilon = hbar sqrt(c) (2 Lambda + 3) / sqrt(2m)`,
/// `d_eps = -b^2 / (4c)`.
pub fn oscillator_view_ground(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    tol: f64,
) -> Result<GroundSolution> {
    if !(params.c > 0.0) {
        return Err(Error::OscillatorUndefined { c: params.c });
    }
    check_constraint(params, dim, phys, tol)?;
    let s = phys.derivative_scale();
    let k = dim.lambda() + 1.0;
    let root_c = params.c.sqrt();
    let w = Superpotential::from_coeffs(-k * s, 0.0, root_c);
    let dw = Superpotential::from_coeffs(0.0, params.b / (2.0 * root_c), 0.0);
    let kappa = (2.0 * phys.mass * params.c).sqrt() / (2.0 * phys.hbar);
    let lambda = params.b / (2.0 * s * root_c);
    let chi = ClosedFormState::pure(k, 0.0, kappa);
    let phi = ClosedFormState::pure(0.0, lambda, 0.0);
    let psi = chi.product(&phi);
    let eps = s * root_c * (2.0 * dim.lambda() + 3.0);
    let d_eps = -params.b * params.b / (4.0 * params.c);
    Ok(GroundSolution {
        view: ViewTag::Oscillator,
        base: w,
        correction: dw,
        chi,
        phi,
        psi,
        energy: EnergyBreakdown::new(eps, d_eps),
        solvable: barrier(dim, phys) + LaurentForm::from_terms(&[(2, params.c)]).unwrap(),
        perturbation: LaurentForm::from_terms(&[(-1, -params.a), (1, params.b)]).unwrap(),
    })
}

/// The ground state in its natural view: Coulomb when `a > 0`, oscillator when
/// `a = 0` (then the constraint forces `b = 0`).
pub fn ground_state(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    tol: f64,
) -> Result<GroundSolution> {
    if params.is_trivial() {
        return Err(Error::TrivialPotential);
    }
    if params.a > 0.0 {
        coulomb_view_ground(params, dim, phys, tol)
    } else if params.a == 0.0 {
        oscillator_view_ground(params, dim, phys, tol)
    } else {
        Err(Error::NoBoundState { a: params.a })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualViewCheck {
    pub energy_diff: f64,
    /// Largest relative difference among `(q, lambda, kappa)` of the two `psi`.
    pub psi_param_diff: f64,
}

pub fn dual_view_check(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    tol: f64,
) -> Result<DualViewCheck> {
    let c = coulomb_view_ground(params, dim, phys, tol)?;
    let o = oscillator_view_ground(params, dim, phys, tol)?;
    let rel = |x: f64, y: f64| {
        let scale = x.abs().max(y.abs());
        if scale == 0.0 {
            0.0
        } else {
            (x - y).abs() / scale
        }
    };
    let psi_param_diff = rel(c.psi.q, o.psi.q)
        .max(rel(c.psi.lambda, o.psi.lambda))
        .max(rel(c.psi.kappa, o.psi.kappa));
    Ok(DualViewCheck {
        energy_diff: (c.energy.total - o.energy.total).abs(),
        psi_param_diff,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLevel {
    pub n: u32,
    pub a_n: f64,
    pub energy: f64,
    pub state: Option<ClosedFormState>,
}

/// Level energy `-b^2/(4c) + hbar sqrt(c) (2(n + Lambda) + 3) / sqrt(2m)`.
pub fn level_energy(b: f64, c: f64, dim: &DimensionSpec, phys: &PhysicalParams, n: u32) -> f64 {
    -b * b / (4.0 * c)
        + phys.derivative_scale() * c.sqrt() * (2.0 * (n as f64 + dim.lambda()) + 3.0)
}

pub fn spectrum(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    n_max: u32,
) -> Result<Vec<SpectrumLevel>> {
    if !(c > 0.0) {
        return Err(Error::OscillatorUndefined { c });
    }
    if b < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "b must be nonnegative, got {b}"
        )));
    }
    (0..=n_max)
        .map(|n| {
            Ok(SpectrumLevel {
                n,
                a_n: level_a(b, c, dim, phys, n),
                energy: level_energy(b, c, dim, phys, n),
                state: Some(hierarchy_states(b, c, dim, phys, n)?),
            })
        })
        .collect()
}

/// `W + dW` of the oscillator view at hierarchy parameter `dim.lambda()`, with
/// `b, c` fixed: `-(Lambda+1) hbar/(sqrt(2m) r) + b/(2 sqrt(c)) + sqrt(c) r`.
/// Its implied Coulomb strength is the level-advanced `a`.
pub fn hierarchy_superpotential(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
) -> Superpotential {
    let root_c = c.sqrt();
    Superpotential::from_coeffs(
        -(dim.lambda() + 1.0) * phys.derivative_scale(),
        b / (2.0 * root_c),
        root_c,
    )
}

/// `W + dW` of the Coulomb view for an explicit `a`, used for fixed-`a`
/// shape-invariance comparisons.
pub fn coulomb_superpotential(
    a: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
) -> Result<Superpotential> {
    let (w, _, _) = coulomb_ground(a, dim, phys)?;
    Ok(w + Superpotential::from_coeffs(0.0, 0.0, c.sqrt()))
}

/// Candidate level-`n` state: seeds the ground state at `alpha_n = Lambda + n`
/// and applies `A^+(alpha_k)` for `k = n-1, ..., 0`. Unnormalized.
pub fn hierarchy_states(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    n: u32,
) -> Result<ClosedFormState> {
    if !(c > 0.0) {
        return Err(Error::OscillatorUndefined { c });
    }
    let s = phys.derivative_scale();
    let kappa = (2.0 * phys.mass * c).sqrt() / (2.0 * phys.hbar);
    let lambda = b / (2.0 * s * c.sqrt());
    let mut state = ClosedFormState::pure(dim.lambda() + n as f64 + 1.0, lambda, kappa);
    for k in (0..n).rev() {
        let sp = hierarchy_superpotential(b, c, &dim.advanced(k), phys);
        state = ladder_apply(&sp, &state, phys)?;
    }
    Ok(state)
}

/// Default-tolerance convenience used by the CLI and tests.
pub fn default_tol() -> f64 {
    Tolerances::default().constraint
}

#[cfg(test)]
mod tests;

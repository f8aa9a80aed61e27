//! Superpotential algebra: Riccati images and residuals, partner potentials,
//! shape-invariance comparison and the first-order ladder operator.
//!
//! Everything here is exact coefficient arithmetic on [`LaurentForm`]s and
//! closed-form states `P(r) r^q exp(-lambda r - kappa r^2)`.

use std::ops::Add;

use crate::error::{Error, Result};
use crate::laurent::LaurentForm;
use crate::model::PhysicalParams;
use crate::poly::Poly;

/// A Laurent form restricted to powers `{-1, 0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Superpotential {
    form: LaurentForm,
}

impl Superpotential {
    pub fn new(form: LaurentForm) -> Result<Self> {
        if let Some((power, _)) = form.terms().find(|(p, _)| !(-1..=1).contains(p)) {
            return Err(Error::NotSuperpotential { power });
        }
        Ok(Self { form })
    }

    /// `inverse / r + constant + linear * r`.
    pub fn from_coeffs(inverse: f64, constant: f64, linear: f64) -> Self {
        Self {
            form: LaurentForm::from_terms(&[(-1, inverse), (0, constant), (1, linear)]).unwrap(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn form(&self) -> &LaurentForm {
        &self.form
    }

    pub fn inverse(&self) -> f64 {
        self.form.coeff(-1)
    }

    pub fn constant(&self) -> f64 {
        self.form.coeff(0)
    }

    pub fn linear(&self) -> f64 {
        self.form.coeff(1)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.form.eval(r)
    }
}

impl Add for Superpotential {
    type Output = Superpotential;
    fn add(self, rhs: Self) -> Self {
        Self {
            form: self.form + rhs.form,
        }
    }
}

/// Radial function `P(r) r^q exp(-lambda r - kappa r^2)` with an optional
/// normalization constant `N0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormState {
    pub poly: Poly,
    pub q: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub norm: Option<f64>,
}

impl ClosedFormState {
    /// Nodeless state `r^q exp(-lambda r - kappa r^2)`.
    pub fn pure(q: f64, lambda: f64, kappa: f64) -> Self {
        Self {
            poly: Poly::constant(1.0),
            q,
            lambda,
            kappa,
            norm: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn is_normalizable(&self) -> bool {
        self.q > -0.5 && (self.kappa > 0.0 || self.lambda > 0.0)
    }

    pub fn check_normalizable(&self) -> Result<()> {
        if self.is_normalizable() {
            Ok(())
        } else {
            Err(Error::NotNormalizable {
                q: self.q,
                lambda: self.lambda,
                kappa: self.kappa,
            })
        }
    }

    /// Sign changes of the radial function on `r > 0`.
    pub fn node_count(&self) -> usize {
        self.poly.positive_sign_changes()
    }

    /// Pointwise value, with the non-polynomial factor formed in log space.
    /// The normalization constant is not applied.
    pub fn eval(&self, r: f64) -> f64 {
        let log_envelope = self.q * r.ln() - self.lambda * r - self.kappa * r * r;
        self.poly.eval(r) * log_envelope.exp()
    }

    /// `u'(r) / u(r)`.
    pub fn log_derivative(&self, r: f64) -> f64 {
        self.poly.derivative().eval(r) / self.poly.eval(r) + self.q / r
            - self.lambda
            - 2.0 * self.kappa * r
    }

    /// Product of two closed forms: polynomials multiply, exponents add.
    pub fn product(&self, other: &ClosedFormState) -> ClosedFormState {
        ClosedFormState {
            poly: self.poly.mul(&other.poly),
            q: self.q + other.q,
            lambda: self.lambda + other.lambda,
            kappa: self.kappa + other.kappa,
            norm: None,
        }
    }

    pub fn with_norm(mut self, n0: f64) -> Self {
        self.norm = Some(n0);
        self
    }
}

/// Sign selecting `V^-` (`-`) or `V^+` (`+`) in `S^2 -/+ (hbar/sqrt(2m)) S'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Minus,
    Plus,
}

/// `W = -(hbar/sqrt(2m)) u'/u` for a nodeless closed form.
pub fn superpotential_from_state(
    state: &ClosedFormState,
    phys: &PhysicalParams,
) -> Result<Superpotential> {
    let degree = state.degree();
    if degree >= 1 {
        return Err(Error::NotLaurent { degree });
    }
    let s = phys.derivative_scale();
    // u'/u = q/r - lambda - 2 kappa r
    Ok(Superpotential::from_coeffs(
        -s * state.q,
        s * state.lambda,
        2.0 * s * state.kappa,
    ))
}

/// `S^2 -/+ (hbar/sqrt(2m)) S'`, constant term included.
pub fn riccati_image(sp: &Superpotential, sign: Partner, phys: &PhysicalParams) -> LaurentForm {
    let s = phys.derivative_scale();
    let square = sp
        .form
        .square()
        .expect("superpotential square stays in range");
    let deriv = sp
        .form
        .derivative()
        .expect("superpotential derivative stays in range");
    match sign {
        Partner::Minus => square - deriv.scale(s),
        Partner::Plus => square + deriv.scale(s),
    }
}

/// `S^2 - (hbar/sqrt(2m)) S' - (V - E)`; the zero form iff `exp(-int S)` is an
/// exact eigenfunction of `V` with energy `E`.
pub fn riccati_residual(
    sp: &Superpotential,
    potential: &LaurentForm,
    energy: f64,
    phys: &PhysicalParams,
) -> LaurentForm {
    riccati_image(sp, Partner::Minus, phys) - (*potential - LaurentForm::constant(energy))
}

/// `dW^2 - (hbar/sqrt(2m)) dW' + 2 W dW - (dV - d_eps)`.
pub fn perturbation_residual(
    base: &Superpotential,
    correction: &Superpotential,
    perturbation: &LaurentForm,
    energy_shift: f64,
    phys: &PhysicalParams,
) -> LaurentForm {
    let s = phys.derivative_scale();
    let dw = correction.form;
    let lhs = dw.square().unwrap() - dw.derivative().unwrap().scale(s)
        + base.form.mul(&dw).unwrap().scale(2.0);
    lhs - (*perturbation - LaurentForm::constant(energy_shift))
}

/// `(V^- + E, V^+ + E)`: the two Riccati images of `S`.
pub fn partner_potentials(
    sp: &Superpotential,
    phys: &PhysicalParams,
) -> (LaurentForm, LaurentForm) {
    (
        riccati_image(sp, Partner::Minus, phys),
        riccati_image(sp, Partner::Plus, phys),
    )
}

/// Result of comparing `V^+(alpha_0)` with `V^-(alpha_1)`:
/// `V^+(alpha_0) = V^-(alpha_1) + remainder + mismatch` identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeInvarianceComparison {
    pub remainder: f64,
    pub mismatch: LaurentForm,
}

impl ShapeInvarianceComparison {
    pub fn is_shape_invariant(&self, tol: f64) -> bool {
        self.mismatch.max_abs_coeff() <= tol
    }
}

/// Compares partner potentials built from the images `S^2 +/- (hbar/sqrt(2m)) S'`
/// (zero ground energy convention). The 1/r and r^1 disagreements are
/// reported in `mismatch` rather than absorbed.
pub fn shape_invariance_compare(
    at_alpha0: &Superpotential,
    at_alpha1: &Superpotential,
    phys: &PhysicalParams,
) -> Result<ShapeInvarianceComparison> {
    if at_alpha0.linear() != at_alpha1.linear() {
        return Err(Error::ShapeMismatch {
            left: at_alpha0.linear(),
            right: at_alpha1.linear(),
        });
    }
    let upper = riccati_image(at_alpha0, Partner::Plus, phys);
    let lower = riccati_image(at_alpha1, Partner::Minus, phys);
    let diff = upper - lower;
    Ok(ShapeInvarianceComparison {
        remainder: diff.coeff(0),
        mismatch: diff.without_constant(),
    })
}

/// Applies `+/- (hbar/sqrt(2m)) d/dr + S` to a closed form. With
/// `u = P r^q e^(-lambda r - kappa r^2)` the result is
/// `r^(q-1) e^(...) Q(r)` where
/// `Q = -/+ s (r P' + q P - lambda r P - 2 kappa r^2 P) + S_-1 P + S_0 r P + S_1 r^2 P`.
fn first_order_apply(
    sp: &Superpotential,
    state: &ClosedFormState,
    derivative_sign: f64,
    phys: &PhysicalParams,
) -> ClosedFormState {
    let s = phys.derivative_scale();
    let p = &state.poly;
    let log_deriv_numerator = p
        .derivative()
        .shift(1)
        .add(&p.scale(state.q))
        .add(&p.shift(1).scale(-state.lambda))
        .add(&p.shift(2).scale(-2.0 * state.kappa));
    let multiplier = p
        .scale(sp.inverse())
        .add(&p.shift(1).scale(sp.constant()))
        .add(&p.shift(2).scale(sp.linear()));
    let q_poly = log_deriv_numerator
        .scale(derivative_sign * s)
        .add(&multiplier);
    ClosedFormState {
        poly: q_poly.trimmed(),
        q: state.q - 1.0,
        lambda: state.lambda,
        kappa: state.kappa,
        norm: None,
    }
}

/// `A^+ u = -(hbar/sqrt(2m)) u' + S u`, the raising half of the factorization.
/// The result is unnormalized.
pub fn ladder_apply(
    sp: &Superpotential,
    state: &ClosedFormState,
    phys: &PhysicalParams,
) -> Result<ClosedFormState> {
    if state.q <= 0.0 {
        return Err(Error::Singular { q: state.q });
    }
    Ok(first_order_apply(sp, state, -1.0, phys))
}

/// `A u = +(hbar/sqrt(2m)) u' + S u`; annihilates the ground state of `S`.
pub fn lowering_apply(
    sp: &Superpotential,
    state: &ClosedFormState,
    phys: &PhysicalParams,
) -> Result<ClosedFormState> {
    if state.q <= 0.0 {
        return Err(Error::Singular { q: state.q });
    }
    Ok(first_order_apply(sp, state, 1.0, phys))
}

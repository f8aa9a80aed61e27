//! Physical constants, dimensional reduction and the effective radial potential.

use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::laurent::LaurentForm;

/// Mass and reduced Planck constant. Units are carried explicitly; nothing is
/// rescaled internally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub mass: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && hbar > 0.0 && mass.is_finite() && hbar.is_finite()) {
            return Err(Error::InvalidPhysical { mass, hbar });
        }
        Ok(Self { mass, hbar })
    }

    /// `hbar / sqrt(2m)`, the prefactor of every derivative in the Riccati equations.
    pub fn derivative_scale(&self) -> f64 {
        self.hbar / (2.0 * self.mass).sqrt()
    }

    /// `hbar^2 / 2m`.
    pub fn kinetic(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

/// `(N, l)` together with the reduced quantities `M = N + 2l` and
/// `Lambda = (M - 3) / 2`. Only `Lambda` enters the physics, so two specs with
/// the same `M` behave identically downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionSpec {
    n: u32,
    l: u32,
    m: u32,
}

impl DimensionSpec {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> f64 {
        (self.m as f64 - 3.0) / 2.0
    }

    /// Same `(N, l)` bookkeeping with `Lambda` raised by `k` (i.e. `M + 2k`).
    /// Used for the superpotential hierarchy `alpha_k = Lambda + k`.
    pub fn advanced(&self, k: u32) -> Self {
        Self {
            n: self.n,
            l: self.l + k,
            m: self.m + 2 * k,
        }
    }
}

impl Serialize for DimensionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DimensionSpec", 4)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("l", &self.l)?;
        st.serialize_field("M", &self.m)?;
        st.serialize_field("Lambda", &crate::report::Real(self.lambda()))?;
        st.end()
    }
}

pub fn dimension_reduce(n: i64, l: i64) -> Result<DimensionSpec> {
    let m = n.checked_add(l.saturating_mul(2));
    match m {
        Some(m) if n >= 1 && l >= 0 && m >= 2 && m <= u32::MAX as i64 => Ok(DimensionSpec {
            n: n as u32,
            l: l as u32,
            m: m as u32,
        }),
        _ => Err(Error::InvalidDimension { n, l }),
    }
}

/// Coefficients of `V(r) = -a/r + b r + c r^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PotentialParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParameter("a, b, c must be finite".into()));
        }
        if b < 0.0 || c < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "b and c must be nonnegative (b = {b}, c = {c})"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0
    }

    /// `-a/r + b r + c r^2` without the centrifugal barrier.
    pub fn as_form(&self) -> LaurentForm {
        LaurentForm::from_terms(&[(-1, -self.a), (1, self.b), (2, self.c)]).unwrap()
    }
}

/// `Lambda(Lambda + 1) hbar^2 / (2m r^2)`.
pub fn barrier(dim: &DimensionSpec, phys: &PhysicalParams) -> LaurentForm {
    let lam = dim.lambda();
    LaurentForm::from_terms(&[(-2, lam * (lam + 1.0) * phys.kinetic())]).unwrap()
}

/// Full radial potential including the centrifugal barrier.
pub fn effective_potential(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
) -> LaurentForm {
    barrier(dim, phys) + params.as_form()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    CoulombDominant,
    OscillatorDominant,
}

/// Advisory tag only: both views are computed whenever the constraint holds.
pub fn classify_regime(params: &PotentialParams, requested: Option<Regime>) -> Regime {
    if let Some(r) = requested {
        return r;
    }
    if params.a > 0.0 && params.a >= params.b && params.a >= params.c {
        Regime::CoulombDominant
    } else {
        Regime::OscillatorDominant
    }
}

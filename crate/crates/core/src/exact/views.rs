use crate::error::Result;
use crate::model::{DimensionSpec, PhysicalParams, PotentialParams};

use super::{coulomb_view_ground, oscillator_view_ground, GroundSolution, ViewTag};

/// A way of splitting the potential into an exactly solvable part and a
/// perturbation, producing the exact ground state on the constraint surface.
pub trait GroundView: Send + Sync {
    fn name(&self) -> &'static str;

    fn tag(&self) -> ViewTag;

    /// Whether the view is defined for these couplings at all.
    fn applies(&self, params: &PotentialParams) -> bool;

    fn solve(
        &self,
        params: &PotentialParams,
        dim: &DimensionSpec,
        phys: &PhysicalParams,
        tol: f64,
    ) -> Result<GroundSolution>;
}

/// Hydrogenic `chi` with a Gaussian moderating function.
pub struct CoulombView;

impl GroundView for CoulombView {
    fn name(&self) -> &'static str {
        "coulomb"
    }

    fn tag(&self) -> ViewTag {
        ViewTag::Coulomb
    }

    fn applies(&self, params: &PotentialParams) -> bool {
        params.a > 0.0
    }

    fn solve(
        &self,
        params: &PotentialParams,
        dim: &DimensionSpec,
        phys: &PhysicalParams,
        tol: f64,
    ) -> Result<GroundSolution> {
        coulomb_view_ground(params, dim, phys, tol)
    }
}

/// Oscillator `chi` with an exponential moderating function.
pub struct OscillatorView;

impl GroundView for OscillatorView {
    fn name(&self) -> &'static str {
        "oscillator"
    }

    fn tag(&self) -> ViewTag {
        ViewTag::Oscillator
    }

    fn applies(&self, params: &PotentialParams) -> bool {
        params.c > 0.0
    }

    fn solve(
        &self,
        params: &PotentialParams,
        dim: &DimensionSpec,
        phys: &PhysicalParams,
        tol: f64,
    ) -> Result<GroundSolution> {
        oscillator_view_ground(params, dim, phys, tol)
    }
}

/// Named views in registration order.
pub struct ViewRegistry {
    views: Vec<Box<dyn GroundView>>,
}

impl ViewRegistry {
    pub fn empty() -> Self {
        Self { views: Vec::new() }
    }

    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(CoulombView));
        reg.register(Box::new(OscillatorView));
        reg
    }

    /// Registers a view, replacing any existing view with the same name.
    pub fn register(&mut self, view: Box<dyn GroundView>) {
        if let Some(slot) = self.views.iter_mut().find(|v| v.name() == view.name()) {
            *slot = view;
        } else {
            self.views.push(view);
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn GroundView> {
        self.views
            .iter()
            .find(|v| v.name() == name)
            .map(|v| v.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.views.iter().map(|v| v.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn GroundView> {
        self.views.iter().map(|v| v.as_ref())
    }

    /// Solves every applicable view; the first error aborts.
    pub fn solve_all(
        &self,
        params: &PotentialParams,
        dim: &DimensionSpec,
        phys: &PhysicalParams,
        tol: f64,
    ) -> Result<Vec<GroundSolution>> {
        self.iter()
            .filter(|v| v.applies(params))
            .map(|v| v.solve(params, dim, phys, tol))
            .collect()
    }
}

impl Default for ViewRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

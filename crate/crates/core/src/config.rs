//! Numerical tolerances and grid defaults, kept in one record.

/// Every threshold used by the solvers and the verification harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative tolerance for accepting `b = 2a sqrt(2mc) / ((M-1) hbar)`.
    pub constraint: f64,
    /// Riccati residual coefficients must satisfy `|.| <= riccati * max(1, |E|)`.
    pub riccati: f64,
    /// Energy and wavefunction-parameter agreement between the two views.
    pub dual_view: f64,
    /// Sturm bisection stops at `eigen_bisection * max(1, |E|)`.
    pub eigen_bisection: f64,
    /// Relative H-residual of an exact closed form at default resolution.
    pub h_residual: f64,
    /// Numeric eigenvalue against closed-form energy.
    pub numeric_energy: f64,
    /// Relative accuracy of constraint-polynomial roots.
    pub oracle_root: f64,
    /// Boundary nodes ignored on each side by the H-residual.
    pub boundary_skip: usize,
    /// Default number of grid nodes (`h = r_max / grid_points`).
    pub grid_points: usize,
    /// Largest polynomial degree the oracle accepts.
    pub oracle_max_n: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            constraint: 1e-10,
            riccati: 1e-12,
            dual_view: 1e-12,
            eigen_bisection: 1e-12,
            h_residual: 1e-6,
            numeric_energy: 1e-4,
            oracle_root: 1e-13,
            boundary_skip: 3,
            grid_points: 20_000,
            oracle_max_n: 8,
        }
    }
}

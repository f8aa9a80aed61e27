//! Polynomial-ansatz oracle.
//!
//! Substituting `u = P(r) r^(Lambda+1) exp(-lambda r - kappa r^2)` with
//! `deg P = n` into the radial equation for `-A/r + b r + c r^2` fixes
//! `kappa = sqrt(2mc)/(2 hbar)`, `lambda = sqrt(m/2) b / (hbar sqrt(c))` and
//! the energy, and leaves a homogeneous tridiagonal system for the
//! coefficients of `P`:
//!
//! ```text
//! (A - d_i) p_i + u_i p_{i+1} + l_i p_{i-1} = 0,   i = 0..n
//! d_i = 2 T lambda (Lambda + 1 + i)
//! u_i = T (i + 1)(i + 2 Lambda + 2)
//! l_i = 4 T kappa (n - i + 1)
//! ```
//!
//! with `T = hbar^2 / 2m`. Its determinant is a degree `n + 1` polynomial in
//! `A` whose roots are the Coulomb strengths admitting an exact level-`n`
//! state. Because `u_i l_{i+1} > 0` the system is similar to a symmetric
//! tridiagonal matrix, so all roots are real and simple.

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::model::{DimensionSpec, PhysicalParams, PotentialParams};
use crate::poly::Poly;
use crate::report::Real;
use crate::susy::ClosedFormState;

/// Coefficients of the reduced recursion for one `(b, c, Lambda, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzSystem {
    pub n: usize,
    pub lambda_dim: f64,
    pub kinetic: f64,
    pub kappa: f64,
    pub lambda: f64,
    /// `d_i`, `i = 0..=n`; `d_0` is the ground-state Coulomb strength.
    pub diag: Vec<f64>,
    /// `u_i`, `i = 0..n` (coefficient of `p_{i+1}` in row `i`).
    pub upper: Vec<f64>,
    /// `l_i`, `i = 1..=n` stored at index `i - 1` (coefficient of `p_{i-1}` in row `i`).
    pub lower: Vec<f64>,
}

impl AnsatzSystem {
    pub fn a0(&self) -> f64 {
        self.diag[0]
    }

    /// Energy forced by the top row of the recursion:
    /// `E = 4 T kappa n + 2 T kappa (2 Lambda + 3) - T lambda^2`.
    pub fn energy(&self) -> f64 {
        let t = self.kinetic;
        4.0 * t * self.kappa * self.n as f64 + 2.0 * t * self.kappa * (2.0 * self.lambda_dim + 3.0)
            - t * self.lambda * self.lambda
    }

    /// Row residuals of the homogeneous system for a trial `(A, p)`.
    pub fn row_residuals(&self, a: f64, p: &[f64]) -> Vec<f64> {
        (0..=self.n)
            .map(|i| {
                let mut r = (a - self.diag[i]) * p[i];
                if i < self.n {
                    r += self.upper[i] * p[i + 1];
                }
                if i > 0 {
                    r += self.lower[i - 1] * p[i - 1];
                }
                r
            })
            .collect()
    }

    /// Number of roots strictly below `x`, from the signs of the LDL^T pivots
    /// of `B - x I` where `A I - B` is the system matrix.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut pivot = 1.0;
        for i in 0..=self.n {
            let coupling = if i == 0 {
                0.0
            } else {
                self.upper[i - 1] * self.lower[i - 1]
            };
            pivot = (self.diag[i] - x) - if i == 0 { 0.0 } else { coupling / pivot };
            if pivot == 0.0 {
                pivot = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Null vector for a root `A`, normalized to `p_n = 1` and obtained by
    /// back-substitution through rows `n, n-1, ..., 1`.
    pub fn null_vector(&self, a: f64) -> Vec<f64> {
        let n = self.n;
        let mut p = vec![0.0; n + 1];
        p[n] = 1.0;
        for i in (1..=n).rev() {
            let mut acc = (a - self.diag[i]) * p[i];
            if i < n {
                acc += self.upper[i] * p[i + 1];
            }
            p[i - 1] = -acc / self.lower[i - 1];
        }
        p
    }
}

fn ansatz_exponents(b: f64, c: f64, phys: &PhysicalParams) -> (f64, f64) {
    let kappa = (2.0 * phys.mass * c).sqrt() / (2.0 * phys.hbar);
    let lambda = (phys.mass / 2.0).sqrt() * b / (phys.hbar * c.sqrt());
    (kappa, lambda)
}

fn check_inputs(b: f64, c: f64, n: usize, max_n: usize) -> Result<()> {
    if !(c > 0.0) {
        return Err(Error::OscillatorUndefined { c });
    }
    if !(b >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "b must be nonnegative, got {b}"
        )));
    }
    if n > max_n {
        return Err(Error::InvalidParameter(format!(
            "oracle degree {n} exceeds the cap {max_n}"
        )));
    }
    Ok(())
}

pub fn oracle_reduce(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    n: usize,
) -> Result<AnsatzSystem> {
    check_inputs(b, c, n, usize::MAX)?;
    let t = phys.kinetic();
    let lam = dim.lambda();
    let (kappa, lambda) = ansatz_exponents(b, c, phys);
    let diag = (0..=n)
        .map(|i| 2.0 * t * lambda * (lam + 1.0 + i as f64))
        .collect();
    let upper = (0..n)
        .map(|i| t * (i as f64 + 1.0) * (i as f64 + 2.0 * lam + 2.0))
        .collect();
    let lower = (1..=n)
        .map(|i| 4.0 * t * kappa * (n - i + 1) as f64)
        .collect();
    Ok(AnsatzSystem {
        n,
        lambda_dim: lam,
        kinetic: t,
        kappa,
        lambda,
        diag,
        upper,
        lower,
    })
}

/// `det(A I - B)` expanded through the leading principal minors; monic of
/// degree `n + 1`.
pub fn qes_constraint_polynomial(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    n: usize,
) -> Result<Poly> {
    let sys = oracle_reduce(b, c, dim, phys, n)?;
    Ok(characteristic(&sys))
}

fn characteristic(sys: &AnsatzSystem) -> Poly {
    let mut prev = Poly::constant(1.0);
    let mut cur = Poly(vec![-sys.diag[0], 1.0]);
    for i in 1..=sys.n {
        let next = cur
            .mul(&Poly(vec![-sys.diag[i], 1.0]))
            .add(&prev.scale(-sys.upper[i - 1] * sys.lower[i - 1]));
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub n: usize,
    pub a_root: f64,
    pub poly: Poly,
    pub energy: f64,
    pub node_count: usize,
    pub q: f64,
    pub lambda: f64,
    pub kappa: f64,
}

impl OracleSolution {
    pub fn state(&self) -> ClosedFormState {
        ClosedFormState {
            poly: self.poly.clone(),
            q: self.q,
            lambda: self.lambda,
            kappa: self.kappa,
            norm: None,
        }
    }

    /// The potential that hosts this state exactly.
    pub fn potential_params(&self, b: f64, c: f64) -> Result<PotentialParams> {
        PotentialParams::new(self.a_root, b, c)
    }
}

impl Serialize for OracleSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("OracleSolution", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("A_root", &Real(self.a_root))?;
        let poly: Vec<Real> = self.poly.coeffs().iter().map(|c| Real(*c)).collect();
        st.serialize_field("poly", &poly)?;
        st.serialize_field("E", &Real(self.energy))?;
        st.serialize_field("node_count", &self.node_count)?;
        st.end()
    }
}

/// Every real root of the constraint polynomial (ascending), each with its
/// monic coefficient vector, energy and node count.
pub fn qes_solve(
    b: f64,
    c: f64,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    n: usize,
    tol: &Tolerances,
) -> Result<Vec<OracleSolution>> {
    check_inputs(b, c, n, tol.oracle_max_n)?;
    let sys = oracle_reduce(b, c, dim, phys, n)?;
    let roots = bracket_roots(&sys, tol.oracle_root);
    let energy = sys.energy();
    Ok(roots
        .into_iter()
        .map(|a| {
            let poly = Poly(sys.null_vector(a));
            let node_count = poly.positive_sign_changes();
            OracleSolution {
                n,
                a_root: a,
                poly,
                energy,
                node_count,
                q: dim.lambda() + 1.0,
                lambda: sys.lambda,
                kappa: sys.kappa,
            }
        })
        .collect())
}

/// Bisection on the root count. The bracket starts at
/// `[-L, L]`, `L = 4 (n + 2) a_0`, and doubles until it holds all `n + 1` roots.
fn bracket_roots(sys: &AnsatzSystem, rel_tol: f64) -> Vec<f64> {
    let total = sys.n + 1;
    let coupling_scale = sys
        .upper
        .iter()
        .zip(&sys.lower)
        .map(|(u, l)| (u * l).sqrt())
        .fold(0.0, f64::max);
    let mut half_width = 4.0 * (sys.n as f64 + 2.0) * sys.a0();
    if !(half_width > 0.0) {
        half_width = coupling_scale.max(sys.kinetic);
    }
    while !(sys.count_below(-half_width) == 0 && sys.count_below(half_width) == total) {
        half_width *= 2.0;
    }
    let abs_floor = rel_tol * half_width * f64::EPSILON.sqrt();
    (0..total)
        .map(|k| {
            // smallest x with count_below(x) > k
            let (mut lo, mut hi) = (-half_width, half_width);
            for _ in 0..400 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sys.count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= (rel_tol * 0.5 * (lo.abs() + hi.abs())).max(abs_floor) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dimension_reduce;

    fn unit() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn d3() -> DimensionSpec {
        dimension_reduce(3, 0).unwrap()
    }

    #[test]
    fn n0_reproduces_ground_constraint() {
        let sys = oracle_reduce(1.0, 0.5, &d3(), &unit(), 0).unwrap();
        assert_eq!(sys.diag, vec![1.0]);
        let poly = qes_constraint_polynomial(1.0, 0.5, &d3(), &unit(), 0).unwrap();
        assert_eq!(poly, Poly(vec![-1.0, 1.0]));
        let sols = qes_solve(1.0, 0.5, &d3(), &unit(), 0, &Tolerances::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0].a_root - 1.0).abs() < 1e-13);
        assert_eq!(sols[0].poly, Poly(vec![1.0]));
        assert_eq!(sols[0].node_count, 0);
        assert_eq!(sols[0].energy, 1.0);
    }

    #[test]
    fn n1_rows_match_hand_elimination() {
        // T = 1/2, lambda = 1, kappa = 1/2, Lambda = 0
        let sys = oracle_reduce(1.0, 0.5, &d3(), &unit(), 1).unwrap();
        assert_eq!((sys.kinetic, sys.lambda, sys.kappa), (0.5, 1.0, 0.5));
        // row 0: p1 + (A - 1) p0 = 0 ; row 1: (A - 2) p1 + p0 = 0
        assert_eq!(sys.diag, vec![1.0, 2.0]);
        assert_eq!(sys.upper, vec![1.0]);
        assert_eq!(sys.lower, vec![1.0]);
        let poly = qes_constraint_polynomial(1.0, 0.5, &d3(), &unit(), 1).unwrap();
        assert_eq!(poly, Poly(vec![1.0, -3.0, 1.0]));
        assert_eq!(poly.eval(2.0), -1.0);
    }

    #[test]
    fn n1_roots_and_nodes() {
        let sols = qes_solve(1.0, 0.5, &d3(), &unit(), 1, &Tolerances::default()).unwrap();
        assert_eq!(sols.len(), 2);
        let s5 = 5f64.sqrt();
        assert!((sols[0].a_root - (3.0 - s5) / 2.0).abs() < 1e-12);
        assert!((sols[1].a_root - (3.0 + s5) / 2.0).abs() < 1e-12);
        assert_eq!(sols[0].node_count, 0);
        assert_eq!(sols[1].node_count, 1);
        for s in &sols {
            assert!((s.energy - 2.0).abs() < 1e-15);
            let sys = oracle_reduce(1.0, 0.5, &d3(), &unit(), 1).unwrap();
            let res = sys.row_residuals(s.a_root, s.poly.coeffs());
            assert!(res.iter().all(|r| r.abs() < 1e-12), "{res:?}");
        }
    }

    #[test]
    fn n1_vieta_product() {
        let phys = PhysicalParams::new(1.3, 0.8).unwrap();
        let d = dimension_reduce(4, 1).unwrap();
        let sys = oracle_reduce(0.7, 1.9, &d, &phys, 1).unwrap();
        let sols = qes_solve(0.7, 1.9, &d, &phys, 1, &Tolerances::default()).unwrap();
        let product = sols[0].a_root * sols[1].a_root;
        let want = sys.diag[0] * sys.diag[1] - sys.upper[0] * sys.lower[0];
        assert!((product - want).abs() < 1e-12 * want.abs().max(1.0));
        // and in closed form: lambda^2 T^2 4 (L+1)(L+2) - 8 T^2 kappa (L+1)
        let (t, l, lam, kap) = (sys.kinetic, d.lambda(), sys.lambda, sys.kappa);
        let closed =
            4.0 * t * t * lam * lam * (l + 1.0) * (l + 2.0) - 8.0 * t * t * kap * (l + 1.0);
        assert!((product - closed).abs() < 1e-12 * closed.abs().max(1.0));
    }

    #[test]
    fn characteristic_roots_match_bisection() {
        let phys = unit();
        let d = dimension_reduce(3, 0).unwrap();
        for n in 0..=5 {
            let poly = qes_constraint_polynomial(1.0, 0.5, &d, &phys, n).unwrap();
            let sols = qes_solve(1.0, 0.5, &d, &phys, n, &Tolerances::default()).unwrap();
            assert_eq!(sols.len(), n + 1);
            for s in &sols {
                let dp = poly.derivative().eval(s.a_root).abs();
                assert!(poly.eval(s.a_root).abs() <= 1e-10 * dp.max(1.0), "n={n}");
            }
            for w in sols.windows(2) {
                assert!(w[0].a_root < w[1].a_root);
            }
        }
    }

    #[test]
    fn pure_oscillator_roots_are_symmetric() {
        let sols = qes_solve(0.0, 0.5, &d3(), &unit(), 2, &Tolerances::default()).unwrap();
        assert_eq!(sols.len(), 3);
        assert!(sols[1].a_root.abs() < 1e-13);
        assert!((sols[0].a_root + sols[2].a_root).abs() < 1e-12);
        // A = 0 gives the radial oscillator: P even, one node
        assert_eq!(sols[1].node_count, 1);
        let n1 = qes_solve(0.0, 0.5, &d3(), &unit(), 1, &Tolerances::default()).unwrap();
        assert!((n1[1].a_root - 1.0).abs() < 1e-13);
    }

    #[test]
    fn energy_row_matches_level_formula() {
        let phys = PhysicalParams::new(0.9, 1.1).unwrap();
        let d = dimension_reduce(6, 1).unwrap();
        for n in 0..5 {
            let sys = oracle_reduce(0.8, 1.7, &d, &phys, n).unwrap();
            let eq = crate::exact::level_energy(0.8, 1.7, &d, &phys, n as u32);
            assert!((sys.energy() - eq).abs() <= 1e-14 * eq.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(qes_solve(1.0, 0.0, &d3(), &unit(), 1, &Tolerances::default()).is_err());
        assert!(qes_solve(-1.0, 0.5, &d3(), &unit(), 1, &Tolerances::default()).is_err());
        assert!(qes_solve(1.0, 0.5, &d3(), &unit(), 9, &Tolerances::default()).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(128))]

        #[test]
        fn first_level_roots_straddle_linear_rule(
            b in 0.05..5.0f64,
            c in 0.05..5.0f64,
            n_dim in 2i64..9,
            l in 0i64..4,
        ) {
            let d = dimension_reduce(n_dim, l).unwrap();
            let sols = qes_solve(b, c, &d, &unit(), 1, &Tolerances::default()).unwrap();
            let a1 = crate::exact::constraint_a(b, c, &d, &unit(), 1).unwrap();
            proptest::prop_assert!(sols[0].a_root < a1 && a1 < sols[1].a_root);
        }
    }
}

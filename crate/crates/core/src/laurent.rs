//! Finite Laurent sums `sum_p c_p r^p` with integer powers in `[-2, 2]`.
//!
//! Potentials and superpotentials of the perturbed Coulomb problem all live
//! in this space, so Riccati combinations can be checked coefficient by
//! coefficient instead of on a grid.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

pub const MIN_POWER: i32 = -2;
pub const MAX_POWER: i32 = 2;
const SLOTS: usize = (MAX_POWER - MIN_POWER + 1) as usize;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LaurentForm {
    coeffs: [f64; SLOTS],
}

fn slot(power: i32) -> Result<usize> {
    if (MIN_POWER..=MAX_POWER).contains(&power) {
        Ok((power - MIN_POWER) as usize)
    } else {
        Err(Error::PowerOutOfRange { power })
    }
}

impl LaurentForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        let mut f = Self::zero();
        f.coeffs[slot(0).unwrap()] = value;
        f
    }

    /// Builds a form from `(power, coefficient)` pairs; repeated powers add.
    pub fn from_terms(terms: &[(i32, f64)]) -> Result<Self> {
        let mut f = Self::zero();
        for &(p, c) in terms {
            f.coeffs[slot(p)?] += c;
        }
        Ok(f)
    }

    pub fn coeff(&self, power: i32) -> f64 {
        slot(power).map(|i| self.coeffs[i]).unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, power: i32, value: f64) -> Result<()> {
        self.coeffs[slot(power)?] = value;
        Ok(())
    }

    /// Nonzero `(power, coefficient)` pairs in ascending power order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (i as i32 + MIN_POWER, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// Coefficient-wise product; fails if a nonzero term lands outside `[-2, 2]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (p, a) in self.terms() {
            for (q, b) in other.terms() {
                out.coeffs[slot(p + q)?] += a * b;
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Result<Self> {
        self.mul(self)
    }

    /// `d/dr`: maps `c r^p` to `p c r^(p-1)`.
    pub fn derivative(&self) -> Result<Self> {
        let mut out = Self::zero();
        for (p, c) in self.terms() {
            if p != 0 {
                out.coeffs[slot(p - 1)?] += p as f64 * c;
            }
        }
        Ok(out)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms().map(|(p, c)| c * r.powi(p)).sum()
    }

    /// Same form with the constant term removed.
    pub fn without_constant(&self) -> Self {
        let mut out = *self;
        out.coeffs[slot(0).unwrap()] = 0.0;
        out
    }
}

impl Add for LaurentForm {
    type Output = LaurentForm;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for LaurentForm {
    type Output = LaurentForm;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for LaurentForm {
    type Output = LaurentForm;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl fmt::Display for LaurentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match p {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c} r")?,
                _ => write!(f, "{c} r^{p}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_outside_range_fails() {
        assert_eq!(
            LaurentForm::from_terms(&[(3, 1.0)]),
            Err(Error::PowerOutOfRange { power: 3 })
        );
        assert!(LaurentForm::from_terms(&[(-3, 1.0)]).is_err());
    }

    #[test]
    fn square_of_superpotential_shape_stays_in_range() {
        let w = LaurentForm::from_terms(&[(-1, 2.0), (0, 3.0), (1, 5.0)]).unwrap();
        let sq = w.square().unwrap();
        assert_eq!(sq.coeff(-2), 4.0);
        assert_eq!(sq.coeff(-1), 12.0);
        assert_eq!(sq.coeff(0), 9.0 + 20.0);
        assert_eq!(sq.coeff(1), 30.0);
        assert_eq!(sq.coeff(2), 25.0);
    }

    #[test]
    fn product_overflowing_range_fails() {
        let f = LaurentForm::from_terms(&[(2, 1.0)]).unwrap();
        assert!(f.square().is_err());
        // a zero coefficient never overflows
        let g = LaurentForm::from_terms(&[(2, 0.0), (0, 1.0)]).unwrap();
        assert_eq!(g.square().unwrap(), LaurentForm::constant(1.0));
    }

    #[test]
    fn derivative_shifts_powers() {
        let f = LaurentForm::from_terms(&[(-1, 2.0), (0, 7.0), (2, 3.0)]).unwrap();
        let d = f.derivative().unwrap();
        assert_eq!(d.coeff(-2), -2.0);
        assert_eq!(d.coeff(0), 0.0);
        assert_eq!(d.coeff(1), 6.0);
        let barrier = LaurentForm::from_terms(&[(-2, 1.0)]).unwrap();
        assert_eq!(
            barrier.derivative(),
            Err(Error::PowerOutOfRange { power: -3 })
        );
    }

    fn coeffs(range: std::ops::RangeInclusive<i32>) -> impl Strategy<Value = LaurentForm> {
        proptest::collection::vec(-5.0..5.0f64, range.clone().count()).prop_map(move |cs| {
            let terms: Vec<(i32, f64)> = range.clone().zip(cs).collect();
            LaurentForm::from_terms(&terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn algebra_matches_pointwise_evaluation(
            f in coeffs(-2..=2),
            g in coeffs(-2..=2),
            w in coeffs(-1..=1),
            radii in proptest::collection::vec(0.05..20.0f64, 10..16),
        ) {
            let sum = f + g;
            let sq = w.square().unwrap();
            for r in radii {
                let want_sum = f.eval(r) + g.eval(r);
                let want_sq = w.eval(r).powi(2);
                let scale_sum = f.terms().chain(g.terms()).map(|(p, c)| (c * r.powi(p)).abs()).sum::<f64>().max(1e-300);
                let scale_sq = w.terms().map(|(p, c)| (c * r.powi(p)).abs()).sum::<f64>().powi(2).max(1e-300);
                prop_assert!((sum.eval(r) - want_sum).abs() <= 1e-12 * scale_sum);
                prop_assert!((sq.eval(r) - want_sq).abs() <= 1e-12 * scale_sq);
            }
        }
    }
}

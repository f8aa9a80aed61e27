use crate::error::{Error, Result};
use crate::laurent::LaurentForm;
use crate::model::{effective_potential, DimensionSpec, PhysicalParams, PotentialParams};
use crate::susy::ClosedFormState;

/// Uniform radial grid with nodes `r_i = (i + 1) h`, `i = 0..count`.
/// Dirichlet zeros sit at `r = 0` and `r = (count + 1) h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    h: f64,
    count: usize,
    r_max: f64,
}

pub const MIN_NODES: usize = 100;

impl RadialGrid {
    pub fn new(r_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && r_max > h && h.is_finite() && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_max = {r_max}, h = {h}")));
        }
        let count = (r_max / h).round() as usize;
        if count < MIN_NODES {
            return Err(Error::GridTooSmall { count });
        }
        Ok(Self { h, count, r_max })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn r_min(&self) -> f64 {
        self.h
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn node(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }

    /// Same extent with half the step.
    pub fn halved(&self) -> Self {
        Self {
            h: self.h / 2.0,
            count: 2 * self.count + 1,
            r_max: self.r_max,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridOverrides {
    pub r_max: Option<f64>,
    pub h: Option<f64>,
}

/// Characteristic lengths of the three couplings, when present.
fn length_scales(params: &PotentialParams, dim: &DimensionSpec, phys: &PhysicalParams) -> Vec<f64> {
    let mut scales = Vec::new();
    if params.a > 0.0 {
        scales.push((dim.lambda() + 1.0) * phys.hbar * phys.hbar / (phys.mass * params.a));
    }
    if params.c > 0.0 {
        scales.push((phys.hbar / (2.0 * phys.mass * params.c).sqrt()).sqrt());
    }
    if params.b > 0.0 {
        scales.push((phys.kinetic() / params.b).cbrt());
    }
    scales
}

/// Outermost classical turning point of `v` at energy `e`, searched outward from `start`.
fn turning_radius(v: &LaurentForm, e: f64, start: f64) -> f64 {
    let mut hi = start;
    let mut steps = 0;
    while v.eval(hi) < e && steps < 200 {
        hi *= 2.0;
        steps += 1;
    }
    if v.eval(hi) < e {
        return hi;
    }
    let mut lo = hi / 2.0;
    if v.eval(lo) >= e {
        return lo;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if v.eval(mid) < e {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Default extent: the turning radius at `V(4 L)` plus ten lengths `L`, but at
/// least ten times each characteristic length. `h = r_max / points`.
pub fn build_grid(
    params: &PotentialParams,
    dim: &DimensionSpec,
    phys: &PhysicalParams,
    overrides: GridOverrides,
    points: usize,
) -> Result<RadialGrid> {
    if params.is_trivial() {
        return Err(Error::TrivialPotential);
    }
    let r_max = match overrides.r_max {
        Some(r) => r,
        None => {
            let scales = length_scales(params, dim, phys);
            let longest = scales.iter().cloned().fold(0.0, f64::max);
            if !(longest > 0.0) {
                return Err(Error::InvalidGrid(
                    "no confining or attractive term sets a length scale".into(),
                ));
            }
            let v = effective_potential(params, dim, phys);
            let e_guess = v.eval(4.0 * longest);
            let turning = turning_radius(&v, e_guess, longest);
            (turning + 10.0 * longest).max(10.0 * longest)
        }
    };
    let h = overrides.h.unwrap_or(r_max / points as f64);
    RadialGrid::new(r_max, h)
}

/// Samples of a function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    /// `int f^2 dr` by the trapezoid rule including the Dirichlet end zeros.
    pub fn norm_sq(&self) -> f64 {
        self.grid.h * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

pub fn evaluate_state(state: &ClosedFormState, grid: &RadialGrid) -> Result<GridFunction> {
    state.check_normalizable()?;
    Ok(GridFunction::from_fn(*grid, |r| state.eval(r)))
}

/// Scales to unit norm and returns the factor as `N0`.
pub fn normalize(f: &GridFunction) -> Result<(GridFunction, f64)> {
    let norm = f.norm_sq().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroNorm { norm });
    }
    let n0 = 1.0 / norm;
    Ok((f.scale(n0), n0))
}

/// `int f g dr / (|f| |g|)`.
pub fn overlap(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let dot: f64 = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        * f.grid.h;
    let denom = (f.norm_sq() * g.norm_sq()).sqrt();
    if !(denom > 0.0) {
        return Err(Error::ZeroNorm { norm: denom });
    }
    Ok(dot / denom)
}

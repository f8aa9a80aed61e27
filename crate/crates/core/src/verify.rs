//! Cross-checks of the closed forms against the eigensolver and the ansatz
//! oracle, plus the report document shared by `solve` and `verify`.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exact::{
    constraint_a, coulomb_superpotential, dual_view_check, ground_state, hierarchy_states,
    hierarchy_superpotential, level_energy, spectrum, EnergyBreakdown, GroundSolution,
    ViewRegistry,
};
use crate::laurent::LaurentForm;
use crate::model::{effective_potential, DimensionSpec, PhysicalParams, PotentialParams};
use crate::numerics::{
    build_grid, eigen_lowest, evaluate_state, normalize, overlap, state_residual, EigenOptions,
    GridOverrides, RadialGrid,
};
use crate::qes::{qes_solve, OracleSolution};
use crate::report::{CheckOutcome, Real};
use crate::susy::{perturbation_residual, riccati_residual, shape_invariance_compare};

/// Everything a solve or verification run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub params: PotentialParams,
    pub dim: DimensionSpec,
    pub phys: PhysicalParams,
    pub tol: Tolerances,
    pub grid: GridOverrides,
    pub n_max: u32,
}

impl Problem {
    pub fn new(params: PotentialParams, dim: DimensionSpec, phys: PhysicalParams) -> Self {
        Self {
            params,
            dim,
            phys,
            tol: Tolerances::default(),
            grid: GridOverrides::default(),
            n_max: 2,
        }
    }
}

/// Solved problem handed to every [`Check`].
pub struct Context {
    pub problem: Problem,
    pub grid: RadialGrid,
    pub potential: LaurentForm,
    pub ground: GroundSolution,
    pub views: Vec<GroundSolution>,
}

impl Context {
    pub fn new(problem: Problem, registry: &ViewRegistry) -> Result<Self> {
        let Problem {
            params,
            dim,
            phys,
            tol,
            ..
        } = problem;
        let ground = ground_state(&params, &dim, &phys, tol.constraint)?;
        let views = registry.solve_all(&params, &dim, &phys, tol.constraint)?;
        let grid = build_grid(&params, &dim, &phys, problem.grid, tol.grid_points)?;
        Ok(Self {
            potential: effective_potential(&params, &dim, &phys),
            problem,
            grid,
            ground,
            views,
        })
    }

    fn params(&self) -> &PotentialParams {
        &self.problem.params
    }

    fn has_oscillator_family(&self) -> bool {
        self.params().c > 0.0
    }

    fn has_oracle(&self) -> bool {
        self.params().b > 0.0 && self.params().c > 0.0
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;

    fn applies(&self, ctx: &Context) -> bool;

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>>;
}

/// Checks run in registration order.
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl CheckRegistry {
    pub fn empty() -> Self {
        Self { checks: Vec::new() }
    }

    pub fn with_defaults() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(RiccatiCheck));
        reg.register(Box::new(DualViewCheck));
        reg.register(Box::new(EigenCheck));
        reg.register(Box::new(ClosedFormResidualCheck));
        reg.register(Box::new(OracleGroundCheck));
        reg.register(Box::new(OracleFirstLevelCheck));
        reg.register(Box::new(ShapeInvarianceCheck));
        reg.register(Box::new(LadderCheck));
        reg
    }

    pub fn register(&mut self, check: Box<dyn Check>) {
        if let Some(slot) = self.checks.iter_mut().find(|c| c.name() == check.name()) {
            *slot = check;
        } else {
            self.checks.push(check);
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let mut out = Vec::new();
        for check in self.checks.iter().filter(|c| c.applies(ctx)) {
            out.extend(check.run(ctx)?);
        }
        Ok(out)
    }
}

impl Default for CheckRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

pub struct RiccatiCheck;

impl Check for RiccatiCheck {
    fn name(&self) -> &'static str {
        "riccati"
    }

    fn applies(&self, _: &Context) -> bool {
        true
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let phys = &ctx.problem.phys;
        let tol = ctx.problem.tol.riccati;
        let mut out = Vec::new();
        for g in &ctx.views {
            let view = g.view.as_str();
            let e = g.energy;
            let full = riccati_residual(&g.superpotential(), &ctx.potential, e.total, phys);
            let base = riccati_residual(&g.base, &g.solvable, e.epsilon, phys);
            let pert = perturbation_residual(
                &g.base,
                &g.correction,
                &g.perturbation,
                e.delta_epsilon,
                phys,
            );
            for (part, form, energy) in [
                ("full", full, e.total),
                ("base", base, e.epsilon),
                ("perturbation", pert, e.delta_epsilon),
            ] {
                out.push(CheckOutcome::at_most(
                    format!("riccati.{view}.{part}"),
                    form.max_abs_coeff(),
                    tol * energy.abs().max(1.0),
                ));
            }
        }
        Ok(out)
    }
}

pub struct DualViewCheck;

impl Check for DualViewCheck {
    fn name(&self) -> &'static str {
        "dual_view"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.params().a > 0.0 && ctx.params().c > 0.0
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let d = dual_view_check(&p.params, &p.dim, &p.phys, p.tol.constraint)?;
        let scale = ctx.ground.energy.total.abs().max(1.0);
        Ok(vec![
            CheckOutcome::at_most("dual_view.energy", d.energy_diff, p.tol.dual_view * scale),
            CheckOutcome::at_most("dual_view.psi", d.psi_param_diff, p.tol.dual_view),
        ])
    }
}

pub struct EigenCheck;

impl Check for EigenCheck {
    fn name(&self) -> &'static str {
        "eigen"
    }

    fn applies(&self, _: &Context) -> bool {
        true
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let numeric = eigen_lowest(
            &ctx.potential,
            &ctx.grid,
            &p.phys,
            1,
            p.tol.eigen_bisection,
            EigenOptions::default(),
        )?
        .values[0];
        let exact = ctx.ground.energy.total;
        Ok(vec![
            CheckOutcome::info("eigen.ground.numeric", numeric),
            CheckOutcome::at_most(
                "eigen.ground.abs_err",
                (numeric - exact).abs(),
                p.tol.numeric_energy,
            ),
        ])
    }
}

pub struct ClosedFormResidualCheck;

impl Check for ClosedFormResidualCheck {
    fn name(&self) -> &'static str {
        "h_residual"
    }

    fn applies(&self, _: &Context) -> bool {
        true
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let res = state_residual(
            &ctx.ground.psi,
            ctx.ground.energy.total,
            &ctx.potential,
            &ctx.grid,
            &p.phys,
            p.tol.boundary_skip,
        )?;
        Ok(vec![CheckOutcome::info("h_residual.ground", res)])
    }
}

fn oracle(ctx: &Context, n: usize) -> Result<Vec<OracleSolution>> {
    let p = &ctx.problem;
    qes_solve(p.params.b, p.params.c, &p.dim, &p.phys, n, &p.tol)
}

pub struct OracleGroundCheck;

impl Check for OracleGroundCheck {
    fn name(&self) -> &'static str {
        "oracle.n0"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.has_oracle()
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let sols = oracle(ctx, 0)?;
        let root = sols[0].a_root;
        let a0 = constraint_a(p.params.b, p.params.c, &p.dim, &p.phys, 0)?;
        let e0 = level_energy(p.params.b, p.params.c, &p.dim, &p.phys, 0);
        Ok(vec![
            CheckOutcome::at_most(
                "oracle.n0.root_rel_err",
                (root - a0).abs() / a0,
                p.tol.oracle_root,
            ),
            CheckOutcome::at_most(
                "oracle.n0.energy_err",
                (sols[0].energy - e0).abs(),
                p.tol.riccati * e0.abs().max(1.0),
            ),
        ])
    }
}

/// The nodeless level-one oracle state, when one exists.
fn nodeless_first_level(sols: &[OracleSolution]) -> Option<&OracleSolution> {
    sols.iter().find(|s| s.node_count == 0 && s.a_root > 0.0)
}

pub struct OracleFirstLevelCheck;

impl Check for OracleFirstLevelCheck {
    fn name(&self) -> &'static str {
        "oracle.n1"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.has_oracle()
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let sols = oracle(ctx, 1)?;
        let roots: Vec<f64> = sols.iter().map(|s| s.a_root).collect();
        let a1 = constraint_a(p.params.b, p.params.c, &p.dim, &p.phys, 1)?;
        let lo = roots.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = roots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let straddle = if lo < a1 && a1 < hi { 1.0 } else { 0.0 };

        let mut worst: f64 = 0.0;
        for s in &sols {
            let host = s.potential_params(p.params.b, p.params.c)?;
            let v = effective_potential(&host, &p.dim, &p.phys);
            let grid = build_grid(&host, &p.dim, &p.phys, p.grid, p.tol.grid_points)?;
            let res = state_residual(
                &s.state(),
                s.energy,
                &v,
                &grid,
                &p.phys,
                p.tol.boundary_skip,
            )?;
            worst = worst.max(res);
        }
        let mut out = vec![
            CheckOutcome::info("oracle.n1.roots", roots),
            CheckOutcome::info("oracle.n1.linear_a1", a1),
            CheckOutcome::info("oracle.n1.straddles_linear_a1", straddle),
            CheckOutcome::info("oracle.n1.h_residual", worst),
        ];
        if let Some(s) = nodeless_first_level(&sols) {
            let f = evaluate_state(&ctx.ground.psi, &ctx.grid)?;
            let g = evaluate_state(&s.state(), &ctx.grid)?;
            out.push(CheckOutcome::info(
                "overlap.ground_vs_oracle_n1",
                overlap(&f, &g)?,
            ));
        }
        Ok(out)
    }
}

pub struct ShapeInvarianceCheck;

impl Check for ShapeInvarianceCheck {
    fn name(&self) -> &'static str {
        "shape"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.has_oscillator_family()
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let (b, c) = (p.params.b, p.params.c);
        let next = p.dim.advanced(1);
        let s0 = hierarchy_superpotential(b, c, &p.dim, &p.phys);
        let s1 = hierarchy_superpotential(b, c, &next, &p.phys);
        let cmp = shape_invariance_compare(&s0, &s1, &p.phys)?;
        let mut out = vec![
            CheckOutcome::info("shape.advanced_a.remainder", cmp.remainder),
            CheckOutcome::info("shape.advanced_a.mismatch", mismatch_list(&cmp.mismatch)),
        ];
        if p.params.a > 0.0 {
            let f0 = coulomb_superpotential(p.params.a, c, &p.dim, &p.phys)?;
            let f1 = coulomb_superpotential(p.params.a, c, &next, &p.phys)?;
            let cmp = shape_invariance_compare(&f0, &f1, &p.phys)?;
            out.push(CheckOutcome::info("shape.fixed_a.remainder", cmp.remainder));
            out.push(CheckOutcome::info(
                "shape.fixed_a.mismatch",
                mismatch_list(&cmp.mismatch),
            ));
        }
        Ok(out)
    }
}

/// Coefficients of powers `-2, -1, 1, 2`.
fn mismatch_list(form: &LaurentForm) -> Vec<f64> {
    [-2, -1, 1, 2].iter().map(|&k| form.coeff(k)).collect()
}

pub struct LadderCheck;

impl Check for LadderCheck {
    fn name(&self) -> &'static str {
        "ladder"
    }

    fn applies(&self, ctx: &Context) -> bool {
        ctx.has_oscillator_family()
    }

    fn run(&self, ctx: &Context) -> Result<Vec<CheckOutcome>> {
        let p = &ctx.problem;
        let (b, c) = (p.params.b, p.params.c);
        let state = hierarchy_states(b, c, &p.dim, &p.phys, 1)?;
        let a1 = if b > 0.0 {
            constraint_a(b, c, &p.dim, &p.phys, 1)?
        } else {
            0.0
        };
        let e1 = level_energy(b, c, &p.dim, &p.phys, 1);
        let skip = p.tol.boundary_skip;
        let advanced = PotentialParams::new(a1, b, c)?;
        let v1 = effective_potential(&advanced, &p.dim, &p.phys);
        let res_a1 = state_residual(&state, e1, &v1, &ctx.grid, &p.phys, skip)?;
        let res_a0 = state_residual(&state, e1, &ctx.potential, &ctx.grid, &p.phys, skip)?;

        let eig = eigen_lowest(
            &ctx.potential,
            &ctx.grid,
            &p.phys,
            2,
            p.tol.eigen_bisection,
            EigenOptions {
                richardson: false,
                vectors: true,
            },
        )?;
        let f = evaluate_state(&state, &ctx.grid)?;
        let overlaps = eig
            .vectors
            .unwrap_or_default()
            .iter()
            .map(|v| overlap(&f, v))
            .collect::<Result<Vec<f64>>>()?;
        Ok(vec![
            CheckOutcome::info("ladder.n1.a1", a1),
            CheckOutcome::info("ladder.n1.residual_a1", res_a1),
            CheckOutcome::info("ladder.n1.residual_a0", res_a0),
            CheckOutcome::info("ladder.n1.overlap_numeric", overlaps),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRow {
    pub n: u32,
    pub a_n: f64,
    pub energy: f64,
}

impl Serialize for LevelRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("a_n", &Real(self.a_n))?;
        m.serialize_entry("E_n", &Real(self.energy))?;
        m.end()
    }
}

/// Closed-form levels: the equally spaced family when `c > 0`, the
/// hydrogenic series `-m a^2 / (2 hbar^2 (n + Lambda + 1)^2)` when `b = c = 0`.
pub fn level_rows(problem: &Problem) -> Result<Vec<LevelRow>> {
    let Problem {
        params,
        dim,
        phys,
        n_max,
        ..
    } = problem;
    if params.c > 0.0 {
        return Ok(spectrum(params.b, params.c, dim, phys, *n_max)?
            .into_iter()
            .map(|l| LevelRow {
                n: l.n,
                a_n: l.a_n,
                energy: l.energy,
            })
            .collect());
    }
    if params.a > 0.0 && params.b == 0.0 {
        return Ok((0..=*n_max)
            .map(|n| {
                let k = n as f64 + dim.lambda() + 1.0;
                LevelRow {
                    n,
                    a_n: params.a,
                    energy: -phys.mass * params.a * params.a
                        / (2.0 * phys.hbar * phys.hbar * k * k),
                }
            })
            .collect());
    }
    Err(Error::OscillatorUndefined { c: params.c })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub problem: Problem,
    pub grid: RadialGrid,
    pub views: Vec<(&'static str, EnergyBreakdown)>,
    pub psi: (f64, f64, f64, f64),
    pub spectrum: Vec<LevelRow>,
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.failed())
    }

    pub fn ground_energy(&self) -> f64 {
        self.views[0].1.total
    }
}

/// The `inputs` block of a report.
pub struct InputsDoc<'a>(pub &'a Problem, pub &'a RadialGrid);

impl Serialize for InputsDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (p, g) = (self.0, self.1);
        let mut m = s.serialize_map(Some(8))?;
        m.serialize_entry("a", &Real(p.params.a))?;
        m.serialize_entry("b", &Real(p.params.b))?;
        m.serialize_entry("c", &Real(p.params.c))?;
        m.serialize_entry("N", &p.dim.n())?;
        m.serialize_entry("l", &p.dim.l())?;
        m.serialize_entry("hbar", &Real(p.phys.hbar))?;
        m.serialize_entry("mass", &Real(p.phys.mass))?;
        m.serialize_entry("grid", &GridDoc(g))?;
        m.end()
    }
}

struct GridDoc<'a>(&'a RadialGrid);

impl Serialize for GridDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("r_max", &Real(self.0.r_max()))?;
        m.serialize_entry("h", &Real(self.0.h()))?;
        m.serialize_entry("count", &self.0.count())?;
        m.end()
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("inputs", &InputsDoc(&self.problem, &self.grid))?;
        m.serialize_entry("dimension", &self.problem.dim)?;
        m.serialize_entry("views", &Views(&self.views))?;
        let (q, lambda, kappa, n0) = self.psi;
        m.serialize_entry(
            "psi",
            &Psi {
                q: Real(q),
                lambda: Real(lambda),
                kappa: Real(kappa),
                n0: Real(n0),
            },
        )?;
        m.serialize_entry("spectrum", &self.spectrum)?;
        m.serialize_entry("checks", &self.checks)?;
        m.end()
    }
}

struct Views<'a>(&'a [(&'static str, EnergyBreakdown)]);

impl Serialize for Views<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (name, e) in self.0 {
            m.serialize_entry(name, e)?;
        }
        m.end()
    }
}

#[derive(Serialize)]
struct Psi {
    q: Real,
    lambda: Real,
    kappa: Real,
    #[serde(rename = "N0")]
    n0: Real,
}

/// Solves the problem and, when `checks` is given, runs them.
pub fn build_report(
    problem: Problem,
    views: &ViewRegistry,
    checks: Option<&CheckRegistry>,
) -> Result<Report> {
    let ctx = Context::new(problem, views)?;
    let (_, n0) = normalize(&evaluate_state(&ctx.ground.psi, &ctx.grid)?)?;
    let psi = &ctx.ground.psi;
    let outcomes = match checks {
        Some(reg) => reg.run(&ctx)?,
        None => Vec::new(),
    };
    // natural view first
    let mut ordered: Vec<&GroundSolution> = ctx.views.iter().collect();
    ordered.sort_by_key(|g| g.view != ctx.ground.view);
    Ok(Report {
        views: ordered
            .iter()
            .map(|g| (g.view.as_str(), g.energy))
            .collect(),
        psi: (psi.q, psi.lambda, psi.kappa, n0),
        spectrum: level_rows(&ctx.problem)?,
        checks: outcomes,
        grid: ctx.grid,
        problem: ctx.problem,
    })
}

//! Command-line front end. [`run`] returns the exit code and both output
//! streams so the binary and the tests share one path.

mod settings;
mod sweep;

pub use settings::ConfigFile;
pub use sweep::{parse_range, render_csv, run_sweep, Range, SweepBase, SweepRow, CSV_HEADER};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::Error;
use crate::exact::{constraint_a, constraint_b, constraint_c, ViewRegistry};
use crate::model::{dimension_reduce, effective_potential, PhysicalParams, PotentialParams};
use crate::numerics::{build_grid, eigen_lowest, state_residual, EigenOptions, GridOverrides};
use crate::qes::{qes_solve, OracleSolution};
use crate::report::{checks_table, format_real, CheckKind, CheckValue, Real};
use crate::verify::{build_report, CheckRegistry, InputsDoc, Problem, Report};

use settings::pick;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_ASSERT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Lib(Error::ConstraintViolation { .. }) => EXIT_CONSTRAINT,
            _ => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error: {m}"),
            CliError::Lib(e) => format!("error: {e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
    Csv,
}

impl std::str::FromStr for OutFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Derive {
    A,
    B,
    C,
}

impl std::str::FromStr for Derive {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "coulomb-susy",
    version,
    about = "Exact and numerical levels of -a/r + b r + c r^2 in N dimensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form ground state, both views and the level ladder.
    Solve(SolveArgs),
    /// Closed forms checked against the eigensolver and the ansatz oracle.
    Verify(VerifyArgs),
    /// Coulomb strengths admitting an exact polynomial state of degree n.
    Oracle(OracleArgs),
    /// Lowest finite-difference eigenvalues.
    Eig(EigArgs),
    /// Closed form against numerics over a parameter grid (CSV).
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Spatial dimension.
    #[arg(long = "N", allow_negative_numbers = true)]
    n_dim: Option<i64>,
    /// Angular momentum.
    #[arg(long, allow_negative_numbers = true)]
    l: Option<i64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    out: Option<OutFormat>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    /// Fill one coupling from the other two.
    #[arg(long, value_enum)]
    derive: Option<Derive>,
    #[arg(long)]
    nmax: Option<u32>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    derive: Option<Derive>,
    #[arg(long)]
    nmax: Option<u32>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Polynomial degree.
    #[arg(long)]
    n: Option<usize>,
    /// Attach grid H-residuals; exit 3 if any exceeds the tolerance.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Args)]
struct EigArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Extrapolate from h and h/2.
    #[arg(long)]
    richardson: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// KEY=v1,v2,... or KEY=start:stop:count, repeatable.
    #[arg(long = "range")]
    ranges: Vec<String>,
    /// Use the given b instead of deriving it per row.
    #[arg(long)]
    fixed_b: bool,
    #[arg(long)]
    nmax: Option<u32>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Common inputs after merging the config file.
struct Resolved {
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    n_dim: i64,
    l: i64,
    phys: PhysicalParams,
    out: Option<OutFormat>,
    file: ConfigFile,
    tol: Tolerances,
}

fn resolve(common: &Common) -> Result<Resolved, CliError> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let hbar = pick(&common.hbar, &file, "hbar")?.unwrap_or(1.0);
    let mass = pick(&common.mass, &file, "mass")?.unwrap_or(1.0);
    let mut tol = Tolerances::default();
    if let Some(points) = file.get::<usize>("grid_points")? {
        tol.grid_points = points;
    }
    Ok(Resolved {
        a: pick(&common.a, &file, "a")?,
        b: pick(&common.b, &file, "b")?,
        c: pick(&common.c, &file, "c")?,
        n_dim: pick(&common.n_dim, &file, "N")?.unwrap_or(3),
        l: pick(&common.l, &file, "l")?.unwrap_or(0),
        phys: PhysicalParams::new(mass, hbar)?,
        out: pick(&common.out, &file, "out")?,
        file,
        tol,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Couplings with at most one derived from the constraint.
fn couplings(r: &Resolved, derive: Option<Derive>) -> Result<PotentialParams, CliError> {
    let dim = dimension_reduce(r.n_dim, r.l)?;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--derive needs --{name}")))
    };
    let (a, b, c) = match derive {
        None => (r.a.unwrap_or(0.0), r.b.unwrap_or(0.0), r.c.unwrap_or(0.0)),
        Some(Derive::B) => {
            let (a, c) = (need(r.a, "a")?, need(r.c, "c")?);
            (a, constraint_b(a, c, &dim, &r.phys)?, c)
        }
        Some(Derive::A) => {
            let (b, c) = (need(r.b, "b")?, need(r.c, "c")?);
            (constraint_a(b, c, &dim, &r.phys, 0)?, b, c)
        }
        Some(Derive::C) => {
            let (a, b) = (need(r.a, "a")?, need(r.b, "b")?);
            (a, b, constraint_c(a, b, &dim, &r.phys)?)
        }
    };
    Ok(PotentialParams::new(a, b, c)?)
}

fn problem_for(
    r: &Resolved,
    derive: Option<Derive>,
    nmax: Option<u32>,
) -> Result<Problem, CliError> {
    let derive = match derive {
        Some(d) => Some(d),
        None => r.file.get::<Derive>("derive")?,
    };
    let params = couplings(r, derive)?;
    let mut p = Problem::new(params, dimension_reduce(r.n_dim, r.l)?, r.phys);
    p.tol = r.tol;
    p.grid = GridOverrides {
        r_max: r.file.get("rmax")?,
        h: r.file.get("h")?,
    };
    if let Some(n) = pick(&nmax, &r.file, "nmax")? {
        p.n_max = n;
    }
    Ok(p)
}

fn solve_table(rep: &Report) -> String {
    let d = &rep.problem.dim;
    let mut out = format!(
        "dimension  N={} l={} M={} Lambda={}\n",
        d.n(),
        d.l(),
        d.m(),
        format_real(d.lambda())
    );
    for (name, e) in &rep.views {
        out.push_str(&format!(
            "view {:<10}  epsilon={}  delta_epsilon={}  E={}\n",
            name,
            format_real(e.epsilon),
            format_real(e.delta_epsilon),
            format_real(e.total)
        ));
    }
    let (q, lambda, kappa, n0) = rep.psi;
    out.push_str(&format!(
        "psi  q={}  lambda={}  kappa={}  N0={}\n",
        format_real(q),
        format_real(lambda),
        format_real(kappa),
        format_real(n0)
    ));
    out.push_str("n  a_n  E_n\n");
    for row in &rep.spectrum {
        out.push_str(&format!(
            "{}  {}  {}\n",
            row.n,
            format_real(row.a_n),
            format_real(row.energy)
        ));
    }
    out
}

fn spectrum_csv(rep: &Report) -> String {
    let mut out = String::from("n,a_n,E_n\n");
    for row in &rep.spectrum {
        out.push_str(&format!(
            "{},{},{}\n",
            row.n,
            format_real(row.a_n),
            format_real(row.energy)
        ));
    }
    out
}

fn checks_csv(rep: &Report) -> String {
    let mut out = String::from("name,kind,value,tol,pass\n");
    for c in &rep.checks {
        let value = match &c.value {
            CheckValue::Scalar(r) => format_real(r.0),
            CheckValue::List(xs) => xs
                .iter()
                .map(|r| format_real(r.0))
                .collect::<Vec<_>>()
                .join(";"),
        };
        let kind = if c.kind == CheckKind::Assert {
            "assert"
        } else {
            "info"
        };
        let tol = c.tol.map(|t| format_real(t.0)).unwrap_or_default();
        let pass = c.pass.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{kind},{value},{tol},{pass}\n", c.name));
    }
    out
}

fn cmd_solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.common)?;
    let problem = problem_for(&r, args.derive, args.nmax)?;
    let rep = build_report(problem, &ViewRegistry::default(), None)?;
    Ok(Outcome::ok(match r.out.unwrap_or(OutFormat::Json) {
        OutFormat::Json => to_json(&rep),
        OutFormat::Table => solve_table(&rep),
        OutFormat::Csv => spectrum_csv(&rep),
    }))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.common)?;
    let problem = problem_for(&r, args.derive, args.nmax)?;
    let rep = build_report(
        problem,
        &ViewRegistry::default(),
        Some(&CheckRegistry::default()),
    )?;
    let stdout = match r.out.unwrap_or(OutFormat::Json) {
        OutFormat::Json => to_json(&rep),
        OutFormat::Table => {
            let failed = rep.checks.iter().filter(|c| c.failed()).count();
            let asserts = rep
                .checks
                .iter()
                .filter(|c| c.kind == CheckKind::Assert)
                .count();
            format!(
                "{}{}asserts: {} passed, {} failed\n",
                solve_table(&rep),
                checks_table(&rep.checks),
                asserts - failed,
                failed
            )
        }
        OutFormat::Csv => checks_csv(&rep),
    };
    let code = if rep.any_failed() {
        EXIT_ASSERT
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        code,
        stdout,
        stderr: String::new(),
    })
}

struct OracleEntry<'a> {
    sol: &'a OracleSolution,
    residual: Option<f64>,
}

impl Serialize for OracleEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("n", &self.sol.n)?;
        m.serialize_entry("A_root", &Real(self.sol.a_root))?;
        let poly: Vec<Real> = self.sol.poly.coeffs().iter().map(|c| Real(*c)).collect();
        m.serialize_entry("poly", &poly)?;
        m.serialize_entry("E", &Real(self.sol.energy))?;
        m.serialize_entry("node_count", &self.sol.node_count)?;
        if let Some(res) = self.residual {
            m.serialize_entry("h_residual", &Real(res))?;
        }
        m.end()
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.common)?;
    let n =
        pick(&args.n, &r.file, "n")?.ok_or_else(|| CliError::Usage("oracle needs --n".into()))?;
    let check = args.check || r.file.flag("check")?;
    let dim = dimension_reduce(r.n_dim, r.l)?;
    let (b, c) = (r.b.unwrap_or(0.0), r.c.unwrap_or(0.0));
    let sols = qes_solve(b, c, &dim, &r.phys, n, &r.tol)?;
    let mut entries = Vec::new();
    let mut failed = false;
    for sol in &sols {
        let residual = if check {
            let host = sol.potential_params(b, c)?;
            let grid = build_grid(
                &host,
                &dim,
                &r.phys,
                GridOverrides::default(),
                r.tol.grid_points,
            )?;
            let v = effective_potential(&host, &dim, &r.phys);
            let res = state_residual(
                &sol.state(),
                sol.energy,
                &v,
                &grid,
                &r.phys,
                r.tol.boundary_skip,
            )?;
            failed |= res > r.tol.h_residual;
            Some(res)
        } else {
            None
        };
        entries.push(OracleEntry { sol, residual });
    }
    let stdout = match r.out.unwrap_or(OutFormat::Json) {
        OutFormat::Json => to_json(&entries),
        _ => {
            let mut out = String::from("n,A_root,E,node_count,h_residual\n");
            for e in &entries {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    e.sol.n,
                    format_real(e.sol.a_root),
                    format_real(e.sol.energy),
                    e.sol.node_count,
                    e.residual.map(format_real).unwrap_or_default()
                ));
            }
            out
        }
    };
    let code = if failed { EXIT_ASSERT } else { EXIT_OK };
    Ok(Outcome {
        code,
        stdout,
        stderr: String::new(),
    })
}

struct EigDoc<'a> {
    problem: &'a Problem,
    grid: &'a crate::numerics::RadialGrid,
    richardson: bool,
    values: &'a [f64],
}

impl Serialize for EigDoc<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("inputs", &InputsDoc(self.problem, self.grid))?;
        m.serialize_entry("dimension", &self.problem.dim)?;
        m.serialize_entry("richardson", &self.richardson)?;
        let values: Vec<Real> = self.values.iter().map(|v| Real(*v)).collect();
        m.serialize_entry("eigenvalues", &values)?;
        m.end()
    }
}

fn cmd_eig(args: &EigArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.common)?;
    let params = couplings(&r, None)?;
    let dim = dimension_reduce(r.n_dim, r.l)?;
    let overrides = GridOverrides {
        r_max: pick(&args.rmax, &r.file, "rmax")?,
        h: pick(&args.h, &r.file, "h")?,
    };
    let richardson = args.richardson || r.file.flag("richardson")?;
    let k = pick(&args.k, &r.file, "k")?.unwrap_or(3);
    let grid = build_grid(&params, &dim, &r.phys, overrides, r.tol.grid_points)?;
    let v = effective_potential(&params, &dim, &r.phys);
    let opts = EigenOptions {
        richardson,
        vectors: false,
    };
    let values = eigen_lowest(&v, &grid, &r.phys, k, r.tol.eigen_bisection, opts)?.values;
    let mut problem = Problem::new(params, dim, r.phys);
    problem.grid = overrides;
    let stdout = match r.out.unwrap_or(OutFormat::Json) {
        OutFormat::Json => to_json(&EigDoc {
            problem: &problem,
            grid: &grid,
            richardson,
            values: &values,
        }),
        _ => {
            let mut out = String::from("k,E\n");
            for (i, e) in values.iter().enumerate() {
                out.push_str(&format!("{i},{}\n", format_real(*e)));
            }
            out
        }
    };
    Ok(Outcome::ok(stdout))
}

fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.common)?;
    let ranges = args
        .ranges
        .iter()
        .map(|s| parse_range(s))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, x) in ranges.iter().enumerate() {
        if ranges[..i].iter().any(|y| y.key == x.key) {
            return Err(CliError::Usage(format!(
                "range key `{}` given twice",
                x.key
            )));
        }
    }
    let swept_b = ranges.iter().any(|x| x.key == "b");
    let base = SweepBase {
        a: r.a.unwrap_or(0.0),
        b: r.b.unwrap_or(0.0),
        c: r.c.unwrap_or(0.0),
        n: r.n_dim,
        l: r.l,
        derive_b: !(args.fixed_b || swept_b),
        n_max: pick(&args.nmax, &r.file, "nmax")?.unwrap_or(0),
        phys: r.phys,
        tol: r.tol,
        grid: GridOverrides {
            r_max: r.file.get("rmax")?,
            h: r.file.get("h")?,
        },
    };
    let rows = run_sweep(&base, &ranges)?;
    Ok(Outcome::ok(match r.out.unwrap_or(OutFormat::Csv) {
        OutFormat::Json => to_json(&rows),
        _ => render_csv(&rows),
    }))
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text)
                }
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Eig(a) => cmd_eig(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("{}\n", e.message()),
        },
    }
}

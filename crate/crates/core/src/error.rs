use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "invalid physical constants: mass and hbar must be positive (m = {mass}, hbar = {hbar})"
    )]
    InvalidPhysical { mass: f64, hbar: f64 },

    #[error("invalid dimension N = {n}, l = {l}: need N >= 1, l >= 0 and M = N + 2l >= 2")]
    InvalidDimension { n: i64, l: i64 },

    #[error("power r^{power} outside the supported Laurent range [-2, 2]")]
    PowerOutOfRange { power: i32 },

    #[error("superpotential powers must lie in {{-1, 0, 1}}, found r^{power}")]
    NotSuperpotential { power: i32 },

    #[error("log-derivative not a Laurent form (polynomial prefactor of degree {degree})")]
    NotLaurent { degree: usize },

    #[error("constraint requires attractive Coulomb and confining quadratic terms")]
    ConstraintDomain,

    #[error("constraint b = 2a*sqrt(2mc)/((M-1)hbar) violated: b = {given}, required {required}, violation {violation}")]
    ConstraintViolation {
        given: f64,
        required: f64,
        violation: f64,
    },

    #[error("no bound Coulomb state in this construction (a = {a})")]
    NoBoundState { a: f64 },

    #[error("oscillator view undefined for c = {c}")]
    OscillatorUndefined { c: f64 },

    #[error("b,c not held fixed: superpotential r^1 coefficients {left} and {right} differ")]
    ShapeMismatch { left: f64, right: f64 },

    #[error("state not square integrable (q = {q}, lambda = {lambda}, kappa = {kappa})")]
    NotNormalizable { q: f64, lambda: f64, kappa: f64 },

    #[error("ladder operator needs a state regular at the origin (q = {q})")]
    Singular { q: f64 },

    #[error("cannot normalize a function with norm {norm}")]
    ZeroNorm { norm: f64 },

    #[error("grid functions live on different grids")]
    GridMismatch,

    #[error("grid has {count} nodes, at least 100 required")]
    GridTooSmall { count: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("requested {k} eigenvalues from a {count}-node grid")]
    EigenCount { k: usize, count: usize },

    #[error("potential is trivial: a, b and c are all zero")]
    TrivialPotential,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("aspect ratio r = {r} coincides with the threshold radius r_{l} (two degrees critical at once)")]
    CriticalAspectRatio { r: f64, l: u32 },

    #[error("singular mode: denominator {denominator:e} vanishes for (l, n) = ({l}, {n})")]
    SingularMode { l: u32, n: u32, denominator: f64 },

    #[error("R = {r} is at the pole R0 = {r0} of the transition coefficients")]
    PoleAtR0 { r: f64, r0: f64 },

    #[error("no interaction formula for (l_c, l) = ({lc}, {l})")]
    UnsupportedInteraction { lc: u32, l: u32 },

    #[error("transition number is only available for l_c in {{1, 2}}, got {0}")]
    UnsupportedDegree(u32),

    #[error("singular branch k = {k} of degree {l}: |beta f| = {value:e}")]
    SingularBranch { l: u32, k: usize, value: f64 },

    #[error("transition number has imaginary residue {residue:e}")]
    NotReal { residue: f64 },

    #[error("regime discriminant K = {k} is not positive; steady transition theory does not apply")]
    NotSteadyRegime { k: f64 },

    #[error("no sign change of the transition number on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("growth-rate maximum sits on the scan boundary at (l, n) = ({l}, {n})")]
    ScanInconclusive { l: u32, n: u32 },

    #[error("reality constraint violated: residue {0:e}")]
    ConstraintViolated(f64),

    #[error("invalid time step: {0}")]
    InvalidStep(String),

    #[error("transition number q = {q} is not positive (Type-II regime), no bifurcated attractor")]
    TypeIIRegime { q: f64 },

    #[error("trajectory diverged at t = {time} (|x|^2 = {norm_sq:e})")]
    Diverged { time: f64, norm_sq: f64 },
}

use thiserror::Error;

/// Errors shared by all modules of the laboratory.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {x} outside the map's domain")]
    OutsideDomain { x: f64 },

    #[error("truncation depth {depth} exceeded: {what}")]
    DepthExceeded { depth: usize, what: String },

    #[error("scaling data leaves the open triangle at level {level}: ({s0}, {s1})")]
    ImproperScalingData { level: usize, s0: f64, s1: f64 },

    #[error("map is not monotone on [{lo}, {hi}]")]
    NotMonotone { lo: f64, hi: f64 },

    #[error("map is not monotone on the whole of T after {step} iterates")]
    NotMonotoneOnT { step: usize },

    #[error("no root bracketed in [{lo}, {hi}]")]
    NoRootFound { lo: f64, hi: f64 },

    #[error("rational map denominator vanishes near c = {c}")]
    Pole { c: f64 },

    #[error("branch map not expanding: measured min |dR/dc| = {lambda}")]
    NotExpanding { lambda: f64 },

    #[error("symbol word too short: need at least {need}, got {got}")]
    WordTooShort { need: usize, got: usize },

    #[error("map not renormalizable: {reason}")]
    NotRenormalizable { reason: String },

    #[error("critical point too flat: |D^2 f(c)| = {d2}")]
    FlatCritical { d2: f64 },

    #[error("derivative rule absent and samples too sparse at x = {x}")]
    NotDifferentiable { x: f64 },

    #[error("cross-ratio configuration degenerate: {0}")]
    DegenerateConfiguration(String),

    #[error("monotone interpolation infeasible: {0}")]
    InfeasibleData(String),

    #[error("C1 gluing failed at junction x = {x}: value/slope defect {defect}")]
    JunctionMismatch { x: f64, defect: f64 },

    #[error("perturbation gaps overlap: [{a0}, {a1}] and [{b0}, {b1}]")]
    GapOverlap { a0: f64, a1: f64, b0: f64, b1: f64 },

    #[error("bump amplitude {t} above admissible cap {t_max}")]
    TooLarge { t: f64, t_max: f64 },

    #[error("level intervals approach machine epsilon: {0}")]
    PrecisionExhausted(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

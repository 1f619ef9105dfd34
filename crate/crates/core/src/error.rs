use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscordError {
    #[error("NonHermitianInput: max |rho - rho^dag| = {residue:e}")]
    NonHermitianInput { residue: f64 },

    #[error("UnphysicalState: eigenvalue {min_eigenvalue:e} is negative")]
    UnphysicalState { min_eigenvalue: f64 },

    #[error("NotNormalized: a+b+c+d = {sum}")]
    NotNormalized { sum: f64 },

    #[error("NegativeParameter: {name} = {value} < 0")]
    NegativeParameter { name: &'static str, value: f64 },

    /// `constraint` is either `"u^2 > ad"` or `"v^2 > bc"`.
    #[error("PositivityViolation: {constraint}")]
    PositivityViolation { constraint: &'static str },

    #[error("DegenerateMarginal: qubit B is pure (a+c = {a_plus_c}, b+d = {b_plus_d})")]
    DegenerateMarginal { a_plus_c: f64, b_plus_d: f64 },

    #[error("SingularR: |det R| = {det:e}")]
    SingularR { det: f64 },

    #[error("InvalidFilter: {0}")]
    InvalidFilter(String),

    #[error("XiOutOfRange: xi = {0} not in (0, 1)")]
    XiOutOfRange(f64),

    #[error("ZOutOfRange: z = {z} not strictly inside ({lo}, {hi})")]
    ZOutOfRange { z: f64, lo: f64, hi: f64 },

    #[error("QOutOfRange: q = {0} not in [0, 1]")]
    QOutOfRange(f64),

    #[error("ThetaOutOfRange: theta = {0} not in [0, pi/2]")]
    ThetaOutOfRange(f64),

    #[error("InvalidPovm: {0}")]
    InvalidPovm(String),

    #[error("MultipleCrossings: chi_h - chi_v changes sign {count} times")]
    MultipleCrossings { count: usize },

    #[error("NoCrossing: chi_h and chi_v do not intersect inside the apex interval")]
    NoCrossing,

    #[error("GammaOutOfRange: gamma = {0} not in [0, 1]")]
    GammaOutOfRange(f64),

    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, DiscordError>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("inverse of the zero function")]
    InverseOfZero,
    #[error("not bicubic: reduced degree is {0}")]
    NotBicubic(usize),
    #[error("invalid impedance: {0}")]
    InvalidImpedance(String),
    #[error("not positive-real: {0}")]
    NotPositiveReal(String),
    #[error("impedance has a pole or zero on the imaginary axis or at infinity; use the boundary synthesizer")]
    NotInterior,
    #[error("boundary case outside the handled scope: {0}")]
    Unhandled(String),
    #[error("unsupported pole/zero multiplicity on the imaginary axis")]
    UnsupportedMultiplicity,
    #[error("terminals are disconnected")]
    Disconnected,
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
    #[error("topology is neither series-parallel nor a bridge: {0}")]
    UnsupportedTopology(String),
    #[error("unknown configuration id `{0}`")]
    UnknownConfig(String),
    #[error("verification failed: relative mismatch {mismatch:.3e} exceeds {tol:.1e} ({context})")]
    VerificationFailed {
        mismatch: f64,
        tol: f64,
        context: String,
    },
    #[error("failed to locate the minimum of the real part: {0}")]
    MinimumSearch(String),
    #[error("unstable closed loop (max real eigenvalue {0:.3e})")]
    Unstable(f64),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("improper controller: leading numerator coefficient of the impedance is zero")]
    ImproperController,
    #[error("no feasible point found; best infeasible penalty {0:.3e}")]
    Infeasible(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

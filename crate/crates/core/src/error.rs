use thiserror::Error;

pub type Result<T> = std::result::Result<T, GlimmError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlimmError {
    #[error("invalid gas constants: {0}")]
    InvalidGas(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state is not supersonic in x: u = {u}, c = {c}")]
    Subsonic { u: f64, c: f64 },

    #[error("wave curve of family {family} left its admissible region at strength {sigma}")]
    WaveDomain { family: usize, sigma: f64 },

    #[error("mass fraction {0} left [0, 1]")]
    MassFraction(f64),

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("deflection {deflection} exceeds the detachment angle {critical}")]
    Detached { deflection: f64, critical: f64 },

    #[error("thermal choking: {0}")]
    ThermalChoking(String),

    #[error("CFL violated at strip {strip}: wave speed {speed} exceeds bound {bound}")]
    Cfl {
        strip: usize,
        speed: f64,
        bound: f64,
    },

    #[error("waves reached the edge of the computational window at strip {0}")]
    WindowTooNarrow(usize),

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl GlimmError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        GlimmError::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            GlimmError::Config { .. } | GlimmError::InvalidGas(_) => 2,
            GlimmError::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for GlimmError {
    fn from(e: std::io::Error) -> Self {
        GlimmError::Io(e.to_string())
    }
}

use thiserror::Error;

/// Which end of the computational domain an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("initial data support exceeds the grid on the {side} side ({edge} beyond {limit})")]
    SupportOutsideGrid { side: Side, edge: f64, limit: f64 },

    #[error("time {t} outside recorded history [{t_min}, {t_max}]")]
    TimeOutOfRange { t: f64, t_min: f64, t_max: f64 },

    #[error("CFL condition violated at step {step}: lambda*|u|_inf = {margin}")]
    CflViolation { step: u64, margin: f64 },

    #[error("non-finite value produced at step {step} in cell {cell}")]
    NonFinite { step: u64, cell: usize },

    #[error("domain too small: support reached the {side} boundary at step {step}")]
    DomainTooSmall { step: u64, side: Side },

    #[error("numerical viscosity is not homogeneous (relative spread {spread:e})")]
    NotHomogeneous { spread: f64 },

    #[error("rate fit needs at least 8 positive samples in the window, got {0}")]
    TooFewPoints(usize),

    #[error("non-positive value {value} at t = {t} in rate fit")]
    NonPositiveValue { t: f64, value: f64 },

    #[error("diffusive profile is numerically degenerate: |M|/(2 nu) = {0}")]
    DegenerateProfile(f64),

    #[error("exact solution requires piecewise-constant initial data")]
    NotPiecewiseConstant,
}

pub type Result<T> = std::result::Result<T, Error>;

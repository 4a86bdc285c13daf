use std::fmt;

use thiserror::Error;

/// A single violated constraint on [`SystemParams`](crate::network::SystemParams).
#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    TransmitPower(f64),
    Alpha(f64),
    Lambda(f64),
    Distance(f64),
    Sectors { m1: u32, m2: u32 },
    Gamma(f64),
    Beta(f64),
    Sigma2(f64),
    SigmaC2(f64),
    Nu(f64),
    Zeta(f64),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::TransmitPower(v) => write!(f, "p_t must be positive and finite (got {v})"),
            ParamError::Alpha(v) => write!(f, "alpha must exceed 3 (got {v})"),
            ParamError::Lambda(v) => write!(f, "lambda must be nonnegative and finite (got {v})"),
            ParamError::Distance(v) => write!(f, "d0 must be positive and finite (got {v})"),
            ParamError::Sectors { m1, m2 } => {
                write!(f, "m1 and m2 must both be at least 1 (got m1={m1}, m2={m2})")
            }
            ParamError::Gamma(v) => write!(f, "gamma must be in (0,1) (got {v})"),
            ParamError::Beta(v) => write!(f, "beta must be positive and finite (got {v})"),
            ParamError::Sigma2(v) => write!(f, "sigma2 must be nonnegative and finite (got {v})"),
            ParamError::SigmaC2(v) => write!(f, "sigma_c2 must be nonnegative and finite (got {v})"),
            ParamError::Nu(v) => write!(f, "nu must be in (0,1] (got {v})"),
            ParamError::Zeta(v) => write!(f, "zeta must be in (0,1] (got {v})"),
        }
    }
}

/// Every violation found by [`SystemParams::validate`](crate::network::SystemParams::validate).
#[derive(Debug, Clone, PartialEq)]
pub struct ParamErrors(pub Vec<ParamError>);

impl fmt::Display for ParamErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParamErrors {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(#[from] ParamErrors),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(
        "quadrature did not converge on [{lo}, {hi}]: estimated error {error_estimate:e} \
         exceeds tolerance {tolerance:e} after {intervals} subintervals"
    )]
    Quadrature {
        lo: f64,
        hi: f64,
        error_estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error(
        "simulation radius {radius} m leaves a truncation tail ratio of {ratio:.5} \
         (limit {limit}); increase the radius or override the guard"
    )]
    TailBound { radius: f64, ratio: f64, limit: f64 },

    #[error("sweep point {axis}={value}: {source}")]
    SweepPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

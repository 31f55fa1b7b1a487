//! The economy layer: timelines, driving and deflator processes, discount
//! factors, option pricing and implied volatility for the Gauss and Dirac
//! model families.

pub mod dirac_econ;
pub mod gauss_econ;
pub mod options;
pub mod spread;

pub use dirac_econ::{DiracCurrency, DiracEconomy};
pub use gauss_econ::{build_gauss_increments, FactorSpec, GaussCurrency, GaussEconomy};
pub use options::{
    bachelier_call, black_call, classical_binomial_max, classical_option_bound, implied_vol,
    three_moment_sigma, OptionQuote, VolConvention,
};
pub use spread::{spread_option_price, SpreadEngine};

use crate::dirac::DiracError;
use crate::gauss::GaussError;
use crate::group::GroupError;
use crate::quadrature::QuadratureError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PricingError {
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Dirac(#[from] DiracError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("time indices out of order: {i} ... {j}")]
    IndexOrder { i: usize, j: usize },
    #[error("time index {index} outside timeline of {len} times")]
    IndexRange { index: usize, len: usize },
    #[error("unknown currency `{0}`")]
    UnknownCurrency(String),
    #[error("invalid timeline: {0}")]
    InvalidTimeline(String),
    #[error("economy schedule mismatch: {0}")]
    ScheduleMismatch(String),
    #[error("correlation matrix is not PSD: eigenvalue {min_eigen:.3e}")]
    InvalidCorrelation { min_eigen: f64 },
    #[error("moments are inconsistent: sigma^2 = {sigma_sq}")]
    MomentInconsistency { sigma_sq: f64 },
    #[error("price {price} outside the arbitrage band [{lower}, {upper})")]
    NoRoot { price: f64, lower: f64, upper: f64 },
    #[error("spread pricing supports at most {max} factors, got {dim}")]
    DimTooLarge { dim: usize, max: usize },
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

/// Strictly increasing year fractions starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    times: Vec<f64>,
}

impl Timeline {
    pub fn new(times: Vec<f64>) -> Result<Self, PricingError> {
        if times.is_empty() {
            return Err(PricingError::InvalidTimeline("no times".into()));
        }
        if times[0] != 0.0 {
            return Err(PricingError::InvalidTimeline(format!(
                "first time is {}, expected 0",
                times[0]
            )));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(PricingError::InvalidTimeline(format!(
                    "times not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Timeline { times })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of consecutive intervals.
    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn time(&self, index: usize) -> f64 {
        self.times[index]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Accrual fraction `t_j - t_i`.
    pub fn accrual(&self, i: usize, j: usize) -> f64 {
        self.times[j] - self.times[i]
    }

    pub fn check_index(&self, index: usize) -> Result<(), PricingError> {
        if index < self.times.len() {
            Ok(())
        } else {
            Err(PricingError::IndexRange {
                index,
                len: self.times.len(),
            })
        }
    }

    pub fn check_order(&self, i: usize, j: usize) -> Result<(), PricingError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i <= j {
            Ok(())
        } else {
            Err(PricingError::IndexOrder { i, j })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timeline_validation() {
        assert!(Timeline::new(vec![0.0, 0.5, 1.0]).is_ok());
        assert!(Timeline::new(vec![0.5, 1.0]).is_err());
        assert!(Timeline::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Timeline::new(vec![]).is_err());
    }

    #[test]
    fn accruals_and_order() {
        let tl = Timeline::new(vec![0.0, 0.25, 1.0]).unwrap();
        assert_eq!(tl.accrual(1, 2), 0.75);
        assert!(tl.check_order(0, 2).is_ok());
        assert!(tl.check_order(2, 0).is_err());
        assert!(tl.check_index(3).is_err());
    }
}

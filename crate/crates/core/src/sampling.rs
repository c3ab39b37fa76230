//! Randomized sampling designs for rare-events data.
//!
//! * Control under-sampling keeps every case and each control independently
//!   with probability `pi0`: `δ_i = y_i + (1 − y_i)·1{u_i ≤ pi0}`.
//! * Case over-sampling uses every row once and each case `v_i` extra times:
//!   `τ_i = y_i·v_i + 1` with `v_i ~ Poisson(lambda)`.
//!
//! Designs keep one indicator per row of the parent dataset, dropped rows
//! included, so indices always line up with the data.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::model::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplingScheme {
    Undersample,
    Oversample,
}

/// A realized sampling plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDesign {
    kind: SamplingScheme,
    rate: f64,
    indicators: Vec<u32>,
    inclusion_weight: Vec<f64>,
}

pub(crate) fn check_pi0(pi0: f64) -> Result<()> {
    if pi0 > 0.0 && pi0 <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("pi0 must lie in (0, 1], got {pi0}")))
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")))
    }
}

/// Bernoulli under-sampling of controls; one uniform is drawn per row.
pub fn undersample<R: Rng + ?Sized>(data: &Dataset, pi0: f64, rng: &mut R) -> Result<SampleDesign> {
    check_pi0(pi0)?;
    let mut indicators = Vec::with_capacity(data.n());
    let mut inclusion_weight = Vec::with_capacity(data.n());
    for &y in data.labels() {
        let u: f64 = rng.random();
        let keep = y == 1 || u <= pi0;
        indicators.push(u32::from(keep));
        inclusion_weight.push(pi0 + (1.0 - pi0) * f64::from(y));
    }
    Ok(SampleDesign { kind: SamplingScheme::Undersample, rate: pi0, indicators, inclusion_weight })
}

/// Poisson over-sampling of cases; a Poisson variate is drawn for case rows only.
pub fn oversample<R: Rng + ?Sized>(data: &Dataset, lambda: f64, rng: &mut R) -> Result<SampleDesign> {
    check_lambda(lambda)?;
    let poisson = if lambda > 0.0 {
        Some(Poisson::new(lambda).map_err(|e| Error::InvalidParameter(e.to_string()))?)
    } else {
        None
    };
    let mut indicators = Vec::with_capacity(data.n());
    let mut inclusion_weight = Vec::with_capacity(data.n());
    for &y in data.labels() {
        if y == 1 {
            let extra = poisson.as_ref().map_or(0, |p| p.sample(rng) as u32);
            indicators.push(extra + 1);
            inclusion_weight.push(1.0 + lambda);
        } else {
            indicators.push(1);
            inclusion_weight.push(1.0);
        }
    }
    Ok(SampleDesign { kind: SamplingScheme::Oversample, rate: lambda, indicators, inclusion_weight })
}

impl SampleDesign {
    pub fn kind(&self) -> SamplingScheme {
        self.kind
    }

    /// `pi0` for under-sampling, `lambda` for over-sampling.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `δ_i` or `τ_i`, one per row of the parent dataset.
    pub fn indicators(&self) -> &[u32] {
        &self.indicators
    }

    /// `π_i = pi0 + (1 − pi0) y_i` or `w_i = 1 + lambda y_i`.
    pub fn inclusion_weight(&self) -> &[f64] {
        &self.inclusion_weight
    }

    pub fn len(&self) -> usize {
        self.indicators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indicators.is_empty()
    }

    /// Inverse-probability weights `δ_i/π_i` or `τ_i/w_i`.
    pub fn weighted_weights(&self) -> Vec<f64> {
        self.indicators
            .iter()
            .zip(&self.inclusion_weight)
            .map(|(&k, &pi)| f64::from(k) / pi)
            .collect()
    }

    /// Raw counts `δ_i` or `τ_i` as weights.
    pub fn count_weights(&self) -> Vec<f64> {
        self.indicators.iter().map(|&k| f64::from(k)).collect()
    }

    /// Realized size of the sampled data: `Σ δ_i` or `Σ τ_i`.
    pub fn effective_sample_size(&self) -> u64 {
        self.indicators.iter().map(|&k| u64::from(k)).sum()
    }
}

pub fn effective_sample_size(design: &SampleDesign) -> u64 {
    design.effective_sample_size()
}

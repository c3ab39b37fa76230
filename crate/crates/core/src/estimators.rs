//! The five estimators: full-data MLE, under-sampled weighted, under-sampled
//! unweighted with bias correction, over-sampled weighted and over-sampled
//! unweighted with bias correction.
//!
//! Every fit starts Newton at the zero vector. Bias corrections shift the
//! intercept after convergence and never touch the slopes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{fit_mle, Coefficients, Dataset, FitResult, SolverSettings};
use crate::sampling::{self, check_lambda, check_pi0, SampleDesign, SamplingScheme};

/// The estimator without its rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorFamily {
    Full,
    UnderWeighted,
    UnderBiasCorrected,
    OverWeighted,
    OverBiasCorrected,
}

impl EstimatorFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            EstimatorFamily::Full => "full",
            EstimatorFamily::UnderWeighted => "under-w",
            EstimatorFamily::UnderBiasCorrected => "under-bc",
            EstimatorFamily::OverWeighted => "over-w",
            EstimatorFamily::OverBiasCorrected => "over-bc",
        }
    }
}

/// Which estimator to compute, with its sampling rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    Full,
    UnderWeighted { pi0: f64 },
    UnderBiasCorrected { pi0: f64 },
    OverWeighted { lambda: f64 },
    OverBiasCorrected { lambda: f64 },
}

impl EstimatorKind {
    pub fn family(&self) -> EstimatorFamily {
        match self {
            EstimatorKind::Full => EstimatorFamily::Full,
            EstimatorKind::UnderWeighted { .. } => EstimatorFamily::UnderWeighted,
            EstimatorKind::UnderBiasCorrected { .. } => EstimatorFamily::UnderBiasCorrected,
            EstimatorKind::OverWeighted { .. } => EstimatorFamily::OverWeighted,
            EstimatorKind::OverBiasCorrected { .. } => EstimatorFamily::OverBiasCorrected,
        }
    }

    /// Short tag used in tables and on the command line.
    pub fn tag(&self) -> &'static str {
        self.family().tag()
    }

    pub fn rate(&self) -> Option<f64> {
        match *self {
            EstimatorKind::Full => None,
            EstimatorKind::UnderWeighted { pi0 } | EstimatorKind::UnderBiasCorrected { pi0 } => Some(pi0),
            EstimatorKind::OverWeighted { lambda } | EstimatorKind::OverBiasCorrected { lambda } => Some(lambda),
        }
    }

    /// The sampling scheme this estimator consumes, if any.
    pub fn scheme(&self) -> Option<SamplingScheme> {
        match self {
            EstimatorKind::Full => None,
            EstimatorKind::UnderWeighted { .. } | EstimatorKind::UnderBiasCorrected { .. } => {
                Some(SamplingScheme::Undersample)
            }
            EstimatorKind::OverWeighted { .. } | EstimatorKind::OverBiasCorrected { .. } => {
                Some(SamplingScheme::Oversample)
            }
        }
    }

    /// Builds a kind from its tag and rate.
    pub fn from_tag(tag: &str, rate: Option<f64>) -> Result<Self> {
        let need = |name: &str| {
            rate.ok_or_else(|| Error::InvalidParameter(format!("estimator {tag} requires --{name}")))
        };
        let kind = match tag {
            "full" => EstimatorKind::Full,
            "under-w" => EstimatorKind::UnderWeighted { pi0: need("pi0")? },
            "under-bc" => EstimatorKind::UnderBiasCorrected { pi0: need("pi0")? },
            "over-w" => EstimatorKind::OverWeighted { lambda: need("lambda")? },
            "over-bc" => EstimatorKind::OverBiasCorrected { lambda: need("lambda")? },
            other => return Err(Error::InvalidParameter(format!("unknown estimator {other:?}"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EstimatorKind::Full => Ok(()),
            EstimatorKind::UnderWeighted { pi0 } | EstimatorKind::UnderBiasCorrected { pi0 } => check_pi0(pi0),
            EstimatorKind::OverWeighted { lambda } | EstimatorKind::OverBiasCorrected { lambda } => {
                check_lambda(lambda)
            }
        }
    }

    /// Draws the sampling design this estimator needs, or `None` for the full-data MLE.
    pub fn realize_design<R: Rng + ?Sized>(&self, data: &Dataset, rng: &mut R) -> Result<Option<SampleDesign>> {
        match *self {
            EstimatorKind::Full => Ok(None),
            EstimatorKind::UnderWeighted { pi0 } | EstimatorKind::UnderBiasCorrected { pi0 } => {
                sampling::undersample(data, pi0, rng).map(Some)
            }
            EstimatorKind::OverWeighted { lambda } | EstimatorKind::OverBiasCorrected { lambda } => {
                sampling::oversample(data, lambda, rng).map(Some)
            }
        }
    }

    /// Fits this estimator. `design` must be present for the sampled estimators.
    pub fn fit(&self, data: &Dataset, design: Option<&SampleDesign>, settings: &SolverSettings) -> Result<FitResult> {
        let require = || design.ok_or_else(|| Error::DesignMismatch(format!("{} needs a sampling design", self.tag())));
        match self {
            EstimatorKind::Full => full_mle(data, settings),
            EstimatorKind::UnderWeighted { .. } => under_weighted(data, require()?, settings),
            EstimatorKind::UnderBiasCorrected { .. } => under_bias_corrected(data, require()?, settings),
            EstimatorKind::OverWeighted { .. } => over_weighted(data, require()?, settings),
            EstimatorKind::OverBiasCorrected { .. } => over_bias_corrected(data, require()?, settings),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rate() {
            Some(rate) => write!(f, "{}({rate})", self.tag()),
            None => f.write_str(self.tag()),
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    /// Parses `tag` or `tag:rate`, e.g. `under-bc:0.05`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => EstimatorKind::from_tag(s, None),
            Some((tag, rate)) => {
                let rate = rate
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad rate in {s:?}")))?;
                EstimatorKind::from_tag(tag, Some(rate))
            }
        }
    }
}

fn expect_scheme(design: &SampleDesign, scheme: SamplingScheme, data: &Dataset) -> Result<()> {
    if design.kind() != scheme {
        return Err(Error::DesignMismatch(format!("expected {scheme:?}, got {:?}", design.kind())));
    }
    if design.len() != data.n() {
        return Err(Error::DimensionMismatch { expected: data.n(), found: design.len() });
    }
    Ok(())
}

fn any_control_selected(data: &Dataset, design: &SampleDesign) -> bool {
    data.labels().iter().zip(design.indicators()).any(|(&y, &d)| y == 0 && d > 0)
}

/// Full-data MLE.
pub fn full_mle(data: &Dataset, settings: &SolverSettings) -> Result<FitResult> {
    fit_mle(data, &vec![1.0; data.n()], &Coefficients::zeros(data.dim()), settings)
}

/// Under-sampled inverse-probability weighted estimator: weights `δ_i/π_i`.
pub fn under_weighted(data: &Dataset, design: &SampleDesign, settings: &SolverSettings) -> Result<FitResult> {
    expect_scheme(design, SamplingScheme::Undersample, data)?;
    if !any_control_selected(data, design) {
        return Err(Error::NoControlsSelected);
    }
    fit_mle(data, &design.weighted_weights(), &Coefficients::zeros(data.dim()), settings)
}

/// The unweighted fit on the under-sampled rows, before the intercept shift.
pub fn under_unweighted(data: &Dataset, design: &SampleDesign, settings: &SolverSettings) -> Result<FitResult> {
    expect_scheme(design, SamplingScheme::Undersample, data)?;
    if !any_control_selected(data, design) {
        return Err(Error::NoControlsSelected);
    }
    fit_mle(data, &design.count_weights(), &Coefficients::zeros(data.dim()), settings)
}

/// Under-sampled unweighted estimator with the intercept shifted by `log(pi0)`.
pub fn under_bias_corrected(data: &Dataset, design: &SampleDesign, settings: &SolverSettings) -> Result<FitResult> {
    let mut fit = under_unweighted(data, design, settings)?;
    fit.theta.alpha += design.rate().ln();
    Ok(fit)
}

/// Over-sampled weighted estimator: weights `τ_i/(1 + lambda y_i)`.
pub fn over_weighted(data: &Dataset, design: &SampleDesign, settings: &SolverSettings) -> Result<FitResult> {
    expect_scheme(design, SamplingScheme::Oversample, data)?;
    fit_mle(data, &design.weighted_weights(), &Coefficients::zeros(data.dim()), settings)
}

/// The count-weighted fit on the over-sampled data, before the intercept shift.
pub fn over_unweighted(data: &Dataset, design: &SampleDesign, settings: &SolverSettings) -> Result<FitResult> {
    expect_scheme(design, SamplingScheme::Oversample, data)?;
    fit_mle(data, &design.count_weights(), &Coefficients::zeros(data.dim()), settings)
}

/// Over-sampled unweighted estimator with the intercept shifted by `−log(1 + lambda)`.
pub fn over_bias_corrected(data: &Dataset, design: &SampleDesign, settings: &SolverSettings) -> Result<FitResult> {
    let mut fit = over_unweighted(data, design, settings)?;
    fit.theta.alpha -= design.rate().ln_1p();
    Ok(fit)
}

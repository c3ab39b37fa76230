//! Synthetic rare-events data, intercept calibration and the replicated
//! Monte Carlo harness.
//!
//! Two generators are provided:
//!
//! * a conditional design, where `y ~ Bernoulli(ρ)` and `x | y ~ N(μ_y, σ²)`.
//!   The induced logistic parameters are known in closed form:
//!   `β_t = (μ1 − μ0)/σ²`, `α_t = log(ρ/(1−ρ)) − (μ1² − μ0²)/(2σ²)`;
//! * a marginal design, where `x` follows independent Gaussian components and
//!   `y | x` follows the logistic model at a given `θ_t`.
//!
//! Replication `s` of an experiment draws its data from stream
//! `(base_seed, [s, 0])`; a sampling design with scheme `k` and rate `r` is
//! drawn from `(base_seed, [s, 1, k, bits(r)])`, so the weighted and
//! bias-corrected estimators at the same rate see the same design.
//! Replications may run in parallel; results are reduced in replication order.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::model::{sigmoid, Coefficients, Covariates, Dataset, SolverSettings};
use crate::rng::stream;
use crate::sampling::{SampleDesign, SamplingScheme};

const DATA_STREAM: u64 = 0;
const DESIGN_STREAM: u64 = 1;

/// Independent Gaussian covariate components.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateLaw {
    means: Vec<f64>,
    sds: Vec<f64>,
}

impl CovariateLaw {
    pub fn gaussian(means: Vec<f64>, sds: Vec<f64>) -> Result<Self> {
        if means.is_empty() || means.len() != sds.len() {
            return Err(Error::InvalidParameter(format!(
                "covariate law needs matching, nonempty means and sds (got {} and {})",
                means.len(),
                sds.len()
            )));
        }
        if means.iter().any(|m| !m.is_finite()) || sds.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidParameter("covariate law needs finite means and positive sds".into()));
        }
        Ok(Self { means, sds })
    }

    pub fn standard_normal(d: usize) -> Self {
        Self { means: vec![0.0; d], sds: vec![1.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sds(&self) -> &[f64] {
        &self.sds
    }

    fn push_row<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) {
        for (m, s) in self.means.iter().zip(&self.sds) {
            let z: f64 = rng.sample(StandardNormal);
            out.push(m + s * z);
        }
    }

    /// `m` rows drawn from the law.
    pub fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Covariates {
        let mut values = Vec::with_capacity(m * self.dim());
        for _ in 0..m {
            self.push_row(rng, &mut values);
        }
        Covariates::from_row_major(values, self.dim()).expect("gaussian draws are finite")
    }

    /// Mean and standard deviation of `βᵀx`, which is itself Gaussian.
    fn linear_form(&self, beta: &[f64]) -> (f64, f64) {
        let mean = beta.iter().zip(&self.means).map(|(b, m)| b * m).sum();
        let var: f64 = beta.iter().zip(&self.sds).map(|(b, s)| b * b * s * s).sum();
        (mean, var.sqrt())
    }
}

fn check_rate(target_rate: f64) -> Result<()> {
    if target_rate > 0.0 && target_rate < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("target rate must lie in (0, 1), got {target_rate}")))
    }
}

/// Logistic parameters induced by the conditional Gaussian design.
pub fn conditional_truth(target_rate: f64, mu1: f64, mu0: f64, sigma: f64) -> Result<Coefficients> {
    check_rate(target_rate)?;
    if !(sigma > 0.0 && sigma.is_finite()) || !mu1.is_finite() || !mu0.is_finite() {
        return Err(Error::InvalidParameter("conditional design needs finite means and sigma > 0".into()));
    }
    let s2 = sigma * sigma;
    let alpha = (target_rate / (1.0 - target_rate)).ln() - (mu1 * mu1 - mu0 * mu0) / (2.0 * s2);
    Ok(Coefficients::new(alpha, vec![(mu1 - mu0) / s2]))
}

/// `y ~ Bernoulli(ρ)`, then `x | y ~ N(μ_y, σ²)`; returns the data and the induced `θ_t`.
pub fn generate_conditional<R: Rng + ?Sized>(
    n: usize,
    target_rate: f64,
    mu1: f64,
    mu0: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<(Dataset, Coefficients)> {
    let theta_t = conditional_truth(target_rate, mu1, mu0, sigma)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let case = rng.random::<f64>() < target_rate;
        let z: f64 = rng.sample(StandardNormal);
        x.push(if case { mu1 } else { mu0 } + sigma * z);
        y.push(u8::from(case));
    }
    Ok((Dataset::new(Covariates::from_column(x)?, y)?, theta_t))
}

/// `x` from the law, then `y | x ~ Bernoulli(p(θ_t; x))`.
pub fn generate_marginal<R: Rng + ?Sized>(
    n: usize,
    theta_t: &Coefficients,
    law: &CovariateLaw,
    rng: &mut R,
) -> Result<Dataset> {
    if theta_t.dim() != law.dim() {
        return Err(Error::DimensionMismatch { expected: law.dim(), found: theta_t.dim() });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut x = Vec::with_capacity(n * law.dim());
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let start = x.len();
        law.push_row(rng, &mut x);
        let p = sigmoid(theta_t.linear_predictor(&x[start..]));
        y.push(u8::from(rng.random::<f64>() < p));
    }
    Dataset::new(Covariates::from_row_major(x, law.dim())?, y)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, eps, 40)
}

/// `E_x[p(α + βᵀx)]` under the law, by quadrature over the Gaussian `βᵀx`.
pub fn expected_event_rate(alpha: f64, beta: &[f64], law: &CovariateLaw) -> Result<f64> {
    if beta.len() != law.dim() {
        return Err(Error::DimensionMismatch { expected: law.dim(), found: beta.len() });
    }
    let (mean, sd) = law.linear_form(beta);
    if sd == 0.0 {
        return Ok(sigmoid(alpha + mean));
    }
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let f = |z: f64| norm * (-0.5 * z * z).exp() * sigmoid(alpha + mean + sd * z);
    Ok(integrate(&f, -12.0, 12.0, 1e-14))
}

/// The intercept at which the marginal event rate equals `target_rate`,
/// found by bisection on `α ∈ [−50, 50]` until `|E p − ρ| ≤ precision`.
pub fn calibrate_intercept(beta: &[f64], law: &CovariateLaw, target_rate: f64, precision: f64) -> Result<f64> {
    check_rate(target_rate)?;
    if !(precision > 0.0) {
        return Err(Error::InvalidParameter(format!("precision must be > 0, got {precision}")));
    }
    let rate = |a: f64| expected_event_rate(a, beta, law);
    let (mut lo, mut hi) = (-50.0, 50.0);
    if rate(lo)? > target_rate || rate(hi)? < target_rate {
        return Err(Error::NoBracket);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = rate(mid)?;
        if (r - target_rate).abs() <= precision {
            return Ok(mid);
        }
        if r < target_rate {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Empirical MSE of a set of estimates against the truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Emse {
    /// Mean of `‖θ̂ − θ_t‖²`; always equal to `alpha + Σ beta`.
    pub total: f64,
    pub alpha: f64,
    pub beta: Vec<f64>,
}

pub fn emse(estimates: &[Coefficients], theta_t: &Coefficients) -> Result<Emse> {
    if estimates.is_empty() {
        return Err(Error::EmptySample);
    }
    let d = theta_t.dim();
    let mut alpha = 0.0;
    let mut beta = vec![0.0; d];
    for est in estimates {
        if est.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: est.dim() });
        }
        alpha += (est.alpha - theta_t.alpha).powi(2);
        for (acc, (b, t)) in beta.iter_mut().zip(est.beta.iter().zip(&theta_t.beta)) {
            *acc += (b - t).powi(2);
        }
    }
    let s = estimates.len() as f64;
    alpha /= s;
    beta.iter_mut().for_each(|b| *b /= s);
    let total = alpha + beta.iter().sum::<f64>();
    Ok(Emse { total, alpha, beta })
}

/// How each replication's full data are generated.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentDesign {
    ConditionalGaussian { mu1: f64, mu0: f64, sigma: f64, target_rate: f64 },
    MarginalLogistic { theta_t: Coefficients, law: CovariateLaw },
}

impl ExperimentDesign {
    /// The true coefficients of the design.
    pub fn theta_t(&self) -> Result<Coefficients> {
        match self {
            ExperimentDesign::ConditionalGaussian { mu1, mu0, sigma, target_rate } => {
                conditional_truth(*target_rate, *mu1, *mu0, *sigma)
            }
            ExperimentDesign::MarginalLogistic { theta_t, law } => {
                if theta_t.dim() != law.dim() {
                    return Err(Error::DimensionMismatch { expected: law.dim(), found: theta_t.dim() });
                }
                Ok(theta_t.clone())
            }
        }
    }

    fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Dataset> {
        match self {
            ExperimentDesign::ConditionalGaussian { mu1, mu0, sigma, target_rate } => {
                generate_conditional(n, *target_rate, *mu1, *mu0, *sigma, rng).map(|(data, _)| data)
            }
            ExperimentDesign::MarginalLogistic { theta_t, law } => generate_marginal(n, theta_t, law, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub design: ExperimentDesign,
    pub n: usize,
    pub replications: usize,
    pub estimators: Vec<EstimatorKind>,
    pub base_seed: u64,
    pub solver: SolverSettings,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n must be >= 2, got {}", self.n)));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replication count must be >= 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidParameter("no estimators requested".into()));
        }
        if let ExperimentDesign::ConditionalGaussian { target_rate, .. } = self.design {
            if !(target_rate > 0.0 && target_rate < 0.5) {
                return Err(Error::InvalidParameter(format!("target rate must lie in (0, 0.5), got {target_rate}")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be >= 1".into()));
        }
        self.design.theta_t()?;
        self.estimators.iter().try_for_each(EstimatorKind::validate)
    }
}

/// One replication: the realized case count and each estimator's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationOutcome {
    pub n1: usize,
    pub estimates: Vec<Result<Coefficients>>,
}

fn design_path(replication: u64, scheme: SamplingScheme, rate: f64) -> [u64; 4] {
    let scheme_id = match scheme {
        SamplingScheme::Undersample => 0,
        SamplingScheme::Oversample => 1,
    };
    [replication, DESIGN_STREAM, scheme_id, rate.to_bits()]
}

fn run_one(config: &ExperimentConfig, replication: usize) -> Result<ReplicationOutcome> {
    let s = replication as u64;
    let data = config.design.generate(config.n, &mut stream(config.base_seed, &[s, DATA_STREAM]))?;
    let mut designs: Vec<((SamplingScheme, u64), SampleDesign)> = Vec::new();
    let mut estimates = Vec::with_capacity(config.estimators.len());
    for kind in &config.estimators {
        let design = match (kind.scheme(), kind.rate()) {
            (Some(scheme), Some(rate)) => {
                let key = (scheme, rate.to_bits());
                let idx = match designs.iter().position(|(k, _)| *k == key) {
                    Some(idx) => idx,
                    None => {
                        let mut rng = stream(config.base_seed, &design_path(s, scheme, rate));
                        let d = kind.realize_design(&data, &mut rng)?.expect("sampled estimator");
                        designs.push((key, d));
                        designs.len() - 1
                    }
                };
                Some(&designs[idx].1)
            }
            _ => None,
        };
        let outcome = kind.fit(&data, design, &config.solver).and_then(|fit| {
            if fit.converged {
                Ok(fit.theta)
            } else {
                Err(Error::NotConverged { iterations: fit.iterations, grad_max_norm: fit.grad_max_norm })
            }
        });
        estimates.push(outcome);
    }
    Ok(ReplicationOutcome { n1: data.n1(), estimates })
}

/// Runs every replication and returns the per-replication outcomes in order.
pub fn run_replications(config: &ExperimentConfig) -> Result<Vec<ReplicationOutcome>> {
    config.validate()?;
    let work = || -> Result<Vec<ReplicationOutcome>> {
        (0..config.replications).into_par_iter().map(|s| run_one(config, s)).collect()
    };
    match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// eMSE summary of one estimator over all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSummary {
    pub kind: EstimatorKind,
    pub emse: Emse,
    /// Mean realized `n1` over all replications.
    pub mean_n1: f64,
    /// Replications whose fit failed and were left out of the eMSE.
    pub failed: usize,
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmseReport {
    pub theta_t: Coefficients,
    pub n: usize,
    pub summaries: Vec<EstimatorSummary>,
}

impl EmseReport {
    pub fn summary(&self, kind: &EstimatorKind) -> Option<&EstimatorSummary> {
        self.summaries.iter().find(|s| s.kind == *kind)
    }
}

/// Aggregates replication outcomes into an eMSE report.
pub fn summarize(config: &ExperimentConfig, outcomes: &[ReplicationOutcome]) -> Result<EmseReport> {
    let theta_t = config.design.theta_t()?;
    let mean_n1 = outcomes.iter().map(|o| o.n1 as f64).sum::<f64>() / outcomes.len() as f64;
    let mut summaries = Vec::with_capacity(config.estimators.len());
    for (j, kind) in config.estimators.iter().enumerate() {
        let ok: Vec<Coefficients> = outcomes
            .iter()
            .filter_map(|o| o.estimates[j].as_ref().ok().cloned())
            .collect();
        if ok.is_empty() {
            return Err(Error::AllReplicationsFailed { estimator: kind.to_string(), replications: outcomes.len() });
        }
        summaries.push(EstimatorSummary {
            kind: *kind,
            emse: emse(&ok, &theta_t)?,
            mean_n1,
            failed: outcomes.len() - ok.len(),
            replications: outcomes.len(),
        });
    }
    Ok(EmseReport { theta_t, n: config.n, summaries })
}

/// Runs the experiment and reports eMSE per estimator.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EmseReport> {
    let outcomes = run_replications(config)?;
    summarize(config, &outcomes)
}

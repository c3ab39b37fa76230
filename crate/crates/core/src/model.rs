//! Logistic-regression objective machinery.
//!
//! Everything here works with the augmented covariate `z = (1, xᵀ)ᵀ` implicitly:
//! coefficient vectors are laid out as `(alpha, beta_1, ..., beta_d)` and
//! gradients and Hessians are `(d+1)`-dimensional in the same order.
//!
//! The objective is the weighted log-likelihood
//! `Σ w_i { y_i z_iᵀθ − log(1 + e^{z_iᵀθ}) }` with nonnegative weights.
//! Rows with zero weight are skipped entirely.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Row-major covariate matrix without an intercept column.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariates {
    values: Vec<f64>,
    d: usize,
}

impl Covariates {
    /// Builds from row-major values; `values.len()` must be a multiple of `d`.
    pub fn from_row_major(values: Vec<f64>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDataset("covariate dimension must be at least 1".into()));
        }
        if values.len() % d != 0 {
            return Err(Error::DimensionMismatch {
                expected: d * (values.len() / d + 1),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariates"));
        }
        Ok(Self { values, d })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map(Vec::len).ok_or(Error::EmptySample)?;
        let mut values = Vec::with_capacity(rows.len() * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: row.len() });
            }
            values.extend_from_slice(row);
        }
        Self::from_row_major(values, d)
    }

    /// A single-covariate sample.
    pub fn from_column(values: Vec<f64>) -> Result<Self> {
        Self::from_row_major(values, 1)
    }

    pub fn n_rows(&self) -> usize {
        self.values.len() / self.d
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.d)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Covariate rows plus binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Covariates,
    y: Vec<u8>,
    n1: usize,
}

impl Dataset {
    pub fn new(x: Covariates, y: Vec<u8>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::InvalidDataset("dataset must contain at least one row".into()));
        }
        if x.n_rows() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.n_rows(), found: y.len() });
        }
        if let Some(bad) = y.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidDataset(format!("label {bad} is not 0 or 1")));
        }
        let n1 = y.iter().map(|&v| v as usize).sum();
        Ok(Self { x, y, n1 })
    }

    pub fn from_rows(rows: &[Vec<f64>], y: Vec<u8>) -> Result<Self> {
        Self::new(Covariates::from_rows(rows)?, y)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// Number of cases (`y = 1`).
    pub fn n1(&self) -> usize {
        self.n1
    }

    /// Number of controls (`y = 0`).
    pub fn n0(&self) -> usize {
        self.n() - self.n1
    }

    pub fn covariates(&self) -> &Covariates {
        &self.x
    }

    pub fn labels(&self) -> &[u8] {
        &self.y
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.x.row(i)
    }

    pub fn label(&self, i: usize) -> u8 {
        self.y[i]
    }
}

/// Intercept plus slope vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta: Vec<f64>,
}

impl Coefficients {
    pub fn new(alpha: f64, beta: Vec<f64>) -> Self {
        Self { alpha, beta }
    }

    pub fn zeros(d: usize) -> Self {
        Self { alpha: 0.0, beta: vec![0.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    /// Linear predictor `alpha + xᵀbeta`.
    pub fn linear_predictor(&self, x: &[f64]) -> f64 {
        self.alpha + dot(&self.beta, x)
    }

    /// Stacked `(alpha, beta)` vector.
    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.beta.len() + 1,
            std::iter::once(self.alpha).chain(self.beta.iter().copied()),
        )
    }

    pub fn from_vector(v: &DVector<f64>) -> Self {
        Self { alpha: v[0], beta: v.iter().skip(1).copied().collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.beta.iter().fold(self.alpha.abs(), |m, b| m.max(b.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.iter().all(|b| b.is_finite())
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.beta.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.beta.len() });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Logistic function in the form that never overflows.
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^t)` computed as `max(t, 0) + log1p(e^{-|t|})`.
pub fn log1p_exp(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// `Pr(y = 1 | x)` under the logistic model.
pub fn predict_prob(theta: &Coefficients, x_row: &[f64]) -> Result<f64> {
    theta.check(x_row.len())?;
    if x_row.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("covariate row"));
    }
    Ok(sigmoid(theta.linear_predictor(x_row)))
}

fn check_weights(data: &Dataset, weights: &[f64]) -> Result<()> {
    if weights.len() != data.n() {
        return Err(Error::DimensionMismatch { expected: data.n(), found: weights.len() });
    }
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite("weights"));
        }
        if value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
    }
    Ok(())
}

/// Rows with positive weight, copied contiguously.
struct ActiveRows {
    x: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    d: usize,
}

impl ActiveRows {
    fn gather(data: &Dataset, weights: &[f64]) -> Self {
        let d = data.dim();
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut w = Vec::new();
        for (i, &wi) in weights.iter().enumerate() {
            if wi > 0.0 {
                x.extend_from_slice(data.row(i));
                y.push(f64::from(data.label(i)));
                w.push(wi);
            }
        }
        Self { x, y, w, d }
    }

    fn rows(&self) -> impl Iterator<Item = (&[f64], f64, f64)> + '_ {
        self.x
            .chunks_exact(self.d)
            .zip(self.y.iter().copied())
            .zip(self.w.iter().copied())
            .map(|((x, y), w)| (x, y, w))
    }

    fn log_likelihood(&self, theta: &DVector<f64>) -> f64 {
        let beta = &theta.as_slice()[1..];
        self.rows()
            .map(|(x, y, w)| {
                let eta = theta[0] + dot(beta, x);
                w * (y * eta - log1p_exp(eta))
            })
            .sum()
    }

    /// Objective, gradient and negative Hessian in one pass.
    fn evaluate(&self, theta: &DVector<f64>) -> Evaluation {
        let p = self.d + 1;
        let beta = &theta.as_slice()[1..];
        let mut loglik = 0.0;
        let mut grad = vec![0.0; p];
        let mut upper = vec![0.0; p * p];
        let mut z = vec![1.0; p];
        for (x, y, w) in self.rows() {
            z[1..].copy_from_slice(x);
            let eta = theta[0] + dot(beta, x);
            let e = (-eta.abs()).exp();
            let prob = if eta >= 0.0 { 1.0 / (1.0 + e) } else { e / (1.0 + e) };
            loglik += w * (y * eta - (eta.max(0.0) + e.ln_1p()));
            let r = w * (y - prob);
            let phi = w * prob * (1.0 - prob);
            for (j, &zj) in z.iter().enumerate() {
                grad[j] += r * zj;
                let pz = phi * zj;
                for (acc, &zk) in upper[j * p + j..(j + 1) * p].iter_mut().zip(&z[j..]) {
                    *acc += pz * zk;
                }
            }
        }
        let neg_hess = DMatrix::from_fn(p, p, |j, k| if j <= k { upper[j * p + k] } else { upper[k * p + j] });
        Evaluation { loglik, grad: DVector::from_vec(grad), neg_hess }
    }
}

struct Evaluation {
    loglik: f64,
    grad: DVector<f64>,
    neg_hess: DMatrix<f64>,
}

/// Weighted log-likelihood `Σ w_i { y_i z_iᵀθ − log(1 + e^{z_iᵀθ}) }`.
pub fn log_likelihood(data: &Dataset, weights: &[f64], theta: &Coefficients) -> Result<f64> {
    check_weights(data, weights)?;
    theta.check(data.dim())?;
    Ok(ActiveRows::gather(data, weights).log_likelihood(&theta.to_vector()))
}

/// Gradient `Σ w_i (y_i − p_i) z_i`.
pub fn gradient(data: &Dataset, weights: &[f64], theta: &Coefficients) -> Result<DVector<f64>> {
    check_weights(data, weights)?;
    theta.check(data.dim())?;
    Ok(ActiveRows::gather(data, weights).evaluate(&theta.to_vector()).grad)
}

/// Hessian `−Σ w_i p_i (1 − p_i) z_i z_iᵀ`.
pub fn hessian(data: &Dataset, weights: &[f64], theta: &Coefficients) -> Result<DMatrix<f64>> {
    check_weights(data, weights)?;
    theta.check(data.dim())?;
    Ok(-ActiveRows::gather(data, weights).evaluate(&theta.to_vector()).neg_hess)
}

/// Newton solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Convergence threshold on the gradient max-norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Coefficient max-norm beyond which the data are declared separated.
    pub divergence_bound: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 100, divergence_bound: 30.0 }
    }
}

impl SolverSettings {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if !(self.divergence_bound > 0.0) {
            return Err(Error::InvalidParameter("divergence bound must be > 0".into()));
        }
        Ok(())
    }
}

/// Fitted coefficients plus solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub theta: Coefficients,
    pub converged: bool,
    /// Accepted Newton steps.
    pub iterations: usize,
    pub grad_max_norm: f64,
    /// `−∂²ℓ/∂θ∂θᵀ` at the returned coefficients.
    pub neg_hessian: DMatrix<f64>,
    pub log_likelihood: f64,
    /// Objective value at the start and after each accepted step.
    pub objective_trace: Vec<f64>,
}

const MAX_HALVINGS: usize = 30;
const STEP_TOL: f64 = 1e-6;

/// Slack for "does not decrease": the summation rounding of an objective whose
/// terms are all nonpositive is bounded by a small multiple of `ε·|ℓ|`.
pub fn ascent_slack(loglik: f64) -> f64 {
    64.0 * f64::EPSILON * loglik.abs()
}

fn newton_direction(neg_hess: &DMatrix<f64>, grad: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(chol) = neg_hess.clone().cholesky() {
        return Some(chol.solve(grad));
    }
    let p = neg_hess.nrows();
    let ridge = 1e-10 * neg_hess.trace() / p as f64;
    let mut shifted = neg_hess.clone();
    for j in 0..p {
        shifted[(j, j)] += ridge;
    }
    shifted.cholesky().map(|chol| chol.solve(grad))
}

/// Damped Newton ascent on the weighted log-likelihood.
///
/// Each iteration solves the Newton system and halves the step (at most 30
/// times) until the objective does not decrease. The iteration stops once the
/// gradient max-norm falls to `settings.tol` and the Newton step is negligible,
/// or after `settings.max_iter` steps, or when no halving yields an ascent step.
pub fn fit_mle(
    data: &Dataset,
    weights: &[f64],
    init: &Coefficients,
    settings: &SolverSettings,
) -> Result<FitResult> {
    check_weights(data, weights)?;
    init.check(data.dim())?;
    settings.validate()?;

    let active = ActiveRows::gather(data, weights);
    let weighted_cases: f64 = active.rows().map(|(_, y, w)| w * y).sum();
    let weighted_controls: f64 = active.rows().map(|(_, y, w)| w * (1.0 - y)).sum();
    if !(weighted_cases > 0.0 && weighted_controls > 0.0) {
        return Err(Error::AllOneClass);
    }

    let mut theta = init.to_vector();
    let mut current = active.evaluate(&theta);
    let mut trace = vec![current.loglik];
    let mut iterations = 0;

    while iterations < settings.max_iter {
        let small_gradient = current.grad.amax() <= settings.tol;
        let step = match newton_direction(&current.neg_hess, &current.grad) {
            Some(step) => step,
            None if small_gradient => break,
            None => return Err(Error::SingularHessian),
        };
        // under separation the gradient vanishes while Newton steps stay large
        if small_gradient && step.amax() <= STEP_TOL * (1.0 + theta.amax()) {
            break;
        }

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let candidate = &theta + &step * scale;
            let eval = active.evaluate(&candidate);
            if eval.loglik.is_finite() && eval.loglik >= current.loglik - ascent_slack(current.loglik) {
                accepted = Some((candidate, eval));
                break;
            }
            scale *= 0.5;
        }
        let Some((next, eval)) = accepted else {
            break;
        };
        if next.amax() > settings.divergence_bound {
            return Err(Error::Separation { bound: settings.divergence_bound });
        }
        theta = next;
        current = eval;
        trace.push(current.loglik);
        iterations += 1;
    }

    let grad_max_norm = current.grad.amax();
    Ok(FitResult {
        theta: Coefficients::from_vector(&theta),
        converged: grad_max_norm <= settings.tol,
        iterations,
        grad_max_norm,
        neg_hessian: current.neg_hess,
        log_likelihood: current.loglik,
        objective_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_row(x: f64, y: u8) -> Dataset {
        Dataset::from_rows(&[vec![x]], vec![y]).unwrap()
    }

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(700.0) <= 1.0 && sigmoid(700.0) > 0.999);
        assert!(sigmoid(-700.0) > 0.0);
        assert!((log1p_exp(700.0) - 700.0).abs() < 1e-12);
        assert!(log1p_exp(-700.0) >= 0.0);
        assert!((log1p_exp(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn predict_prob_values() {
        let theta = Coefficients::new(0.0, vec![0.0]);
        assert_eq!(predict_prob(&theta, &[123.0]).unwrap(), 0.5);
        let theta = Coefficients::new(-6.0, vec![1.0]);
        let p = predict_prob(&theta, &[0.0]).unwrap();
        assert!((p - 0.002_472_623_156_634_774).abs() < 1e-15);
        // 40-digit reference value of 1/(1+e^{3.39})
        let theta = Coefficients::new(-4.39, vec![1.0]);
        let p = predict_prob(&theta, &[1.0]).unwrap();
        assert!((p - 0.032_609_455_306_765_595).abs() < 1e-14);
    }

    #[test]
    fn predict_prob_rejects_dimension_mismatch() {
        let theta = Coefficients::new(0.0, vec![0.0, 1.0]);
        assert!(matches!(predict_prob(&theta, &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn log_likelihood_small_cases() {
        let theta = Coefficients::zeros(1);
        let data = one_row(0.0, 1);
        assert_eq!(log_likelihood(&data, &[0.0], &theta).unwrap(), 0.0);
        let ll = log_likelihood(&data, &[1.0], &theta).unwrap();
        assert!((ll + std::f64::consts::LN_2).abs() < 1e-15);
        let data = Dataset::from_rows(&[vec![0.0], vec![0.0]], vec![1, 0]).unwrap();
        let ll = log_likelihood(&data, &[1.0, 1.0], &theta).unwrap();
        assert!((ll + 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn negative_weight_is_rejected() {
        let data = one_row(0.0, 1);
        let err = log_likelihood(&data, &[-1.0], &Coefficients::zeros(1)).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { index: 0, .. }));
    }

    #[test]
    fn gradient_and_hessian_single_row() {
        let data = one_row(0.0, 1);
        let theta = Coefficients::zeros(1);
        let g = gradient(&data, &[1.0], &theta).unwrap();
        assert_eq!(g.as_slice(), &[0.5, 0.0]);
        let h = hessian(&data, &[1.0], &theta).unwrap();
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[-0.25, 0.0, 0.0, 0.0]));
        let g0 = gradient(&data, &[0.0], &theta).unwrap();
        assert_eq!(g0.amax(), 0.0);
        let h0 = hessian(&data, &[0.0], &theta).unwrap();
        assert_eq!(h0.amax(), 0.0);
    }

    #[test]
    fn intercept_only_closed_form() {
        let n1 = 30;
        let n0 = 70;
        let rows = vec![vec![0.0]; n1 + n0];
        let y: Vec<u8> = (0..n1 + n0).map(|i| u8::from(i < n1)).collect();
        let data = Dataset::from_rows(&rows, y).unwrap();
        // x ≡ 0 leaves beta unidentified by the data; the Hessian is singular in
        // that direction, so the ridge fallback keeps beta at its start value.
        let fit = fit_mle(&data, &vec![1.0; n1 + n0], &Coefficients::zeros(1), &SolverSettings::default())
            .unwrap();
        assert!(fit.converged);
        assert!((fit.theta.alpha - (n1 as f64 / n0 as f64).ln()).abs() < 1e-10);
        assert_eq!(fit.theta.beta[0], 0.0);
    }

    #[test]
    fn all_one_class_is_an_error() {
        let data = Dataset::from_rows(&[vec![0.1], vec![0.3]], vec![1, 1]).unwrap();
        let err = fit_mle(&data, &[1.0, 1.0], &Coefficients::zeros(1), &SolverSettings::default()).unwrap_err();
        assert_eq!(err, Error::AllOneClass);
        // a zero-weighted control does not count
        let data = Dataset::from_rows(&[vec![0.1], vec![0.3]], vec![1, 0]).unwrap();
        let err = fit_mle(&data, &[1.0, 0.0], &Coefficients::zeros(1), &SolverSettings::default()).unwrap_err();
        assert_eq!(err, Error::AllOneClass);
    }

    #[test]
    fn separated_data_is_detected() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y = (0..10).map(|i| u8::from(i >= 5)).collect();
        let data = Dataset::from_rows(&rows, y).unwrap();
        let err = fit_mle(&data, &[1.0; 10], &Coefficients::zeros(1), &SolverSettings::default()).unwrap_err();
        assert!(matches!(err, Error::Separation { .. }));
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let data = Dataset::from_rows(&[vec![0.1], vec![0.3]], vec![1, 0]).unwrap();
        let bad = SolverSettings { tol: 0.0, ..SolverSettings::default() };
        assert!(fit_mle(&data, &[1.0, 1.0], &Coefficients::zeros(1), &bad).is_err());
        let bad = SolverSettings { max_iter: 0, ..SolverSettings::default() };
        assert!(fit_mle(&data, &[1.0, 1.0], &Coefficients::zeros(1), &bad).is_err());
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::from_rows(&[vec![0.0]], vec![2]).is_err());
        assert!(Dataset::from_rows(&[vec![f64::NAN]], vec![1]).is_err());
        assert!(Dataset::new(Covariates::from_column(vec![1.0, 2.0]).unwrap(), vec![1]).is_err());
        let data = Dataset::from_rows(&[vec![0.0], vec![1.0], vec![2.0]], vec![1, 0, 1]).unwrap();
        assert_eq!((data.n(), data.n1(), data.n0(), data.dim()), (3, 2, 1, 1));
    }
}

//! Asymptotic covariance matrices of `√n1·(θ̂ − θ_t)` for the five estimators.
//!
//! Expectations over the covariate law are plug-in averages over a supplied
//! covariate sample. With `z = (1, xᵀ)ᵀ` and `e(x) = exp(βᵀx)`:
//!
//! | estimator | covariance |
//! |-----------|-----------|
//! | full      | `E(e)·M_f⁻¹`, `M_f = E(e zzᵀ)` |
//! | under-w   | `E(e)·M_f⁻¹ M_w M_f⁻¹`, `M_w = E{e(1 + c e) zzᵀ}` |
//! | under-bc  | `E(e)·M_bc⁻¹`, `M_bc = E{e/(1 + c e) zzᵀ}` |
//! | over-w    | `κ(λ)·E(e)·M_f⁻¹` |
//! | over-bc   | `κ(λ)·E(e)·M_2⁻¹ M_1 M_2⁻¹`, `M_1 = E{e/(1 + c_o e)² zzᵀ}`, `M_2 = E{e/(1 + c_o e) zzᵀ}` |
//!
//! where `κ(λ) = ((1+λ)² + λ)/(1+λ)²`, `c = e^{α_t}/π0` and `c_o = λ e^{α_t}`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::estimators::EstimatorFamily;
use crate::model::{dot, Covariates};
use crate::sampling::{check_lambda, check_pi0};

/// Largest admissible `βᵀx` before the integrand is considered overflowed.
pub const EXPONENT_GUARD: f64 = 700.0;

/// Condition number above which a moment matrix is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Default relative tolerance of Loewner comparisons.
pub const LOEWNER_TOL: f64 = 1e-8;

/// The weight multiplying `e(x) zzᵀ` inside a moment matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentTransform {
    /// 1
    Plain,
    /// `1 + c·e(x)`
    Times(f64),
    /// `1 / (1 + c·e(x))`
    Over(f64),
    /// `1 / (1 + c·e(x))²`
    OverSquared(f64),
}

impl MomentTransform {
    fn constant(&self) -> f64 {
        match *self {
            MomentTransform::Plain => 0.0,
            MomentTransform::Times(c) | MomentTransform::Over(c) | MomentTransform::OverSquared(c) => c,
        }
    }

    fn apply(&self, e: f64) -> f64 {
        match *self {
            MomentTransform::Plain => e,
            MomentTransform::Times(c) => e * (1.0 + c * e),
            MomentTransform::Over(c) => e / (1.0 + c * e),
            MomentTransform::OverSquared(c) => {
                let denom = 1.0 + c * e;
                e / (denom * denom)
            }
        }
    }
}

/// A plug-in moment matrix together with the plug-in `E(e^{βᵀx})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub matrix: DMatrix<f64>,
    pub mean_exp: f64,
}

/// Empirical average of `transform(e^{βᵀx})·zzᵀ` over the sample.
pub fn moment_matrix(xs: &Covariates, beta: &[f64], transform: MomentTransform) -> Result<Moments> {
    let d = xs.dim();
    if beta.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: beta.len() });
    }
    let m = xs.n_rows();
    if m == 0 {
        return Err(Error::EmptySample);
    }
    if m < d + 1 {
        return Err(Error::InvalidParameter(format!("need at least {} covariate rows, got {m}", d + 1)));
    }
    let c = transform.constant();
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("moment constant must be finite and >= 0, got {c}")));
    }

    let p = d + 1;
    let mut acc = DMatrix::<f64>::zeros(p, p);
    let mut exp_sum = 0.0;
    for x in xs.rows() {
        let t = dot(beta, x);
        if t > EXPONENT_GUARD || !t.is_finite() {
            return Err(Error::NonFinite("moment integrand"));
        }
        let e = t.exp();
        exp_sum += e;
        let g = transform.apply(e);
        acc[(0, 0)] += g;
        for j in 0..d {
            acc[(0, j + 1)] += g * x[j];
            for k in j..d {
                acc[(j + 1, k + 1)] += g * x[j] * x[k];
            }
        }
    }
    for j in 0..p {
        for k in 0..j {
            acc[(j, k)] = acc[(k, j)];
        }
    }
    let scale = 1.0 / m as f64;
    Ok(Moments { matrix: acc * scale, mean_exp: exp_sum * scale })
}

/// Inverse of a symmetric positive-definite matrix via its eigendecomposition,
/// plus the condition number.
pub fn invert_spd(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularMatrix { condition });
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l));
    let inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
    Ok((symmetrize(&inv), condition))
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Scaling convention of every [`VarianceReport`]: the covariance of `√n1·(θ̂ − θ_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    SqrtN1,
}

/// An asymptotic covariance matrix tagged with its estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceReport {
    pub family: EstimatorFamily,
    pub v: DMatrix<f64>,
    pub scaling: Scaling,
    pub c: Option<f64>,
    pub c_o: Option<f64>,
    pub lambda: Option<f64>,
    /// Plug-in `E(e^{βᵀx})`.
    pub mean_exp: f64,
    /// Largest condition number among the inverted moment matrices.
    pub condition: f64,
}

/// Variance inflation factor `((1+λ)² + λ)/(1+λ)²` of the over-sampled weighted estimator.
pub fn oversampling_factor(lambda: f64) -> f64 {
    let s = (1.0 + lambda) * (1.0 + lambda);
    (s + lambda) / s
}

fn check_constant(name: &str, c: f64) -> Result<()> {
    if c >= 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {c}")))
    }
}

/// `E(e)·M_f⁻¹`.
pub fn v_full(xs: &Covariates, beta: &[f64]) -> Result<VarianceReport> {
    let mf = moment_matrix(xs, beta, MomentTransform::Plain)?;
    let (inv, condition) = invert_spd(&mf.matrix)?;
    Ok(VarianceReport {
        family: EstimatorFamily::Full,
        v: inv * mf.mean_exp,
        scaling: Scaling::SqrtN1,
        c: None,
        c_o: None,
        lambda: None,
        mean_exp: mf.mean_exp,
        condition,
    })
}

/// Sandwich `E(e)·M_f⁻¹ M_w M_f⁻¹`; at `c = 0` this is exactly [`v_full`].
pub fn v_under_weighted(xs: &Covariates, beta: &[f64], c: f64) -> Result<VarianceReport> {
    check_constant("c", c)?;
    let mut report = v_full(xs, beta)?;
    report.c = Some(c);
    report.family = EstimatorFamily::UnderWeighted;
    if c == 0.0 {
        return Ok(report);
    }
    let mf = moment_matrix(xs, beta, MomentTransform::Plain)?;
    let mw = moment_matrix(xs, beta, MomentTransform::Times(c))?;
    let (inv, condition) = invert_spd(&mf.matrix)?;
    report.v = symmetrize(&(&inv * &mw.matrix * &inv * mf.mean_exp));
    report.condition = condition;
    Ok(report)
}

/// `E(e)·M_bc⁻¹`.
pub fn v_under_bc(xs: &Covariates, beta: &[f64], c: f64) -> Result<VarianceReport> {
    check_constant("c", c)?;
    let mbc = moment_matrix(xs, beta, MomentTransform::Over(c))?;
    let (inv, condition) = invert_spd(&mbc.matrix)?;
    Ok(VarianceReport {
        family: EstimatorFamily::UnderBiasCorrected,
        v: inv * mbc.mean_exp,
        scaling: Scaling::SqrtN1,
        c: Some(c),
        c_o: None,
        lambda: None,
        mean_exp: mbc.mean_exp,
        condition,
    })
}

/// `κ(λ)·E(e)·M_f⁻¹`.
pub fn v_over_weighted(xs: &Covariates, beta: &[f64], lambda: f64) -> Result<VarianceReport> {
    check_lambda(lambda)?;
    let mut report = v_full(xs, beta)?;
    report.v *= oversampling_factor(lambda);
    report.family = EstimatorFamily::OverWeighted;
    report.lambda = Some(lambda);
    Ok(report)
}

/// `κ(λ)·E(e)·M_2⁻¹ M_1 M_2⁻¹`; at `c_o = 0` this is exactly [`v_over_weighted`].
pub fn v_over_bc(xs: &Covariates, beta: &[f64], lambda: f64, c_o: f64) -> Result<VarianceReport> {
    check_constant("c_o", c_o)?;
    let mut report = v_over_weighted(xs, beta, lambda)?;
    report.family = EstimatorFamily::OverBiasCorrected;
    report.c_o = Some(c_o);
    if c_o == 0.0 {
        return Ok(report);
    }
    let m1 = moment_matrix(xs, beta, MomentTransform::OverSquared(c_o))?;
    let m2 = moment_matrix(xs, beta, MomentTransform::Over(c_o))?;
    let (inv, condition) = invert_spd(&m2.matrix)?;
    report.v = symmetrize(&(&inv * &m1.matrix * &inv * (m2.mean_exp * oversampling_factor(lambda))));
    report.condition = condition;
    Ok(report)
}

/// Limit constants `c = e^{α_t}/π0` and `c_o = λ e^{α_t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstants {
    pub c: Option<f64>,
    pub c_o: Option<f64>,
}

pub fn limit_constants(alpha_t: f64, pi0: Option<f64>, lambda: Option<f64>) -> Result<LimitConstants> {
    if !alpha_t.is_finite() {
        return Err(Error::NonFinite("alpha_t"));
    }
    if let Some(pi0) = pi0 {
        check_pi0(pi0)?;
    }
    if let Some(lambda) = lambda {
        check_lambda(lambda)?;
    }
    let e = alpha_t.exp();
    Ok(LimitConstants { c: pi0.map(|p| e / p), c_o: lambda.map(|l| l * e) })
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

/// `a ≥ b` in the Loewner order: the smallest eigenvalue of `a − b` is at
/// least `−tol·max(|tr a|, |tr b|)`.
pub fn loewner_ge(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.nrows() });
    }
    let scale = a.trace().abs().max(b.trace().abs());
    let asymmetry = max_asymmetry(a).max(max_asymmetry(b));
    if asymmetry > tol * scale.max(f64::MIN_POSITIVE) && asymmetry > 0.0 {
        return Err(Error::Asymmetric { asymmetry });
    }
    Ok(min_eigenvalue(&(a - b)) >= -tol * scale)
}

/// Smallest eigenvalue of `E(vvᵀ)⁻¹ E(h vvᵀ) E(vvᵀ)⁻¹ − E(h⁻¹vvᵀ)⁻¹` under the
/// empirical measure of the rows of `vs`, after scaling the difference by the
/// trace of its first term.
pub fn proposition1_gap(vs: &DMatrix<f64>, hs: &[f64]) -> Result<f64> {
    let (m, k) = vs.shape();
    if hs.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: hs.len() });
    }
    if m == 0 {
        return Err(Error::EmptySample);
    }
    if let Some(&h) = hs.iter().find(|&&h| !(h > 0.0 && h.is_finite())) {
        return Err(Error::InvalidParameter(format!("h must be positive, got {h}")));
    }
    let mut evv = DMatrix::<f64>::zeros(k, k);
    let mut ehvv = DMatrix::<f64>::zeros(k, k);
    let mut einv = DMatrix::<f64>::zeros(k, k);
    for (row, &h) in vs.row_iter().zip(hs) {
        let outer = row.transpose() * row;
        evv += &outer;
        ehvv += &outer * h;
        einv += &outer / h;
    }
    let scale = 1.0 / m as f64;
    let (evv_inv, _) = invert_spd(&(evv * scale))?;
    let (einv_inv, _) = invert_spd(&(einv * scale))?;
    let sandwich = symmetrize(&(&evv_inv * (ehvv * scale) * &evv_inv));
    let norm = sandwich.trace().abs().max(f64::MIN_POSITIVE);
    Ok(min_eigenvalue(&(sandwich - einv_inv)) / norm)
}

/// Checks `{E(h⁻¹vvᵀ)}⁻¹ ≤ {E(vvᵀ)}⁻¹E(hvvᵀ){E(vvᵀ)}⁻¹` on the sample, with
/// relative tolerance `tol`.
pub fn proposition1_check(vs: &DMatrix<f64>, hs: &[f64], tol: f64) -> Result<bool> {
    Ok(proposition1_gap(vs, hs)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_sample() -> Covariates {
        Covariates::from_column((0..200).map(|i| -2.0 + 4.0 * f64::from(i) / 199.0).collect()).unwrap()
    }

    #[test]
    fn zero_beta_gives_second_moment_of_z() {
        let xs = grid_sample();
        let m = moment_matrix(&xs, &[0.0], MomentTransform::Plain).unwrap();
        let n = xs.n_rows() as f64;
        let mean: f64 = xs.as_slice().iter().sum::<f64>() / n;
        let sq: f64 = xs.as_slice().iter().map(|x| x * x).sum::<f64>() / n;
        assert_eq!(m.mean_exp, 1.0);
        assert!((m.matrix[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((m.matrix[(0, 1)] - mean).abs() < 1e-14);
        assert!((m.matrix[(1, 1)] - sq).abs() < 1e-14);
    }

    #[test]
    fn zero_constant_transforms_equal_plain() {
        let xs = grid_sample();
        let plain = moment_matrix(&xs, &[0.7], MomentTransform::Plain).unwrap();
        for t in [MomentTransform::Times(0.0), MomentTransform::Over(0.0), MomentTransform::OverSquared(0.0)] {
            assert_eq!(moment_matrix(&xs, &[0.7], t).unwrap(), plain);
        }
    }

    #[test]
    fn overflow_and_bad_inputs() {
        let xs = Covariates::from_column(vec![1000.0, 0.0, 1.0]).unwrap();
        assert!(matches!(moment_matrix(&xs, &[1.0], MomentTransform::Plain), Err(Error::NonFinite(_))));
        let xs = Covariates::from_column(vec![1.0]).unwrap();
        assert!(moment_matrix(&xs, &[1.0], MomentTransform::Plain).is_err());
        let xs = grid_sample();
        assert!(moment_matrix(&xs, &[1.0, 2.0], MomentTransform::Plain).is_err());
        assert!(moment_matrix(&xs, &[1.0], MomentTransform::Times(-1.0)).is_err());
    }

    #[test]
    fn singular_moment_matrix_is_reported() {
        let xs = Covariates::from_column(vec![1.0; 10]).unwrap();
        assert!(matches!(v_full(&xs, &[1.0]), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn factor_values() {
        assert_eq!(oversampling_factor(0.0), 1.0);
        assert_eq!(oversampling_factor(1.0), 1.25);
        assert!((oversampling_factor(3.48) - 1.173_389_668_367_347).abs() < 1e-14);
        assert!(oversampling_factor(1e6) < 1.0 + 2e-6);
    }

    #[test]
    fn limit_constant_values() {
        let lc = limit_constants(-6.0, Some(0.01), Some(53.6)).unwrap();
        assert!((lc.c.unwrap() - 0.247_875_217_666_635_84).abs() < 1e-14);
        assert!((lc.c_o.unwrap() - 0.132_861_116_669_316_8).abs() < 1e-14);
        assert_eq!(limit_constants(-6.0, None, Some(0.0)).unwrap().c_o, Some(0.0));
        assert!(limit_constants(-6.0, Some(0.0), None).is_err());
        assert!(limit_constants(-6.0, None, Some(-1.0)).is_err());
    }

    #[test]
    fn loewner_examples() {
        let i = DMatrix::<f64>::identity(2, 2);
        let z = DMatrix::<f64>::zeros(2, 2);
        assert!(loewner_ge(&i, &z, LOEWNER_TOL).unwrap());
        assert!(loewner_ge(&i, &i, LOEWNER_TOL).unwrap());
        let a = DMatrix::from_diagonal_element(2, 2, 1.0);
        let mut a = a;
        a[(1, 1)] = 2.0;
        let mut b = DMatrix::from_diagonal_element(2, 2, 1.0);
        b[(0, 0)] = 2.0;
        assert!(!loewner_ge(&a, &b, LOEWNER_TOL).unwrap());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(loewner_ge(&asym, &i, LOEWNER_TOL), Err(Error::Asymmetric { .. })));
        assert!(loewner_ge(&i, &DMatrix::zeros(3, 3), LOEWNER_TOL).is_err());
    }

    #[test]
    fn weighted_inequality_with_constant_h_is_tight() {
        let vs = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, -1.0]);
        let gap = proposition1_gap(&vs, &[1.0; 4]).unwrap();
        assert!(gap.abs() < 1e-14);
        assert!(proposition1_check(&vs, &[1.0; 4], 1e-8).unwrap());
        assert!(proposition1_check(&vs, &[1.0, 0.0, 1.0, 1.0], 1e-8).is_err());
    }
}

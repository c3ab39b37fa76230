//! Reference computations shared by the integration tests. None of them call
//! into the solver or the moment code of the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use rarelogit::model::{self, Coefficients, Dataset};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random logistic data with `d` covariates; labels drawn from the model at `theta`.
pub fn random_dataset(rng: &mut ChaCha20Rng, n: usize, theta: &Coefficients) -> Dataset {
    let d = theta.dim();
    loop {
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..d).map(|_| StandardNormal.sample(&mut *rng)).collect()).collect();
        let y: Vec<u8> = rows
            .iter()
            .map(|r| {
                let eta = theta.alpha + r.iter().zip(&theta.beta).map(|(a, b)| a * b).sum::<f64>();
                u8::from(rng.random::<f64>() < 1.0 / (1.0 + (-eta).exp()))
            })
            .collect();
        let n1 = y.iter().filter(|&&v| v == 1).count();
        if n1 > 0 && n1 < n {
            return Dataset::from_rows(&rows, y).unwrap();
        }
    }
}

pub fn random_weights(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.1..3.0)).collect()
}

/// Log-likelihood written out term by term with the textbook formula.
pub fn naive_loglik(data: &Dataset, weights: &[f64], alpha: f64, beta: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..data.n() {
        let eta = alpha + data.row(i).iter().zip(beta).map(|(a, b)| a * b).sum::<f64>();
        let y = f64::from(data.label(i));
        total += weights[i] * (y * eta - (1.0 + eta.exp()).ln());
    }
    total
}

pub fn theta_vec(theta: &Coefficients) -> Vec<f64> {
    std::iter::once(theta.alpha).chain(theta.beta.iter().copied()).collect()
}

pub fn theta_from(v: &[f64]) -> Coefficients {
    Coefficients::new(v[0], v[1..].to_vec())
}

/// Central-difference gradient of the library objective.
pub fn fd_gradient(data: &Dataset, w: &[f64], theta: &Coefficients, h: f64) -> Vec<f64> {
    let base = theta_vec(theta);
    (0..base.len())
        .map(|j| {
            let mut up = base.clone();
            let mut dn = base.clone();
            up[j] += h;
            dn[j] -= h;
            let fu = model::log_likelihood(data, w, &theta_from(&up)).unwrap();
            let fd = model::log_likelihood(data, w, &theta_from(&dn)).unwrap();
            (fu - fd) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Jacobian of the library gradient, row-major.
pub fn fd_hessian(data: &Dataset, w: &[f64], theta: &Coefficients, h: f64) -> Vec<Vec<f64>> {
    let base = theta_vec(theta);
    let p = base.len();
    let mut out = vec![vec![0.0; p]; p];
    for j in 0..p {
        let mut up = base.clone();
        let mut dn = base.clone();
        up[j] += h;
        dn[j] -= h;
        let gu = model::gradient(data, w, &theta_from(&up)).unwrap();
        let gd = model::gradient(data, w, &theta_from(&dn)).unwrap();
        for i in 0..p {
            out[i][j] = (gu[i] - gd[i]) / (2.0 * h);
        }
    }
    out
}

/// Max-norm relative error, with unit floor on the reference scale.
pub fn rel_err(got: &[f64], want: &[f64]) -> f64 {
    let diff = got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let scale = want.iter().map(|v| v.abs()).fold(1.0, f64::max);
    diff / scale
}

/// Brute-force maximizer over `[-10, 10]²` for one covariate: a full grid at
/// step 0.02, then repeated tenfold refinement of a window around the best
/// point down to step 1e-6. Returns `None` when the best point sits on the
/// outer boundary.
pub fn grid_argmax(data: &Dataset, weights: &[f64]) -> Option<(f64, f64)> {
    assert_eq!(data.dim(), 1);
    let f = |a: f64, b: f64| naive_loglik(data, weights, a, &[b]);
    let mut step = 0.02;
    let (mut best_a, mut best_b) = (0.0, 0.0);
    let mut best = f64::NEG_INFINITY;
    let k = (20.0 / step) as i64;
    for i in 0..=k {
        for j in 0..=k {
            let (a, b) = (-10.0 + i as f64 * step, -10.0 + j as f64 * step);
            let v = f(a, b);
            if v > best {
                best = v;
                best_a = a;
                best_b = b;
            }
        }
    }
    if best_a.abs() > 10.0 - 2.0 * step || best_b.abs() > 10.0 - 2.0 * step {
        return None;
    }
    while step > 1e-6 {
        let (ca, cb) = (best_a, best_b);
        let fine = step / 10.0;
        for i in -20..=20 {
            for j in -20..=20 {
                let (a, b) = (ca + i as f64 * fine, cb + j as f64 * fine);
                let v = f(a, b);
                if v > best {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        step = fine;
    }
    Some((best_a, best_b))
}

/// `E g(X)` for `X ~ N(0,1)` by composite Simpson on `[-15, 15]`.
pub fn gauss_expect(g: impl Fn(f64) -> f64) -> f64 {
    let n = 60_000;
    let (a, b) = (-15.0f64, 15.0f64);
    let h = (b - a) / n as f64;
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = 0.0;
    for i in 0..=n {
        let x = a + i as f64 * h;
        let wgt = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s += wgt * g(x) * phi(x);
    }
    s * h / 3.0
}

pub type Mat2 = [[f64; 2]; 2];

/// `E w(x) z zᵀ` for `z = (1, x)`, `x ~ N(0,1)`.
pub fn gauss_moment(w: impl Fn(f64) -> f64) -> Mat2 {
    let m00 = gauss_expect(|x| w(x));
    let m01 = gauss_expect(|x| w(x) * x);
    let m11 = gauss_expect(|x| w(x) * x * x);
    [[m00, m01], [m01, m11]]
}

pub fn inv2(m: Mat2) -> Mat2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

pub fn mul2(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn scale2(s: f64, a: Mat2) -> Mat2 {
    [[s * a[0][0], s * a[0][1]], [s * a[1][0], s * a[1][1]]]
}

/// Reference covariances for one covariate `x ~ N(0,1)` and slope `beta`.
pub struct GaussianReference {
    pub beta: f64,
}

impl GaussianReference {
    fn e(&self) -> f64 {
        gauss_expect(|x| (self.beta * x).exp())
    }

    fn mf(&self) -> Mat2 {
        let b = self.beta;
        gauss_moment(move |x| (b * x).exp())
    }

    pub fn full(&self) -> Mat2 {
        scale2(self.e(), inv2(self.mf()))
    }

    pub fn under_weighted(&self, c: f64) -> Mat2 {
        let b = self.beta;
        let mw = gauss_moment(move |x| (b * x).exp() * (1.0 + c * (b * x).exp()));
        let mi = inv2(self.mf());
        scale2(self.e(), mul2(mul2(mi, mw), mi))
    }

    pub fn under_bc(&self, c: f64) -> Mat2 {
        let b = self.beta;
        let mbc = gauss_moment(move |x| (b * x).exp() / (1.0 + c * (b * x).exp()));
        scale2(self.e(), inv2(mbc))
    }

    pub fn over_bc(&self, lambda: f64, c_o: f64) -> Mat2 {
        let b = self.beta;
        let m1 = gauss_moment(move |x| (b * x).exp() / (1.0 + c_o * (b * x).exp()).powi(2));
        let m2 = gauss_moment(move |x| (b * x).exp() / (1.0 + c_o * (b * x).exp()));
        let m2i = inv2(m2);
        let factor = ((1.0 + lambda).powi(2) + lambda) / (1.0 + lambda).powi(2);
        scale2(factor * self.e(), mul2(mul2(m2i, m1), m2i))
    }
}

/// Max entrywise relative deviation of a 2×2 matrix from a reference.
pub fn max_rel_dev(got: &nalgebra::DMatrix<f64>, want: Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((got[(i, j)] - want[i][j]).abs() / want[i][j].abs());
        }
    }
    worst
}

//! Integration backends for Gauss states: tensor Gauss-Hermite rules in the
//! probabilists' convention (weight function is the standard normal density,
//! weights sum to one) and counter-seeded Monte Carlo.
//!
//! Both are deterministic: rules are built by a symmetric tridiagonal
//! eigensolve, and the Monte Carlo stream is a pure function of
//! `(seed, path, dimension)` so the result is independent of thread schedule.

use crate::gauss::GaussState;
use crate::linalg::{pairwise_sum, psd_sqrt_factor, sym_eigen_sorted};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadratureError {
    #[error("rule size {n} outside supported range 1..={max}")]
    SizeLimit { n: usize, max: usize },
    #[error("tensor dimension {dim} exceeds cap {max}")]
    DimLimit { dim: usize, max: usize },
    #[error("rule dimension {rule} does not match state dimension {state}")]
    DimMismatch { rule: usize, state: usize },
    #[error("covariance factorization failed: eigenvalue {eigenvalue:.3e}")]
    FactorizationFailure { eigenvalue: f64 },
}

pub const MAX_NODES: usize = 512;
pub const MAX_TENSOR_DIM: usize = 3;

/// A tensor quadrature rule against the standard normal weight.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: usize,
    nodes_1d: Vec<f64>,
    weights_1d: Vec<f64>,
}

impl QuadratureRule {
    /// Probabilists' Gauss-Hermite rule with `n` points per dimension,
    /// tensorised over `dim` dimensions. Nodes and weights come from the
    /// Golub-Welsch eigensolve of the Jacobi matrix (off-diagonal sqrt(k)).
    pub fn gauss_hermite(n: usize, dim: usize) -> Result<Self, QuadratureError> {
        if n < 1 || n > MAX_NODES {
            return Err(QuadratureError::SizeLimit { n, max: MAX_NODES });
        }
        if dim < 1 || dim > MAX_TENSOR_DIM {
            return Err(QuadratureError::DimLimit {
                dim,
                max: MAX_TENSOR_DIM,
            });
        }
        let mut jacobi = DMatrix::zeros(n, n);
        for k in 1..n {
            let b = (k as f64).sqrt();
            jacobi[(k - 1, k)] = b;
            jacobi[(k, k - 1)] = b;
        }
        let (values, vectors) = sym_eigen_sorted(&jacobi);
        let nodes_1d: Vec<f64> = values.iter().copied().collect();
        let mut weights_1d: Vec<f64> = (0..n).map(|k| vectors[(0, k)].powi(2)).collect();
        let total: f64 = weights_1d.iter().sum();
        for w in &mut weights_1d {
            *w /= total;
        }
        Ok(QuadratureRule {
            dim,
            nodes_1d,
            weights_1d,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len_1d(&self) -> usize {
        self.nodes_1d.len()
    }

    pub fn nodes_1d(&self) -> &[f64] {
        &self.nodes_1d
    }

    pub fn weights_1d(&self) -> &[f64] {
        &self.weights_1d
    }

    /// Iterate the tensor grid: `visit(node, weight)` for every point of the
    /// `dim`-fold product rule, in row-major node order.
    pub fn for_each<F: FnMut(&DVector<f64>, f64)>(&self, mut visit: F) {
        let n = self.nodes_1d.len();
        let total = n.pow(self.dim as u32);
        let mut node = DVector::zeros(self.dim);
        for flat in 0..total {
            let mut rest = flat;
            let mut weight = 1.0;
            for d in (0..self.dim).rev() {
                let i = rest % n;
                rest /= n;
                node[d] = self.nodes_1d[i];
                weight *= self.weights_1d[i];
            }
            visit(&node, weight);
        }
    }

    /// Expectation of `f` under the standard normal in `dim` dimensions.
    pub fn integrate_standard<F: Fn(&DVector<f64>) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        self.for_each(|node, w| acc += w * f(node));
        acc
    }
}

/// Expectation of `f` under a Gauss state: nodes are mapped through
/// `mu + L z` where `L Lᵀ = nu`. Rank-deficient covariances collapse the rule
/// onto the range of the covariance.
pub fn integrate_gauss<F: Fn(&DVector<f64>) -> f64>(
    state: &GaussState,
    f: F,
    rule: &QuadratureRule,
) -> Result<f64, QuadratureError> {
    if rule.dim() != state.dim() {
        return Err(QuadratureError::DimMismatch {
            rule: rule.dim(),
            state: state.dim(),
        });
    }
    let factor = covariance_factor(state)?;
    let mu = state.mean();
    let mut acc = 0.0;
    rule.for_each(|node, w| {
        let x = mu + &factor * node;
        acc += w * f(&x);
    });
    Ok(acc)
}

fn covariance_factor(state: &GaussState) -> Result<DMatrix<f64>, QuadratureError> {
    psd_sqrt_factor(state.covariance()).ok_or_else(|| {
        let (values, _) = sym_eigen_sorted(state.covariance());
        QuadratureError::FactorizationFailure {
            eigenvalue: values[0],
        }
    })
}

/// Monte Carlo configuration: a fixed seed and path count give a bit-identical
/// estimate on any thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    pub paths: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            seed: 0x5EED,
            paths: 1 << 20,
        }
    }
}

/// Monte Carlo estimate of the expectation of `f` under a Gauss state.
/// Returns `(estimate, standard_error)`.
pub fn mc_integrate<F: Fn(&DVector<f64>) -> f64 + Sync>(
    state: &GaussState,
    f: F,
    cfg: McConfig,
) -> Result<(f64, f64), QuadratureError> {
    let factor = covariance_factor(state)?;
    let mu = state.mean();
    let dim = state.dim();
    let values: Vec<f64> = (0..cfg.paths)
        .into_par_iter()
        .map(|path| {
            let mut z = DVector::zeros(dim);
            for d in 0..dim {
                z[d] = normal_draw(cfg.seed, path, d as u64);
            }
            let x = mu + &factor * z;
            f(&x)
        })
        .collect();
    let n = cfg.paths as f64;
    let mean = pairwise_sum(&values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let variance = pairwise_sum(&sq) / (n - 1.0).max(1.0);
    Ok((mean, (variance / n).sqrt()))
}

/// Standard normal draw keyed by `(seed, path, dimension)`.
pub fn normal_draw(seed: u64, path: u64, dimension: u64) -> f64 {
    let u = uniform_draw(seed, path, dimension);
    inverse_normal_cdf(u)
}

/// Uniform draw in (0, 1) from a splitmix-style counter hash.
pub fn uniform_draw(seed: u64, path: u64, dimension: u64) -> f64 {
    let mut key = seed;
    key = splitmix(key ^ path.wrapping_mul(0x9E3779B97F4A7C15));
    key = splitmix(key ^ dimension.wrapping_mul(0xBF58476D1CE4E5B9));
    // 53 random bits into (0,1), offset half a ulp away from the endpoints
    (((key >> 11) as f64) + 0.5) * (1.0 / 9007199254740992.0)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Inverse standard-normal CDF: Acklam's rational approximation polished with
/// one Halley step against erfc, accurate to near machine precision.
pub fn inverse_normal_cdf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "probability out of range: {p}");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // Halley refinement on Φ(x) − p = 0
    let e = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_point_rule_is_plus_minus_one() {
        let rule = QuadratureRule::gauss_hermite(2, 1).unwrap();
        assert_relative_eq!(rule.nodes_1d()[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(rule.nodes_1d()[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(rule.weights_1d()[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(rule.weights_1d()[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn second_moment_is_exact() {
        for n in 2..=6 {
            let rule = QuadratureRule::gauss_hermite(n, 1).unwrap();
            let m2 = rule.integrate_standard(|z| z[0] * z[0]);
            assert_relative_eq!(m2, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn polynomial_exactness_to_degree_2n_minus_1() {
        // E[x^{2k}] = (2k-1)!!, odd moments vanish
        for n in 1..=10usize {
            let rule = QuadratureRule::gauss_hermite(n, 1).unwrap();
            for degree in 0..(2 * n) {
                let est = rule.integrate_standard(|z| z[0].powi(degree as i32));
                let exact = if degree % 2 == 1 {
                    0.0
                } else {
                    (1..=degree).step_by(2).map(|k| k as f64).product::<f64>()
                };
                if exact == 0.0 {
                    // odd moments cancel by symmetry; measure the rounding
                    // against the magnitude of the absolute-moment integrand
                    let scale = rule.integrate_standard(|z| z[0].abs().powi(degree as i32));
                    assert!(
                        est.abs() <= 1e-12 * scale.max(1.0),
                        "n={n} degree={degree} est={est} scale={scale}"
                    );
                } else {
                    assert_relative_eq!(est, exact, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn gaussian_integrand_converges() {
        let rule = QuadratureRule::gauss_hermite(64, 1).unwrap();
        let est = rule.integrate_standard(|z| (0.25 * z[0] * z[0]).exp());
        assert_relative_eq!(est, 2.0_f64.sqrt(), epsilon = 1e-8);
    }

    #[test]
    fn integrate_gauss_constant_and_mean() {
        let state = GaussState::new(
            DVector::from_vec(vec![1.5, -0.5]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]),
        )
        .unwrap();
        let rule = QuadratureRule::gauss_hermite(16, 2).unwrap();
        assert_relative_eq!(
            integrate_gauss(&state, |_| 1.0, &rule).unwrap(),
            1.0,
            epsilon = 1e-13
        );
        assert_relative_eq!(
            integrate_gauss(&state, |x| x[0], &rule).unwrap(),
            1.5,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            integrate_gauss(&state, |x| x[1], &rule).unwrap(),
            -0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn singular_covariance_collapses_to_range() {
        // rank-1 covariance in d=2: integral equals a 1-D rule along the range
        let v = DVector::from_vec(vec![0.8, 0.6]);
        let nu = &v * v.transpose();
        let state = GaussState::new(DVector::zeros(2), nu).unwrap();
        let rule2 = QuadratureRule::gauss_hermite(32, 2).unwrap();
        let f = |x: &DVector<f64>| (x[0] + 2.0 * x[1]).exp();
        let est = integrate_gauss(&state, f, &rule2).unwrap();
        // 1-D reduction: x = v t with t ~ N(0,1), integrand exp((v0+2 v1) t)
        let rule1 = QuadratureRule::gauss_hermite(32, 1).unwrap();
        let c = v[0] + 2.0 * v[1];
        let expected = rule1.integrate_standard(|t| (c * t[0]).exp());
        assert_relative_eq!(est, expected, max_relative = 1e-10);
    }

    #[test]
    fn mc_is_deterministic_and_exact_on_constants() {
        let state = GaussState::new(DVector::zeros(1), DMatrix::from_element(1, 1, 1.0)).unwrap();
        let cfg = McConfig {
            seed: 42,
            paths: 10_000,
        };
        let (a, se) = mc_integrate(&state, |_| 3.25, cfg).unwrap();
        assert_eq!(a, 3.25);
        assert_eq!(se, 0.0);
        let (b, _) = mc_integrate(&state, |_| 3.25, cfg).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn mc_matches_black_within_three_standard_errors() {
        let state = GaussState::new(DVector::zeros(1), DMatrix::from_element(1, 1, 1.0)).unwrap();
        let sigma = 0.2;
        let payoff = move |x: &DVector<f64>| {
            ((sigma * x[0] - sigma * sigma / 2.0).exp() - 1.0).max(0.0)
        };
        let cfg = McConfig {
            seed: 0x5EED,
            paths: 1 << 18,
        };
        let (est, se) = mc_integrate(&state, payoff, cfg).unwrap();
        let d1 = sigma / 2.0;
        let black = normal_cdf(d1) - normal_cdf(d1 - sigma);
        assert!((est - black).abs() < 3.0 * se, "est {est} black {black} se {se}");
    }

    #[test]
    fn inverse_cdf_round_trips() {
        for &p in &[1e-12, 1e-6, 0.02, 0.3, 0.5, 0.7, 0.98, 1.0 - 1e-6] {
            let x = inverse_normal_cdf(p);
            assert_relative_eq!(normal_cdf(x), p, max_relative = 1e-12);
        }
    }

    #[test]
    fn size_limits_enforced() {
        assert!(QuadratureRule::gauss_hermite(0, 1).is_err());
        assert!(QuadratureRule::gauss_hermite(513, 1).is_err());
        assert!(QuadratureRule::gauss_hermite(8, 4).is_err());
    }
}

//! Local cubature rules with embedded error estimates.
//!
//! Every rule evaluates a high- and a low-order estimate on the same box; the
//! adaptive driver uses `|high - low|` as the local error.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess for the i-th largest root.
            let k = (i + 1) as f64;
            let nf = n as f64;
            let mut x = libm::cos(PI * (k - 0.25) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// High and low estimates on one box, plus `∫|f|` by the high rule.
#[derive(Debug, Clone, Copy)]
pub struct LocalEstimate {
    pub high: f64,
    pub low: f64,
    pub abs_high: f64,
}

impl LocalEstimate {
    /// `|high - low|`, floored at a few hundred ulps of `∫|f|` so that an
    /// exactly integrated box never reports zero error.
    pub fn error(&self) -> f64 {
        let floor = 64.0 * f64::EPSILON * self.abs_high;
        (self.high - self.low).abs().max(floor)
    }
}

pub(crate) fn checked_eval<F>(f: &F, x: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            point: x.to_vec(),
            value: v,
        })
    }
}

/// A local rule applied to a box `[lower, upper]`.
pub trait LocalRule {
    /// Integrand evaluations per application.
    fn evals(&self) -> u64;

    fn apply(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        lower: &[f64],
        upper: &[f64],
    ) -> Result<LocalEstimate>;
}

/// Tensor product of two Gauss–Legendre rules of different order.
#[derive(Debug, Clone)]
pub struct TensorGaussPair {
    dim: usize,
    high: GaussLegendre,
    low: GaussLegendre,
}

impl TensorGaussPair {
    pub fn new(dim: usize, high_points: usize, low_points: usize) -> Self {
        assert!((1..=crate::cubature::MAX_ADAPTIVE_DIM).contains(&dim));
        TensorGaussPair {
            dim,
            high: GaussLegendre::new(high_points),
            low: GaussLegendre::new(low_points),
        }
    }

    fn tensor_sum(
        &self,
        rule: &GaussLegendre,
        f: &dyn Fn(&[f64]) -> f64,
        center: &[f64],
        half: &[f64],
        x: &mut [f64],
    ) -> Result<(f64, f64)> {
        let d = self.dim;
        let m = rule.len();
        let mut idx = [0usize; crate::cubature::MAX_ADAPTIVE_DIM];
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        loop {
            let mut w = 1.0;
            for k in 0..d {
                x[k] = center[k] + half[k] * rule.nodes[idx[k]];
                w *= rule.weights[idx[k]];
            }
            let v = checked_eval(f, x)?;
            sum += w * v;
            abs_sum += w * v.abs();

            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < m {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == d {
                    return Ok((sum, abs_sum));
                }
            }
        }
    }
}

impl LocalRule for TensorGaussPair {
    fn evals(&self) -> u64 {
        let h = self.high.len() as u64;
        let l = self.low.len() as u64;
        h.pow(self.dim as u32) + l.pow(self.dim as u32)
    }

    fn apply(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        lower: &[f64],
        upper: &[f64],
    ) -> Result<LocalEstimate> {
        let d = self.dim;
        let mut center = [0.0; crate::cubature::MAX_ADAPTIVE_DIM];
        let mut half = [0.0; crate::cubature::MAX_ADAPTIVE_DIM];
        let mut jac = 1.0;
        for k in 0..d {
            center[k] = 0.5 * (lower[k] + upper[k]);
            half[k] = 0.5 * (upper[k] - lower[k]);
            jac *= half[k];
        }
        let mut x = [0.0; crate::cubature::MAX_ADAPTIVE_DIM];
        let (high, abs_high) =
            self.tensor_sum(&self.high, f, &center[..d], &half[..d], &mut x[..d])?;
        let (low, _) = self.tensor_sum(&self.low, f, &center[..d], &half[..d], &mut x[..d])?;
        Ok(LocalEstimate {
            high: jac * high,
            low: jac * low,
            abs_high: jac * abs_high,
        })
    }
}

/// Genz–Malik degree-7 rule with its embedded degree-5 companion.
#[derive(Debug, Clone)]
pub struct GenzMalik {
    dim: usize,
    w7: [f64; 5],
    w5: [f64; 4],
}

const GM_LAMBDA2: f64 = 0.358_568_582_800_318_1; // sqrt(9/70)
const GM_LAMBDA4: f64 = 0.948_683_298_050_513_8; // sqrt(9/10)
const GM_LAMBDA5: f64 = 0.688_247_201_611_685_3; // sqrt(9/19)

impl GenzMalik {
    pub fn new(dim: usize) -> Self {
        assert!((2..=crate::cubature::MAX_ADAPTIVE_DIM).contains(&dim));
        let d = dim as f64;
        let w7 = [
            (12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0,
            980.0 / 6561.0,
            (1820.0 - 400.0 * d) / 19683.0,
            200.0 / 19683.0,
            6859.0 / 19683.0 / libm::pow(2.0, d),
        ];
        let w5 = [
            (729.0 - 950.0 * d + 50.0 * d * d) / 729.0,
            245.0 / 486.0,
            (265.0 - 100.0 * d) / 1458.0,
            25.0 / 729.0,
        ];
        GenzMalik { dim, w7, w5 }
    }
}

impl LocalRule for GenzMalik {
    fn evals(&self) -> u64 {
        let d = self.dim as u64;
        1 + 4 * d + 2 * d * (d - 1) + (1u64 << d)
    }

    fn apply(
        &self,
        f: &dyn Fn(&[f64]) -> f64,
        lower: &[f64],
        upper: &[f64],
    ) -> Result<LocalEstimate> {
        const M: usize = crate::cubature::MAX_ADAPTIVE_DIM;
        let d = self.dim;
        let mut c = [0.0; M];
        let mut h = [0.0; M];
        let mut vol = 1.0;
        for k in 0..d {
            c[k] = 0.5 * (lower[k] + upper[k]);
            h[k] = 0.5 * (upper[k] - lower[k]);
            vol *= upper[k] - lower[k];
        }
        let mut x = [0.0; M];
        x[..d].copy_from_slice(&c[..d]);

        let f0 = checked_eval(f, &x[..d])?;
        let mut s2 = 0.0;
        let mut s3 = 0.0;
        let mut a2 = 0.0;
        let mut a3 = 0.0;
        for k in 0..d {
            for sign in [-1.0, 1.0] {
                x[k] = c[k] + sign * GM_LAMBDA2 * h[k];
                let v = checked_eval(f, &x[..d])?;
                s2 += v;
                a2 += v.abs();
                x[k] = c[k] + sign * GM_LAMBDA4 * h[k];
                let v = checked_eval(f, &x[..d])?;
                s3 += v;
                a3 += v.abs();
            }
            x[k] = c[k];
        }
        let mut s4 = 0.0;
        let mut a4 = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                for (si, sj) in [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)] {
                    x[i] = c[i] + si * GM_LAMBDA4 * h[i];
                    x[j] = c[j] + sj * GM_LAMBDA4 * h[j];
                    let v = checked_eval(f, &x[..d])?;
                    s4 += v;
                    a4 += v.abs();
                }
                x[i] = c[i];
                x[j] = c[j];
            }
        }
        let mut s5 = 0.0;
        let mut a5 = 0.0;
        for corner in 0u32..(1u32 << d) {
            for k in 0..d {
                let sign = if corner >> k & 1 == 1 { 1.0 } else { -1.0 };
                x[k] = c[k] + sign * GM_LAMBDA5 * h[k];
            }
            let v = checked_eval(f, &x[..d])?;
            s5 += v;
            a5 += v.abs();
        }
        let w = &self.w7;
        let high = w[0] * f0 + w[1] * s2 + w[2] * s3 + w[3] * s4 + w[4] * s5;
        let abs_high = (w[0] * f0).abs()
            + w[1].abs() * a2
            + w[2].abs() * a3
            + w[3].abs() * a4
            + w[4].abs() * a5;
        let v = &self.w5;
        let low = v[0] * f0 + v[1] * s2 + v[2] * s3 + v[3] * s4;
        Ok(LocalEstimate {
            high: vol * high,
            low: vol * low,
            abs_high: vol * abs_high,
        })
    }
}

//! Gamma function and the closed-form constants it feeds.
//!
//! `C_n = n (Γ(1/n)/n)^n` plays the part of `π/2` for the order-`n`
//! arctangent: `C_2 = π/2`, and every n-term functional relation sums to it.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::arctann::{ArgVector, Order};
use crate::cubature::{integrate_semi_infinite, EvalResult, QuadratureConfig, SemiInfiniteDomain};
use crate::error::{Error, Result};
use crate::math::powu;

// Lanczos approximation, g = 7, n = 9 (the coefficient set used by the GNU
// Scientific Library and Numerical Recipes derivatives).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for `x > 0`.
///
/// Uses the reflection formula below `1/2` so the Lanczos sum is only ever
/// evaluated at arguments `>= 1/2`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "gamma",
            value: x,
        });
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (libm::sin(PI * x) * gamma_positive(1.0 - x));
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) e^-t split in two halves to delay overflow for large z.
    let half = libm::pow(t, 0.5 * (z + 0.5));
    SQRT_2PI * half * libm::exp(-t) * half * sum
}

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `C_n = n (Γ(1/n)/n)^n`, the right-hand side of the order-`n` relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArctanConstant {
    pub order: Order,
    pub value: f64,
}

/// Computes `C_n` as `n · exp(n · ln(Γ(1/n)/n))`.
pub fn arctan_constant(order: Order) -> ArctanConstant {
    let n = order.get() as f64;
    let g = gamma_positive(1.0 / n);
    let value = n * libm::exp(n * libm::log(g / n));
    ArctanConstant { order, value }
}

/// `(Γ(1/n)/n)^n`, the value of `arctan_n(1, ..., 1)`.
pub fn unit_cube_constant(order: Order) -> f64 {
    arctan_constant(order).value / order.get() as f64
}

/// `∫_0^α e^{-t^m} dt = γ(1/m, α^m) / m` in closed form.
///
/// Uses the power series of the lower incomplete gamma function below
/// `α^m < 1/m + 1` and the Lentz continued fraction for the upper function
/// otherwise.
pub fn exp_power_integral(m: u32, alpha: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain {
            function: "exp_power_integral",
            value: 0.0,
        });
    }
    if !(alpha >= 0.0) {
        return Err(Error::Domain {
            function: "exp_power_integral",
            value: alpha,
        });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let s = 1.0 / m as f64;
    if alpha.is_infinite() {
        return Ok(gamma_positive(s) * s);
    }
    let x = powu(alpha, m);
    let lower = if x < s + 1.0 {
        lower_gamma_series(s, x)
    } else {
        gamma_positive(s) - upper_gamma_fraction(s, x)
    };
    Ok(lower * s)
}

fn lower_gamma_series(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut a = s;
    for _ in 0..1000 {
        a += 1.0;
        term *= x / a;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * libm::exp(-x + s * libm::log(x))
}

fn upper_gamma_fraction(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    libm::exp(-x + s * libm::log(x)) * h
}

/// `∫_0^∞ e^{-(c x)^n} dx` by quadrature on the mapped half line.
fn exp_power_tail(n: u32, scale: f64, cfg: &QuadratureConfig) -> Result<EvalResult> {
    let domain = SemiInfiniteDomain::orthant(1)?;
    let f = move |x: &[f64]| libm::exp(-powu(scale * x[0], n));
    integrate_semi_infinite(&f, &domain, cfg)
}

/// `n ∫_0^∞ e^{-x^n} dx`, which equals `Γ(1/n)`.
///
/// Non-convergence is reported via `converged = false`.
pub fn gamma_via_exp_integral(order: Order, cfg: &QuadratureConfig) -> Result<EvalResult> {
    let n = order.get();
    Ok(exp_power_tail(n, 1.0, cfg)?.scale(n as f64))
}

/// `n · u_1 ⋯ u_{n-1} · ∏_{k=0}^{n-1} ∫_0^∞ e^{-(c_k x)^n} dx` with `c_0 = 1`,
/// `c_k = u_k`.
///
/// Substituting `x → x/c_k` shows every factor is `Γ(1/n)/(n c_k)`, so the
/// product is `C_n` for every positive argument vector. The error estimate
/// propagates the relative errors of the factors to first order.
pub fn exp_product_check(
    order: Order,
    args: &ArgVector,
    cfg: &QuadratureConfig,
) -> Result<EvalResult> {
    args.check_order(order)?;
    args.require_positive()?;
    let n = order.get();
    let mut scales: Vec<f64> = Vec::with_capacity(n as usize);
    scales.push(1.0);
    scales.extend_from_slice(args.as_slice());

    let mut value = n as f64;
    let mut rel_err = 0.0;
    let mut evals = 0;
    let mut converged = true;
    for (k, c) in scales.iter().enumerate() {
        let r = exp_power_tail(n, *c, cfg).map_err(|e| Error::Term {
            index: k,
            source: alloc::boxed::Box::new(e),
        })?;
        value *= r.value;
        if k > 0 {
            value *= c;
        }
        rel_err += r.error_estimate / r.value.abs();
        evals += r.evals;
        converged &= r.converged;
    }
    Ok(EvalResult {
        value,
        error_estimate: value.abs() * rel_err,
        evals,
        converged,
    })
}

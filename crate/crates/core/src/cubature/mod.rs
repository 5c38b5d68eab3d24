//! Numerical integration over axis-aligned boxes.
//!
//! Two engines are available:
//!
//! * adaptive: a max-heap of sub-boxes keyed by local error. The worst box is
//!   bisected along its widest axis until the summed error meets the
//!   tolerance. Local rules are tensor Gauss–Legendre 15/7 for `d <= 2`,
//!   tensor 9/5 for `d = 3, 4`, and Genz–Malik 7/5 for `5 <= d <= 7`.
//! * qmc: Owen-scrambled Sobol points, error from the spread of
//!   [`qmc::RANDOMIZATIONS`] independent scramblings.
//!
//! [`Method::Auto`] picks adaptive for `d <= 4` and qmc above.

mod adaptive;
pub mod qmc;
pub mod rules;

use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use adaptive::integrate_adaptive;
pub use qmc::integrate_qmc;

/// Largest dimension accepted by the adaptive engine.
pub const MAX_ADAPTIVE_DIM: usize = 7;

/// Dimensions above this use qmc under [`Method::Auto`].
pub const AUTO_ADAPTIVE_MAX_DIM: usize = 4;

/// Default integrand-evaluation budget.
pub const DEFAULT_MAX_EVALS: u64 = 20_000_000;

/// Smallest budget accepted by [`QuadratureConfig::validate`].
pub const MIN_MAX_EVALS: u64 = 1000;

/// Semi-infinite axes are truncated at `t = 1 - SEMI_INFINITE_EPS`.
pub const SEMI_INFINITE_EPS: f64 = 1e-12;

/// Axis-aligned integration box `[lower_0, upper_0] × ... × [lower_{d-1}, upper_{d-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperbox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Hyperbox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBox("lower and upper differ in length"));
        }
        if lower.is_empty() {
            return Err(Error::InvalidBox("dimension must be at least 1"));
        }
        for (a, b) in lower.iter().zip(&upper) {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidBox("bounds must be finite"));
            }
            if !(a < b) {
                return Err(Error::InvalidBox("lower must be strictly below upper"));
            }
        }
        Ok(Hyperbox { lower, upper })
    }

    /// The box `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; dim], alloc::vec![1.0; dim])
    }

    /// The box `[0, u_0] × ... × [0, u_{d-1}]`.
    pub fn from_origin(upper: &[f64]) -> Result<Self> {
        Self::new(alloc::vec![0.0; upper.len()], upper.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| b - a)
            .product()
    }

    /// Ratio of the longest to the shortest side.
    pub fn aspect_ratio(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (a, b) in self.lower.iter().zip(&self.upper) {
            let w = b - a;
            lo = lo.min(w);
            hi = hi.max(w);
        }
        hi / lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Adaptive,
    Qmc,
    #[default]
    Auto,
}

impl Method {
    /// Concrete engine for a `dim`-dimensional integral.
    pub fn resolve(self, dim: usize) -> Method {
        match self {
            Method::Auto if dim <= AUTO_ADAPTIVE_MAX_DIM => Method::Adaptive,
            Method::Auto => Method::Qmc,
            m => m,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Adaptive => "adaptive",
            Method::Qmc => "qmc",
            Method::Auto => "auto",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(Method::Adaptive),
            "qmc" => Ok(Method::Qmc),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::InvalidConfig("method must be adaptive, qmc or auto")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: u64,
    pub method: Method,
    pub seed: u64,
}

impl QuadratureConfig {
    /// Default tolerances for a `dim`-dimensional integral under `method`:
    /// 1e-10/1e-9 for `d <= 2`, 1e-8/1e-7 for `d = 3, 4` and 1e-5/1e-4
    /// whenever the method resolves to qmc.
    pub fn for_dimension_with(dim: usize, method: Method) -> Self {
        let (abs_tol, rel_tol) = match (method.resolve(dim), dim) {
            (Method::Qmc, _) => (1e-5, 1e-4),
            (_, 0..=2) => (1e-10, 1e-9),
            _ => (1e-8, 1e-7),
        };
        QuadratureConfig {
            abs_tol,
            rel_tol,
            max_evals: DEFAULT_MAX_EVALS,
            method,
            seed: 0,
        }
    }

    pub fn for_dimension(dim: usize) -> Self {
        Self::for_dimension_with(dim, Method::Auto)
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: u64) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0) || !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidConfig("tolerances must be non-negative"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::InvalidConfig(
                "at least one of abs_tol, rel_tol must be positive",
            ));
        }
        if self.max_evals < MIN_MAX_EVALS {
            return Err(Error::InvalidConfig("max_evals must be at least 1000"));
        }
        Ok(())
    }

    /// `max(abs_tol, rel_tol * |value|)`.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evals: u64,
    pub converged: bool,
}

impl EvalResult {
    /// Exact result that needed no integrand evaluations.
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            error_estimate: 0.0,
            evals: 0,
            converged: true,
        }
    }

    /// Sum of independent estimates; errors and evaluation counts add.
    pub fn sum<I: IntoIterator<Item = EvalResult>>(parts: I) -> Self {
        let mut acc = EvalResult::exact(0.0);
        for p in parts {
            acc.value += p.value;
            acc.error_estimate += p.error_estimate;
            acc.evals += p.evals;
            acc.converged &= p.converged;
        }
        acc
    }

    pub fn scale(self, factor: f64) -> Self {
        EvalResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

/// Integrates `f` over `region` with the engine selected by `cfg.method`.
///
/// Non-convergence within `cfg.max_evals` is reported through
/// `converged = false` with the best estimate so far. A NaN or infinite
/// integrand value aborts with [`Error::NonFinite`].
pub fn integrate_box<F>(f: &F, region: &Hyperbox, cfg: &QuadratureConfig) -> Result<EvalResult>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    match cfg.method.resolve(region.dim()) {
        Method::Qmc => integrate_qmc(f, region, cfg),
        _ => integrate_adaptive(f, region, cfg),
    }
}

/// Integration domain whose axes may extend to `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiInfiniteDomain {
    pub lower: Vec<f64>,
    /// `None` marks an axis unbounded above.
    pub upper: Vec<Option<f64>>,
}

impl SemiInfiniteDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<Option<f64>>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidBox("lower and upper differ in length"));
        }
        for (a, b) in lower.iter().zip(&upper) {
            if !a.is_finite() {
                return Err(Error::InvalidBox("bounds must be finite"));
            }
            if let Some(b) = b {
                if !b.is_finite() || !(a < b) {
                    return Err(Error::InvalidBox("lower must be strictly below upper"));
                }
            }
        }
        Ok(SemiInfiniteDomain { lower, upper })
    }

    /// The positive orthant `[0, ∞)^dim`.
    pub fn orthant(dim: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; dim], alloc::vec![None; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Integrates over a domain with some axes unbounded above.
///
/// Each unbounded axis is mapped by `x = lower + t/(1-t)` with Jacobian
/// `(1-t)^-2`, and `t` runs over `[0, 1 - SEMI_INFINITE_EPS]`. Bounded axes
/// are passed through unchanged.
pub fn integrate_semi_infinite<F>(
    f: &F,
    domain: &SemiInfiniteDomain,
    cfg: &QuadratureConfig,
) -> Result<EvalResult>
where
    F: Fn(&[f64]) -> f64,
{
    let d = domain.dim();
    if d > qmc::MAX_QMC_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: qmc::MAX_QMC_DIM,
        });
    }
    let mut lower = Vec::with_capacity(d);
    let mut upper = Vec::with_capacity(d);
    for (a, b) in domain.lower.iter().zip(&domain.upper) {
        match b {
            Some(b) => {
                lower.push(*a);
                upper.push(*b);
            }
            None => {
                lower.push(0.0);
                upper.push(1.0 - SEMI_INFINITE_EPS);
            }
        }
    }
    let region = Hyperbox::new(lower, upper)?;
    let mapped = |t: &[f64]| {
        let mut x = [0.0; qmc::MAX_QMC_DIM];
        let mut jac = 1.0;
        for k in 0..d {
            if domain.upper[k].is_some() {
                x[k] = t[k];
            } else {
                let s = 1.0 - t[k];
                x[k] = domain.lower[k] + t[k] / s;
                jac /= s * s;
            }
        }
        let v = f(&x[..d]);
        // Decaying integrands underflow to 0 before the Jacobian overflows.
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    integrate_box(&mapped, &region, cfg)
}

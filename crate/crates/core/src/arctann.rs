//! The order-`n` arctangent and its functional relations.
//!
//! `arctan_n(u_1, ..., u_{n-1})` integrates `1 / (1 + x_1^n + ... + x_{n-1}^n)`
//! over `(0, u_1) × ... × (0, u_{n-1})`. For positive arguments it satisfies
//!
//! ```text
//! arctan_n(u) + Σ_{p=1}^{n-1} arctan_n(u_1/u_p, ..., 1/u_p, ..., u_{n-1}/u_p) = C_n
//! ```
//!
//! with `C_n = n (Γ(1/n)/n)^n`; at `n = 2` this is `arctan u + arctan 1/u = π/2`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cubature::{
    integrate_box, integrate_semi_infinite, EvalResult, Hyperbox, Method, QuadratureConfig,
    SemiInfiniteDomain,
};
use crate::error::{Error, Result};
use crate::math::powu;
use crate::special::arctan_constant;

/// Aspect ratio at or above which a non-converged adaptive run is retried.
pub const ELONGATED_ASPECT: f64 = 100.0;

/// Budget multiplier for the elongated-box retry.
pub const ELONGATED_BUDGET_FACTOR: u64 = 4;

/// From this dimension on, [`Method::Auto`] means qmc for [`full_space_value`].
pub const FULL_SPACE_QMC_DIM: usize = 4;

/// Integer order `n >= 2`; the integral has dimension `n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(u32);

impl Order {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(Order(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of arguments, `n - 1`.
    pub fn dim(self) -> usize {
        self.0 as usize - 1
    }

    /// Default quadrature settings for an order-`n` integral.
    pub fn default_config(self) -> QuadratureConfig {
        QuadratureConfig::for_dimension(self.dim())
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Upper limits `(u_1, ..., u_{n-1})`: finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgVector(Vec<f64>);

impl ArgVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ArgCount {
                expected: 1,
                found: 0,
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidArgument { index, value });
            }
        }
        Ok(ArgVector(values))
    }

    /// Validates `values` and checks the length against `order`.
    pub fn for_order(order: Order, values: Vec<f64>) -> Result<Self> {
        let args = Self::new(values)?;
        args.check_order(order)?;
        Ok(args)
    }

    /// `(u, u, ..., u)` of length `n - 1`.
    pub fn uniform(order: Order, u: f64) -> Result<Self> {
        Self::new(vec![u; order.dim()])
    }

    pub fn check_order(&self, order: Order) -> Result<()> {
        if self.0.len() != order.dim() {
            return Err(Error::ArgCount {
                expected: order.dim(),
                found: self.0.len(),
            });
        }
        Ok(())
    }

    /// Rejects zero entries; reflections divide by them.
    pub fn require_positive(&self) -> Result<()> {
        match self.0.iter().position(|&u| u <= 0.0) {
            Some(index) => Err(Error::InvalidArgument {
                index,
                value: self.0[index],
            }),
            None => Ok(()),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Entries sorted ascending, for order-insensitive comparison.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// `x ↦ 1 / (1 + Σ x_i^n)`.
pub fn arctan_integrand(order: Order) -> impl Fn(&[f64]) -> f64 + Copy {
    let n = order.get();
    move |x: &[f64]| {
        let s: f64 = x.iter().map(|&xi| powu(xi, n)).sum();
        1.0 / (1.0 + s)
    }
}

/// `arctan_n(args)`.
///
/// A zero entry gives exactly 0 without touching the engine. A run on an
/// elongated box (aspect ratio >= [`ELONGATED_ASPECT`]) that fails to
/// converge is repeated once with [`ELONGATED_BUDGET_FACTOR`] times the
/// budget before the non-converged result is returned.
pub fn eval_arctan(order: Order, args: &ArgVector, cfg: &QuadratureConfig) -> Result<EvalResult> {
    args.check_order(order)?;
    if args.as_slice().contains(&0.0) {
        return Ok(EvalResult::exact(0.0));
    }
    let region = Hyperbox::from_origin(args.as_slice())?;
    let f = arctan_integrand(order);
    let first = integrate_box(&f, &region, cfg)?;
    if first.converged
        || region.aspect_ratio() < ELONGATED_ASPECT
        || cfg.method.resolve(region.dim()) != Method::Adaptive
    {
        return Ok(first);
    }
    let retry_cfg = cfg.with_max_evals(cfg.max_evals.saturating_mul(ELONGATED_BUDGET_FACTOR));
    let retry = integrate_box(&f, &region, &retry_cfg)?;
    Ok(EvalResult {
        evals: first.evals + retry.evals,
        ..retry
    })
}

/// Reflection `p` (1-based): `u_k / u_p` for `k != p` and `1 / u_p` at `p`.
pub fn reflection_args(order: Order, args: &ArgVector, p: usize) -> Result<ArgVector> {
    args.check_order(order)?;
    args.require_positive()?;
    let max = order.dim();
    if p == 0 || p > max {
        return Err(Error::ReflectionIndex { index: p, max });
    }
    let up = args.as_slice()[p - 1];
    let out = args
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &uk)| if k == p - 1 { 1.0 / up } else { uk / up })
        .collect();
    ArgVector::new(out)
}

/// The `n` argument vectors of the functional relation: `args` itself
/// followed by reflections `1..=n-1`.
pub fn functional_terms(order: Order, args: &ArgVector) -> Result<Vec<ArgVector>> {
    args.check_order(order)?;
    args.require_positive()?;
    let mut terms = Vec::with_capacity(order.get() as usize);
    terms.push(args.clone());
    for p in 1..=order.dim() {
        terms.push(reflection_args(order, args, p)?);
    }
    Ok(terms)
}

fn sum_terms(order: Order, terms: &[ArgVector], cfg: &QuadratureConfig) -> Result<EvalResult> {
    let mut parts = Vec::with_capacity(terms.len());
    for (index, t) in terms.iter().enumerate() {
        let r = eval_arctan(order, t, cfg).map_err(|e| Error::Term {
            index,
            source: Box::new(e),
        })?;
        parts.push(r);
    }
    Ok(EvalResult::sum(parts))
}

/// Left-hand side of the n-term relation; errors add across terms.
pub fn functional_sum(
    order: Order,
    args: &ArgVector,
    cfg: &QuadratureConfig,
) -> Result<EvalResult> {
    let terms = functional_terms(order, args)?;
    sum_terms(order, &terms, cfg)
}

/// A computed identity side compared against its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub sum: EvalResult,
    pub reference: f64,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(sum: EvalResult, reference: f64) -> Self {
        IdentityCheck {
            sum,
            reference,
            residual: sum.value - reference,
        }
    }

    /// `|residual| <= factor · error_estimate`.
    pub fn within(&self, factor: f64) -> bool {
        self.residual.abs() <= factor * self.sum.error_estimate
    }
}

/// [`functional_sum`] against `C_n`.
pub fn functional_check(
    order: Order,
    args: &ArgVector,
    cfg: &QuadratureConfig,
) -> Result<IdentityCheck> {
    let sum = functional_sum(order, args, cfg)?;
    Ok(IdentityCheck::new(sum, arctan_constant(order).value))
}

/// `functional_sum(n, args) - C_n`.
pub fn functional_residual(order: Order, args: &ArgVector, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(functional_check(order, args, cfg)?.residual)
}

/// `arctan_n(1, ..., 1)`, which equals `(Γ(1/n)/n)^n`.
pub fn unit_cube_value(order: Order, cfg: &QuadratureConfig) -> Result<EvalResult> {
    eval_arctan(order, &ArgVector::uniform(order, 1.0)?, cfg)
}

/// The defining integral over the whole positive orthant, which equals `C_n`.
///
/// Written in radial coordinates `x = β (s_1, ..., 1, ..., s_{d-1})` with the
/// 1 in slot `p`, the orthant splits into `d` congruent pieces and
///
/// ```text
/// ∫_{[0,∞)^d} f = d ∫_{[0,1]^{d-1}} ∫_0^∞ β^{d-1} / (1 + β^n (1 + Σ s_k^n)) dβ ds.
/// ```
///
/// Only the `β` axis is unbounded, so the semi-infinite map leaves a smooth
/// integrand; mapping every axis directly puts an integrable singularity
/// at the far corner once `d >= 2`.
pub fn full_space_value(order: Order, cfg: &QuadratureConfig) -> Result<EvalResult> {
    let d = order.dim();
    let n = order.get();
    if d == 1 {
        let domain = SemiInfiniteDomain::orthant(1)?;
        return integrate_semi_infinite(&arctan_integrand(order), &domain, cfg);
    }
    let mut upper = vec![Some(1.0); d];
    upper[d - 1] = None;
    let domain = SemiInfiniteDomain::new(vec![0.0; d], upper)?;
    let radial = move |t: &[f64]| {
        let beta = t[d - 1];
        let spread: f64 = 1.0 + t[..d - 1].iter().map(|&s| powu(s, n)).sum::<f64>();
        powu(beta, n - 2) / (1.0 + powu(beta, n) * spread)
    };
    Ok(integrate_semi_infinite(&radial, &domain, cfg)?.scale(d as f64))
}

/// How `method` resolves for [`full_space_value`] at this order.
///
/// The embedded-rule estimate on the mapped radial integrand stays far above
/// the true error from four dimensions on, so the adaptive budget runs out
/// well before the estimate meets the 3-D/4-D tolerances.
pub fn full_space_method(order: Order, method: Method) -> Method {
    match method {
        Method::Auto if order.dim() >= FULL_SPACE_QMC_DIM => Method::Qmc,
        other => other,
    }
}

/// Default settings for [`full_space_value`].
pub fn full_space_config(order: Order) -> QuadratureConfig {
    QuadratureConfig::for_dimension_with(order.dim(), full_space_method(order, Method::Auto))
}

/// `F(u) = arctan_n(u, ..., u) + (n-1) arctan_n(u, 1, ..., 1)`.
pub fn eval_f(order: Order, u: f64, cfg: &QuadratureConfig) -> Result<EvalResult> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::InvalidArgument { index: 0, value: u });
    }
    let diagonal =
        eval_arctan(order, &ArgVector::uniform(order, u)?, cfg).map_err(|e| Error::Term {
            index: 0,
            source: Box::new(e),
        })?;
    let mut mixed = vec![1.0; order.dim()];
    mixed[0] = u;
    let mixed = eval_arctan(order, &ArgVector::new(mixed)?, cfg).map_err(|e| Error::Term {
        index: 1,
        source: Box::new(e),
    })?;
    Ok(EvalResult::sum([diagonal, mixed.scale(order.dim() as f64)]))
}

/// `F(u) + F(1/u)` against `2 C_n`.
pub fn f_identity(order: Order, u: f64, cfg: &QuadratureConfig) -> Result<IdentityCheck> {
    let a = eval_f(order, u, cfg)?;
    let b = eval_f(order, 1.0 / u, cfg)?;
    Ok(IdentityCheck::new(
        EvalResult::sum([a, b]),
        2.0 * arctan_constant(order).value,
    ))
}

fn order4() -> Order {
    Order(4)
}

fn positive(index: usize, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument { index, value })
    }
}

/// `Φ(u, v) = arctan_4(u, v, u/v) + arctan_4(u/v, 1/v, u/v²)`.
pub fn eval_phi4(u: f64, v: f64, cfg: &QuadratureConfig) -> Result<EvalResult> {
    positive(0, u)?;
    positive(1, v)?;
    let terms = [
        ArgVector::new(vec![u, v, u / v])?,
        ArgVector::new(vec![u / v, 1.0 / v, u / (v * v)])?,
    ];
    sum_terms(order4(), &terms, cfg)
}

/// `Φ(u, v) + Φ(1/u, 1/v)` against `C_4`.
pub fn phi4_identity(u: f64, v: f64, cfg: &QuadratureConfig) -> Result<IdentityCheck> {
    positive(0, u)?;
    positive(1, v)?;
    let a = eval_phi4(u, v, cfg)?;
    let b = eval_phi4(1.0 / u, 1.0 / v, cfg)?;
    Ok(IdentityCheck::new(
        EvalResult::sum([a, b]),
        arctan_constant(order4()).value,
    ))
}

/// The four order-4 argument triples of the two-variable relation, in the
/// printed form `(u, v, u/v)`, `(1/u, v/u, 1/v)`, `(u/v, 1/v, u/v²)`,
/// `(v, v²/u, v/u)`.
pub fn order4_relation_terms(u: f64, v: f64) -> Result<[ArgVector; 4]> {
    positive(0, u)?;
    positive(1, v)?;
    Ok([
        ArgVector::new(vec![u, v, u / v])?,
        ArgVector::new(vec![1.0 / u, v / u, 1.0 / v])?,
        ArgVector::new(vec![u / v, 1.0 / v, u / (v * v)])?,
        ArgVector::new(vec![v, v * v / u, v / u])?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::unit_cube_constant;

    fn order(n: u32) -> Order {
        Order::new(n).unwrap()
    }

    fn args(v: &[f64]) -> ArgVector {
        ArgVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn order_validation() {
        assert!(matches!(Order::new(0), Err(Error::InvalidOrder(0))));
        assert!(matches!(Order::new(1), Err(Error::InvalidOrder(1))));
        assert_eq!(Order::new(2).unwrap().dim(), 1);
    }

    #[test]
    fn arg_vector_validation() {
        assert!(ArgVector::new(vec![]).is_err());
        assert!(matches!(
            ArgVector::new(vec![1.0, -2.0]),
            Err(Error::InvalidArgument { index: 1, .. })
        ));
        assert!(ArgVector::new(vec![f64::INFINITY]).is_err());
        assert!(ArgVector::new(vec![f64::NAN]).is_err());
        assert!(ArgVector::new(vec![0.0, 1.0]).is_ok());
        assert!(matches!(
            ArgVector::for_order(order(3), vec![1.0]),
            Err(Error::ArgCount {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn full_space_switches_to_qmc_from_four_dimensions() {
        assert_eq!(full_space_method(order(4), Method::Auto), Method::Auto);
        assert_eq!(full_space_method(order(5), Method::Auto), Method::Qmc);
        assert_eq!(full_space_method(order(5), Method::Adaptive), Method::Adaptive);
        assert_eq!(full_space_config(order(5)).rel_tol, 1e-4);
    }

    #[test]
    fn zero_argument_short_circuits() {
        let cfg = order(3).default_config();
        let r = eval_arctan(order(3), &args(&[0.0, 5.0]), &cfg).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.evals, 0);
        assert!(r.converged);
    }

    #[test]
    fn classical_quarter_pi() {
        let cfg = order(2).default_config();
        let r = eval_arctan(order(2), &args(&[1.0]), &cfg).unwrap();
        assert!((r.value - core::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn reflections_for_order_three() {
        let (u, v) = (2.0, 5.0);
        let a = args(&[u, v]);
        assert_eq!(
            reflection_args(order(3), &a, 1).unwrap(),
            args(&[1.0 / u, v / u])
        );
        assert_eq!(
            reflection_args(order(3), &a, 2).unwrap(),
            args(&[u / v, 1.0 / v])
        );
        assert_eq!(
            reflection_args(order(2), &args(&[4.0]), 1).unwrap(),
            args(&[0.25])
        );
    }

    #[test]
    fn reflection_rejects_bad_input() {
        let a = args(&[2.0, 5.0]);
        assert!(matches!(
            reflection_args(order(3), &a, 0),
            Err(Error::ReflectionIndex { index: 0, max: 2 })
        ));
        assert!(reflection_args(order(3), &a, 3).is_err());
        assert!(matches!(
            reflection_args(order(3), &args(&[0.0, 1.0]), 1),
            Err(Error::InvalidArgument { index: 0, .. })
        ));
        assert!(functional_sum(order(3), &args(&[0.0, 1.0]), &order(3).default_config()).is_err());
    }

    #[test]
    fn printed_order4_triples_are_reflections() {
        for (u, v) in [(2.0, 3.0), (0.3, 7.0), (1.0, 1.0)] {
            let printed = order4_relation_terms(u, v).unwrap();
            let generated = functional_terms(order(4), &args(&[u, v, u / v])).unwrap();
            for (p, g) in printed.iter().zip(&generated) {
                let (a, b) = (p.sorted(), g.sorted());
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0), "u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn phi4_at_one_is_two_unit_cubes() {
        let cfg = order(4).default_config();
        let r = eval_phi4(1.0, 1.0, &cfg).unwrap();
        let want = 2.0 * unit_cube_constant(order(4));
        assert!((r.value - want).abs() < 1e-6, "{} vs {want}", r.value);
    }

    #[test]
    fn f_at_one_for_order_two() {
        let cfg = order(2).default_config();
        let r = eval_f(order(2), 1.0, &cfg).unwrap();
        assert!((r.value - core::f64::consts::FRAC_PI_2).abs() < 1e-11);
        assert!(eval_f(order(2), 0.0, &cfg).is_err());
        assert!(eval_phi4(-1.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn term_failure_is_attributed() {
        let cfg = order(9).default_config();
        // Order 9 has dimension 8, beyond the adaptive cap when forced.
        let cfg = cfg.with_method(Method::Adaptive);
        let err = functional_sum(order(9), &ArgVector::uniform(order(9), 1.0).unwrap(), &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::Term { index: 0, .. }), "{err:?}");
    }
}

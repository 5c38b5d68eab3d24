//! Numerical checks of the hypercube reduction formulas.
//!
//! For `f` bounded on `[0, α]^n`,
//!
//! ```text
//! ∫_{[0,α]^n} f = ∫_{[0,1]^{n-1}} ∫_0^α β^{n-1} Σ_p f(βs_1, ..., β, ..., βs_{n-1}) dβ ds
//! ```
//!
//! where the p-th summand places `β` in slot `p` and the scaled `s` values in
//! the remaining slots. The two-variable case reads
//! `∫_0^1 dx ∫_0^α β {f(β, βx) + f(βx, β)} dβ`. Both sides are integrated as
//! single `n`-dimensional cubatures and compared.

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec;
use core::fmt;
use core::str::FromStr;

use crate::arctann::Order;
use crate::cubature::{integrate_box, EvalResult, Hyperbox, QuadratureConfig};
use crate::error::{Error, Result, Side};
use crate::math::powu;
use crate::special::{exp_power_integral, unit_cube_constant};

/// Largest arity accepted by [`reduce_check_f2`].
pub const MAX_REDUCTION_VARS: usize = 4;

/// Registered test integrands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegrandId {
    /// `1`
    ConstOne,
    /// `x_1 x_2 ⋯ x_n`
    ProductXy,
    /// `exp(-Σ x_i²)`
    ExpNegSumSquares,
    /// `exp(-Σ x_i³)`
    ExpNegSumCubes,
    /// `1 / (1 + Σ x_i³)`
    RationalArctan3,
    /// `1 + Σ_i x_i^(i+2) + 2 ∏ x_i²`
    PolynomialMixed,
}

impl IntegrandId {
    pub const ALL: [IntegrandId; 6] = [
        IntegrandId::ConstOne,
        IntegrandId::ProductXy,
        IntegrandId::ExpNegSumSquares,
        IntegrandId::ExpNegSumCubes,
        IntegrandId::RationalArctan3,
        IntegrandId::PolynomialMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegrandId::ConstOne => "const_one",
            IntegrandId::ProductXy => "product_xy",
            IntegrandId::ExpNegSumSquares => "exp_neg_sum_squares",
            IntegrandId::ExpNegSumCubes => "exp_neg_sum_cubes",
            IntegrandId::RationalArctan3 => "rational_arctan3",
            IntegrandId::PolynomialMixed => "polynomial_mixed",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            IntegrandId::ConstOne => "1",
            IntegrandId::ProductXy => "x1*x2*...*xn",
            IntegrandId::ExpNegSumSquares => "exp(-(x1^2+...+xn^2))",
            IntegrandId::ExpNegSumCubes => "exp(-(x1^3+...+xn^3))",
            IntegrandId::RationalArctan3 => "1/(1+x1^3+...+xn^3)",
            IntegrandId::PolynomialMixed => "1 + x1^2 + x2^3 + ... + xn^(n+1) + 2*(x1*...*xn)^2",
        }
    }

    /// Supported arities, inclusive.
    pub fn arity_range(self) -> (usize, usize) {
        (2, MAX_REDUCTION_VARS)
    }

    /// Exclusive upper bound `B` on α. All registered integrands are
    /// bounded on every finite cube; the bounds keep the values in a range
    /// where the default tolerances are meaningful.
    pub fn alpha_bound(self) -> f64 {
        match self {
            IntegrandId::ConstOne => 100.0,
            IntegrandId::ProductXy => 10.0,
            IntegrandId::ExpNegSumSquares => 10.0,
            IntegrandId::ExpNegSumCubes => 10.0,
            IntegrandId::RationalArctan3 => 100.0,
            IntegrandId::PolynomialMixed => 4.0,
        }
    }

    /// Whether `f` factors as a product of one-variable functions.
    pub fn is_separable(self) -> bool {
        matches!(
            self,
            IntegrandId::ConstOne
                | IntegrandId::ProductXy
                | IntegrandId::ExpNegSumSquares
                | IntegrandId::ExpNegSumCubes
        )
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            IntegrandId::ConstOne => 1.0,
            IntegrandId::ProductXy => x.iter().product(),
            IntegrandId::ExpNegSumSquares => libm::exp(-x.iter().map(|t| t * t).sum::<f64>()),
            IntegrandId::ExpNegSumCubes => libm::exp(-x.iter().map(|t| t * t * t).sum::<f64>()),
            IntegrandId::RationalArctan3 => 1.0 / (1.0 + x.iter().map(|t| t * t * t).sum::<f64>()),
            IntegrandId::PolynomialMixed => {
                let p: f64 = x.iter().product();
                let s: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, t)| powu(*t, i as u32 + 2))
                    .sum();
                1.0 + s + 2.0 * p * p
            }
        }
    }

    /// Closed form of `∫_{[0,α]^n} f`, where one is known.
    pub fn closed_form(self, n_vars: usize, alpha: f64) -> Option<f64> {
        let n = n_vars as u32;
        match self {
            IntegrandId::ConstOne => Some(powu(alpha, n)),
            IntegrandId::ProductXy => Some(powu(0.5 * alpha * alpha, n)),
            IntegrandId::ExpNegSumSquares => exp_power_integral(2, alpha).ok().map(|v| powu(v, n)),
            IntegrandId::ExpNegSumCubes => exp_power_integral(3, alpha).ok().map(|v| powu(v, n)),
            IntegrandId::RationalArctan3 => {
                (n_vars == 2 && alpha == 1.0).then(|| unit_cube_constant(Order::new(3).unwrap()))
            }
            IntegrandId::PolynomialMixed => {
                let cube = powu(alpha, n);
                let rest = powu(alpha, n - 1);
                let sum: f64 = (0..n)
                    .map(|i| powu(alpha, i + 3) / (i + 3) as f64 * rest)
                    .sum();
                Some(cube + sum + 2.0 * powu(alpha * alpha * alpha / 3.0, n))
            }
        }
    }
}

impl fmt::Display for IntegrandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegrandId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntegrandId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIntegrand(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// Two-variable form.
    F1,
    /// n-variable form.
    F2,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::F1 => "f1",
            Formula::F2 => "f2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionReport {
    pub integrand: IntegrandId,
    pub formula: Formula,
    pub lhs: EvalResult,
    pub rhs: EvalResult,
    /// `lhs.value - rhs.value`
    pub residual: f64,
    pub alpha: f64,
    pub n_vars: usize,
    /// Closed-form value of the hypercube integral, if known.
    pub reference: Option<f64>,
}

impl ReductionReport {
    fn new(
        integrand: IntegrandId,
        formula: Formula,
        n_vars: usize,
        alpha: f64,
        lhs: EvalResult,
        rhs: EvalResult,
    ) -> Self {
        ReductionReport {
            integrand,
            formula,
            lhs,
            rhs,
            residual: lhs.value - rhs.value,
            alpha,
            n_vars,
            reference: integrand.closed_form(n_vars, alpha),
        }
    }

    pub fn combined_error(&self) -> f64 {
        self.lhs.error_estimate + self.rhs.error_estimate
    }

    /// `|residual| <= 10 · (lhs.error + rhs.error)`.
    pub fn pass(&self) -> bool {
        self.residual.abs() <= 10.0 * self.combined_error()
    }
}

fn validate(id: IntegrandId, n_vars: usize, alpha: f64) -> Result<()> {
    let (min, max) = id.arity_range();
    if n_vars < min || n_vars > max {
        return Err(Error::Arity {
            id: id.name(),
            arity: n_vars,
            min,
            max,
        });
    }
    let bound = id.alpha_bound();
    if !(alpha >= 0.0) || !(alpha < bound) {
        return Err(Error::AlphaOutOfRange {
            id: id.name(),
            alpha,
            bound,
        });
    }
    Ok(())
}

fn side<T>(s: Side, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Reduction {
        side: s,
        source: Box::new(e),
    })
}

fn hypercube_integral(
    id: IntegrandId,
    n_vars: usize,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<EvalResult> {
    let region = side(Side::Lhs, Hyperbox::from_origin(&vec![alpha; n_vars]))?;
    side(
        Side::Lhs,
        integrate_box(&|x: &[f64]| id.eval(x), &region, cfg),
    )
}

/// Checks the two-variable formula for `id` at `alpha`.
pub fn reduce_check_f1(
    id: IntegrandId,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<ReductionReport> {
    validate(id, 2, alpha)?;
    if alpha == 0.0 {
        let zero = EvalResult::exact(0.0);
        return Ok(ReductionReport::new(id, Formula::F1, 2, alpha, zero, zero));
    }
    let lhs = hypercube_integral(id, 2, alpha, cfg)?;
    // Coordinates (x, β) on [0,1] × [0,α].
    let rhs_f = |t: &[f64]| {
        let (x, beta) = (t[0], t[1]);
        beta * (id.eval(&[beta, beta * x]) + id.eval(&[beta * x, beta]))
    };
    let region = side(Side::Rhs, Hyperbox::new(vec![0.0, 0.0], vec![1.0, alpha]))?;
    let rhs = side(Side::Rhs, integrate_box(&rhs_f, &region, cfg))?;
    Ok(ReductionReport::new(id, Formula::F1, 2, alpha, lhs, rhs))
}

/// Checks the n-variable formula for `id` with arity `n_vars` at `alpha`.
///
/// The right-hand side is integrated over `[0,1]^{n-1} × [0,α]` with `β` as
/// the last coordinate; the p-th summand does not depend on `x_p`, so that
/// unit-interval factor is dropped.
pub fn reduce_check_f2(
    id: IntegrandId,
    n_vars: usize,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<ReductionReport> {
    validate(id, n_vars, alpha)?;
    if alpha == 0.0 {
        let zero = EvalResult::exact(0.0);
        return Ok(ReductionReport::new(
            id,
            Formula::F2,
            n_vars,
            alpha,
            zero,
            zero,
        ));
    }
    let lhs = hypercube_integral(id, n_vars, alpha, cfg)?;
    let n = n_vars;
    let rhs_f = |t: &[f64]| {
        let beta = t[n - 1];
        let s = &t[..n - 1];
        let mut point = [0.0; MAX_REDUCTION_VARS];
        let mut total = 0.0;
        for p in 0..n {
            for k in 0..n {
                point[k] = match k.cmp(&p) {
                    core::cmp::Ordering::Less => beta * s[k],
                    core::cmp::Ordering::Equal => beta,
                    core::cmp::Ordering::Greater => beta * s[k - 1],
                };
            }
            total += id.eval(&point[..n]);
        }
        powu(beta, n as u32 - 1) * total
    };
    let mut upper = vec![1.0; n];
    upper[n - 1] = alpha;
    let region = side(Side::Rhs, Hyperbox::new(vec![0.0; n], upper))?;
    let rhs = side(Side::Rhs, integrate_box(&rhs_f, &region, cfg))?;
    Ok(ReductionReport::new(
        id,
        Formula::F2,
        n_vars,
        alpha,
        lhs,
        rhs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: usize) -> QuadratureConfig {
        QuadratureConfig::for_dimension(d)
    }

    #[test]
    fn names_round_trip() {
        for id in IntegrandId::ALL {
            assert_eq!(id.name().parse::<IntegrandId>().unwrap(), id);
        }
        assert!(matches!(
            "nope".parse::<IntegrandId>(),
            Err(Error::UnknownIntegrand(_))
        ));
    }

    #[test]
    fn const_one_f1() {
        let r = reduce_check_f1(IntegrandId::ConstOne, 1.0, &cfg(2)).unwrap();
        assert!((r.lhs.value - 1.0).abs() < 1e-14);
        assert!((r.rhs.value - 1.0).abs() < 1e-14);
        assert!(r.pass());
    }

    #[test]
    fn product_xy_quarter() {
        let r = reduce_check_f1(IntegrandId::ProductXy, 1.0, &cfg(2)).unwrap();
        assert!((r.lhs.value - 0.25).abs() < 1e-14);
        assert!((r.rhs.value - 0.25).abs() < 1e-14);
        assert!(r.pass());
    }

    #[test]
    fn const_one_f2_three_vars() {
        let r = reduce_check_f2(IntegrandId::ConstOne, 3, 1.0, &cfg(3)).unwrap();
        assert!((r.lhs.value - 1.0).abs() < 1e-13);
        assert!((r.rhs.value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn alpha_zero_is_exact() {
        for id in IntegrandId::ALL {
            let r = reduce_check_f1(id, 0.0, &cfg(2)).unwrap();
            assert_eq!((r.lhs.value, r.rhs.value, r.residual), (0.0, 0.0, 0.0));
            assert_eq!(r.lhs.evals + r.rhs.evals, 0);
            assert!(r.lhs.converged && r.rhs.converged);
            assert!(r.pass());
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            reduce_check_f1(IntegrandId::PolynomialMixed, 4.0, &cfg(2)),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(reduce_check_f1(IntegrandId::ConstOne, -1.0, &cfg(2)).is_err());
        assert!(reduce_check_f1(IntegrandId::ConstOne, f64::NAN, &cfg(2)).is_err());
        assert!(matches!(
            reduce_check_f2(IntegrandId::ConstOne, 5, 1.0, &cfg(5)),
            Err(Error::Arity { arity: 5, .. })
        ));
        assert!(reduce_check_f2(IntegrandId::ConstOne, 1, 1.0, &cfg(1)).is_err());
    }

    #[test]
    fn polynomial_closed_form_by_hand() {
        // n = 2, α = 1: 1 + 1/3 + 1/4 + 2/9
        let v = IntegrandId::PolynomialMixed.closed_form(2, 1.0).unwrap();
        assert!((v - (1.0 + 1.0 / 3.0 + 0.25 + 2.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn engine_error_attributed_to_side() {
        let bad = QuadratureConfig::for_dimension(2).with_max_evals(10);
        let err = reduce_check_f1(IntegrandId::ConstOne, 1.0, &bad).unwrap_err();
        assert!(matches!(
            err,
            Error::Reduction {
                side: Side::Lhs,
                ..
            }
        ));
    }
}

use arctn_core::arctann::{
    eval_arctan, f_identity, full_space_method, full_space_value, functional_check, phi4_identity,
    unit_cube_value, IdentityCheck,
};
use arctn_core::reduction::{
    reduce_check_f1, reduce_check_f2, Formula, IntegrandId, ReductionReport,
};
use arctn_core::special::{arctan_constant, gamma, gamma_via_exp_integral, unit_cube_constant};
use arctn_core::{ArgVector, Error, EvalResult, Method, Order, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{Command, Common, FormulaArg};
use crate::output::{Input, OutputRecord};

pub const MAX_EVALS_ENV: &str = "ARCTN_MAX_EVALS";

/// Why a command could not produce records.
#[derive(Debug)]
pub enum Failure {
    /// Bad input; the message names the offending flag.
    Usage(String),
    /// The library rejected a computation for a reason other than input.
    Numeric(String),
}

/// Records plus whether each one passed its check.
#[derive(Debug, Default)]
pub struct Outcome {
    pub records: Vec<OutputRecord>,
    pub passed: Vec<bool>,
    pub checked: bool,
}

impl Outcome {
    fn push(&mut self, record: OutputRecord, passed: bool) {
        self.records.push(record);
        self.passed.push(passed);
    }

    fn push_checked(&mut self, record: OutputRecord, passed: bool) {
        self.checked = true;
        self.push(record, passed);
    }

    pub fn all_converged(&self) -> bool {
        self.records.iter().all(|r| r.converged)
    }

    pub fn all_passed(&self) -> bool {
        self.passed.iter().all(|&p| p)
    }

    pub fn max_abs_residual(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.residual)
            .map(f64::abs)
            .reduce(f64::max)
    }
}

/// Budget precedence: `--max-evals`, then the environment, then the default.
pub fn max_evals(common: &Common) -> Result<Option<u64>, Failure> {
    if common.max_evals.is_some() {
        return Ok(common.max_evals);
    }
    match std::env::var(MAX_EVALS_ENV) {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(v) if v >= arctn_core::cubature::MIN_MAX_EVALS => Ok(Some(v)),
            _ => Err(Failure::Usage(format!(
                "invalid value '{s}' for {MAX_EVALS_ENV}: expected an integer >= {}",
                arctn_core::cubature::MIN_MAX_EVALS
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn config(common: &Common, dim: usize, budget: Option<u64>) -> QuadratureConfig {
    config_with(common, dim, common.method, budget)
}

fn config_with(
    common: &Common,
    dim: usize,
    method: Method,
    budget: Option<u64>,
) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::for_dimension_with(dim, method).with_seed(common.seed);
    if let Some(a) = common.abs_tol {
        cfg.abs_tol = a;
    }
    if let Some(r) = common.rel_tol {
        cfg.rel_tol = r;
    }
    if let Some(m) = budget {
        cfg.max_evals = m;
    }
    cfg
}

/// Maps a library error to the flag that caused it, when there is one.
fn classify(e: Error) -> Failure {
    let flag = match root(&e) {
        Error::InvalidOrder(_) => Some("--order"),
        Error::ArgCount { .. } | Error::InvalidArgument { .. } => Some("--args"),
        Error::DimensionTooLarge { .. } => Some("--method"),
        Error::InvalidConfig(_) => Some("--max-evals"),
        Error::UnknownIntegrand(_) => Some("--integrand"),
        Error::Arity { .. } => Some("--n-vars"),
        Error::AlphaOutOfRange { .. } => Some("--alpha"),
        _ => None,
    };
    match flag {
        Some(f) => Failure::Usage(format!("invalid value for {f}: {e}")),
        None => Failure::Numeric(e.to_string()),
    }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Term { source, .. } | Error::Reduction { source, .. } => root(source),
        other => other,
    }
}

fn order(n: u32) -> Result<Order, Failure> {
    Order::new(n).map_err(classify)
}

/// `|residual| <= 10 · error_estimate`, with a rounding floor for results
/// whose estimate is at the level of machine precision.
pub fn within_budget(residual: f64, error_estimate: f64, reference: f64) -> bool {
    residual.abs() <= 10.0 * error_estimate + 16.0 * f64::EPSILON * reference.abs()
}

fn record(
    command: &'static str,
    inputs: Vec<(&'static str, Input)>,
    r: EvalResult,
) -> OutputRecord {
    OutputRecord {
        command,
        inputs,
        value: r.value,
        error_estimate: r.error_estimate,
        reference: None,
        residual: None,
        converged: r.converged,
        evals: r.evals,
    }
}

fn check_record(
    command: &'static str,
    inputs: Vec<(&'static str, Input)>,
    c: &IdentityCheck,
) -> (OutputRecord, bool) {
    let rec = record(command, inputs, c.sum).with_reference(c.reference);
    let ok = within_budget(c.residual, c.sum.error_estimate, c.reference);
    (rec, ok)
}

fn reduction_record(r: &ReductionReport) -> OutputRecord {
    let mut inputs = vec![
        ("formula", Input::Text(r.formula.name().to_string())),
        ("integrand", Input::Text(r.integrand.name().to_string())),
        ("n_vars", Input::Int(r.n_vars as u64)),
        ("alpha", Input::Real(r.alpha)),
    ];
    if let Some(exact) = r.reference {
        inputs.push(("closed_form", Input::Real(exact)));
    }
    // value is the hypercube side; reference is the reduced side.
    OutputRecord {
        command: "reduce",
        inputs,
        value: r.lhs.value,
        error_estimate: r.combined_error(),
        reference: Some(r.rhs.value),
        residual: Some(r.residual),
        converged: r.lhs.converged && r.rhs.converged,
        evals: r.lhs.evals + r.rhs.evals,
    }
}

fn args_vector(values: &[f64]) -> Result<ArgVector, Failure> {
    ArgVector::new(values.to_vec()).map_err(classify)
}

pub fn run(command: &Command, common: &Common) -> Result<Outcome, Failure> {
    let budget = max_evals(common)?;
    let mut out = Outcome::default();
    match command {
        Command::Eval { order: n, args } => {
            let ord = order(*n)?;
            let a = args_vector(args)?;
            a.check_order(ord).map_err(classify)?;
            let cfg = config(common, ord.dim(), budget);
            let r = eval_arctan(ord, &a, &cfg).map_err(classify)?;
            let mut rec = record(
                "eval",
                vec![
                    ("order", Input::Int(*n as u64)),
                    ("args", Input::List(args.clone())),
                ],
                r,
            );
            if ord.get() == 2 {
                rec = rec.with_reference(args[0].atan());
            } else if args.iter().all(|&u| u == 1.0) {
                rec = rec.with_reference(unit_cube_constant(ord));
            } else if args.contains(&0.0) {
                rec = rec.with_reference(0.0);
            }
            out.push(rec, true);
        }
        Command::Identity {
            order: n,
            args,
            random,
        } => {
            let ord = order(*n)?;
            let cfg = config(common, ord.dim(), budget);
            let samples: Vec<Vec<f64>> = match (args, random) {
                (Some(a), _) => vec![a.clone()],
                (None, Some(k)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
                    (0..*k)
                        .map(|_| {
                            (0..ord.dim())
                                .map(|_| rng.gen_range(lo..hi).exp())
                                .collect()
                        })
                        .collect()
                }
                (None, None) => {
                    return Err(Failure::Usage(
                        "one of --args or --random is required".into(),
                    ))
                }
            };
            for s in samples {
                let a = args_vector(&s)?;
                a.check_order(ord).map_err(classify)?;
                if a.require_positive().is_err() {
                    return Err(Failure::Usage(
                        "invalid value for --args: entries must be positive".into(),
                    ));
                }
                let c = functional_check(ord, &a, &cfg).map_err(classify)?;
                let (rec, ok) = check_record(
                    "identity",
                    vec![("order", Input::Int(*n as u64)), ("args", Input::List(s))],
                    &c,
                );
                out.push_checked(rec, ok);
            }
        }
        Command::Constant { order: n } => {
            let ord = order(*n)?;
            let c = arctan_constant(ord);
            out.push(
                record(
                    "constant",
                    vec![("order", Input::Int(*n as u64))],
                    EvalResult::exact(c.value),
                ),
                true,
            );
        }
        Command::Unitcube { order: n } => {
            let ord = order(*n)?;
            let cfg = config(common, ord.dim(), budget);
            let r = unit_cube_value(ord, &cfg).map_err(classify)?;
            let reference = unit_cube_constant(ord);
            let rec = record("unitcube", vec![("order", Input::Int(*n as u64))], r)
                .with_reference(reference);
            out.push_checked(
                rec,
                within_budget(r.value - reference, r.error_estimate, reference),
            );
        }
        Command::Fullspace { order: n } => {
            let ord = order(*n)?;
            let method = full_space_method(ord, common.method);
            let cfg = config_with(common, ord.dim(), method, budget);
            let r = full_space_value(ord, &cfg).map_err(classify)?;
            let reference = arctan_constant(ord).value;
            let rec = record("fullspace", vec![("order", Input::Int(*n as u64))], r)
                .with_reference(reference);
            out.push_checked(
                rec,
                within_budget(r.value - reference, r.error_estimate, reference),
            );
        }
        Command::Gammacheck { order: orders } => {
            let list: Vec<u32> = if orders.is_empty() {
                (2..=8).collect()
            } else {
                orders.clone()
            };
            for n in list {
                let ord = order(n)?;
                let cfg = config(common, 1, budget);
                let r = gamma_via_exp_integral(ord, &cfg).map_err(classify)?;
                let reference = gamma(1.0 / n as f64).map_err(classify)?;
                let rec = record("gammacheck", vec![("order", Input::Int(n as u64))], r)
                    .with_reference(reference);
                out.push_checked(
                    rec,
                    within_budget(r.value - reference, r.error_estimate, reference),
                );
            }
        }
        Command::Fsym { order: n, u } => {
            let ord = order(*n)?;
            let cfg = config(common, ord.dim(), budget);
            let c = f_identity(ord, *u, &cfg).map_err(classify)?;
            let (rec, ok) = check_record(
                "fsym",
                vec![("order", Input::Int(*n as u64)), ("u", Input::Real(*u))],
                &c,
            );
            out.push_checked(rec, ok);
        }
        Command::Phi4 { u, v } => {
            let cfg = config(common, 3, budget);
            let c = phi4_identity(*u, *v, &cfg).map_err(classify)?;
            let (rec, ok) = check_record(
                "phi4",
                vec![("u", Input::Real(*u)), ("v", Input::Real(*v))],
                &c,
            );
            out.push_checked(rec, ok);
        }
        Command::Reduce {
            formula,
            integrand,
            n_vars,
            alpha,
        } => {
            let id: IntegrandId = integrand.parse().map_err(classify)?;
            let report = match formula {
                FormulaArg::F1 => {
                    if *n_vars != 2 {
                        return Err(Failure::Usage(format!(
                            "invalid value for --n-vars: {} requires 2, got {n_vars}",
                            Formula::F1.name()
                        )));
                    }
                    reduce_check_f1(id, *alpha, &config(common, 2, budget))
                }
                FormulaArg::F2 => reduce_check_f2(
                    id,
                    *n_vars,
                    *alpha,
                    &config(common, (*n_vars).max(1), budget),
                ),
            }
            .map_err(classify)?;
            out.push_checked(reduction_record(&report), report.pass());
        }
        Command::Integrands => {}
    }
    Ok(out)
}

/// Rows of the integrand registry for the `integrands` command.
pub fn registry_rows() -> Vec<[String; 5]> {
    IntegrandId::ALL
        .iter()
        .map(|id| {
            let (lo, hi) = id.arity_range();
            [
                id.name().to_string(),
                id.formula().to_string(),
                format!("{lo}..{hi}"),
                id.alpha_bound().to_string(),
                id.is_separable().to_string(),
            ]
        })
        .collect()
}

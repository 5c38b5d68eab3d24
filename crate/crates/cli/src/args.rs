use arctn_core::Method;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "arctn",
    version,
    about = "Evaluate generalized arctangents and verify their functional relations"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Absolute tolerance (default depends on dimension and method)
    #[arg(long, global = true, value_parser = positive_f64)]
    pub abs_tol: Option<f64>,
    /// Relative tolerance (default depends on dimension and method)
    #[arg(long, global = true, value_parser = positive_f64)]
    pub rel_tol: Option<f64>,
    /// Integrand evaluation budget per integral [env: ARCTN_MAX_EVALS]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1000..))]
    pub max_evals: Option<u64>,
    /// Cubature method
    #[arg(long, global = true, default_value = "auto", value_parser = parse_method)]
    pub method: Method,
    /// Seed for random arguments and qmc scrambling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaArg {
    F1,
    F2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate arctan_n at one argument vector
    Eval {
        #[arg(long, value_parser = order_parser())]
        order: u32,
        /// Comma separated, order-1 entries
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        args: Vec<f64>,
    },
    /// Check the n-term reflection relation against C_n
    #[command(group(ArgGroup::new("sample").required(true).args(["args", "random"])))]
    Identity {
        #[arg(long, value_parser = order_parser())]
        order: u32,
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, )]
        args: Option<Vec<f64>>,
        /// Number of log-uniform samples in [0.1, 10]
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        random: Option<u32>,
    },
    /// Print C_n = n (Γ(1/n)/n)^n
    Constant {
        #[arg(long, value_parser = order_parser())]
        order: u32,
    },
    /// arctan_n(1, ..., 1) against (Γ(1/n)/n)^n
    Unitcube {
        #[arg(long, value_parser = order_parser())]
        order: u32,
    },
    /// The integral over the whole positive orthant against C_n
    Fullspace {
        #[arg(long, value_parser = order_parser())]
        order: u32,
    },
    /// n ∫_0^∞ exp(-x^n) dx against Γ(1/n); orders 2..=8 when none given
    Gammacheck {
        #[arg(long, value_delimiter = ',', value_parser = order_parser())]
        order: Vec<u32>,
    },
    /// F(u) + F(1/u) against 2 C_n
    Fsym {
        #[arg(long, value_parser = order_parser())]
        order: u32,
        #[arg(long, allow_negative_numbers = true, value_parser = positive_f64)]
        u: f64,
    },
    /// Φ(u, v) + Φ(1/u, 1/v) against C_4
    Phi4 {
        #[arg(long, allow_negative_numbers = true, value_parser = positive_f64)]
        u: f64,
        #[arg(long, allow_negative_numbers = true, value_parser = positive_f64)]
        v: f64,
    },
    /// Check a reduction formula on a registered integrand
    Reduce {
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[arg(long)]
        integrand: String,
        /// Arity of the integrand; f1 requires 2
        #[arg(long, default_value_t = 2)]
        n_vars: usize,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// List the integrand registry
    Integrands,
}

fn order_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..)
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` must be positive and finite"))
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not one of adaptive, qmc, auto"))
}

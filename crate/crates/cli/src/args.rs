use clap::{Args, Parser, Subcommand, ValueEnum};

use eigeninterval::ensembles::{parse_endpoint, EnsembleSpec, Interval};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "eigeninterval",
    version,
    about = "Probability that all eigenvalues of a random matrix lie in an interval"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Omit wall-clock timings so identical runs give identical output.
    #[arg(long, global = true)]
    pub no_meta: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact probability that every eigenvalue lies in the interval.
    Psi {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Exact CDF of the largest eigenvalue at a point.
    CdfMax {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Evaluation point.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Exact CDF of the smallest eigenvalue at a point.
    CdfMin {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Tracy-Widom gamma approximation of the interval probability.
    Approx {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Edge centring and scaling constants with the limiting support.
    Edges {
        #[command(flatten)]
        ensemble: EnsembleArgs,
    },
    /// Recompute one of the reference tables.
    Table {
        #[arg(value_enum)]
        id: TableId,
        /// Skip rows whose matrix dimension exceeds this.
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Monte Carlo estimate next to the exact value.
    Mc {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        interval: IntervalArg,
        #[arg(long, default_value_t = 1_000_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Concentration bounds against exact and approximate extreme-eigenvalue
    /// tails for a real `W_s(m, I)`.
    Cs {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 's')]
        s: usize,
        /// Explicit grid (comma separated); overrides the range flags.
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.01)]
        t_step: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    GoeNegative,
    WishartMid,
    MpEdges,
    TwParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    RealWishart,
    Goe,
    RealBeta,
    ComplexWishart,
    ComplexWishartCorrelated,
    ComplexWishartSpiked,
    ComplexBeta,
    Gue,
}

#[derive(Args, Debug, Clone)]
pub struct EnsembleArgs {
    #[arg(long, value_enum)]
    pub ensemble: Kind,
    /// Dimension of Wishart kinds (also accepted for the others).
    #[arg(short = 'p')]
    pub p: Option<usize>,
    /// Degrees of freedom, or the first beta exponent.
    #[arg(short = 'm')]
    pub m: Option<f64>,
    /// GOE/GUE dimension, or the second beta exponent.
    #[arg(short = 'n')]
    pub n: Option<f64>,
    /// Beta dimension.
    #[arg(short = 's')]
    pub s: Option<usize>,
    /// Covariance eigenvalues; `SIGMA1,SIGMA2` for the spiked case.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sigma: Vec<f64>,
    /// Starting precision in bits; 0 picks one from the dimension.
    #[arg(long, default_value_t = 0)]
    pub precision: u32,
    /// Precision cap in bits.
    #[arg(long, default_value_t = eigeninterval::exact_psi::MAX_BITS)]
    pub max_precision: u32,
}

#[derive(Args, Debug, Clone)]
pub struct IntervalArg {
    /// Interval endpoints; `inf` and `-inf` are accepted.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
    pub interval: Vec<String>,
}

impl IntervalArg {
    pub fn parse(&self) -> Result<Interval, CliError> {
        let [lo, hi] = self.interval.as_slice() else {
            return Err(CliError::usage("--interval takes two endpoints"));
        };
        let lo = endpoint(lo)?;
        let hi = endpoint(hi)?;
        Interval::new(lo, hi).map_err(CliError::from)
    }
}

pub fn endpoint(token: &str) -> Result<f64, CliError> {
    parse_endpoint(token)
        .or_else(|| token.parse::<f64>().ok().filter(|x| !x.is_nan()))
        .ok_or_else(|| CliError::usage(format!("not a number: {token}")))
}

fn count(value: Option<f64>, flag: &str) -> Result<usize, CliError> {
    let v = value.ok_or_else(|| CliError::usage(format!("missing -{flag}")))?;
    if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
        return Err(CliError::usage(format!("-{flag} must be a nonnegative integer, got {v}")));
    }
    Ok(v as usize)
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("missing -{flag}")))
}

impl EnsembleArgs {
    pub fn spec(&self) -> Result<EnsembleSpec, CliError> {
        let spec = match self.ensemble {
            Kind::RealWishart => EnsembleSpec::RealWishart {
                p: need(self.p, "p")?,
                m: count(self.m, "m")?,
            },
            Kind::ComplexWishart => EnsembleSpec::ComplexWishartWhite {
                p: need(self.p, "p")?,
                m: count(self.m, "m")?,
            },
            Kind::Goe => EnsembleSpec::Goe { n: self.gaussian_dim()? },
            Kind::Gue => EnsembleSpec::Gue { n: self.gaussian_dim()? },
            Kind::RealBeta => EnsembleSpec::RealBeta {
                s: self.beta_dim()?,
                m: self.m.unwrap_or(0.0),
                n: self.n.unwrap_or(0.0),
            },
            Kind::ComplexBeta => EnsembleSpec::ComplexBeta {
                s: self.beta_dim()?,
                m: self.m.unwrap_or(0.0),
                n: self.n.unwrap_or(0.0),
            },
            Kind::ComplexWishartCorrelated => {
                if self.sigma.is_empty() {
                    return Err(CliError::usage("missing --sigma"));
                }
                if let Some(p) = self.p {
                    if p != self.sigma.len() {
                        return Err(CliError::usage(format!(
                            "-p {p} disagrees with {} covariance eigenvalues",
                            self.sigma.len()
                        )));
                    }
                }
                EnsembleSpec::ComplexWishartCorrelated {
                    m: count(self.m, "m")?,
                    sigma: self.sigma.clone(),
                }
            }
            Kind::ComplexWishartSpiked => {
                let [sigma1, sigma2] = self.sigma.as_slice() else {
                    return Err(CliError::usage("spiked case needs --sigma SIGMA1,SIGMA2"));
                };
                EnsembleSpec::ComplexWishartSpiked {
                    p: need(self.p, "p")?,
                    m: count(self.m, "m")?,
                    sigma1: *sigma1,
                    sigma2: *sigma2,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    fn gaussian_dim(&self) -> Result<usize, CliError> {
        match (self.n, self.p) {
            (Some(_), _) => count(self.n, "n"),
            (None, Some(p)) => Ok(p),
            (None, None) => Err(CliError::usage("missing -n")),
        }
    }

    fn beta_dim(&self) -> Result<usize, CliError> {
        self.s.or(self.p).ok_or_else(|| CliError::usage("missing -s"))
    }
}

mod args;
mod report;
mod tables;

use std::fmt;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use eigeninterval::asymptotics::{cs_concentration_bounds, edge_scaling, mp_support, psi_approx, semicircle_support, TwBeta};
use eigeninterval::ensembles::{mc_psi, EnsembleSpec, Interval};
use eigeninterval::exact_psi::{cdf_largest_with, cdf_smallest_with, psi_with, PsiOptions, PsiResult};
use eigeninterval::Error;

use args::{endpoint, Cli, Command, EnsembleArgs, TableId};
use report::*;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::Domain(_) | Error::Unsupported(_) => 2,
            Error::NoConvergence(_) => 3,
            Error::UnsupportedSampling(_) => 4,
            Error::InternalConsistency(_) => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Rendered report and whether every exact value converged.
struct Outcome {
    text: String,
    converged: bool,
}

fn options(ens: &EnsembleArgs) -> PsiOptions {
    PsiOptions {
        initial_bits: (ens.precision != 0).then_some(ens.precision),
        max_bits: ens.max_precision,
    }
}

fn elapsed_ms(cli: &Cli, start: Instant) -> Option<u64> {
    (!cli.no_meta).then(|| start.elapsed().as_millis() as u64)
}

fn psi_report(command: &str, spec: EnsembleSpec, iv: Option<Interval>, at: Option<f64>, r: &PsiResult, wall: Option<u64>) -> PsiReport {
    PsiReport {
        command: command.to_string(),
        ensemble: spec,
        interval: iv,
        at,
        probability: Probability::from_result(r),
        precision_bits_used: r.precision_bits_used,
        converged: r.converged,
        wall_time_ms: wall,
    }
}

fn limiting_support(spec: &EnsembleSpec) -> Result<Interval, CliError> {
    match *spec {
        EnsembleSpec::RealWishart { p, m } | EnsembleSpec::ComplexWishartWhite { p, m } => Ok(mp_support(p, m)?),
        EnsembleSpec::Goe { n } | EnsembleSpec::Gue { n } => Ok(semicircle_support(n)),
        _ => Err(Error::Unsupported(format!("no limiting support for {}", spec.kind())).into()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let fmt = cli.format;
    let done = |text: String, converged: bool| Ok(Outcome { text, converged });
    match &cli.command {
        Command::Psi { ensemble, interval } => {
            let spec = ensemble.spec()?;
            let iv = interval.parse()?;
            let r = psi_with(&spec, iv, options(ensemble))?;
            let rep = psi_report("psi", spec, Some(iv), None, &r, elapsed_ms(cli, start));
            done(render(&rep, fmt), r.converged)
        }
        Command::CdfMax { ensemble, at } => {
            let spec = ensemble.spec()?;
            let b = endpoint(at)?;
            let iv = Interval::new(spec.support().lo, b).ok();
            let r = cdf_largest_with(&spec, b, options(ensemble))?;
            let rep = psi_report("cdf-max", spec, iv, Some(b), &r, elapsed_ms(cli, start));
            done(render(&rep, fmt), r.converged)
        }
        Command::CdfMin { ensemble, at } => {
            let spec = ensemble.spec()?;
            let a = endpoint(at)?;
            let iv = Interval::new(a, spec.support().hi).ok();
            let r = cdf_smallest_with(&spec, a, options(ensemble))?;
            let rep = psi_report("cdf-min", spec, iv, Some(a), &r, elapsed_ms(cli, start));
            done(render(&rep, fmt), r.converged)
        }
        Command::Approx { ensemble, interval } => {
            let spec = ensemble.spec()?;
            let iv = interval.parse()?;
            let rep = ApproxReport {
                approx: psi_approx(&spec, iv)?,
                edges: edge_scaling(&spec)?,
                ensemble: spec,
                interval: iv,
                wall_time_ms: elapsed_ms(cli, start),
            };
            done(render(&rep, fmt), true)
        }
        Command::Edges { ensemble } => {
            let spec = ensemble.spec()?;
            let rep = EdgesReport {
                tw_beta: TwBeta::of(&spec).value(),
                edges: edge_scaling(&spec)?,
                limiting_support: limiting_support(&spec)?,
                ensemble: spec,
                wall_time_ms: elapsed_ms(cli, start),
            };
            done(render(&rep, fmt), true)
        }
        Command::Table { id, max_dim } => {
            let table = match id {
                TableId::GoeNegative => tables::goe_negative(*max_dim)?,
                TableId::WishartMid => tables::wishart_mid(*max_dim)?,
                TableId::MpEdges => tables::mp_edges(*max_dim)?,
                TableId::TwParams => tables::tw_params_table(),
            };
            let converged = tables::all_converged(&table);
            let rep = TableReport {
                table,
                converged,
                wall_time_ms: elapsed_ms(cli, start),
            };
            done(render(&rep, fmt), converged)
        }
        Command::Mc {
            ensemble,
            interval,
            trials,
            seed,
        } => {
            let spec = ensemble.spec()?;
            let iv = interval.parse()?;
            let est = mc_psi(&spec, iv, *trials, *seed)?;
            let exact = psi_with(&spec, iv, options(ensemble))?;
            let diff = est.estimate - exact.value;
            let z_score = if est.std_err > 0.0 {
                Some(diff / est.std_err)
            } else {
                (diff == 0.0).then_some(0.0)
            };
            let rep = McReport {
                ensemble: spec,
                interval: iv,
                trials: est.count,
                seed: *seed,
                estimate: est.estimate,
                std_err: est.std_err,
                hits: est.hits,
                exact: Probability::from_result(&exact),
                exact_converged: exact.converged,
                z_score,
                wall_time_ms: elapsed_ms(cli, start),
            };
            done(render(&rep, fmt), exact.converged)
        }
        Command::Cs { m, s, t, t_max, t_step } => {
            if s > m || *s == 0 {
                return Err(CliError::usage(format!("need 1 <= s <= m, got s={s}, m={m}")));
            }
            let grid = if t.is_empty() {
                if !(*t_step > 0.0 && *t_max >= 0.0) {
                    return Err(CliError::usage("--t-step must be positive and --t-max nonnegative"));
                }
                let steps = (t_max / t_step + 1e-9).floor() as usize;
                (0..=steps).map(|k| k as f64 * t_step).collect()
            } else {
                t.clone()
            };
            let rows = cs_concentration_bounds(*s, *m, &grid)?;
            let rep = CsReport {
                s: *s,
                m: *m,
                rows,
                wall_time_ms: elapsed_ms(cli, start),
            };
            done(render(&rep, fmt), true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if out.converged {
                ExitCode::SUCCESS
            } else {
                eprintln!("warning: precision cap reached before two evaluations agreed; printed the best estimate");
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

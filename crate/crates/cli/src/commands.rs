use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use freeharm::estimator::{
    conv_battery, doubling_schedule, power_norm_sequence_with, rep_battery, split_battery,
    BatteryOptions, BatterySummary, EvalPath, NormInput,
};
use freeharm::funcspace::{parse_function_json, LoadedFunction};
use freeharm::posdef::{
    chain_holds, condition2_sup, condition3_sum, condition4_limsup, condition_battery, gram_matrix,
    holder_battery, holder_conjugate, holder_triple_check, lp_threshold, pd_battery_phi_alpha,
    separation_witness, trace_growth_check,
};
use freeharm::words::enumerate_ball;
use freeharm::{
    ConditionReport, Error, GramReport, GroupContext, RadialFunction, RadialProfile, Word,
};
use serde::Serialize;

use crate::output::Sink;
use crate::{BatteryArg, Command, Common, PathArg};

pub const SUCCESS: u8 = 0;
pub const VERIFICATION_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const RESOURCE: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io {
        path: Option<PathBuf>,
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_resource() => RESOURCE,
            _ => USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io {
                path: Some(p),
                source,
            } => write!(f, "{}: {source}", p.display()),
            CliError::Io { path: None, source } => write!(f, "{source}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io { path: None, source }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn status(ok: bool) -> u8 {
    if ok {
        SUCCESS
    } else {
        VERIFICATION_FAILED
    }
}

fn sink(common: &Common) -> Result<Sink> {
    Sink::open(common.out.as_ref()).map_err(|source| CliError::Io {
        path: common.out.clone(),
        source,
    })
}

fn context(d: usize) -> Result<GroupContext> {
    Ok(GroupContext::new(d)?)
}

fn load(path: &Path) -> Result<LoadedFunction> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: Some(path.to_path_buf()),
        source,
    })?;
    parse_function_json(&text).map_err(|e| match e {
        Error::Parse { location, message } => CliError::Core(Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        }),
        other => CliError::Core(other),
    })
}

fn load_radial(path: &Path) -> Result<RadialFunction> {
    match load(path)? {
        LoadedFunction::Radial(f) => Ok(f),
        LoadedFunction::Sparse(f) => Ok(RadialFunction::from_sparse(&f)?),
    }
}

/// `chi3` and friends.
fn parse_radial_spec(ctx: &GroupContext, spec: &str) -> Result<RadialFunction> {
    let k = spec
        .strip_prefix("chi")
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| Error::Parse {
            location: "--radial".into(),
            message: format!("expected chi<k>, got {spec:?}"),
        })?;
    Ok(RadialFunction::chi(ctx, k))
}

/// Letters (`abA`) or comma-separated signed indices (`1,2,-1`).
fn parse_word(ctx: &GroupContext, text: &str) -> Result<Word> {
    if !text.chars().any(|c| c.is_ascii_digit()) {
        return Ok(Word::parse(ctx, text)?);
    }
    let raw = text
        .split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim().parse::<i64>().map_err(|e| Error::Parse {
                location: format!("--word entry {i}"),
                message: e.to_string(),
            })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Word::reduce(ctx, &raw)?)
}

fn emit<T: Serialize + ?Sized>(
    common: &Common,
    value: &T,
    csv: impl FnOnce(&mut Sink) -> io::Result<()>,
) -> Result<()> {
    let mut out = sink(common)?;
    if common.json {
        out.json(value)?;
    } else {
        csv(&mut out)?;
    }
    out.finish()?;
    Ok(())
}

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::EstimateNorm {
            common,
            radial,
            input,
            q,
            max_n,
            path,
        } => {
            let ctx = context(common.d)?;
            let loaded = match (&radial, &input) {
                (Some(spec), _) => LoadedFunction::Radial(parse_radial_spec(&ctx, spec)?),
                (None, Some(path)) => load(path)?,
                (None, None) => unreachable!("clap requires one of --radial, --input"),
            };
            let input: NormInput = match &loaded {
                LoadedFunction::Sparse(f) => f.into(),
                LoadedFunction::Radial(f) => f.into(),
            };
            let path = match path {
                PathArg::Auto => EvalPath::Auto,
                PathArg::Sparse => EvalPath::Sparse,
                PathArg::Radial => EvalPath::Radial,
            };
            let schedule = doubling_schedule(max_n)?;
            let report = power_norm_sequence_with(input, q, &schedule, path)?;
            emit(&common, &report, |out| report.write_csv(out))?;
            Ok(SUCCESS)
        }

        Command::VerifyLemmas {
            common,
            seed,
            cases,
            rhs_scale,
            battery,
        } => {
            let opts = BatteryOptions {
                seed,
                cases,
                rhs_scale,
            };
            let mut summaries = Vec::new();
            if matches!(battery, BatteryArg::All | BatteryArg::Conv) {
                summaries.push(conv_battery(&opts)?);
            }
            if matches!(battery, BatteryArg::All | BatteryArg::Split) {
                summaries.push(split_battery(&opts)?);
            }
            if matches!(battery, BatteryArg::All | BatteryArg::Rep) {
                summaries.push(rep_battery(&opts)?);
            }
            emit(&common, &summaries, |out| write_summaries(out, &summaries))?;
            Ok(status(summaries.iter().all(BatterySummary::all_passed)))
        }

        Command::PdCheck {
            common,
            alpha,
            input,
            max_k,
        } => {
            let report = match &input {
                None => pd_battery_phi_alpha(&context(common.d)?, alpha, max_k)?,
                Some(path) => match load(path)? {
                    LoadedFunction::Sparse(f) => gram_matrix(&f, &enumerate_ball(f.ctx(), max_k)?)?,
                    LoadedFunction::Radial(f) => {
                        let phi = RadialProfile::from_radial(&f)?;
                        gram_matrix(&phi, &enumerate_ball(f.ctx(), max_k)?)?
                    }
                },
            };
            emit(&common, &report, |out| write_gram(out, &report))?;
            Ok(status(report.psd))
        }

        Command::Conditions {
            common,
            alpha,
            input,
            p,
            max_k,
            condition,
        } => {
            let phi = match &input {
                None => RadialProfile::phi_alpha(&context(common.d)?, alpha)?,
                Some(path) => RadialProfile::from_radial(&load_radial(path)?)?,
            };
            match condition {
                Some(c) => {
                    let report = match c {
                        2 => condition2_sup(&phi, p, max_k)?,
                        3 => condition3_sum(&phi, p, max_k)?,
                        _ => condition4_limsup(&phi, p, max_k)?,
                    };
                    emit(&common, &report, |out| report.write_csv(out))?;
                    Ok(SUCCESS)
                }
                None => {
                    let reports = condition_battery(&phi, p, max_k)?;
                    emit(&common, &reports, |out| write_conditions(out, &reports))?;
                    Ok(status(chain_holds(&reports)))
                }
            }
        }

        Command::Threshold { common, p } => {
            let ctx = context(common.d)?;
            let threshold = lp_threshold(&ctx, p)?;
            #[derive(Serialize)]
            struct Doc {
                d: usize,
                p: f64,
                threshold: f64,
            }
            let doc = Doc {
                d: common.d,
                p,
                threshold,
            };
            emit(&common, &doc, |out| writeln!(out, "{threshold}"))?;
            Ok(SUCCESS)
        }

        Command::Separation {
            common,
            q,
            p,
            alpha,
            max_k,
        } => {
            let report = separation_witness(&context(common.d)?, q, p, alpha, max_k)?;
            emit(&common, &report, |out| {
                writeln!(out, "lower,upper,alpha,separates")?;
                writeln!(
                    out,
                    "{},{},{},{}",
                    report.lower, report.upper, report.alpha, report.separates
                )?;
                writeln!(out)?;
                writeln!(out, "exponent,condition,value,verdict")?;
                for r in report.conditions_p.iter().chain(&report.conditions_q) {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        r.p,
                        r.condition,
                        r.value,
                        r.verdict.as_str()
                    )?;
                }
                Ok(())
            })?;
            Ok(status(report.separates))
        }

        Command::TraceGrowth {
            common,
            word,
            max_n,
        } => {
            let ctx = context(common.d)?;
            let w = parse_word(&ctx, &word)?;
            let rows = trace_growth_check(&ctx, &w, max_n)?;
            emit(&common, &rows, |out| {
                writeln!(out, "n,count,lower_bound,pass")?;
                for r in &rows {
                    writeln!(out, "{},{},{},{}", r.n, r.count, r.lower_bound, r.pass)?;
                }
                Ok(())
            })?;
            Ok(status(rows.iter().all(|r| r.pass)))
        }

        Command::Holder {
            common,
            gamma,
            alpha,
            beta,
            p,
            q,
            r,
            cases,
            seed,
        } => {
            if let Some(cases) = cases {
                let opts = BatteryOptions {
                    seed,
                    cases,
                    rhs_scale: 1.0,
                };
                let summary = holder_battery(&opts)?;
                let summaries = [summary];
                emit(&common, &summaries, |out| write_summaries(out, &summaries))?;
                return Ok(status(summaries[0].all_passed()));
            }
            let phi = RadialProfile::phi_alpha(&context(common.d)?, gamma)?;
            let r = match r {
                Some(r) => r,
                None => holder_conjugate(p, q)?,
            };
            let report = holder_triple_check(&phi, alpha, beta, p, q, r)?;
            emit(&common, &report, |out| {
                writeln!(out, "lhs,rhs,pass")?;
                writeln!(out, "{},{},{}", report.lhs, report.rhs, report.pass)
            })?;
            Ok(status(report.pass))
        }
    }
}

fn write_summaries(out: &mut impl Write, summaries: &[BatterySummary]) -> io::Result<()> {
    writeln!(
        out,
        "battery,seed,cases,checks,passed,failed,exact_zero_checks,exact_zero_failures,worst_ratio,first_failure"
    )?;
    for s in summaries {
        let first = s.first_failure.map(|i| i.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            s.name,
            s.seed,
            s.cases,
            s.checks,
            s.passed,
            s.failed(),
            s.exact_zero_checks,
            s.exact_zero_failures,
            s.worst_ratio,
            first
        )?;
    }
    Ok(())
}

fn write_gram(out: &mut impl Write, report: &GramReport) -> io::Result<()> {
    let max = report.eigenvalues.last().copied().unwrap_or(0.0);
    writeln!(
        out,
        "base_size,min_eigenvalue,max_eigenvalue,hermitian_defect,tolerance,psd"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        report.base_set.len(),
        report.min_eigenvalue,
        max,
        report.hermitian_defect,
        report.tolerance,
        report.psd
    )
}

fn write_conditions(out: &mut impl Write, reports: &[ConditionReport]) -> io::Result<()> {
    writeln!(out, "condition,p,value,divergence,k_min,k_max,verdict")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.condition,
            r.p,
            r.value,
            r.divergence,
            r.k_range.0,
            r.k_range.1,
            r.verdict.as_str()
        )?;
    }
    Ok(())
}

//! Command-line front end: dataset ingestion, argument parsing, and
//! serialization of fits, study tables, evaluation grids, and model
//! comparisons.
//!
//! Exit codes: 0 success, 1 usage or data error, 2 fit did not converge
//! (the result is still printed).

use crate::error::{IplError, Result};
use crate::estimation::{self, FitOptions, FitResult, Sample};
use crate::gof::{self, ModelOutcome};
use crate::model::{self, IplParams};
use crate::study::{self, Sampler, StudyConfig};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

/// Parsed dataset: values in input order plus a count of skipped lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub source: String,
    pub values: Vec<f64>,
    pub skipped_lines: usize,
}

/// Parses newline-, comma-, or whitespace-separated positive reals.
///
/// Blank lines and lines containing non-numeric tokens are skipped and
/// counted; a line that parses to a nonpositive or non-finite number is a
/// hard error naming the line.
pub fn parse_dataset(text: &str, source: &str) -> Result<Dataset> {
    let mut values = Vec::new();
    let mut skipped = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            skipped += 1;
            continue;
        }
        let mut parsed = Vec::with_capacity(tokens.len());
        let mut numeric = true;
        for t in &tokens {
            match t.parse::<f64>() {
                Ok(v) => parsed.push(v),
                Err(_) => {
                    numeric = false;
                    break;
                }
            }
        }
        if !numeric {
            skipped += 1;
            continue;
        }
        for v in parsed {
            if !v.is_finite() || v <= 0.0 {
                return Err(IplError::InvalidConfig {
                    what: format!("{source}: line {}: value {v} must be finite and > 0", idx + 1),
                });
            }
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(IplError::InvalidConfig {
            what: format!("{source}: no numeric values found"),
        });
    }
    Ok(Dataset {
        source: source.to_string(),
        values,
        skipped_lines: skipped,
    })
}

/// Formats with 10 significant digits in plain decimal notation.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).clamp(0, 30) as usize;
    format!("{x:.decimals$}")
}

#[derive(Parser)]
#[command(
    name = "ipl",
    version,
    about = "Inverse power Lindley distribution toolkit: evaluate, fit, simulate, compare"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalFn {
    Pdf,
    Cdf,
    Hazard,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplerArg {
    /// Inverse-transform sampling through the quantile function.
    Inv,
    /// Lindley exponential/gamma mixture, transformed.
    Mix,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the two-parameter model to a dataset and report uncertainty,
    /// information criteria, KS fit, and the test of the alpha = 1
    /// restriction.
    Fit {
        /// Input file of positive reals; "-" reads stdin.
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Compare the two-parameter model against its alpha = 1 special case.
    Gof {
        /// Input file of positive reals; "-" reads stdin.
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Emit a pdf/cdf/hazard grid as CSV for plotting.
    Eval {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "fn", value_enum)]
        function: EvalFn,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        points: usize,
        /// Log-spaced grid instead of linear.
        #[arg(long)]
        log: bool,
    },
    /// Monte Carlo accuracy study: bias and MSE of the estimators across
    /// scenarios and sample sizes.
    Simulate {
        /// Scenario theta values; repeat the flag, paired with --alpha.
        #[arg(long)]
        theta: Vec<f64>,
        /// Scenario alpha values; repeat the flag, paired with --theta.
        #[arg(long)]
        alpha: Vec<f64>,
        /// Comma-separated strictly increasing sample sizes.
        #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100, 200, 400])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 500)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerArg::Inv)]
        sampler: SamplerArg,
        /// Write to this path instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Worker threads; 1 forces the serial path.
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match cli.command {
        Command::Fit { input, format } => cmd_fit(&input, format),
        Command::Gof { input, format } => cmd_gof(&input, format),
        Command::Eval {
            theta,
            alpha,
            function,
            from,
            to,
            points,
            log,
        } => cmd_eval(theta, alpha, function, from, to, points, log),
        Command::Simulate {
            theta,
            alpha,
            sizes,
            reps,
            seed,
            sampler,
            output,
            format,
            threads,
        } => cmd_simulate(
            &theta, &alpha, &sizes, reps, seed, sampler, output.as_deref(), format, threads,
        ),
    }
}

fn fail(err: impl std::fmt::Display) -> i32 {
    eprintln!("error: {err}");
    1
}

fn load_sample(input: &str) -> Result<Sample> {
    let (text, source) = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| IplError::InvalidConfig {
                what: format!("stdin: {e}"),
            })?;
        (buf, "stdin".to_string())
    } else {
        let text = fs::read_to_string(input).map_err(|e| IplError::InvalidConfig {
            what: format!("{input}: {e}"),
        })?;
        (text, input.to_string())
    };
    let dataset = parse_dataset(&text, &source)?;
    if dataset.skipped_lines > 0 {
        eprintln!(
            "note: skipped {} non-numeric/blank line(s) in {}",
            dataset.skipped_lines, dataset.source
        );
    }
    Sample::new(dataset.values)
}

/// Assembles the documented fit JSON: model, params, std_err, loglik,
/// aic, bic, ks, lr_alpha1, converged.
fn fit_json(
    fit: &FitResult,
    aic: f64,
    bic: f64,
    ks_stat: f64,
    ks_p: f64,
    lr: Option<&estimation::LrTest>,
) -> serde_json::Value {
    json!({
        "model": "ipl",
        "params": { "theta": fit.params.theta(), "alpha": fit.params.alpha() },
        "std_err": fit.std_err.map(|(t, a)| json!({ "theta": t, "alpha": a })),
        "loglik": fit.loglik,
        "aic": aic,
        "bic": bic,
        "ks": { "stat": ks_stat, "pvalue": ks_p },
        "lr_alpha1": lr.map(|t| json!({ "stat": t.statistic, "pvalue": t.p_value })),
        "converged": fit.converged,
    })
}

fn cmd_fit(input: &str, format: ReportFormat) -> i32 {
    let sample = match load_sample(input) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let fit = match estimation::fit_mle(&sample, &FitOptions::default()) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let (aic, bic) = match gof::information_criteria(fit.loglik, 2, sample.len()) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let params = fit.params;
    let ks_stat = gof::ks_statistic(&sample, |y| model::cdf(&params, y).unwrap_or(f64::NAN));
    let ks_p = gof::ks_pvalue(ks_stat, sample.len());
    let lr = estimation::fit_inverse_lindley(&sample)
        .and_then(|nested| estimation::lr_from_fits(&fit, &nested))
        .ok();

    match format {
        ReportFormat::Json => {
            let doc = fit_json(&fit, aic, bic, ks_stat, ks_p, lr.as_ref());
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
        ReportFormat::Table => {
            println!("model        ipl");
            println!("n            {}", sample.len());
            match fit.std_err {
                Some((st, sa)) => {
                    println!(
                        "theta        {}  (std err {})",
                        sig10(fit.params.theta()),
                        sig10(st)
                    );
                    println!(
                        "alpha        {}  (std err {})",
                        sig10(fit.params.alpha()),
                        sig10(sa)
                    );
                }
                None => {
                    println!("theta        {}  (std err n/a: singular information)", sig10(fit.params.theta()));
                    println!("alpha        {}  (std err n/a: singular information)", sig10(fit.params.alpha()));
                }
            }
            println!("loglik       {}", sig10(fit.loglik));
            println!("aic          {}", sig10(aic));
            println!("bic          {}", sig10(bic));
            println!("ks stat      {}  (p value {})", sig10(ks_stat), sig10(ks_p));
            match &lr {
                Some(t) => println!(
                    "lr alpha=1   {}  (p value {})",
                    sig10(t.statistic),
                    sig10(t.p_value)
                ),
                None => println!("lr alpha=1   n/a"),
            }
            println!("iterations   {}", fit.iterations);
            println!("converged    {}", if fit.converged { "yes" } else { "no" });
        }
    }
    if fit.converged {
        0
    } else {
        2
    }
}

fn cmd_gof(input: &str, format: ReportFormat) -> i32 {
    let sample = match load_sample(input) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let outcomes = match gof::compare_models(&sample) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    match format {
        ReportFormat::Json => {
            let docs: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| match o {
                    ModelOutcome::Report(r) => json!({
                        "model": r.model_name,
                        "k": r.k,
                        "loglik": r.loglik,
                        "aic": r.aic,
                        "bic": r.bic,
                        "ks": { "stat": r.ks_stat, "pvalue": r.ks_pvalue },
                        "converged": r.converged,
                    }),
                    ModelOutcome::Failed { model_name, reason } => json!({
                        "model": model_name,
                        "error": reason,
                    }),
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Array(docs)).expect("json")
            );
        }
        ReportFormat::Table => {
            println!(
                "{:<16} {:>2} {:>16} {:>16} {:>16} {:>14} {:>14}",
                "model", "k", "loglik", "aic", "bic", "ks stat", "ks p"
            );
            for o in &outcomes {
                match o {
                    ModelOutcome::Report(r) => println!(
                        "{:<16} {:>2} {:>16} {:>16} {:>16} {:>14} {:>14}",
                        r.model_name,
                        r.k,
                        sig10(r.loglik),
                        sig10(r.aic),
                        sig10(r.bic),
                        sig10(r.ks_stat),
                        sig10(r.ks_pvalue)
                    ),
                    ModelOutcome::Failed { model_name, reason } => {
                        println!("{model_name:<16} failed: {reason}")
                    }
                }
            }
        }
    }
    let all_good = outcomes.iter().all(|o| match o {
        ModelOutcome::Report(r) => r.converged,
        ModelOutcome::Failed { .. } => false,
    });
    if all_good {
        0
    } else {
        2
    }
}

fn cmd_eval(
    theta: f64,
    alpha: f64,
    function: EvalFn,
    from: f64,
    to: f64,
    points: usize,
    log: bool,
) -> i32 {
    let params = match IplParams::new(theta, alpha) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    if !(from > 0.0 && from < to && to.is_finite()) {
        return fail(format!("need 0 < from < to, got from = {from}, to = {to}"));
    }
    if points < 2 {
        return fail(format!("need at least 2 grid points, got {points}"));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                return to;
            }
            let step = i as f64 / (points - 1) as f64;
            if log {
                (from.ln() + step * (to.ln() - from.ln())).exp()
            } else {
                from + step * (to - from)
            }
        })
        .collect();
    println!("y,value");
    for y in grid {
        let value = match function {
            EvalFn::Pdf => model::pdf(&params, y),
            EvalFn::Cdf => model::cdf(&params, y),
            EvalFn::Hazard => model::hazard(&params, y).map(|h| h.value),
        };
        match value {
            Ok(v) => println!("{y},{v}"),
            Err(e) => return fail(e),
        }
    }
    0
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    theta: &[f64],
    alpha: &[f64],
    sizes: &[usize],
    reps: usize,
    seed: u64,
    sampler: SamplerArg,
    output: Option<&std::path::Path>,
    format: TableFormat,
    threads: Option<usize>,
) -> i32 {
    if theta.len() != alpha.len() {
        return fail(format!(
            "--theta given {} time(s) but --alpha {} time(s); they pair up per scenario",
            theta.len(),
            alpha.len()
        ));
    }
    let scenarios = if theta.is_empty() {
        StudyConfig::default().scenarios
    } else {
        let mut v = Vec::with_capacity(theta.len());
        for (&t, &a) in theta.iter().zip(alpha) {
            match IplParams::new(t, a) {
                Ok(p) => v.push(p),
                Err(e) => return fail(e),
            }
        }
        v
    };
    let cfg = StudyConfig {
        scenarios,
        sample_sizes: sizes.to_vec(),
        replicates: reps,
        seed,
        sampler: match sampler {
            SamplerArg::Inv => Sampler::InverseTransform,
            SamplerArg::Mix => Sampler::LindleyMixture,
        },
    };
    let table = match threads {
        Some(1) => study::run_study_serial(&cfg),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| study::run_study(&cfg)),
            Err(e) => return fail(e),
        },
        None => study::run_study(&cfg),
    };
    let table = match table {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let rendered = match format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&table).expect("json");
            s.push('\n');
            s
        }
    };
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, rendered) {
                return fail(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{rendered}"),
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_dataset_newlines() {
        let d = parse_dataset("1.0\n2.0\n", "t").unwrap();
        assert_eq!(d.values, vec![1.0, 2.0]);
        assert_eq!(d.skipped_lines, 0);
    }

    #[test]
    fn parse_dataset_commas_and_whitespace() {
        let d = parse_dataset("1.0, 2.0, 3.5", "t").unwrap();
        assert_eq!(d.values, vec![1.0, 2.0, 3.5]);
        let d = parse_dataset("1.0\t2.0  3.5\n4.25\n", "t").unwrap();
        assert_eq!(d.values, vec![1.0, 2.0, 3.5, 4.25]);
    }

    #[test]
    fn parse_dataset_nonpositive_is_hard_error_with_line() {
        let err = parse_dataset("1.0\n-2\n", "t").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(parse_dataset("0.0\n", "t").is_err());
        let err = parse_dataset("1.0\nnan\n", "t").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(parse_dataset("inf\n", "t").is_err());
    }

    #[test]
    fn parse_dataset_skips_blank_and_non_numeric_lines() {
        let d = parse_dataset("# header\n1.0\n\n2.0\nabc def\n", "t").unwrap();
        assert_eq!(d.values, vec![1.0, 2.0]);
        assert_eq!(d.skipped_lines, 3);
    }

    #[test]
    fn parse_dataset_empty_is_error() {
        assert!(parse_dataset("", "t").is_err());
        assert!(parse_dataset("\n# nothing\n", "t").is_err());
    }

    #[test]
    fn sig10_formats_ten_significant_digits() {
        assert_eq!(sig10(0.7357588823428846), "0.7357588823");
        assert_eq!(sig10(1.3293403881791370), "1.329340388");
        assert_eq!(sig10(1234.56789), "1234.567890");
        assert_eq!(sig10(0.0), "0.000000000");
        assert_eq!(sig10(-0.05001368376395665), "-0.05001368376");
        assert_eq!(sig10(f64::INFINITY), "inf");
    }
}

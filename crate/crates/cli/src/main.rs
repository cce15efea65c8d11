//! `hypercs` command-line front end.

mod complex;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use hypercs::kernels::{moment_quadrature, KernelFamily, MomentFunctional};
use hypercs::states::{
    bg_state_with, kp_state_with, overlap, sequential_displacement_with, shift_norms, shifted_state_with, ShiftSpec,
    Truncation,
};
use hypercs::verify::{run_suite, Suite, VerifyConfig};
use hypercs::{Model, ModelParams, StateVector};

use crate::complex::parse_complex;
use crate::output::{cell, cnum, cvec, num, write_csv, write_json};

const MAX_MOMENT_ORDER: usize = 30;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Core(#[from] hypercs::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Core(e) if e.is_input_error() => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Bg,
    Kp,
}

#[derive(Parser, Debug)]
#[command(name = "hypercs", version, about = "Hypergeometric coherent states on truncated Fock spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Family, e.g. "p=0,q=1;a=;b=1.5".
    #[arg(long, global = true, default_value = "p=0,q=0;a=;b=")]
    params: String,
    /// Truncation tolerance in (0, 1e-2].
    #[arg(long, global = true, default_value = "1e-10")]
    tol: f64,
    /// "auto" or a highest Fock level.
    #[arg(long, global = true, default_value = "auto")]
    trunc: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of a BG or KP coherent state.
    State {
        #[arg(long, value_enum, default_value_t = Kind::Bg)]
        kind: Kind,
        /// Label, e.g. 0.5-0.2i.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Shifted-argument state by the direct and the sequential route.
    Shift {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        eps: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lam: f64,
        /// Second label, shifted by `lam`.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Overlap of two BG states.
    Overlap {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Moment table of the measure.
    Moments {
        #[arg(long, default_value_t = 10)]
        l_max: usize,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Resolved global options.
struct RunConfig {
    model: Model,
    tol: f64,
    trunc: Truncation,
    format: Format,
    seed: u64,
}

impl RunConfig {
    fn resolve(g: &Global) -> CliResult<RunConfig> {
        if !(g.tol > 0.0 && g.tol <= 1e-2) {
            return Err(CliError::Input(format!("--tol must lie in (0, 1e-2], got {}", g.tol)));
        }
        let trunc = match g.trunc.trim() {
            "auto" => Truncation::Auto { tol: g.tol },
            n => Truncation::Fixed(
                n.parse().map_err(|_| CliError::Input(format!("--trunc must be 'auto' or a count, got '{n}'")))?,
            ),
        };
        let params: ModelParams = g.params.parse()?;
        Ok(RunConfig { model: Model::new(params)?, tol: g.tol, trunc, format: g.format, seed: g.seed })
    }
}

fn label(s: &str) -> CliResult<Complex64> {
    parse_complex(s).map_err(CliError::Input)
}

fn coeff_rows(v: &StateVector) -> Vec<Vec<String>> {
    v.coeffs.iter().enumerate().map(|(n, c)| vec![n.to_string(), cell(c.re), cell(c.im)]).collect()
}

fn cmd_state(cfg: &RunConfig, kind: Kind, z: Complex64) -> CliResult<()> {
    let v = match kind {
        Kind::Bg => bg_state_with(&cfg.model, z, cfg.trunc)?,
        Kind::Kp => kp_state_with(&cfg.model, z, cfg.trunc)?,
    };
    match cfg.format {
        Format::Json => write_json(&json!({
            "params": cfg.model.to_string(),
            "z": cnum(z),
            "kind": match kind { Kind::Bg => "bg", Kind::Kp => "kp" },
            "trunc": v.trunc(),
            "coeffs": cvec(&v.coeffs),
            "norm_residual": num((v.norm() - 1.0).abs()),
            "tail_bound": num(v.tail_bound),
        }))?,
        Format::Csv => write_csv(&["n", "re", "im"], &coeff_rows(&v))?,
    }
    Ok(())
}

fn cmd_shift(cfg: &RunConfig, shift: &ShiftSpec) -> CliResult<()> {
    let direct = shifted_state_with(&cfg.model, shift, cfg.trunc)?;
    let seq = sequential_displacement_with(&cfg.model, shift, cfg.trunc)?;
    let norms = shift_norms(&cfg.model, shift, cfg.tol)?;
    let max_gap = direct.max_abs_diff(&seq.state);
    match cfg.format {
        Format::Json => write_json(&json!({
            "params": cfg.model.to_string(),
            "eps": num(shift.eps),
            "z": cnum(shift.z),
            "lam": num(shift.lam),
            "sigma": cnum(shift.sigma),
            "trunc": direct.trunc(),
            "shifted": cvec(&direct.coeffs),
            "sequential": cvec(&seq.state.coeffs),
            "max_gap": num(max_gap),
            "tail_bound": num(direct.tail_bound),
            "factor": num(seq.factor),
            "predicted_factor": num(seq.predicted_factor),
            "module_norm": num(norms.module_norm),
            "literal_norm": num(norms.literal_norm),
            "angular_norm": num(norms.angular_norm),
            "diagnostic_gap": num(norms.literal_gap),
        }))?,
        Format::Csv => {
            let rows = direct
                .coeffs
                .iter()
                .zip(&seq.state.coeffs)
                .enumerate()
                .map(|(n, (a, b))| vec![n.to_string(), cell(a.re), cell(a.im), cell(b.re), cell(b.im)])
                .collect::<Vec<_>>();
            write_csv(&["n", "shifted_re", "shifted_im", "sequential_re", "sequential_im"], &rows)?
        }
    }
    Ok(())
}

fn cmd_overlap(cfg: &RunConfig, z: Complex64, w: Complex64) -> CliResult<()> {
    let r = overlap(&cfg.model, z, w)?;
    match cfg.format {
        Format::Json => write_json(&json!({
            "params": cfg.model.to_string(),
            "z": cnum(z),
            "w": cnum(w),
            "kernel": cnum(r.kernel),
            "inner_product": cnum(r.inner_product),
            "gap": num(r.gap),
        }))?,
        Format::Csv => write_csv(
            &["kernel_re", "kernel_im", "inner_re", "inner_im", "gap"],
            &[vec![
                cell(r.kernel.re),
                cell(r.kernel.im),
                cell(r.inner_product.re),
                cell(r.inner_product.im),
                cell(r.gap),
            ]],
        )?,
    }
    Ok(())
}

fn cmd_moments(cfg: &RunConfig, l_max: usize) -> CliResult<()> {
    if l_max > MAX_MOMENT_ORDER {
        return Err(CliError::Input(format!("--l-max must be at most {MAX_MOMENT_ORDER}, got {l_max}")));
    }
    let functional = MomentFunctional::new(&cfg.model);
    let supported = KernelFamily::of(&cfg.model).is_ok();
    let mut rows = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let exact = functional.moment_exact(l);
        let quad = if supported {
            let q = moment_quadrature(&cfg.model, l, cfg.tol.max(1e-12))?;
            Some((q, (q - exact).abs() / exact.abs()))
        } else {
            None
        };
        rows.push((l, exact, quad));
    }
    match cfg.format {
        Format::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|&(l, exact, quad)| {
                    let mut row = json!({ "l": l, "moment_exact": num(exact) });
                    if let Some((q, gap)) = quad {
                        row["moment_quadrature"] = num(q);
                        row["rel_gap"] = num(gap);
                    }
                    row
                })
                .collect();
            write_json(&json!({ "params": cfg.model.to_string(), "rows": table }))?
        }
        Format::Csv => {
            let header: &[&str] =
                if supported { &["l", "moment_exact", "moment_quadrature", "rel_gap"] } else { &["l", "moment_exact"] };
            let body = rows
                .iter()
                .map(|&(l, exact, quad)| {
                    let mut r = vec![l.to_string(), cell(exact)];
                    if let Some((q, gap)) = quad {
                        r.extend([cell(q), cell(gap)]);
                    }
                    r
                })
                .collect::<Vec<_>>();
            write_csv(header, &body)?
        }
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, suite: Suite) -> CliResult<()> {
    let report = run_suite(&cfg.model, suite, &VerifyConfig { tol: cfg.tol, seed: cfg.seed });
    match cfg.format {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    let mut row = json!({
                        "name": c.name,
                        "paper_ref": c.paper_ref,
                        "status": c.status,
                        "max_err": num(c.max_err),
                        "tol": num(c.tol),
                    });
                    if let Some(d) = &c.detail {
                        row["detail"] = Value::String(d.clone());
                    }
                    row
                })
                .collect();
            write_json(&json!({
                "suite": report.suite,
                "params": report.params,
                "checks": checks,
                "failed_count": report.failed_count,
            }))?
        }
        Format::Csv => {
            let rows = report
                .checks
                .iter()
                .map(|c| {
                    let status = serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(String::from));
                    vec![
                        c.name.clone(),
                        c.paper_ref.clone(),
                        status.unwrap_or_default(),
                        cell(c.max_err),
                        cell(c.tol),
                        c.detail.clone().unwrap_or_default(),
                    ]
                })
                .collect::<Vec<_>>();
            write_csv(&["name", "paper_ref", "status", "max_err", "tol", "detail"], &rows)?
        }
    }
    if report.failed_count > 0 {
        return Err(CliError::Numerical(format!("{} check(s) failed", report.failed_count)));
    }
    Ok(())
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("HYPERCS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("HYPERCS_THREADS must be a positive count, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let cfg = RunConfig::resolve(&cli.global)?;
    match &cli.command {
        Command::State { kind, z } => cmd_state(&cfg, *kind, label(z)?),
        Command::Shift { eps, z, lam, sigma } => cmd_shift(&cfg, &ShiftSpec::new(*eps, label(z)?, *lam, label(sigma)?)),
        Command::Overlap { z, w } => cmd_overlap(&cfg, label(z)?, label(w)?),
        Command::Moments { l_max } => cmd_moments(&cfg, *l_max),
        Command::Verify { suite } => cmd_verify(&cfg, suite.parse()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line interface: the spectrum, verify, reconcile, and duality
//! subcommands over the three monopole systems.
//!
//! Exit codes: 0 on success, 2 when a requested check fails (an admissible
//! module with a negative interior structure function, verification
//! residuals over budget, or a duality residual over budget), 3 for
//! configuration problems.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{casimir_closed, AlgebraError, Reading};
use crate::repcheck::{fit_realization, verify_algebra, verify_casimir};
use crate::repfinder::{
    duality_check, find_representations, proportionality, reconcile_generic, spectrum_table,
    ReconcileOutcome, Representation, SolveOptions, SpectrumTable,
};
use crate::report::{
    discrepancy_json, fmt_f64, row_json, spectrum_csv, spectrum_text, Json, SCHEMA,
};
use crate::poly::Poly;
use crate::systems::{structure_constants, Charges, SystemId, SystemsError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

/// Duality residual budget for a passing scan.
pub const DUALITY_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid parameter: expected name=value, got {0}")]
    BadParam(String),
    #[error("invalid value for {0}: {1}")]
    BadValue(String, String),
    #[error("cannot read config file {0}: {1}")]
    UnreadableConfig(String, String),
    #[error("invalid config file: {0}")]
    BadConfig(String),
    #[error("missing required option: {0}")]
    Missing(String),
    #[error("unsupported format: csv is only available for the spectrum command")]
    CsvUnsupported,
    #[error("cannot write {0}: {1}")]
    Write(String, String),
    #[error(transparent)]
    System(#[from] SystemsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Parser, Debug)]
#[command(
    name = "specgen",
    version,
    about = "Algebraic spectrum generator for quadratic symmetry algebras of monopole systems"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the module constraints and print the admissible spectrum.
    Spectrum {
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Realize solved modules as matrices and verify the algebra relations.
    Verify {
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check the generic structure-function form against the factored
    /// closed form under a chosen reading of the broken printed line.
    Reconcile {
        #[command(flatten)]
        solve: SolveArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Which reading of the generic form to test (A or B).
        #[arg(long, value_name = "A|B")]
        reading: Option<String>,
        /// Run the scale-invariance self test instead of a system.
        #[arg(long)]
        self_test: bool,
    },
    /// Scan the residual of the spectrum-level duality identity.
    Duality {
        /// Largest module label p to include.
        #[arg(long, value_name = "N")]
        p_max: Option<u32>,
        /// Points per index axis on [0, 5].
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        /// JSON config file; command-line flags override its entries.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct SolveArgs {
    /// System name: micz3d, osc4d, or miczs3.
    #[arg(long)]
    system: Option<String>,
    /// Central charge assignment, repeatable: --param m=0.5
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// JSON config file; command-line flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Largest module label p to solve.
    #[arg(long, value_name = "N")]
    p_max: Option<u32>,
    /// Relative boundary-exactness tolerance for keeping solved modules.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    system: Option<String>,
    params: Option<std::collections::BTreeMap<String, f64>>,
    p_max: Option<u32>,
    tol: Option<f64>,
    reading: Option<String>,
    grid: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, ConfigError> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = fs::read_to_string(path).map_err(|e| {
        ConfigError::UnreadableConfig(path.display().to_string(), e.to_string())
    })?;
    serde_json::from_str(&text).map_err(|e| ConfigError::BadConfig(e.to_string()))
}

fn split_param(raw: &str) -> Result<(String, f64), ConfigError> {
    let Some((name, value)) = raw.split_once('=') else {
        return Err(ConfigError::BadParam(raw.to_string()));
    };
    let parsed: f64 = value
        .trim()
        .parse()
        .map_err(|_| ConfigError::BadValue(name.trim().to_string(), value.trim().to_string()))?;
    Ok((name.trim().to_string(), parsed))
}

#[derive(Debug)]
struct Resolved {
    system: SystemId,
    charges: Charges,
    p_max: u32,
    tol: f64,
}

fn resolve_solve(args: &SolveArgs) -> Result<(Resolved, ConfigFile), ConfigError> {
    let file = load_config(args.config.as_deref())?;
    let system_name = args
        .system
        .clone()
        .or_else(|| file.system.clone())
        .ok_or_else(|| ConfigError::Missing("--system".to_string()))?;
    let system: SystemId = system_name.parse()?;
    let mut charges = Charges::new();
    if let Some(params) = &file.params {
        for (k, v) in params {
            charges.insert(k, *v);
        }
    }
    for raw in &args.params {
        let (k, v) = split_param(raw)?;
        charges.insert(&k, v);
    }
    charges.validate_for(system)?;
    let resolved = Resolved {
        system,
        charges,
        p_max: args.p_max.or(file.p_max).unwrap_or(3),
        tol: args.tol.or(file.tol).unwrap_or(1e-10),
    };
    Ok((resolved, file))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), ConfigError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| ConfigError::Write(path.display().to_string(), e.to_string())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn charges_json(charges: &Charges) -> Json {
    Json::Obj(
        charges
            .iter()
            .map(|(k, v)| (k.to_string(), Json::Num(v)))
            .collect(),
    )
}

fn accepted_reps(
    system: SystemId,
    charges: &Charges,
    p: u32,
    opts: &SolveOptions,
) -> Result<Vec<Representation>, SystemsError> {
    Ok(find_representations(system, charges, p, opts)?
        .into_iter()
        .filter(|r| r.accepted())
        .collect())
}

fn cmd_spectrum(resolved: &Resolved, output: &OutputArgs) -> Result<i32, ConfigError> {
    let opts = SolveOptions {
        tol: resolved.tol,
        phi_scale: 1.0,
    };
    let table = spectrum_table(resolved.system, &resolved.charges, resolved.p_max, &opts)?;
    let text = match output.format {
        OutputFormat::Csv => spectrum_csv(&table),
        OutputFormat::Table => spectrum_text(&table),
        OutputFormat::Json => {
            let doc = Json::obj(vec![
                ("schema", Json::str(SCHEMA)),
                ("command", Json::str("spectrum")),
                ("system", Json::str(resolved.system.as_str())),
                ("charges", charges_json(&resolved.charges)),
                ("p_max", Json::Int(resolved.p_max as i64)),
                ("tol", Json::Num(resolved.tol)),
                ("rows", Json::Arr(table.rows.iter().map(row_json).collect())),
                (
                    "notes",
                    Json::Arr(table.notes.iter().map(Json::str).collect()),
                ),
            ]);
            doc.render() + "\n"
        }
    };
    emit(&text, output.out.as_deref())?;
    Ok(spectrum_exit_code(&table))
}

/// Exit code policy for spectrum runs: any admissible module that fails
/// interior positivity turns the run into a check failure.
fn spectrum_exit_code(table: &SpectrumTable) -> i32 {
    if table.rows.iter().any(|r| !r.positivity_ok) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

fn verify_one(
    system: SystemId,
    rep: &Representation,
) -> Result<(Json, f64), String> {
    let sc = structure_constants(system, &rep.charges).map_err(|e| e.to_string())?;
    let fit = fit_realization(&sc, rep.p, rep.u).map_err(|e| e.to_string())?;
    let res = verify_algebra(&fit.matrices, &sc);
    let (matrix, records) =
        verify_casimir(&fit.matrices, system, &rep.charges).map_err(|e| e.to_string())?;
    let closed = casimir_closed(system, &rep.charges).map_err(|e| e.to_string())?;
    let closure_rel = fit.closure_residual.abs() / (1.0 + sc.z.abs());
    let max_res = res.max().max(closure_rel);
    let doc = Json::obj(vec![
        ("p", Json::Int(rep.p as i64)),
        ("E", Json::Num(rep.e)),
        ("u", Json::Num(rep.u)),
        ("residual_ab", Json::Num(res.commutator_ab)),
        ("residual_ac", Json::Num(res.commutator_ac)),
        ("residual_bc", Json::Num(res.commutator_bc)),
        ("closure_residual", Json::Num(fit.closure_residual)),
        (
            "t",
            Json::Arr(fit.t.iter().map(|&v| Json::Num(v)).collect()),
        ),
        ("casimir_matrix", Json::Num(matrix.value)),
        ("casimir_closed", Json::Num(closed.value)),
        (
            "discrepancies",
            Json::Arr(records.iter().map(|r| discrepancy_json(r)).collect()),
        ),
    ]);
    Ok((doc, max_res))
}

fn cmd_verify(resolved: &Resolved, output: &OutputArgs) -> Result<i32, ConfigError> {
    if output.format == OutputFormat::Csv {
        return Err(ConfigError::CsvUnsupported);
    }
    let opts = SolveOptions {
        tol: resolved.tol,
        phi_scale: 1.0,
    };
    let mut checks = Vec::new();
    let mut lines = Vec::new();
    let mut max_residual = 0.0f64;
    let mut all_ok = true;
    for p in 0..=resolved.p_max {
        for rep in accepted_reps(resolved.system, &resolved.charges, p, &opts)? {
            match verify_one(resolved.system, &rep) {
                Ok((doc, res)) => {
                    max_residual = max_residual.max(res);
                    lines.push(format!(
                        "p={p} E={} max_residual={}",
                        fmt_f64(rep.e),
                        fmt_f64(res)
                    ));
                    checks.push(doc);
                }
                Err(message) => {
                    all_ok = false;
                    lines.push(format!("p={p} E={} error: {message}", fmt_f64(rep.e)));
                    checks.push(Json::obj(vec![
                        ("p", Json::Int(p as i64)),
                        ("E", Json::Num(rep.e)),
                        ("u", Json::Num(rep.u)),
                        ("error", Json::str(message)),
                    ]));
                }
            }
        }
    }
    let pass = all_ok && max_residual < resolved.tol * 100.0;
    let text = match output.format {
        OutputFormat::Table => {
            let mut t = lines.join("\n");
            t.push_str(&format!(
                "\nmax residual {} -> {}\n",
                fmt_f64(max_residual),
                if pass { "pass" } else { "fail" }
            ));
            t
        }
        _ => {
            let doc = Json::obj(vec![
                ("schema", Json::str(SCHEMA)),
                ("command", Json::str("verify")),
                ("system", Json::str(resolved.system.as_str())),
                ("charges", charges_json(&resolved.charges)),
                ("p_max", Json::Int(resolved.p_max as i64)),
                ("tol", Json::Num(resolved.tol)),
                ("checks", Json::Arr(checks)),
                ("max_residual", Json::Num(max_residual)),
                ("pass", Json::Bool(pass)),
            ]);
            doc.render() + "\n"
        }
    };
    emit(&text, output.out.as_deref())?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn reconcile_outcome_json(outcome: &ReconcileOutcome) -> Json {
    match outcome {
        ReconcileOutcome::Proportional { constant } => Json::obj(vec![
            ("status", Json::str("proportional")),
            ("constant", Json::Num(*constant)),
        ]),
        ReconcileOutcome::Discrepant(rec) => Json::obj(vec![
            ("status", Json::str("discrepant")),
            ("record", discrepancy_json(rec)),
        ]),
    }
}

fn cmd_reconcile(
    solve: &SolveArgs,
    output: &OutputArgs,
    reading_arg: &Option<String>,
    self_test: bool,
) -> Result<i32, ConfigError> {
    if output.format == OutputFormat::Csv {
        return Err(ConfigError::CsvUnsupported);
    }
    if self_test {
        // Scale invariance of the ratio test on a fixed factored pattern.
        let base = Poly::from_roots(&[0.0, 2.0, 3.0, 4.0], -1.0);
        let xs: Vec<f64> = (0..20).map(|i| 4.0 * (i as f64 + 0.5) / 20.0).collect();
        let outcome = proportionality(&base.scaled(2.0), &base, &xs, "self-test");
        let doc = Json::obj(vec![
            ("schema", Json::str(SCHEMA)),
            ("command", Json::str("reconcile")),
            ("self_test", Json::Bool(true)),
            ("outcome", reconcile_outcome_json(&outcome)),
        ]);
        let text = match output.format {
            OutputFormat::Table => match outcome {
                ReconcileOutcome::Proportional { constant } => {
                    format!("self test: proportional, constant {}\n", fmt_f64(constant))
                }
                ReconcileOutcome::Discrepant(_) => "self test: discrepant\n".to_string(),
            },
            _ => doc.render() + "\n",
        };
        emit(&text, output.out.as_deref())?;
        return Ok(EXIT_OK);
    }
    let (resolved, file) = resolve_solve(solve)?;
    let reading_name = reading_arg
        .clone()
        .or(file.reading)
        .unwrap_or_else(|| "B".to_string());
    let reading: Reading = reading_name
        .parse()
        .map_err(|_| ConfigError::BadValue("reading".to_string(), reading_name.clone()))?;
    let opts = SolveOptions {
        tol: resolved.tol,
        phi_scale: 1.0,
    };
    let mut results = Vec::new();
    let mut lines = Vec::new();
    for p in 0..=resolved.p_max {
        for rep in accepted_reps(resolved.system, &resolved.charges, p, &opts)? {
            let outcome = reconcile_generic(resolved.system, &rep, reading)?;
            lines.push(match &outcome {
                ReconcileOutcome::Proportional { constant } => {
                    format!("p={p} reading={reading} constant={}", fmt_f64(*constant))
                }
                ReconcileOutcome::Discrepant(rec) => {
                    format!("p={p} reading={reading} discrepant ({})", rec.note)
                }
            });
            results.push(Json::obj(vec![
                ("p", Json::Int(p as i64)),
                ("E", Json::Num(rep.e)),
                ("outcome", reconcile_outcome_json(&outcome)),
            ]));
        }
    }
    let text = match output.format {
        OutputFormat::Table => lines.join("\n") + "\n",
        _ => {
            let doc = Json::obj(vec![
                ("schema", Json::str(SCHEMA)),
                ("command", Json::str("reconcile")),
                ("system", Json::str(resolved.system.as_str())),
                ("charges", charges_json(&resolved.charges)),
                ("p_max", Json::Int(resolved.p_max as i64)),
                ("reading", Json::str(reading.to_string())),
                ("results", Json::Arr(results)),
            ]);
            doc.render() + "\n"
        }
    };
    emit(&text, output.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_duality(
    p_max: Option<u32>,
    grid: Option<usize>,
    config: Option<&Path>,
    output: &OutputArgs,
) -> Result<i32, ConfigError> {
    if output.format == OutputFormat::Csv {
        return Err(ConfigError::CsvUnsupported);
    }
    let file = load_config(config)?;
    let p_max = p_max.or(file.p_max).unwrap_or(9);
    let grid = grid.or(file.grid).unwrap_or(20).max(1);
    let axis = |i: usize| {
        if grid == 1 {
            0.0
        } else {
            5.0 * i as f64 / (grid - 1) as f64
        }
    };
    let mut max_residual = 0.0f64;
    let mut worst = (0u32, 0.0f64, 0.0f64);
    for p in 0..=p_max {
        for i in 0..grid {
            for j in 0..grid {
                let (m1, m2) = (axis(i), axis(j));
                let residual = duality_check(p, m1, m2);
                if residual > max_residual {
                    max_residual = residual;
                    worst = (p, m1, m2);
                }
            }
        }
    }
    let pass = max_residual < DUALITY_TOL;
    let text = match output.format {
        OutputFormat::Table => format!(
            "max residual {} at p={} m1={} m2={} over {} points -> {}\n",
            fmt_f64(max_residual),
            worst.0,
            fmt_f64(worst.1),
            fmt_f64(worst.2),
            (p_max as usize + 1) * grid * grid,
            if pass { "pass" } else { "fail" }
        ),
        _ => {
            let doc = Json::obj(vec![
                ("schema", Json::str(SCHEMA)),
                ("command", Json::str("duality")),
                ("p_max", Json::Int(p_max as i64)),
                ("grid", Json::Int(grid as i64)),
                ("max_residual", Json::Num(max_residual)),
                (
                    "worst",
                    Json::obj(vec![
                        ("p", Json::Int(worst.0 as i64)),
                        ("m1", Json::Num(worst.1)),
                        ("m2", Json::Num(worst.2)),
                    ]),
                ),
                ("pass", Json::Bool(pass)),
            ]);
            doc.render() + "\n"
        }
    };
    emit(&text, output.out.as_deref())?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn dispatch(cli: Cli) -> Result<i32, ConfigError> {
    match &cli.command {
        Command::Spectrum { solve, output } => {
            let (resolved, _) = resolve_solve(solve)?;
            cmd_spectrum(&resolved, output)
        }
        Command::Verify { solve, output } => {
            let (resolved, _) = resolve_solve(solve)?;
            cmd_verify(&resolved, output)
        }
        Command::Reconcile {
            solve,
            output,
            reading,
            self_test,
        } => cmd_reconcile(solve, output, reading, *self_test),
        Command::Duality {
            p_max,
            grid,
            config,
            output,
        } => cmd_duality(*p_max, *grid, config.as_deref(), output),
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_CONFIG
        }
    }
}

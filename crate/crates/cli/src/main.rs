use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fdh_core::io::{
    build_efficiency, build_ratios, build_report, build_response_record, read_csv,
    write_report_to, write_response_csv, FullReport, ReportHeader, ResponseDocument,
};
use fdh_core::oracle::OracleConfig;
use fdh_core::scalar::parse_rational;
use fdh_core::technology::dominating_unit;
use fdh_core::verify::{default_checks, verify_dataset, verify_random, VerifyReport};
use fdh_core::{
    build_response, classify_all, phi, Dataset, Delta, FdhError, Orientation, Rational, Scalar,
    Tolerance, UnitOutcome,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fdh", version, about = "Efficiency, returns to scale and scale ratios under FDH technologies")]
struct Cli {
    /// CSV file with header `dmu,in_<name>...,out_<name>...`.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Relative tolerance for ties, in (0, 1e-3).
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_EPS)]
    eps: f64,
    /// Replace inefficient units by their output-oriented VRS projections
    /// before the analysis. Results are marked as projected.
    #[arg(long, global = true)]
    project: bool,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Analyse in exact rational arithmetic instead of f64.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radial efficiency of every unit under one technology.
    Efficiency {
        #[arg(long, value_enum, default_value_t = Technology::Vrs)]
        technology: Technology,
        #[arg(long, value_enum, default_value_t = Orient::Input)]
        orientation: Orient,
    },
    /// Global and one-sided returns to scale for every unit.
    Classify,
    /// Ratio table and scale ratios of one unit.
    Ratios {
        #[arg(long)]
        dmu: String,
    },
    /// Step response function of one unit.
    Response {
        #[arg(long)]
        dmu: String,
        /// Drop steps above this input proportion (decimal or `p/q`).
        #[arg(long)]
        alpha_max: Option<String>,
        /// Also write the steps as `alpha_threshold,beta_value` CSV.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Classification plus the response function of every unit.
    Report,
    /// Cross-check the fast path against brute-force oracles on random
    /// datasets (and on `--input` when given).
    Verify {
        #[arg(long, default_value_t = 10_000)]
        grid_steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Technology {
    Vrs,
    Crs,
    Nirs,
    Ndrs,
}

impl From<Technology> for Delta {
    fn from(t: Technology) -> Self {
        match t {
            Technology::Vrs => Delta::Vrs,
            Technology::Crs => Delta::Crs,
            Technology::Nirs => Delta::Nirs,
            Technology::Ndrs => Delta::Ndrs,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Orient {
    Input,
    Output,
}

impl From<Orient> for Orientation {
    fn from(o: Orient) -> Self {
        match o {
            Orient::Input => Orientation::Input,
            Orient::Output => Orientation::Output,
        }
    }
}

enum Failure {
    Usage(String),
    Data(FdhError),
    Invariant(String),
}

impl From<FdhError> for Failure {
    fn from(e: FdhError) -> Self {
        match e {
            FdhError::InvalidTolerance(_) | FdhError::InvalidConfig(_) => Failure::Usage(e.to_string()),
            FdhError::Unclassifiable { .. } => Failure::Invariant(e.to_string()),
            e => Failure::Data(e),
        }
    }
}

/// Output-oriented VRS projection of every dominated unit. Scores come from
/// the original data, so the technology itself is unchanged.
fn project(d: &Dataset<Rational>) -> Result<(Dataset<Rational>, Vec<bool>), FdhError> {
    let mut out = d.clone();
    let mut flags = vec![false; d.len()];
    for (o, flag) in flags.iter_mut().enumerate() {
        if dominating_unit(d, o).is_none() {
            continue;
        }
        let p = phi(d, Delta::Vrs, o)?.value;
        let y = d.output(o).iter().map(|v| v * &p).collect();
        out = out.with_outputs(o, y)?;
        *flag = true;
    }
    Ok((out, flags))
}

struct Context<'a> {
    cli: &'a Cli,
    tol: Tolerance,
    header: ReportHeader,
    projected: Vec<bool>,
}

fn analyse<S: Scalar>(ctx: &Context, d: &Dataset<S>) -> Result<(), Failure> {
    let out = ctx.cli.out.as_deref();
    match &ctx.cli.command {
        Command::Efficiency {
            technology,
            orientation,
        } => {
            let doc = build_efficiency(ctx.header.clone(), d, (*technology).into(), (*orientation).into())?;
            write_report_to(&doc, out)?;
        }
        Command::Classify => {
            let outcomes = classify_all(d, ctx.tol);
            let doc = build_report(ctx.header.clone(), d, &outcomes, &ctx.projected);
            write_report_to(&doc, out)?;
            failed_units(d, &outcomes)?;
        }
        Command::Ratios { dmu } => {
            let o = d.index_of(dmu)?;
            write_report_to(&build_ratios(ctx.header.clone(), d, o, ctx.tol)?, out)?;
        }
        Command::Response {
            dmu,
            alpha_max,
            emit,
        } => {
            let o = d.index_of(dmu)?;
            let cap = match alpha_max {
                Some(text) => {
                    let r = parse_rational(text)
                        .map_err(|e| Failure::Usage(format!("--alpha-max: {e}")))?;
                    if r <= Rational::from_integer(0.into()) {
                        return Err(Failure::Usage("--alpha-max must be positive".into()));
                    }
                    Some(S::from_rational(&r))
                }
                None => None,
            };
            let doc = ResponseDocument {
                header: ctx.header.clone(),
                response: build_response_record(d, o, cap.as_ref())?,
            };
            write_report_to(&doc, out)?;
            if let Some(path) = emit {
                let r = build_response(d, o)?;
                write_response_csv(&r, cap.as_ref(), BufWriter::new(File::create(path).map_err(FdhError::from)?))?;
            }
        }
        Command::Report => {
            let outcomes = classify_all(d, ctx.tol);
            let responses = (0..d.len())
                .map(|o| build_response_record(d, o, None))
                .collect::<Result<_, _>>()?;
            let doc = FullReport {
                header: ctx.header.clone(),
                units: build_report(ctx.header.clone(), d, &outcomes, &ctx.projected).units,
                responses,
            };
            write_report_to(&doc, out)?;
            failed_units(d, &outcomes)?;
        }
        Command::Verify { .. } => unreachable!("handled before loading analysis data"),
    }
    Ok(())
}

fn failed_units<S: Scalar>(d: &Dataset<S>, outcomes: &[UnitOutcome<S>]) -> Result<(), Failure> {
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| matches!(o, UnitOutcome::Failed { .. }))
        .map(|o| d.name(o.unit()))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("unclassifiable units: {}", failed.join(", "))))
    }
}

fn print_table(rep: &VerifyReport) {
    println!(
        "datasets {}  units {}  efficient {}",
        rep.datasets, rep.units, rep.efficient_units
    );
    println!("{:<16} {:>9} {:>7}  result", "check", "passed", "failed");
    for (check, t) in &rep.tallies {
        let verdict = if t.failed == 0 { "PASS" } else { "FAIL" };
        println!("{:<16} {:>9} {:>7}  {verdict}", check.label(), t.passed, t.failed);
        if let Some(first) = &t.first_failure {
            println!("  first failure: {first}");
        }
    }
}

fn run_verify(cli: &Cli, tol: Tolerance, grid_steps: usize, seed: u64, trials: u64) -> Result<(), Failure> {
    let cfg = OracleConfig {
        grid_steps,
        seed,
        exact: cli.exact,
        ..OracleConfig::default()
    };
    cfg.validate()?;
    let checks = default_checks(&cfg);
    let mut rep = verify_random(&cfg, tol, trials, &checks);
    if let Some(path) = &cli.input {
        let d = read_csv(path)?;
        let own = verify_dataset(&d, &cfg, tol, &checks);
        println!("input {}: {}", path.display(), if own.all_passed() { "PASS" } else { "FAIL" });
        rep.merge(own);
    }
    print_table(&rep);
    if let Some(out) = &cli.out {
        write_report_to(&rep, Some(out))?;
    }
    if rep.all_passed() {
        Ok(())
    } else {
        Err(Failure::Invariant("oracle cross-check failed".into()))
    }
}

fn load(path: Option<&Path>) -> Result<Dataset<Rational>, Failure> {
    let path = path.ok_or_else(|| Failure::Usage("--input <csv> is required".into()))?;
    Ok(read_csv(path)?)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tol = Tolerance::new(cli.eps)?;
    if let Command::Verify {
        grid_steps,
        seed,
        trials,
    } = cli.command
    {
        return run_verify(cli, tol, grid_steps, seed, trials);
    }
    let original = load(cli.input.as_deref())?;
    let (data, projected) = if cli.project {
        project(&original)?
    } else {
        (original.clone(), vec![false; original.len()])
    };
    let ctx = Context {
        cli,
        tol,
        header: ReportHeader::new(&original, tol, cli.exact, cli.project),
        projected,
    };
    if cli.exact {
        analyse(&ctx, &data)
    } else {
        analyse(&ctx, &data.to_f64())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}

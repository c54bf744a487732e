use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use fracbeam::config::RunConfig;
use fracbeam::dataset::{generate_dataset, read_records, SampleRecord};
use fracbeam::fem::{read_solution_csv, solve_static, write_resultants_csv, write_solution_csv};
use fracbeam::inverse::{error_metric, identify_vo_lsq, Observation};
use fracbeam::verify::{run_checks, VerifyOptions};
use fracbeam::Error;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fracbeam",
    version,
    about = "Variable-order fractional nonlocal beam toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults to the benchmark beam
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Samples per profile family
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Observation CSV (x,w0,theta0[,alpha]) or NDJSON record file
    #[arg(long, global = true)]
    obs: Option<PathBuf>,

    /// NDJSON dataset to export from
    #[arg(long, global = true)]
    dataset: Option<PathBuf>,

    /// Record id for export, or for invert on an NDJSON file
    #[arg(long, global = true)]
    id: Option<u64>,

    /// Scale applied to the fractional kernel during verify (fault injection)
    #[arg(long, global = true, hide = true, default_value_t = 1.0)]
    kernel_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured beam and write solution and resultant CSVs
    Solve,
    /// Run the self-check suite and print a JSON report
    Verify,
    /// Generate a labeled NDJSON dataset and its manifest
    Dataset,
    /// Recover α(x) from an observed response
    Invert,
    /// Write one dataset record as an observation CSV
    Export,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot start {jobs} workers: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let outcome = match cli.command {
        Command::Solve => cmd_solve(&cli),
        Command::Verify => cmd_verify(&cli),
        Command::Dataset => cmd_dataset(&cli),
        Command::Invert => cmd_invert(&cli),
        Command::Export => cmd_export(&cli),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match &e {
                Error::Validation(issues) => {
                    eprintln!("invalid configuration:");
                    for issue in issues {
                        eprintln!("  {issue}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Input(_) | Error::ProfileValidity(_) => EXIT_INVALID,
        _ => EXIT_SOLVER,
    }
}

fn load_config(cli: &Cli) -> fracbeam::Result<RunConfig> {
    match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)
        }
        None => Ok(RunConfig::default()),
    }
}

fn create(path: &Path) -> fracbeam::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        Error::Input(format!("cannot create {}: {e}", path.display()))
    })?))
}

fn cmd_solve(cli: &Cli) -> fracbeam::Result<u8> {
    let cfg = load_config(cli)?;
    let model = cfg.model()?;
    let start = Instant::now();
    let sol = solve_static(&model, &cfg.solver_options())?;
    let elapsed = start.elapsed();

    let path = cli.out.clone().unwrap_or_else(|| cfg.output.path.clone());
    let mut out = create(&path)?;
    write_solution_csv(&mut out, &sol)?;
    out.flush()?;
    let resultants = path.with_extension("resultants.csv");
    let mut out = create(&resultants)?;
    write_resultants_csv(&mut out, &sol)?;
    out.flush()?;

    println!("max_w0 = {:.6e} m", sol.max_deflection());
    println!("solve_time = {:.3} s", elapsed.as_secs_f64());
    println!("solution = {}", path.display());
    println!("resultants = {}", resultants.display());
    Ok(0)
}

fn cmd_verify(cli: &Cli) -> fracbeam::Result<u8> {
    let mut opts = VerifyOptions {
        kernel_scale: cli.kernel_scale,
        ..Default::default()
    };
    if let Some(seed) = cli.seed {
        opts.seed = seed;
    }
    let report = run_checks(&opts);
    let text = serde_json::to_string_pretty(&report)?;
    println!("{text}");
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(if report.passed { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_dataset(cli: &Cli) -> fracbeam::Result<u8> {
    let cfg = load_config(cli)?;
    cfg.model()?;
    let n = cli.n.unwrap_or(1);
    let seed = cli.seed.unwrap_or(0);
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("dataset.ndjson"));
    let manifest = generate_dataset(n, seed, &out, &cfg.solver_options())?;
    println!(
        "wrote {} records to {} ({} skipped)",
        manifest.split.train.len() + manifest.split.holdout.len(),
        out.display(),
        manifest.skipped
    );
    Ok(0)
}

fn find_record(path: &Path, id: Option<u64>) -> fracbeam::Result<SampleRecord> {
    let records = read_records(path)?;
    match id {
        Some(id) => records
            .into_iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::Input(format!("no record with id {id} in {}", path.display()))),
        None => records
            .into_iter()
            .next()
            .ok_or_else(|| Error::Input(format!("{} holds no records", path.display()))),
    }
}

fn cmd_export(cli: &Cli) -> fracbeam::Result<u8> {
    let dataset = cli
        .dataset
        .as_ref()
        .ok_or_else(|| Error::Input("export needs --dataset".into()))?;
    let record = find_record(dataset, Some(cli.id.unwrap_or(0)))?;
    let path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("record_{}.csv", record.id)));
    let mut out = create(&path)?;
    writeln!(out, "x,w0,theta0,alpha")?;
    for i in 0..record.x.len() {
        writeln!(
            out,
            "{},{},{},{}",
            record.x[i], record.w[i], record.theta[i], record.alpha[i]
        )?;
    }
    out.flush()?;
    println!("record {} written to {}", record.id, path.display());
    Ok(0)
}

/// Observation and, when present, the true nodal orders.
fn read_observation(
    path: &Path,
    id: Option<u64>,
) -> fracbeam::Result<(Observation, Option<Vec<f64>>)> {
    let is_ndjson = matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("ndjson") | Some("json") | Some("jsonl")
    );
    if is_ndjson {
        let r = find_record(path, id)?;
        return Ok((
            Observation {
                w: r.w,
                theta: r.theta,
            },
            Some(r.alpha),
        ));
    }
    let file = File::open(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let cols = read_solution_csv(BufReader::new(file))?;
    let column = |name: &str| cols.iter().find(|(h, _)| h == name).map(|(_, v)| v.clone());
    let w = column("w0").ok_or_else(|| Error::Input("observation CSV needs a w0 column".into()))?;
    let theta = column("theta0")
        .ok_or_else(|| Error::Input("observation CSV needs a theta0 column".into()))?;
    Ok((Observation { w, theta }, column("alpha")))
}

fn cmd_invert(cli: &Cli) -> fracbeam::Result<u8> {
    let cfg = load_config(cli)?;
    let obs_path = cli
        .obs
        .as_ref()
        .ok_or_else(|| Error::Input("invert needs --obs".into()))?;
    let (obs, truth) = read_observation(obs_path, cli.id)?;
    let model = cfg.model()?;
    let mut opts = cfg.solver_options();
    if obs.w.len() >= 2 && obs.w.len() - 1 != opts.elements {
        log::info!(
            "using {} elements to match the observation",
            obs.w.len() - 1
        );
        opts.elements = obs.w.len() - 1;
    }
    let start = Instant::now();
    let result = identify_vo_lsq(&obs, &model, &cfg.inverse, &opts)?;
    eprintln!("invert_time = {:.3} s", start.elapsed().as_secs_f64());
    let mut report = serde_json::to_value(&result)?;
    if let Some(truth) = truth {
        report["mean_abs_er_percent"] = error_metric(&result.alpha, &truth)?.into();
    }
    let text = serde_json::to_string_pretty(&report)?;
    println!("{text}");
    if let Some(path) = &cli.out {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(0)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use sojourn_lab::experiment::{parse_config, run_command, Command, ExperimentError};

#[derive(Parser, Debug)]
#[command(
    name = "sojourn-lab",
    version,
    about = "Scattering phase-shift experiments"
)]
struct Cli {
    /// One of: classical, deflection, phaseshifts, trace, measure, constants, sweep, verify.
    command: String,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "SOJOURN_LAB_WORKERS")]
    workers: Option<usize>,
    /// Single `h` replacing `h_list`.
    #[arg(long)]
    h: Option<f64>,
    /// Comma-separated impact parameters replacing `impact_list`.
    #[arg(long, value_delimiter = ',')]
    impact_list: Option<Vec<f64>>,
}

fn run(cli: Cli) -> Result<i32, ExperimentError> {
    let cmd: Command = cli.command.parse()?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| ExperimentError::Config(format!("{}: {e}", cli.config.display())))?;
    let mut loaded = parse_config(&text)?;
    if let Some(h) = cli.h {
        loaded.config.h_list = vec![h];
    }
    if let Some(b) = cli.impact_list {
        loaded.config.impact_list = b;
    }
    loaded.config.validate()?;
    let workers = cli
        .workers
        .or(loaded.config.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(ExperimentError::Config(
            "workers: must be at least 1".into(),
        ));
    }
    let out = cli.out.unwrap_or_else(|| loaded.config.output_dir.clone());
    let outcome = run_command(cmd, &loaded, &text, &out, workers)?;
    if let Some(criteria) = outcome.summary["result"]["criteria"].as_array() {
        for c in criteria {
            let status = if c["pass"].as_bool() == Some(true) {
                "PASS"
            } else {
                "FAIL"
            };
            println!(
                "[{status}] {} {}: {}",
                c["id"],
                c["name"].as_str().unwrap_or(""),
                c["detail"].as_str().unwrap_or("")
            );
        }
    }
    println!(
        "{} finished with exit code {} ({})",
        cmd,
        outcome.exit_code,
        out.display()
    );
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("sojourn-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

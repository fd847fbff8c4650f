use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qfl_core::compatibility::{best_cover, CoverStrategy};
use qfl_core::exec::Exec;
use qfl_core::pauli::DegreeSet;
use qfl_core::verify::{self, Fault, Suite, VerifyOptions};
use qfl_harness::{config::parse_seed_list, run_experiment, threads_from_env, HarnessError, RunOptions};
use qfl_harness::{EXIT_FAILED, EXIT_OK};

#[derive(Parser)]
#[command(name = "qfl", version, about = "Learn two-outcome quantum measurements from simulated labeled states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write results.csv, timing.csv, summary.json and reports.json.
    Run {
        config: PathBuf,
        /// Replace the config's seeds (comma list, ranges as a..b).
        #[arg(long)]
        seed_override: Option<String>,
        /// Write results here instead of the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Verify {
        #[arg(value_parser = ["fast", "full"])]
        suite: String,
        /// Inject a known defect to check that it is caught (sign-tie-break).
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Print the best compatibility cover of a degree set file and its score.
    Cover {
        degree_set: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value = "greedy-multi")]
        strategy: String,
    },
}

fn fail(e: HarnessError) -> ExitCode {
    eprintln!("qfl: {e}");
    ExitCode::from(e.exit_code())
}

fn run(config: PathBuf, seed_override: Option<String>, out_dir: Option<PathBuf>) -> Result<(), HarnessError> {
    let seeds = seed_override.as_deref().map(parse_seed_list).transpose()?;
    let opts = RunOptions { seeds, out_dir, threads: threads_from_env()? };
    let result = run_experiment(&config, &opts)?;
    println!("{} runs over {} points written to {}", result.rows.len(), result.summary.points.len(), result.out_dir.display());
    for p in &result.summary.points {
        let met = p.bound_met_fraction.map(|f| format!("{:.0}%", 100.0 * f)).unwrap_or_else(|| "n/a".into());
        let k = p.k.map(|k| format!(" k={k}")).unwrap_or_default();
        let eta = p.eta.map(|e| format!(" eta={e}")).unwrap_or_default();
        println!(
            "point {:>3}  d={}{k}{eta} n={} delta={}  exact_loss {:.4} ± {:.4}  oracle {:.4}  bound met {met}",
            p.point, p.d, p.n, p.delta, p.exact_loss.mean, p.exact_loss.std, p.oracle_loss.mean
        );
    }
    Ok(())
}

fn verify_cmd(suite: &str, fault: Option<String>, seed: u64) -> Result<bool, HarnessError> {
    let suite: Suite = suite.parse().map_err(|e: qfl_core::Error| HarnessError::Config(e.to_string()))?;
    let fault = fault.map(|f| f.parse::<Fault>()).transpose().map_err(|e| HarnessError::Config(e.to_string()))?;
    let opts = VerifyOptions { fault, seed, ..VerifyOptions::new(suite) };
    let report = verify::run_with(&opts, |o| {
        let tag = if o.passed { "ok  " } else { "FAIL" };
        println!("{tag} {:<26} {:>7.2}s  {}", o.name, o.seconds, o.detail);
    });
    match report.first_failure() {
        Some(f) => {
            eprintln!("qfl: verify {suite} failed; first failing property: {}", f.name);
            Ok(false)
        }
        None => {
            println!("verify {suite}: {} checks passed", report.outcomes.len());
            Ok(true)
        }
    }
}

fn cover_cmd(path: PathBuf, n: usize, delta: f64, strategy: &str) -> Result<(), HarnessError> {
    let config = |e: String| HarnessError::Config(e);
    let text = std::fs::read_to_string(&path).map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
    let set = DegreeSet::parse(&text).map_err(|e| config(e.to_string()))?;
    let strategy: CoverStrategy = strategy.parse().map_err(|e: qfl_core::Error| config(e.to_string()))?;
    if n == 0 || !(delta > 0.0 && delta < 1.0) {
        return Err(config(format!("need n > 0 and delta in (0, 1), got n = {n}, delta = {delta}")));
    }
    let cover = best_cover(&set, n, delta, strategy, Exec::default()).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    let score = cover.score(n, delta).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    print!("{}", cover.to_text());
    println!("# subsets = {}", cover.len());
    println!("# score = {score}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed_override, out_dir } => run(config, seed_override, out_dir).map(|_| true),
        Command::Verify { suite, inject_fault, seed } => verify_cmd(&suite, inject_fault, seed),
        Command::Cover { degree_set, n, delta, strategy } => cover_cmd(degree_set, n, delta, &strategy).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => fail(e),
    }
}

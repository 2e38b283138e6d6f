use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fadmm::apps::{cache_path, gen_randn, write_libsvm};
use fadmm_cli::bench::{suite_spec, DEFAULT_BENCH_DATASET};
use fadmm_cli::config::{App, Budget};
use fadmm_cli::experiment::{Experiment, Outcome};
use fadmm_cli::selftest::run_selftest;
use fadmm_cli::{parse_config, run_experiment};

#[derive(Parser)]
#[command(name = "fadmm", version, about = "Fractional ADMM experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Write a generated dataset in LIBSVM format.
    GenData {
        name: String,
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
    /// Check the closed-form proxes on random instances.
    ProxSelftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a built-in suite with every variant.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Fda,
    Srm,
    Recovery,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, conflicts_with = "seconds")]
    iters: Option<usize>,
    #[arg(long)]
    seconds: Option<f64>,
    #[arg(long, default_value = DEFAULT_BENCH_DATASET)]
    dataset: String,
}

fn print_summary(exp: &Experiment) {
    for ir in &exp.instances {
        println!("{}", ir.instance.tag);
        for vr in &ir.runs {
            match (&vr.outcome, &vr.trace) {
                (Outcome::Ok, Some(t)) => println!(
                    "  {:<8} F = {:<14.8e} iters = {:<7} residual = {:.2e}",
                    vr.variant.to_string(),
                    t.final_objective(),
                    t.last().t,
                    t.last().primal_residual
                ),
                (Outcome::Skipped(r), _) => println!("  {:<8} skipped: {r}", vr.variant.to_string()),
                (Outcome::Failed(r), _) => println!("  {:<8} failed: {r}", vr.variant.to_string()),
                _ => {}
            }
        }
    }
    println!("wrote {} files to {}", exp.files.len(), exp.spec.output_dir.display());
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let spec = parse_config(&text).with_context(|| config.display().to_string())?;
            let exp = run_experiment(&spec)?;
            print_summary(&exp);
        }
        Command::GenData {
            name,
            m,
            n,
            seed,
            out,
        } => {
            if name != "randn" {
                bail!("unknown generator `{name}` (available: randn)");
            }
            let ds = gen_randn(m, n, seed)?;
            fs::create_dir_all(&out)?;
            let path = cache_path(&out, &ds.name);
            let w = BufWriter::new(File::create(&path)?);
            write_libsvm(w, &ds.labels, &ds.q)?;
            println!("{}", path.display());
        }
        Command::ProxSelftest { seed } => {
            let lines = run_selftest(seed);
            let ok = lines.iter().all(|l| l.pass);
            for l in &lines {
                println!(
                    "{} {:<22} cases = {:<4} worst gap = {:.3e}",
                    if l.pass { "PASS" } else { "FAIL" },
                    l.name,
                    l.cases,
                    l.worst_gap
                );
            }
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bench(b) => {
            let budget = match (b.iters, b.seconds) {
                (_, Some(s)) => Budget {
                    iterations: None,
                    seconds: Some(s),
                },
                (Some(t), None) => Budget {
                    iterations: Some(t),
                    seconds: None,
                },
                (None, None) => Budget::default(),
            };
            let app = match b.suite {
                Suite::Fda => App::Fda,
                Suite::Srm => App::Srm,
                Suite::Recovery => App::Recovery,
            };
            let spec = suite_spec(app, &b.dataset, b.out, b.seed, budget);
            let spec = parse_config(&spec.to_toml())?;
            let exp = run_experiment(&spec)?;
            print_summary(&exp);
        }
    }
    Ok(ExitCode::SUCCESS)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use steklov::eigen::SolveOptions;
use steklov::experiment::{fit_rate_points, read_results, run_experiment, ExperimentConfig, Method, TestCase};
use steklov::mesh::{load_mesh, quality_report};

#[derive(Parser)]
#[command(name = "steklov", version, about = "Adaptive virtual elements for the Steklov eigenvalue problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study and write tables and meshes.
    Run {
        #[arg(long, default_value = "square")]
        test: TestCase,
        #[arg(long, default_value = "adaptive-vem")]
        method: Method,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long = "mark-frac", default_value_t = 0.5)]
        mark_frac: f64,
        /// Number of eigenvalues to compute.
        #[arg(long, default_value_t = 1)]
        eigs: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write per-cell indicators and assembled matrices.
        #[arg(long)]
        dump: bool,
    },
    /// Fit the convergence rate of a results.csv.
    Rate {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 5)]
        last: usize,
    },
    /// Mesh utilities.
    Mesh {
        #[command(subcommand)]
        command: MeshCommand,
    },
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Check a JSON mesh and report shape diagnostics.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long, default_value_t = 0.1)]
        gamma_hat: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> steklov::Result<()> {
    match cli.command {
        Command::Run { test, method, steps, mark_frac, eigs, tol, seed, out, dump } => {
            let config = ExperimentConfig {
                test,
                method,
                steps,
                mark_fraction: mark_frac,
                solve: SolveOptions { count: eigs, tol, seed, ..SolveOptions::default() },
                out: Some(out.clone()),
                dump,
            };
            let run = run_experiment(&config)?;
            println!("{:>5} {:>8} {:>14} {:>11} {:>11} {:>8}", "step", "N", "lambda_h", "error", "eta2", "eff");
            for r in &run.records {
                let eff = r.effectivity.map_or("-".to_string(), |e| format!("{e:.4}"));
                println!("{:>5} {:>8} {:>14.10} {:>11.4e} {:>11.4e} {:>8}", r.step, r.n, r.lambda_h, r.error, r.eta2, eff);
            }
            println!("wrote {}", out.display());
        }
        Command::Rate { csv, last } => {
            let rows = read_results(&csv)?;
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.error)).collect();
            let fit = fit_rate_points(&points, last)?;
            println!("slope {:.4} over the last {} points", fit.slope, fit.m);
        }
        Command::Mesh { command: MeshCommand::Validate { file, gamma, gamma_hat } } => {
            let mesh = load_mesh(&file)?;
            let report = quality_report(&mesh, gamma, gamma_hat);
            println!(
                "{}: {} vertices, {} cells, {} edges, area {:.6}",
                file.display(),
                mesh.num_vertices(),
                mesh.num_cells(),
                mesh.edges().len(),
                mesh.area()
            );
            println!(
                "star ratio >= {:.4} ({} cells below {gamma}), vertex ratio >= {:.4} ({} cells below {gamma_hat})",
                report.gamma_estimate,
                report.a2_violations.len(),
                report.gamma_hat_estimate,
                report.a3_violations.len()
            );
        }
    }
    Ok(())
}

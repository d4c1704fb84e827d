//! Uniform and adaptive refinement on the square with a triangular notch,
//! whose reentrant corner limits the uniform convergence rate.
//!
//! ```text
//! cargo run --release --example notched_square -- [adaptive-steps]
//! ```

use steklov::experiment::{fit_rate, run_experiment, ExperimentConfig, Method, TestCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let adaptive_steps: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(14);

    for (method, steps) in [(Method::UniformFem, 6), (Method::AdaptiveFem, adaptive_steps + 2), (Method::AdaptiveVem, adaptive_steps)] {
        let run = run_experiment(&ExperimentConfig::new(TestCase::Notched, method, steps))?;
        println!("{method} (reference {:.7})", run.reference);
        println!("{:>7} {:>12} {:>10} {:>10} {:>8}", "N", "lambda_h", "error", "eta2", "eff");
        for r in &run.records {
            println!("{:>7} {:>12.8} {:>10.3e} {:>10.3e} {:>8.4}", r.n, r.lambda_h, r.error, r.eta2, r.effectivity.unwrap_or(f64::NAN));
        }
        let fit = fit_rate(&run.records, 5)?;
        println!("slope over the last {} steps: {:.3}\n", fit.m, fit.slope);
    }
    Ok(())
}

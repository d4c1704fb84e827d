//! Adaptive study on the unit square with a free surface on top, where the
//! smallest eigenvalue is known in closed form.
//!
//! ```text
//! cargo run --release --example sloshing_square -- [adaptive-vem|adaptive-fem|uniform-fem] [steps]
//! ```

use steklov::experiment::{fit_rate, run_experiment, ExperimentConfig, Method, TestCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let method: Method = args.next().as_deref().unwrap_or("adaptive-vem").parse()?;
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);

    let config = ExperimentConfig::new(TestCase::Square, method, steps);
    let run = run_experiment(&config)?;
    println!("{method} on the square, reference {:.10}", run.reference);
    println!("{:>7} {:>12} {:>10} {:>9} {:>9} {:>9} {:>8}", "N", "lambda_h", "error", "theta2", "J2", "eta2", "eff");
    for r in &run.records {
        println!(
            "{:>7} {:>12.8} {:>10.3e} {:>9.4} {:>9.4} {:>9.4} {:>8.4}",
            r.n,
            r.lambda_h,
            r.error,
            r.theta2,
            r.jump2,
            r.eta2,
            r.effectivity.unwrap_or(f64::NAN)
        );
    }
    let fit = fit_rate(&run.records, 5)?;
    println!("slope over the last {} steps: {:.3}", fit.m, fit.slope);
    Ok(())
}

//! Estimate the smallest eigenvalue of the notched square, which has no
//! closed form, by extrapolating a long adaptive run.
//!
//! ```text
//! cargo run --release --example notched_reference -- [steps] [fit points]
//! ```

use steklov::eigen::SolveOptions;
use steklov::experiment::{notched_reference_study, NOTCHED_LITERATURE_VALUE, NOTCHED_REFERENCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(21);
    let fit_points: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(8);

    let (fit, history) = notched_reference_study(steps, fit_points, &SolveOptions::default())?;
    for (n, lambda) in &history {
        println!("{n:>8} {lambda:.12}");
    }
    println!("limit {:.10} (c = {:.4}, p = {:.4}, rms misfit {:.2e})", fit.lambda, fit.c, fit.p, fit.rms);
    println!("built-in reference {NOTCHED_REFERENCE:.10}; literature value for a related geometry {NOTCHED_LITERATURE_VALUE}");
    Ok(())
}

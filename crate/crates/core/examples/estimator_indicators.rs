//! Residual indicators for one solve on the notched square, and the cells the
//! maximum strategy marks from them.
//!
//! ```text
//! cargo run --example estimator_indicators -- [mark-fraction]
//! ```

use steklov::adapt::mark_indicators;
use steklov::eigen::{solve_smallest_positive, SolveOptions};
use steklov::estimator::estimate;
use steklov::experiment::{initial_mesh, notch_apex, TestCase, NOTCHED_REFERENCE};
use steklov::vem::assemble;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fraction: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.5);

    let mesh = steklov::adapt::refine_uniform(&initial_mesh(TestCase::Notched))?.0;
    let disc = assemble(&mesh)?;
    let pair = solve_smallest_positive(&disc.system, &SolveOptions::default())?.remove(0);
    let (indicators, global) = estimate(&mesh, &disc, &pair, Some(NOTCHED_REFERENCE))?;

    println!("lambda_h = {:.8} on {} dofs (reference {NOTCHED_REFERENCE})", pair.lambda, disc.system.num_dofs());
    println!(
        "eta^2 = {:.4e} (theta^2 {:.1e}, jumps {:.4e}), effectivity {:.3}",
        global.eta2,
        global.theta2,
        global.jump2,
        global.effectivity.unwrap_or(f64::NAN)
    );

    let mut order: Vec<usize> = (0..indicators.len()).collect();
    order.sort_by(|&a, &b| indicators[b].eta2.total_cmp(&indicators[a].eta2));
    println!("{:>5} {:>11} {:>18}", "cell", "eta", "distance to apex");
    for &c in order.iter().take(8) {
        println!("{c:>5} {:>11.4e} {:>18.4}", indicators[c].eta2.sqrt(), mesh.element_centroid(c).distance(notch_apex()));
    }

    let marks = mark_indicators(&indicators, fraction);
    println!("fraction {fraction}: {} of {} cells marked (threshold eta >= {:.4e})", marks.cells.len(), mesh.num_cells(), marks.threshold);
    Ok(())
}

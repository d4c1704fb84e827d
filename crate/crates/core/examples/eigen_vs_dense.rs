//! Sparse shift-and-invert Lanczos against a dense generalized eigensolver on
//! a small polygonal mesh.
//!
//! ```text
//! cargo run --example eigen_vs_dense -- [count] [seed]
//! ```

use steklov::adapt::{mark, refine_vem};
use steklov::eigen::{dense_reference_solve, relative_residual, solve_smallest_positive, SolveOptions};
use steklov::experiment::{initial_mesh, TestCase};
use steklov::vem::assemble;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);

    // Two rounds of refinement toward the free surface leave hanging vertices.
    let mut mesh = initial_mesh(TestCase::Square);
    for _ in 0..2 {
        let eta: Vec<f64> = (0..mesh.num_cells()).map(|c| mesh.element_centroid(c).y).collect();
        mesh = refine_vem(&mesh, &mark(&eta, 0.8))?.0;
    }
    let disc = assemble(&mesh)?;
    let system = &disc.system;
    println!("{} cells, {} dofs, {} stiffness nonzeros", mesh.num_cells(), system.num_dofs(), system.stiffness.nnz());

    let options = SolveOptions { count, seed, ..SolveOptions::default() };
    let pairs = solve_smallest_positive(system, &options)?;
    let dense = dense_reference_solve(system)?;
    println!("{:>3} {:>16} {:>16} {:>10} {:>10}", "k", "sparse", "dense", "rel diff", "residual");
    for (k, pair) in pairs.iter().enumerate() {
        let reference = dense[k + 1];
        println!(
            "{:>3} {:>16.12} {:>16.12} {:>10.1e} {:>10.1e}",
            k + 1,
            pair.lambda,
            reference,
            (pair.lambda - reference).abs() / reference,
            relative_residual(system, pair.lambda, &pair.w)
        );
    }
    println!("dense spectrum also contains the constant mode: lambda_0 = {:.1e}", dense[0]);
    Ok(())
}

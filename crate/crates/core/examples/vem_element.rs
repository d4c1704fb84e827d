//! Local operators of the lowest-order virtual element on a single polygon:
//! the gradient projection, the consistency and stabilization parts of the
//! local stiffness matrix, and the patch test for linear data.
//!
//! ```text
//! cargo run --example vem_element
//! ```

use steklov::vem::{local_operators, stability_interval};
use steklov::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A pentagon with a hanging vertex in the middle of its bottom edge.
    let pts = vec![
        Point2::new(0.0, 0.0),
        Point2::new(0.5, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.2, 0.8),
        Point2::new(0.3, 1.1),
    ];
    let local = local_operators(&pts, 0)?;
    println!("area {:.4}, diameter {:.4}, centroid ({:.4}, {:.4})", local.area, local.diameter, local.centroid.x, local.centroid.y);
    println!("projector (rows: 1, (x - xc)/h, (y - yc)/h):\n{:.4}", local.projector);
    println!("consistency part:\n{:.4}", local.consistency);
    println!("stabilization part:\n{:.4}", local.stabilization);

    let p = |q: Point2| 2.0 - q.x + 3.0 * q.y;
    let values: Vec<f64> = pts.iter().map(|&q| p(q)).collect();
    let coeffs = local.project(&values);
    let grad = local.gradient(&coeffs);
    let defect: f64 = local.inconsistency(&values).iter().map(|d| d.abs()).fold(0.0, f64::max);
    println!("patch test: projected gradient ({:.3e}, {:.3e}) vs (-1, 3), max |(I - D Pi) v| = {defect:.1e}", grad.x + 1.0, grad.y - 3.0);

    let row_sums: f64 = (0..pts.len()).map(|i| local.stiffness.row(i).sum().abs()).fold(0.0, f64::max);
    println!("stiffness annihilates constants: max |row sum| = {row_sums:.1e}");

    let (lo, hi) = stability_interval(&pts, 0)?;
    println!("local stability constants relative to the reference energy: [{lo:.3}, {hi:.3}]");
    Ok(())
}

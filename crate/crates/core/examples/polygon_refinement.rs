//! Quad splitting of marked polygons with hanging vertices on their unmarked
//! neighbours. Writes one SVG per step with the marked cells shaded.
//!
//! ```text
//! cargo run --example polygon_refinement -- [steps] [out-dir]
//! ```

use std::fs;
use std::path::PathBuf;

use steklov::adapt::{mark, refine_vem};
use steklov::experiment::{initial_mesh, notch_apex, render_svg, TestCase};
use steklov::mesh::quality_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "polygon_refinement".into()));
    fs::create_dir_all(&out)?;

    // Refine toward the reentrant corner with a synthetic indicator.
    let mut mesh = initial_mesh(TestCase::Notched);
    for step in 0..steps {
        let eta: Vec<f64> = (0..mesh.num_cells())
            .map(|c| mesh.element_diameter(c) / (1e-3 + mesh.element_centroid(c).distance(notch_apex())))
            .collect();
        let marks = mark(&eta, 0.5);
        fs::write(out.join(format!("step_{step}.svg")), render_svg(&mesh, &marks.cells))?;
        let (fine, record) = refine_vem(&mesh, &marks)?;
        let report = quality_report(&fine, 0.1, 0.1);
        let max_vertices = fine.cells().iter().map(Vec::len).max().unwrap_or(0);
        println!(
            "step {step}: marked {:>4}, new vertices {:>4}, neighbours with hanging vertices {:>4} -> {:>5} cells, up to {max_vertices}-gons, area {:.15}, quality estimates ({:.3}, {:.3})",
            marks.cells.len(),
            record.new_vertices.len(),
            record.hanging_neighbors.len(),
            fine.num_cells(),
            fine.area(),
            report.gamma_estimate,
            report.gamma_hat_estimate
        );
        mesh = fine;
    }
    fs::write(out.join(format!("step_{steps}.svg")), render_svg(&mesh, &[]))?;
    println!("SVGs written to {}", out.display());
    Ok(())
}

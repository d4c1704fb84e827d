//! Builds a small mesh by hand, checks its shape regularity, and round-trips
//! it through the JSON mesh format.
//!
//! ```text
//! cargo run --example mesh_io -- [path]
//! ```

use steklov::mesh::{load_mesh, quality_report, save_mesh};
use steklov::{BoundaryTag, Point2, PolygonalMesh};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "two_cells.json".into());

    // A hexagon and a pentagon sharing two edges; the top is the free surface.
    let vertices = vec![
        Point2::new(0.0, 0.0),
        Point2::new(0.6, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.5, 1.0),
        Point2::new(0.0, 1.0),
        Point2::new(0.0, 0.5),
        Point2::new(0.6, 0.5),
    ];
    let cells = vec![vec![0, 1, 7, 4, 5, 6], vec![1, 2, 3, 4, 7]];
    let mesh = PolygonalMesh::build_topology(vertices, cells, |_, a, b| {
        Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
    })?;
    println!("{} vertices, {} cells, {} edges, area {}", mesh.num_vertices(), mesh.num_cells(), mesh.edges().len(), mesh.area());
    println!("free-surface vertices: {:?}", mesh.gamma0_vertices());

    let report = quality_report(&mesh, 0.1, 0.1);
    for (c, q) in report.cells.iter().enumerate() {
        println!("cell {c}: diameter {:.3}, star ratio {:.3}, vertex ratio {:.3}", q.diameter, q.star_ratio(), q.vertex_ratio());
    }
    println!("shape regular at (0.1, 0.1): {}", report.is_clean());

    save_mesh(&mesh, &path)?;
    let back = load_mesh(&path)?;
    println!("wrote {path}; reloaded mesh identical: {}", back == mesh);
    Ok(())
}

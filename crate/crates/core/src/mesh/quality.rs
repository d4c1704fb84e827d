//! Shape diagnostics for the mesh regularity assumptions: each cell should be
//! star-shaped with respect to a ball of radius `>= gamma * h_E` (A2), and its
//! vertices should be at least `gamma_hat * h_E` apart (A3). Violations are
//! reported, never fatal.

use super::{polygon_centroid, polygon_diameter, signed_area, Point2, PolygonalMesh};

#[derive(Clone, Debug, PartialEq)]
pub struct CellQuality {
    pub diameter: f64,
    pub area: f64,
    /// Radius of the largest disc centred at the centroid inside the cell.
    pub inscribed_radius: f64,
    pub min_vertex_distance: f64,
}

impl CellQuality {
    pub fn star_ratio(&self) -> f64 {
        self.inscribed_radius / self.diameter
    }

    pub fn vertex_ratio(&self) -> f64 {
        self.min_vertex_distance / self.diameter
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshQualityReport {
    pub cells: Vec<CellQuality>,
    pub gamma: f64,
    pub gamma_hat: f64,
    /// Smallest star ratio over all cells (estimate of the A2 constant).
    pub gamma_estimate: f64,
    /// Smallest vertex-distance ratio over all cells (estimate of the A3 constant).
    pub gamma_hat_estimate: f64,
    pub a2_violations: Vec<usize>,
    pub a3_violations: Vec<usize>,
}

impl MeshQualityReport {
    pub fn is_clean(&self) -> bool {
        self.a2_violations.is_empty() && self.a3_violations.is_empty()
    }
}

pub fn quality_report(mesh: &PolygonalMesh, gamma: f64, gamma_hat: f64) -> MeshQualityReport {
    let cells: Vec<CellQuality> = (0..mesh.num_cells()).map(|c| cell_quality(&mesh.cell_points(c))).collect();
    let a2_violations = cells.iter().enumerate().filter(|(_, q)| q.star_ratio() < gamma).map(|(c, _)| c).collect();
    let a3_violations = cells.iter().enumerate().filter(|(_, q)| q.vertex_ratio() < gamma_hat).map(|(c, _)| c).collect();
    MeshQualityReport {
        gamma_estimate: cells.iter().map(CellQuality::star_ratio).fold(f64::INFINITY, f64::min),
        gamma_hat_estimate: cells.iter().map(CellQuality::vertex_ratio).fold(f64::INFINITY, f64::min),
        cells,
        gamma,
        gamma_hat,
        a2_violations,
        a3_violations,
    }
}

pub fn cell_quality(pts: &[Point2]) -> CellQuality {
    let centroid = polygon_centroid(pts);
    let n = pts.len();
    let inscribed_radius = (0..n)
        .map(|i| segment_distance(centroid, pts[i], pts[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    let mut min_vertex_distance = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min_vertex_distance = min_vertex_distance.min(pts[i].distance(pts[j]));
        }
    }
    CellQuality { diameter: polygon_diameter(pts), area: signed_area(pts), inscribed_radius, min_vertex_distance }
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let t = ((p - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    p.distance(a + d * t)
}

//! Residual a posteriori indicators for a computed eigenpair.
//!
//! For each cell, `eta_E^2 = theta_E^2 + R_E^2 + sum_{l in E} h_E ||J_l||^2`:
//!
//! * `theta_E^2 = S^E(w - Pi w, w - Pi w)` measures how far the discrete
//!   solution is from its affine projection (zero on triangles);
//! * `R_E^2` is the interior residual, identically zero at lowest order
//!   since local functions are harmonic;
//! * `J_l` is half the jump of the projected normal flux on interior edges,
//!   `lambda_h w_h - dn(Pi w_h)` on gamma0 and `-dn(Pi w_h)` on gamma1.
//!
//! Everything is built from vertex values, `lambda_h` and the projection;
//! the virtual shape functions are never evaluated.

use crate::eigen::SpectralPair;
use crate::error::{Error, Result};
use crate::mesh::{BoundaryTag, PolygonalMesh};
use crate::quadrature::GAUSS_2;
use crate::vem::{project_solution, Discretization, ProjectedSolution};

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeResidual {
    pub edge: usize,
    pub tag: BoundaryTag,
    /// Values of `J` at the edge's two endpoints; `J` is affine along the
    /// edge (constant except on gamma0).
    pub endpoint_values: [f64; 2],
    /// `||J||^2` over the edge.
    pub norm_sq: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ElementIndicator {
    pub theta2: f64,
    pub r2: f64,
    pub jump2: f64,
    pub eta2: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GlobalEstimate {
    pub eta2: f64,
    pub theta2: f64,
    pub r2: f64,
    pub jump2: f64,
    /// `|lambda - lambda_h| / eta^2`, when a reference eigenvalue is known.
    pub effectivity: Option<f64>,
}

pub fn edge_residuals(
    mesh: &PolygonalMesh,
    projected: &ProjectedSolution,
    lambda_h: f64,
    w: &[f64],
) -> Result<Vec<EdgeResidual>> {
    mesh.edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let n = mesh.outward_normal(e, edge.left);
            let flux = projected.gradients[edge.left].dot(n);
            let endpoint_values = match (edge.tag, edge.right) {
                (BoundaryTag::Interior, Some(right)) => {
                    let jump = 0.5 * (flux - projected.gradients[right].dot(n));
                    [jump, jump]
                }
                (BoundaryTag::Interior, None) | (_, Some(_)) => {
                    return Err(Error::DegenerateCell {
                        cell: edge.left,
                        reason: format!("edge {e} has inconsistent adjacency"),
                    })
                }
                (BoundaryTag::Gamma0, None) => {
                    let [a, b] = edge.vertices;
                    [lambda_h * w[a] - flux, lambda_h * w[b] - flux]
                }
                (BoundaryTag::Gamma1, None) => [-flux, -flux],
            };
            let [ja, jb] = endpoint_values;
            let norm_sq = mesh.edge_length(e) * GAUSS_2.integrate_unit(|s| ((1.0 - s) * ja + s * jb).powi(2));
            Ok(EdgeResidual { edge: e, tag: edge.tag, endpoint_values, norm_sq })
        })
        .collect()
}

/// Per-cell indicators. Interior edges contribute to both neighbours, each
/// weighted by that neighbour's own diameter.
pub fn element_indicators(mesh: &PolygonalMesh, disc: &Discretization, pair: &SpectralPair) -> Result<Vec<ElementIndicator>> {
    let projected = project_solution(disc, &pair.w);
    let residuals = edge_residuals(mesh, &projected, pair.lambda, &pair.w)?;
    let mut out: Vec<ElementIndicator> = disc
        .locals
        .iter()
        .enumerate()
        .map(|(c, local)| {
            let r = local.inconsistency(&disc.system.dofs.gather(c, &pair.w));
            ElementIndicator { theta2: r.iter().map(|x| x * x).sum(), ..Default::default() }
        })
        .collect();
    for res in &residuals {
        let edge = mesh.edge(res.edge);
        for cell in std::iter::once(edge.left).chain(edge.right) {
            out[cell].jump2 += disc.locals[cell].diameter * res.norm_sq;
        }
    }
    for ind in &mut out {
        ind.eta2 = ind.theta2 + ind.r2 + ind.jump2;
    }
    Ok(out)
}

pub fn global_estimate(indicators: &[ElementIndicator], lambda_h: f64, reference: Option<f64>) -> GlobalEstimate {
    let mut g = GlobalEstimate::default();
    for ind in indicators {
        g.eta2 += ind.eta2;
        g.theta2 += ind.theta2;
        g.r2 += ind.r2;
        g.jump2 += ind.jump2;
    }
    g.effectivity = reference.filter(|_| g.eta2 > 0.0).map(|lambda| (lambda - lambda_h).abs() / g.eta2);
    g
}

/// Indicators and their totals in one call.
pub fn estimate(
    mesh: &PolygonalMesh,
    disc: &Discretization,
    pair: &SpectralPair,
    reference: Option<f64>,
) -> Result<(Vec<ElementIndicator>, GlobalEstimate)> {
    let indicators = element_indicators(mesh, disc, pair)?;
    let global = global_estimate(&indicators, pair.lambda, reference);
    Ok((indicators, global))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Point2;
    use crate::vem::assemble;

    fn two_squares() -> PolygonalMesh {
        // Lower cell [0,1]x[0,1], upper cell [0,1]x[1,2]; the shared edge is y = 1.
        let v = vec![
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(1., 1.),
            Point2::new(0., 1.),
            Point2::new(1., 2.),
            Point2::new(0., 2.),
        ];
        PolygonalMesh::build_topology(v, vec![vec![0, 1, 2, 3], vec![3, 2, 4, 5]], |_, a, b| {
            Some(if a.y == 2.0 && b.y == 2.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap()
    }

    fn pair(w: Vec<f64>, lambda: f64) -> SpectralPair {
        SpectralPair { lambda, w, residual: 0.0, normalized: true }
    }

    #[test]
    fn interior_jump_from_flux_formula() {
        // w = 2y on the upper cell, 2 (constant) on the lower one: gradients
        // (0,2) and (0,0) across the horizontal edge, so J = (2 + 0) / 2 = 1
        // and ||J||^2 = |l| = 1.
        let mesh = two_squares();
        let disc = assemble(&mesh).unwrap();
        let w = vec![2.0, 2.0, 2.0, 2.0, 4.0, 4.0];
        let projected = project_solution(&disc, &w);
        let res = edge_residuals(&mesh, &projected, 0.0, &w).unwrap();
        let shared = mesh.find_edge(2, 3).unwrap();
        assert!((res[shared].endpoint_values[0].abs() - 1.0).abs() < 1e-14);
        assert!((res[shared].norm_sq - 1.0).abs() < 1e-14);
    }

    #[test]
    fn continuous_gradient_has_no_interior_jump() {
        let mesh = two_squares();
        let disc = assemble(&mesh).unwrap();
        let w: Vec<f64> = mesh.vertices().iter().map(|p| 0.3 * p.x - 1.1 * p.y).collect();
        let projected = project_solution(&disc, &w);
        let res = edge_residuals(&mesh, &projected, 0.0, &w).unwrap();
        for r in res.iter().filter(|r| r.tag == BoundaryTag::Interior) {
            assert!(r.norm_sq < 1e-28);
        }
    }

    #[test]
    fn gamma0_residual_is_exact_quadratic_integral() {
        let mesh = two_squares();
        let disc = assemble(&mesh).unwrap();
        // w = y on both cells: flux on the top edge is 1.
        let w: Vec<f64> = mesh.vertices().iter().map(|p| p.y + 0.5 * p.x).collect();
        let lambda = 1.7;
        let projected = project_solution(&disc, &w);
        let res = edge_residuals(&mesh, &projected, lambda, &w).unwrap();
        let top = mesh.find_edge(4, 5).unwrap();
        // Closed form: J affine from ja to jb over length 1 gives (ja^2 + ja jb + jb^2) / 3.
        let flux = 1.0;
        let (wa, wb) = (w[mesh.edge(top).vertices[0]], w[mesh.edge(top).vertices[1]]);
        let (ja, jb) = (lambda * wa - flux, lambda * wb - flux);
        let exact = (ja * ja + ja * jb + jb * jb) / 3.0;
        assert!((res[top].norm_sq - exact).abs() < 1e-14);
    }

    #[test]
    fn indicators_sum_exactly() {
        let mesh = two_squares();
        let disc = assemble(&mesh).unwrap();
        let w = vec![0.1, -0.3, 0.5, 0.2, 0.9, -0.4];
        let inds = element_indicators(&mesh, &disc, &pair(w, 2.0)).unwrap();
        for ind in &inds {
            assert_eq!(ind.r2, 0.0);
            assert!(ind.theta2 >= 0.0 && ind.jump2 >= 0.0);
            assert_eq!(ind.eta2, ind.theta2 + ind.r2 + ind.jump2);
        }
        let g = global_estimate(&inds, 2.0, Some(2.5));
        assert!((g.eta2 - inds.iter().map(|i| i.eta2).sum::<f64>()).abs() < 1e-15);
        assert!((g.effectivity.unwrap() - 0.5 / g.eta2).abs() < 1e-15);
        assert_eq!(global_estimate(&inds[..1], 2.0, None).eta2, inds[0].eta2);
        let zero = [ElementIndicator::default(); 3];
        assert_eq!(global_estimate(&zero, 1.0, Some(1.0)).eta2, 0.0);
    }

    #[test]
    fn triangles_have_no_inconsistency() {
        let v = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        let mesh = PolygonalMesh::build_topology(v, vec![vec![0, 1, 2], vec![0, 2, 3]], |_, a, b| {
            Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap();
        let disc = assemble(&mesh).unwrap();
        let inds = element_indicators(&mesh, &disc, &pair(vec![0.3, -1.0, 2.0, 0.7], 1.0)).unwrap();
        assert!(inds.iter().all(|i| i.theta2 < 1e-28));
    }
}

//! Independent oracles and mesh generators shared by the integration and
//! acceptance tests. Nothing here calls into the library's assembly or
//! estimator code.
#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov::{BoundaryTag, Point2, PolygonalMesh};

pub fn top_is_gamma0(_: [usize; 2], a: Point2, b: Point2) -> Option<BoundaryTag> {
    Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
}

/// Gradients of the three barycentric coordinates, from the inverse of the
/// edge matrix.
pub fn barycentric_gradients(t: [Point2; 3]) -> [Vector2<f64>; 3] {
    let m = Matrix2::new(t[1].x - t[0].x, t[2].x - t[0].x, t[1].y - t[0].y, t[2].y - t[0].y);
    let inv_t = m.try_inverse().expect("non-degenerate triangle").transpose();
    let g1 = inv_t * Vector2::new(1.0, 0.0);
    let g2 = inv_t * Vector2::new(0.0, 1.0);
    [-g1 - g2, g1, g2]
}

pub fn triangle_area(t: [Point2; 3]) -> f64 {
    0.5 * ((t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y))
}

fn triangle(mesh: &PolygonalMesh, c: usize) -> [Point2; 3] {
    let p = mesh.cell_points(c);
    assert_eq!(p.len(), 3, "P1 oracle needs triangles");
    [p[0], p[1], p[2]]
}

/// Standard P1 stiffness, `int grad phi_i . grad phi_j`.
pub fn p1_stiffness(mesh: &PolygonalMesh) -> DMatrix<f64> {
    let n = mesh.num_vertices();
    let mut k = DMatrix::zeros(n, n);
    for c in 0..mesh.num_cells() {
        let t = triangle(mesh, c);
        let g = barycentric_gradients(t);
        let area = triangle_area(t);
        let ids = mesh.cell(c);
        for i in 0..3 {
            for j in 0..3 {
                k[(ids[i], ids[j])] += area * g[i].dot(&g[j]);
            }
        }
    }
    k
}

/// P1 gradient of `w` on a triangle.
pub fn p1_gradient(mesh: &PolygonalMesh, c: usize, w: &[f64]) -> Vector2<f64> {
    let g = barycentric_gradients(triangle(mesh, c));
    let ids = mesh.cell(c);
    g[0] * w[ids[0]] + g[1] * w[ids[1]] + g[2] * w[ids[2]]
}

/// Classical residual estimator for P1 finite elements, squared, per
/// triangle: `h_T` times the squared L2 norms of half the normal-flux jump on
/// interior edges, `lambda w - dn w` on gamma0 and `-dn w` on gamma1.
pub fn classical_estimator(mesh: &PolygonalMesh, lambda: f64, w: &[f64]) -> Vec<f64> {
    let mut owners: HashMap<(usize, usize), Vec<(usize, usize, usize)>> = HashMap::new();
    for c in 0..mesh.num_cells() {
        let ids = mesh.cell(c);
        for i in 0..3 {
            let (a, b) = (ids[i], ids[(i + 1) % 3]);
            owners.entry((a.min(b), a.max(b))).or_default().push((c, a, b));
        }
    }
    let tags: HashMap<(usize, usize), BoundaryTag> = mesh
        .edges()
        .iter()
        .filter(|e| e.is_boundary())
        .map(|e| {
            let [a, b] = e.vertices;
            ((a.min(b), a.max(b)), e.tag)
        })
        .collect();
    let diameter = |c: usize| {
        let t = triangle(mesh, c);
        (0..3).map(|i| (t[i] - t[(i + 1) % 3]).norm()).fold(0.0, f64::max)
    };
    let mut eta2 = vec![0.0; mesh.num_cells()];
    for (&(lo, hi), cells) in &owners {
        let (pa, pb) = (mesh.vertex(lo), mesh.vertex(hi));
        let len = (pb - pa).norm();
        let (c, a, b) = cells[0];
        // Outward normal of c: the edge runs a -> b counter-clockwise.
        let d = mesh.vertex(b) - mesh.vertex(a);
        let normal = Vector2::new(d.y, -d.x) / d.norm();
        let flux = p1_gradient(mesh, c, w).dot(&normal);
        let norm_sq = match cells.len() {
            2 => {
                let other = p1_gradient(mesh, cells[1].0, w).dot(&normal);
                len * (0.5 * (flux - other)).powi(2)
            }
            1 => match tags[&(lo, hi)] {
                BoundaryTag::Gamma0 => {
                    let (ja, jb) = (lambda * w[lo] - flux, lambda * w[hi] - flux);
                    len * (ja * ja + ja * jb + jb * jb) / 3.0
                }
                _ => len * flux * flux,
            },
            _ => panic!("non-manifold edge"),
        };
        for &(cell, _, _) in cells {
            eta2[cell] += diameter(cell) * norm_sq;
        }
    }
    eta2
}

/// Convex polygon with `n` vertices: an affine image of points on the unit
/// circle, so convexity is exact, scaled to the given diameter order.
pub fn random_convex_polygon(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<Point2> {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = (0..n)
            .map(|i| if i + 1 < n { angles[i + 1] - angles[i] } else { angles[0] + 2.0 * PI - angles[i] })
            .fold(f64::INFINITY, f64::min);
        if min_gap < 0.15 {
            continue;
        }
        let aspect = rng.random_range(0.4..1.0);
        let rot: f64 = rng.random_range(0.0..PI);
        let centre = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)) * scale;
        return angles
            .iter()
            .map(|&a| {
                let (x, y) = (a.cos(), aspect * a.sin());
                centre + Point2::new(x * rot.cos() - y * rot.sin(), x * rot.sin() + y * rot.cos()) * (0.5 * scale)
            })
            .collect();
    }
}

/// Structured `n x n` triangulation of the unit square with jittered
/// interior vertices and alternating diagonals.
pub fn jittered_triangulation(n: usize, seed: u64) -> PolygonalMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1.0 / n as f64;
    let mut vertices = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let interior = i > 0 && i < n && j > 0 && j < n;
            let jitter = |rng: &mut ChaCha8Rng| if interior { rng.random_range(-0.25..0.25) * h } else { 0.0 };
            let (dx, dy) = (jitter(&mut rng), jitter(&mut rng));
            vertices.push(Point2::new(i as f64 * h + dx, j as f64 * h + dy));
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                cells.extend([vec![a, b, c], vec![a, c, d]]);
            } else {
                cells.extend([vec![a, b, d], vec![b, c, d]]);
            }
        }
    }
    PolygonalMesh::build_topology(vertices, cells, top_is_gamma0).unwrap()
}

/// Structured mesh of `n x n` squares of the unit square.
pub fn square_grid(n: usize) -> PolygonalMesh {
    let mut vertices = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point2::new(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::new();
    for j in 0..n {
        for i in 0..n {
            cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    PolygonalMesh::build_topology(vertices, cells, top_is_gamma0).unwrap()
}

/// Least-squares slope of `log y` against `log x`, computed from scratch.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

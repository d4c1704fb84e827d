use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::{BoundaryTag, Point2, PolygonalMesh};

use super::TestCase;

/// `n pi tanh(n pi)`, the n-th Steklov eigenvalue of the unit square with
/// the top side as the free surface. The eigenfunction is
/// `cos(n pi x) cosh(n pi y)`.
pub fn exact_eigenvalue_square(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidConfig("eigenvalue index must be at least 1".into()));
    }
    let t = n as f64 * PI;
    Ok(t * t.tanh())
}

/// Apex of the equilateral notch cut from the bottom side.
pub fn notch_apex() -> Point2 {
    Point2::new(0.5, 3f64.sqrt() / 2.0)
}

pub fn initial_mesh(test: TestCase) -> PolygonalMesh {
    let mesh = match test {
        TestCase::Square => square_mesh(4),
        TestCase::Notched => notched_mesh(),
    };
    mesh.expect("built-in meshes are valid")
}

fn top_is_gamma0(_: [usize; 2], a: Point2, b: Point2) -> Option<BoundaryTag> {
    Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
}

/// Cell centres joined to the four corners of every grid square.
fn crossed_cells(corners: [usize; 4], centre: usize) -> [Vec<usize>; 4] {
    let [a, b, c, d] = corners;
    [vec![centre, a, b], vec![centre, b, c], vec![centre, c, d], vec![centre, d, a]]
}

/// `n x n` squares of the unit square, each crossed into four triangles.
pub fn square_mesh(n: usize) -> Result<PolygonalMesh> {
    let grid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1).pow(2) + n * n);
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point2::new(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    let mut cells = Vec::with_capacity(4 * n * n);
    for j in 0..n {
        for i in 0..n {
            vertices.push(Point2::new((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64));
            let corners = [grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)];
            cells.extend(crossed_cells(corners, vertices.len() - 1));
        }
    }
    PolygonalMesh::build_topology(vertices, cells, top_is_gamma0)
}

/// Unit square minus the equilateral triangle standing on the whole bottom
/// side. The left half is meshed by hand and mirrored.
fn notched_mesh() -> Result<PolygonalMesh> {
    let apex = notch_apex();
    let left = [
        Point2::new(0.0, 0.0),
        Point2::new(0.25, apex.y / 2.0),
        Point2::new(0.0, 0.5),
        apex,
        Point2::new(0.5, 1.0),
        Point2::new(0.0, 1.0),
        Point2::new(0.25, 1.0),
        Point2::new(0.2, 0.7),
    ];
    let triangles = [[0, 1, 2], [2, 1, 7], [1, 3, 7], [3, 4, 6], [3, 6, 7], [6, 5, 7], [5, 2, 7]];
    // Vertices 3 and 4 sit on the symmetry axis and are shared.
    let mut vertices = left.to_vec();
    let mut mirror = [0; 8];
    for (i, p) in left.iter().enumerate() {
        mirror[i] = if i == 3 || i == 4 {
            i
        } else {
            vertices.push(Point2::new(1.0 - p.x, p.y));
            vertices.len() - 1
        };
    }
    let mut cells: Vec<Vec<usize>> = triangles.iter().map(|t| t.to_vec()).collect();
    cells.extend(triangles.iter().map(|&[a, b, c]| vec![mirror[a], mirror[c], mirror[b]]));
    PolygonalMesh::build_topology(vertices, cells, top_is_gamma0)
}

/// A smaller variant: the unit square minus the equilateral triangle on
/// `[1/3, 2/3] x {0}`. The reentrant angle is the same, but the corner is
/// small and far from the free surface, so its effect on the first
/// eigenfunction is weak.
pub fn small_notch_mesh() -> Result<PolygonalMesh> {
    let xs = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0];
    let ys = [0.0, 0.5, 1.0];
    let grid = |i: usize, j: usize| j * 4 + i;
    let mut vertices: Vec<Point2> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| Point2::new(x, y))).collect();
    vertices.push(Point2::new(0.5, 3f64.sqrt() / 6.0));
    let apex = vertices.len() - 1;

    let mut cells = Vec::new();
    for j in 0..2 {
        for i in 0..3 {
            let corners = [grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1)];
            if (i, j) == (1, 0) {
                let [b1, b2, c2, c1] = corners;
                cells.extend([vec![b1, apex, c1], vec![apex, c2, c1], vec![apex, b2, c2]]);
            } else {
                let centre = vertices[corners[0]].midpoint(vertices[corners[2]]);
                vertices.push(centre);
                cells.extend(crossed_cells(corners, vertices.len() - 1));
            }
        }
    }
    PolygonalMesh::build_topology(vertices, cells, top_is_gamma0)
}

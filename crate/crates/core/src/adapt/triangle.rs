//! Conforming refinement of triangulations.
//!
//! Newest-vertex bisection uses the convention that a cell `[a, b, c]` has
//! refinement edge `(b, c)`, so `a` is the newest vertex. Bisection places
//! the new midpoint first in both children, which keeps the convention and
//! limits the shapes generated to finitely many similarity classes.

use std::collections::HashSet;

use super::{rebuild, MarkSet, Midpoints, RefinementRecord};
use crate::error::{Error, Result};
use crate::mesh::{edge_key, PolygonalMesh};

fn check_triangles(mesh: &PolygonalMesh) -> Result<()> {
    match mesh.cells().iter().position(|c| c.len() != 3) {
        Some(cell) => Err(Error::NonTriangular { cell, vertices: mesh.cell(cell).len() }),
        None => Ok(()),
    }
}

/// Rotate each triangle so its longest edge becomes the refinement edge.
/// Ties go to the first longest edge in cell order.
pub fn prepare_bisection(mesh: &PolygonalMesh) -> Result<PolygonalMesh> {
    check_triangles(mesh)?;
    let cells = mesh
        .cells()
        .iter()
        .map(|t| {
            let p = |i: usize| mesh.vertex(t[i]);
            let opposite = |i: usize| p((i + 1) % 3).distance(p((i + 2) % 3));
            let mut best = 0;
            for i in 1..3 {
                if opposite(i) > opposite(best) {
                    best = i;
                }
            }
            vec![t[best], t[(best + 1) % 3], t[(best + 2) % 3]]
        })
        .collect();
    rebuild(mesh, mesh.vertices().to_vec(), cells, &Midpoints::default())
}

/// Newest-vertex bisection of the marked triangles plus the closure needed
/// to keep the mesh conforming.
pub fn refine_fem(mesh: &PolygonalMesh, marks: &MarkSet) -> Result<(PolygonalMesh, RefinementRecord)> {
    check_triangles(mesh)?;
    let refinement_edge = |c: usize| {
        let t = mesh.cell(c);
        edge_key(t[1], t[2])
    };
    let mut split: HashSet<(usize, usize)> = marks.cells.iter().map(|&c| refinement_edge(c)).collect();
    // A triangle with any split edge must also split its refinement edge.
    loop {
        let mut changed = false;
        for c in 0..mesh.num_cells() {
            let t = mesh.cell(c);
            let touched = (0..3).any(|i| split.contains(&edge_key(t[i], t[(i + 1) % 3])));
            if touched && split.insert(refinement_edge(c)) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut vertices = mesh.vertices().to_vec();
    let mut mids = Midpoints::default();
    for t in mesh.cells() {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            if split.contains(&edge_key(a, b)) {
                mids.get_or_insert(a, b, &mut vertices);
            }
        }
    }

    let mut cells = Vec::new();
    let mut record = RefinementRecord { new_vertices: (mesh.num_vertices()..vertices.len()).collect(), ..Default::default() };
    for t in mesh.cells() {
        let first = cells.len();
        bisect([t[0], t[1], t[2]], &mids, &mut cells);
        record.children.push((first..cells.len()).collect());
    }
    let refined = rebuild(mesh, vertices, cells, &mids)?;
    Ok((refined, record))
}

fn bisect([a, b, c]: [usize; 3], mids: &Midpoints, out: &mut Vec<Vec<usize>>) {
    match mids.get(b, c) {
        Some(m) => {
            bisect([m, a, b], mids, out);
            bisect([m, c, a], mids, out);
        }
        None => out.push(vec![a, b, c]),
    }
}

/// Red refinement: every triangle into four similar ones.
pub fn refine_uniform(mesh: &PolygonalMesh) -> Result<(PolygonalMesh, RefinementRecord)> {
    check_triangles(mesh)?;
    let mut vertices = mesh.vertices().to_vec();
    let mut mids = Midpoints::default();
    let mut cells = Vec::with_capacity(4 * mesh.num_cells());
    let mut record = RefinementRecord::default();
    for t in mesh.cells() {
        let (a, b, c) = (t[0], t[1], t[2]);
        let ab = mids.get_or_insert(a, b, &mut vertices);
        let bc = mids.get_or_insert(b, c, &mut vertices);
        let ca = mids.get_or_insert(c, a, &mut vertices);
        let first = cells.len();
        cells.extend([vec![a, ab, ca], vec![ab, b, bc], vec![ca, bc, c], vec![bc, ca, ab]]);
        record.children.push((first..cells.len()).collect());
    }
    record.new_vertices = (mesh.num_vertices()..vertices.len()).collect();
    let refined = rebuild(mesh, vertices, cells, &mids)?;
    Ok((refined, record))
}

/// Smallest interior angle over all triangles, in radians.
pub fn min_angle(mesh: &PolygonalMesh) -> f64 {
    let mut min = f64::INFINITY;
    for c in 0..mesh.num_cells() {
        let p = mesh.cell_points(c);
        let n = p.len();
        for i in 0..n {
            let u = p[(i + 1) % n] - p[i];
            let v = p[(i + n - 1) % n] - p[i];
            min = min.min(u.cross(v).abs().atan2(u.dot(v)));
        }
    }
    min
}

use super::{rebuild, MarkSet, Midpoints, RefinementRecord};
use crate::error::{Error, Result};
use crate::mesh::PolygonalMesh;

/// Split each marked n-gon into n quadrilaterals by joining its centroid to
/// the midpoints of its sides. Hanging vertices count as corners, so a side
/// means a pair of consecutive vertices. Unmarked neighbours of a split side
/// gain the midpoint as an extra vertex.
pub fn refine_vem(mesh: &PolygonalMesh, marks: &MarkSet) -> Result<(PolygonalMesh, RefinementRecord)> {
    let mut marked = vec![false; mesh.num_cells()];
    for &c in &marks.cells {
        marked[c] = true;
    }
    let mut vertices = mesh.vertices().to_vec();
    let mut mids = Midpoints::default();
    for c in (0..mesh.num_cells()).filter(|&c| marked[c]) {
        // Quads from a cell that is not star-shaped around its centroid would be inverted.
        mesh.sub_triangulate(c)?;
        let cell = mesh.cell(c);
        let n = cell.len();
        for i in 0..n {
            mids.get_or_insert(cell[i], cell[(i + 1) % n], &mut vertices);
        }
    }

    let mut cells = Vec::with_capacity(mesh.num_cells() + 3 * marks.cells.len());
    let mut record = RefinementRecord::default();
    record.new_vertices.extend(mesh.num_vertices()..vertices.len());
    for c in 0..mesh.num_cells() {
        let cell = mesh.cell(c);
        let n = cell.len();
        let first = cells.len();
        if marked[c] {
            vertices.push(mesh.element_centroid(c));
            let centre = vertices.len() - 1;
            record.new_vertices.push(centre);
            let mid = |i: usize| mids.get(cell[i % n], cell[(i + 1) % n]).ok_or(Error::NotStarShaped { cell: c });
            for i in 0..n {
                cells.push(vec![centre, mid(i + n - 1)?, cell[i], mid(i)?]);
            }
        } else {
            let mut cycle = Vec::with_capacity(n + 2);
            for i in 0..n {
                cycle.push(cell[i]);
                if let Some(m) = mids.get(cell[i], cell[(i + 1) % n]) {
                    cycle.push(m);
                }
            }
            if cycle.len() > n {
                record.hanging_neighbors.push(c);
            }
            cells.push(cycle);
        }
        record.children.push((first..cells.len()).collect());
    }

    let refined = rebuild(mesh, vertices, cells, &mids)?;
    Ok((refined, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::mark;
    use crate::mesh::{is_convex, BoundaryTag, Point2};

    fn two_triangles() -> PolygonalMesh {
        let v = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        PolygonalMesh::build_topology(v, vec![vec![0, 1, 2], vec![0, 2, 3]], |_, a, b| {
            Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap()
    }

    #[test]
    fn triangle_into_three_quads_and_neighbor_gains_vertex() {
        let mesh = two_triangles();
        let marks = MarkSet { cells: vec![0], threshold: 0.0 };
        let (fine, rec) = refine_vem(&mesh, &marks).unwrap();
        assert_eq!(rec.children[0].len(), 3);
        for &c in &rec.children[0] {
            assert_eq!(fine.cell(c).len(), 4);
        }
        let neighbor = rec.children[1][0];
        assert_eq!(fine.cell(neighbor).len(), 4);
        assert_eq!(fine.collinear_vertices(neighbor).len(), 1);
        assert_eq!(rec.hanging_neighbors, vec![1]);
        assert!(fine.is_conforming());
        assert!((fine.area() - 1.0).abs() < 1e-14);
        // The split bottom and right sides keep their gamma1 tag.
        let g0: f64 = fine.edges().iter().enumerate().filter(|(_, e)| e.tag == BoundaryTag::Gamma0).map(|(i, _)| fine.edge_length(i)).sum();
        assert!((g0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pentagon_into_five_quads() {
        let v = vec![
            Point2::new(0., 0.),
            Point2::new(2., 0.),
            Point2::new(2.5, 1.5),
            Point2::new(1., 2.5),
            Point2::new(-0.5, 1.5),
        ];
        let mesh = PolygonalMesh::build_topology(v, vec![vec![0, 1, 2, 3, 4]], |_, a, b| {
            Some(if a.y > 1.0 && b.y > 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap();
        let (fine, rec) = refine_vem(&mesh, &mark(&[1.0], 0.5)).unwrap();
        assert_eq!(rec.children[0].len(), 5);
        assert!((fine.area() - mesh.area()).abs() < 1e-12 * mesh.area());
        for c in 0..fine.num_cells() {
            assert!(is_convex(&fine.cell_points(c)));
        }
    }

    #[test]
    fn shared_midpoint_created_once() {
        let mesh = two_triangles();
        let marks = MarkSet { cells: vec![0, 1], threshold: 0.0 };
        let (fine, _) = refine_vem(&mesh, &marks).unwrap();
        // 4 corners + 5 edge midpoints + 2 centroids.
        assert_eq!(fine.num_vertices(), 11);
        assert_eq!(fine.num_cells(), 6);
        assert!(fine.is_conforming());
    }
}

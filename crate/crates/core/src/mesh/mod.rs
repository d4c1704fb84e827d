//! Polygonal meshes: vertices, counter-clockwise cell cycles and an edge
//! table carrying adjacency and boundary tags.
//!
//! Meshes are edge-matching. A vertex lying in the interior of a neighbour's
//! geometric side (a hanging node) is an ordinary vertex of both cells, so
//! every edge, i.e. every pair of consecutive cell vertices, is shared by at
//! most two cells.

mod io;
mod quality;

pub use io::{load_mesh, save_mesh, MeshFile};
pub use quality::{quality_report, CellQuality, MeshQualityReport};

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of the collinearity predicate (scaled by `h_E^2`).
pub const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Which part of the boundary an edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    Interior,
    /// Free surface, where the eigenvalue enters the boundary condition.
    Gamma0,
    /// Homogeneous Neumann part of the boundary.
    Gamma1,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Endpoints in the order traversed counter-clockwise by `left`.
    pub vertices: [usize; 2],
    pub left: usize,
    pub right: Option<usize>,
    pub tag: BoundaryTag,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

/// Key used for edge lookups: the endpoint pair in ascending order.
pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug)]
pub struct PolygonalMesh {
    vertices: Vec<Point2>,
    cells: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    /// `cell_edges[c][i]` is the edge joining local vertices `i` and `i + 1`.
    cell_edges: Vec<Vec<usize>>,
    edge_lookup: HashMap<(usize, usize), usize>,
}

impl PartialEq for PolygonalMesh {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.cells == other.cells && self.edges == other.edges
    }
}

impl PolygonalMesh {
    /// Builds the edge table and validates the mesh.
    ///
    /// Clockwise cells are reversed in place (keeping their first vertex).
    /// `tag_rule` is called once per boundary edge with the endpoint indices
    /// and coordinates and must return `Gamma0` or `Gamma1`.
    pub fn build_topology<F>(vertices: Vec<Point2>, mut cells: Vec<Vec<usize>>, mut tag_rule: F) -> Result<Self>
    where
        F: FnMut([usize; 2], Point2, Point2) -> Option<BoundaryTag>,
    {
        if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteVertex { index });
        }
        let mut used = vec![false; vertices.len()];
        for (c, cell) in cells.iter_mut().enumerate() {
            validate_cell(c, cell, &vertices)?;
            for &v in cell.iter() {
                used[v] = true;
            }
        }
        if let Some(index) = used.iter().position(|u| !u) {
            return Err(Error::UnusedVertex { index });
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_lookup = HashMap::new();
        let mut cell_edges = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let n = cell.len();
            let mut local = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (cell[i], cell[(i + 1) % n]);
                let key = edge_key(a, b);
                match edge_lookup.get(&key) {
                    Some(&e) => {
                        let edge: &mut Edge = &mut edges[e];
                        if edge.right.is_some() {
                            return Err(Error::NonManifoldEdge { edge: [key.0, key.1], count: 3 });
                        }
                        if edge.vertices == [a, b] {
                            return Err(Error::InconsistentOrientation { edge: [a, b] });
                        }
                        edge.right = Some(c);
                        local.push(e);
                    }
                    None => {
                        edge_lookup.insert(key, edges.len());
                        local.push(edges.len());
                        edges.push(Edge { vertices: [a, b], left: c, right: None, tag: BoundaryTag::Interior });
                    }
                }
            }
            cell_edges.push(local);
        }

        let mut has_gamma0 = false;
        for edge in edges.iter_mut().filter(|e| e.right.is_none()) {
            let [a, b] = edge.vertices;
            match tag_rule([a, b], vertices[a], vertices[b]) {
                Some(tag @ (BoundaryTag::Gamma0 | BoundaryTag::Gamma1)) => {
                    has_gamma0 |= tag == BoundaryTag::Gamma0;
                    edge.tag = tag;
                }
                _ => return Err(Error::UntaggedBoundaryEdge { edge: [a, b] }),
            }
        }
        if !has_gamma0 {
            return Err(Error::NoGamma0);
        }

        Ok(PolygonalMesh { vertices, cells, edges, cell_edges, edge_lookup })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point2 {
        self.vertices[v]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn cell_edges(&self, c: usize) -> &[usize] {
        &self.cell_edges[c]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Edge index joining `a` and `b`, if they are consecutive in some cell.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&edge_key(a, b)).copied()
    }

    /// Coordinates of the vertices of cell `c`, in cycle order.
    pub fn cell_points(&self, c: usize) -> Vec<Point2> {
        self.cells[c].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e].vertices;
        self.vertices[a].distance(self.vertices[b])
    }

    /// Unit normal of edge `e` pointing out of cell `c` (which must be
    /// incident to the edge).
    pub fn outward_normal(&self, e: usize, c: usize) -> Point2 {
        let edge = &self.edges[e];
        let [a, b] = edge.vertices;
        let d = self.vertices[b] - self.vertices[a];
        let n = Point2::new(d.y, -d.x) * (1.0 / d.norm());
        if edge.left == c {
            n
        } else {
            n * -1.0
        }
    }

    /// Max pairwise vertex distance of cell `c`.
    pub fn element_diameter(&self, c: usize) -> f64 {
        polygon_diameter(&self.cell_points(c))
    }

    pub fn element_area(&self, c: usize) -> f64 {
        signed_area(&self.cell_points(c))
    }

    /// Area centroid of cell `c`.
    pub fn element_centroid(&self, c: usize) -> Point2 {
        polygon_centroid(&self.cell_points(c))
    }

    /// Total area of the domain.
    pub fn area(&self) -> f64 {
        (0..self.num_cells()).map(|c| self.element_area(c)).sum()
    }

    /// Fan triangulation of cell `c` around its centroid.
    pub fn sub_triangulate(&self, c: usize) -> Result<Vec<[Point2; 3]>> {
        let pts = self.cell_points(c);
        let centroid = polygon_centroid(&pts);
        let h = polygon_diameter(&pts);
        let n = pts.len();
        let mut tris = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let area = 0.5 * (a - centroid).cross(b - centroid);
            if area <= COLLINEAR_TOL * h * h {
                return Err(Error::NotStarShaped { cell: c });
            }
            tris.push([centroid, a, b]);
        }
        Ok(tris)
    }

    /// Vertices of the mesh lying on a gamma0 edge, ascending.
    pub fn gamma0_vertices(&self) -> Vec<usize> {
        let mut on = vec![false; self.num_vertices()];
        for edge in self.edges.iter().filter(|e| e.tag == BoundaryTag::Gamma0) {
            on[edge.vertices[0]] = true;
            on[edge.vertices[1]] = true;
        }
        on.iter().enumerate().filter_map(|(v, &b)| b.then_some(v)).collect()
    }

    /// Local indices of vertices of cell `c` that lie on the segment joining
    /// their two neighbours (hanging nodes, or flat corners).
    pub fn collinear_vertices(&self, c: usize) -> Vec<usize> {
        let pts = self.cell_points(c);
        let h = polygon_diameter(&pts);
        let n = pts.len();
        (0..n)
            .filter(|&i| {
                let prev = pts[(i + n - 1) % n];
                let next = pts[(i + 1) % n];
                is_collinear(prev, pts[i], next, h)
            })
            .collect()
    }

    /// Map from sorted endpoint pair to boundary tag, for boundary edges only.
    pub fn boundary_tags(&self) -> HashMap<(usize, usize), BoundaryTag> {
        self.edges
            .iter()
            .filter(|e| e.is_boundary())
            .map(|e| (edge_key(e.vertices[0], e.vertices[1]), e.tag))
            .collect()
    }

    /// True when every interior edge is listed by its two cells in opposite
    /// directions and every boundary edge by exactly one cell.
    pub fn is_conforming(&self) -> bool {
        let mut uses: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for cell in &self.cells {
            let n = cell.len();
            for i in 0..n {
                let (a, b) = (cell[i], cell[(i + 1) % n]);
                uses.entry(edge_key(a, b)).or_default().push((a, b));
            }
        }
        self.edges.iter().all(|e| {
            let list = &uses[&edge_key(e.vertices[0], e.vertices[1])];
            match (e.right, list.as_slice()) {
                (None, [_]) => true,
                (Some(_), [u, w]) => u.0 == w.1 && u.1 == w.0,
                _ => false,
            }
        }) && uses.len() == self.edges.len()
    }
}

fn validate_cell(c: usize, cell: &mut [usize], vertices: &[Point2]) -> Result<()> {
    if cell.len() < 3 {
        return Err(Error::DegenerateCell { cell: c, reason: format!("{} vertices", cell.len()) });
    }
    for &v in cell.iter() {
        if v >= vertices.len() {
            return Err(Error::InvalidVertexIndex { cell: c, index: v, count: vertices.len() });
        }
    }
    let mut sorted = cell.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateCell { cell: c, reason: "repeated vertex".into() });
    }
    let pts: Vec<Point2> = cell.iter().map(|&v| vertices[v]).collect();
    let h = polygon_diameter(&pts);
    let area = signed_area(&pts);
    if area.abs() <= COLLINEAR_TOL * h * h {
        return Err(Error::DegenerateCell { cell: c, reason: "zero area".into() });
    }
    if !is_simple(&pts) {
        return Err(Error::DegenerateCell { cell: c, reason: "self-intersecting polygon".into() });
    }
    if area < 0.0 {
        cell[1..].reverse();
    }
    Ok(())
}

/// Shoelace signed area; positive for counter-clockwise polygons.
pub fn signed_area(pts: &[Point2]) -> f64 {
    let n = pts.len();
    let origin = pts[0];
    let mut twice = 0.0;
    for i in 1..n - 1 {
        twice += (pts[i] - origin).cross(pts[i + 1] - origin);
    }
    0.5 * twice
}

/// Area-weighted centroid.
pub fn polygon_centroid(pts: &[Point2]) -> Point2 {
    let n = pts.len();
    let origin = pts[0];
    let (mut twice_area, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 1..n - 1 {
        let a = pts[i] - origin;
        let b = pts[i + 1] - origin;
        let w = a.cross(b);
        twice_area += w;
        cx += w * (a.x + b.x);
        cy += w * (a.y + b.y);
    }
    Point2::new(origin.x + cx / (3.0 * twice_area), origin.y + cy / (3.0 * twice_area))
}

pub fn polygon_diameter(pts: &[Point2]) -> f64 {
    let mut h: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            h = h.max(p.distance(*q));
        }
    }
    h
}

/// `p` is collinear with segment `ab` when the triangle they span has area
/// below `COLLINEAR_TOL * h^2`.
pub fn is_collinear(a: Point2, p: Point2, b: Point2, h: f64) -> bool {
    0.5 * (b - a).cross(p - a).abs() < COLLINEAR_TOL * h * h
}

/// Convexity test that accepts straight (collinear) corners.
pub fn is_convex(pts: &[Point2]) -> bool {
    let n = pts.len();
    let h = polygon_diameter(pts);
    let sign = signed_area(pts).signum();
    (0..n).all(|i| {
        let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        sign * (b - a).cross(c - b) >= -COLLINEAR_TOL * h * h
    })
}

/// No two non-adjacent sides intersect.
fn is_simple(pts: &[Point2]) -> bool {
    let n = pts.len();
    if n == 3 {
        return true;
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2, o: f64| {
        o == 0.0 && r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Point-in-polygon by ray casting. Points on the boundary may go either way.
pub fn point_in_polygon(p: Point2, pts: &[Point2]) -> bool {
    let n = pts.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn unit_square() -> PolygonalMesh {
        let v = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        PolygonalMesh::build_topology(v, vec![vec![0, 1, 2, 3]], |_, a, b| {
            Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap()
    }

    fn top_is_gamma0(_: [usize; 2], a: Point2, b: Point2) -> Option<BoundaryTag> {
        Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
    }

    #[test]
    fn single_square_edges() {
        let m = unit_square();
        assert_eq!(m.edges().len(), 4);
        let g0 = m.edges().iter().filter(|e| e.tag == BoundaryTag::Gamma0).count();
        let g1 = m.edges().iter().filter(|e| e.tag == BoundaryTag::Gamma1).count();
        assert_eq!((g0, g1), (1, 3));
        assert_eq!(m.gamma0_vertices(), vec![2, 3]);
    }

    #[test]
    fn two_triangles_share_diagonal() {
        let v = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        let m = PolygonalMesh::build_topology(v, vec![vec![0, 1, 2], vec![0, 2, 3]], top_is_gamma0).unwrap();
        assert_eq!(m.edges().len(), 5);
        assert_eq!(m.edges().iter().filter(|e| e.tag == BoundaryTag::Interior).count(), 1);
        assert_eq!(m.edges().iter().filter(|e| e.is_boundary()).count(), 4);
        assert!(m.is_conforming());
    }

    #[test]
    fn clockwise_cell_is_repaired() {
        let v = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)];
        let m = PolygonalMesh::build_topology(v, vec![vec![0, 3, 2, 1]], top_is_gamma0).unwrap();
        assert_eq!(m.cell(0), &[0, 1, 2, 3]);
        assert!(m.element_area(0) > 0.0);
    }

    #[test]
    fn geometry_of_simple_cells() {
        let m = unit_square();
        assert!((m.element_diameter(0) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.element_centroid(0), Point2::new(0.5, 0.5));
        assert_eq!(m.element_area(0), 1.0);

        let tri = [Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0., 1.)];
        assert!((polygon_diameter(&tri) - 2f64.sqrt()).abs() < 1e-15);
        let c = polygon_centroid(&tri);
        assert!((c.x - 1.0 / 3.0).abs() < 1e-15 && (c.y - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(signed_area(&tri), 0.5);
    }

    #[test]
    fn sub_triangulation_of_square() {
        let m = unit_square();
        let tris = m.sub_triangulate(0).unwrap();
        assert_eq!(tris.len(), 4);
        for t in tris {
            assert!((signed_area(&t) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn non_star_shaped_cell_is_rejected() {
        // Thin "C" shape whose centroid falls outside the polygon.
        let v = vec![
            Point2::new(0., 0.),
            Point2::new(1., 0.),
            Point2::new(1., 0.1),
            Point2::new(0.1, 0.1),
            Point2::new(0.1, 0.9),
            Point2::new(1., 0.9),
            Point2::new(1., 1.),
            Point2::new(0., 1.),
        ];
        let m = PolygonalMesh::build_topology(v, vec![(0..8).collect()], top_is_gamma0).unwrap();
        assert!(matches!(m.sub_triangulate(0), Err(Error::NotStarShaped { cell: 0 })));
    }

    #[test]
    fn topology_errors() {
        let v = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.), Point2::new(2., 0.)];
        let err = PolygonalMesh::build_topology(v.clone(), vec![vec![0, 1, 2], vec![0, 2, 3], vec![2, 1, 4], vec![1, 2, 4]], top_is_gamma0);
        assert!(matches!(err, Err(Error::InconsistentOrientation { .. }) | Err(Error::NonManifoldEdge { .. })));

        let err = PolygonalMesh::build_topology(v[..4].to_vec(), vec![vec![0, 1, 2, 3]], |_, _, _| None);
        assert!(matches!(err, Err(Error::UntaggedBoundaryEdge { .. })));

        let err = PolygonalMesh::build_topology(v[..4].to_vec(), vec![vec![0, 1, 2, 3]], |_, _, _| Some(BoundaryTag::Gamma1));
        assert!(matches!(err, Err(Error::NoGamma0)));

        let err = PolygonalMesh::build_topology(v[..4].to_vec(), vec![vec![0, 1, 1, 3]], top_is_gamma0);
        assert!(matches!(err, Err(Error::DegenerateCell { .. })));

        let err = PolygonalMesh::build_topology(v[..4].to_vec(), vec![vec![0, 2, 1, 3]], top_is_gamma0);
        assert!(matches!(err, Err(Error::DegenerateCell { .. })));

        let err = PolygonalMesh::build_topology(v[..4].to_vec(), vec![vec![0, 1, 7]], top_is_gamma0);
        assert!(matches!(err, Err(Error::InvalidVertexIndex { index: 7, .. })));
    }

    #[test]
    fn hanging_vertex_is_collinear() {
        let v = vec![
            Point2::new(0., 0.),
            Point2::new(0.5, 0.),
            Point2::new(1., 0.),
            Point2::new(0., 1.),
        ];
        let m = PolygonalMesh::build_topology(v, vec![vec![0, 1, 2, 3]], |_, a, b| {
            Some(if a.x == 0.0 && b.x == 0.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap();
        assert_eq!(m.collinear_vertices(0), vec![1]);
        assert!(is_convex(&m.cell_points(0)));
    }
}

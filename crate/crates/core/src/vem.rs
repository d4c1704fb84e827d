//! Lowest-order virtual element discretization.
//!
//! Each cell carries one degree of freedom per vertex. Local shape functions
//! are harmonic with piecewise-linear traces and are never evaluated; only
//! their elliptic projection onto affine functions and their vertex values
//! enter the local operators:
//!
//! * the projector is computed from boundary data alone, because for an
//!   affine `q` the right-hand side `int_E grad v . grad q` equals
//!   `int_{dE} v (grad q . n)`, which the trapezoid rule integrates exactly;
//! * the constant part is fixed by matching vertex averages;
//! * the stabilization is the plain sum of vertex-value products applied to
//!   the non-polynomial remainder `(I - D Pi) v`.
//!
//! Projector coefficients are expressed in the scaled monomial basis
//! `{1, (x - x_E)/h_E, (y - y_E)/h_E}` centred at the area centroid.

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::mesh::{polygon_centroid, polygon_diameter, signed_area, BoundaryTag, Point2, PolygonalMesh};
use crate::sparse::CsrMatrix;

#[derive(Clone, Debug)]
pub struct LocalElementOperators {
    pub centroid: Point2,
    pub diameter: f64,
    pub area: f64,
    /// `3 x N_E`: vertex values to monomial coefficients.
    pub projector: DMatrix<f64>,
    /// `N_E x 3`: monomial values at the vertices.
    pub monomials_at_vertices: DMatrix<f64>,
    /// `Pi^T G Pi`, the exact energy of the projections.
    pub consistency: DMatrix<f64>,
    /// `(I - D Pi)^T (I - D Pi)`.
    pub stabilization: DMatrix<f64>,
    /// Consistency plus stabilization: the local matrix of `a_h^E`.
    pub stiffness: DMatrix<f64>,
}

impl LocalElementOperators {
    pub fn num_vertices(&self) -> usize {
        self.projector.ncols()
    }

    /// Coefficients of the projection of local vertex values `v`.
    pub fn project(&self, v: &[f64]) -> [f64; 3] {
        let mut c = [0.0; 3];
        for (r, cr) in c.iter_mut().enumerate() {
            *cr = v.iter().enumerate().map(|(i, vi)| self.projector[(r, i)] * vi).sum();
        }
        c
    }

    /// `(I - D Pi) v`: what the projection misses at the vertices.
    pub fn inconsistency(&self, v: &[f64]) -> Vec<f64> {
        let c = self.project(v);
        (0..v.len())
            .map(|i| v[i] - (0..3).map(|b| self.monomials_at_vertices[(i, b)] * c[b]).sum::<f64>())
            .collect()
    }

    /// Gradient of the affine function with the given monomial coefficients.
    pub fn gradient(&self, coeffs: &[f64; 3]) -> Point2 {
        Point2::new(coeffs[1] / self.diameter, coeffs[2] / self.diameter)
    }
}

/// Elliptic projector onto affine functions: returns `(Pi, D, centroid, h, area)`.
#[allow(clippy::type_complexity)]
pub fn local_projector(pts: &[Point2], cell: usize) -> Result<(DMatrix<f64>, DMatrix<f64>, Point2, f64, f64)> {
    let n = pts.len();
    let centroid = polygon_centroid(pts);
    let h = polygon_diameter(pts);
    let area = signed_area(pts);
    if !(area > 0.0 && h > 0.0) {
        return Err(Error::SingularProjector { cell });
    }
    let nf = n as f64;

    let mut d = DMatrix::zeros(n, 3);
    for (i, p) in pts.iter().enumerate() {
        d[(i, 0)] = 1.0;
        d[(i, 1)] = (p.x - centroid.x) / h;
        d[(i, 2)] = (p.y - centroid.y) / h;
    }

    // Right-hand side: vertex averages and boundary fluxes of each basis function.
    let mut b = DMatrix::zeros(3, n);
    for i in 0..n {
        let prev = pts[i] - pts[(i + n - 1) % n];
        let next = pts[(i + 1) % n] - pts[i];
        // int_{dE} phi_i n ds: half of each adjacent edge's length-weighted normal.
        let flux = Point2::new(prev.y + next.y, -(prev.x + next.x)) * 0.5;
        b[(0, i)] = 1.0 / nf;
        b[(1, i)] = flux.x / h;
        b[(2, i)] = flux.y / h;
    }

    let mut g = Matrix3::zeros();
    for beta in 0..3 {
        g[(0, beta)] = d.column(beta).sum() / nf;
    }
    g[(1, 1)] = area / (h * h);
    g[(2, 2)] = area / (h * h);

    let lu = g.lu();
    let mut pi = DMatrix::zeros(3, n);
    for i in 0..n {
        let col = lu
            .solve(&nalgebra::Vector3::new(b[(0, i)], b[(1, i)], b[(2, i)]))
            .ok_or(Error::SingularProjector { cell })?;
        pi.set_column(i, &col);
    }
    if pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularProjector { cell });
    }
    Ok((pi, d, centroid, h, area))
}

/// Consistency, stabilization and combined local stiffness for one cell.
pub fn local_operators(pts: &[Point2], cell: usize) -> Result<LocalElementOperators> {
    let (pi, d, centroid, h, area) = local_projector(pts, cell)?;
    let n = pts.len();

    let grad_scale = area / (h * h);
    let consistency = symmetrize((pi.rows(1, 2).transpose() * pi.rows(1, 2)) * grad_scale);
    let residual = DMatrix::<f64>::identity(n, n) - &d * &pi;
    let stabilization = symmetrize(residual.transpose() * &residual);
    let stiffness = symmetrize(&consistency + &stabilization);

    Ok(LocalElementOperators {
        centroid,
        diameter: h,
        area,
        projector: pi,
        monomials_at_vertices: d,
        consistency,
        stabilization,
        stiffness,
    })
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let mut s = m;
    let n = s.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// Exact mass matrix of the linear trace on an edge of length `length`.
pub fn edge_mass(length: f64) -> [[f64; 2]; 2] {
    let a = length / 3.0;
    let b = length / 6.0;
    [[a, b], [b, a]]
}

/// Local boundary mass of a gamma0 edge, ordered as the edge's endpoints.
pub fn local_boundary_mass(mesh: &PolygonalMesh, edge: usize) -> Result<[[f64; 2]; 2]> {
    let e = mesh.edge(edge);
    if e.tag != BoundaryTag::Gamma0 {
        return Err(Error::NotGamma0Edge { edge: e.vertices });
    }
    Ok(edge_mass(mesh.edge_length(edge)))
}

/// Vertex-based degrees of freedom: dof `i` is vertex `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    pub num_dofs: usize,
    pub cell_dofs: Vec<Vec<usize>>,
    pub gamma0_dofs: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &PolygonalMesh) -> Self {
        DofMap {
            num_dofs: mesh.num_vertices(),
            cell_dofs: mesh.cells().to_vec(),
            gamma0_dofs: mesh.gamma0_vertices(),
        }
    }

    pub fn gather(&self, cell: usize, global: &[f64]) -> Vec<f64> {
        self.cell_dofs[cell].iter().map(|&d| global[d]).collect()
    }
}

/// The pencil `K w = lambda M w`.
#[derive(Clone, Debug)]
pub struct GlobalSystem {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    pub dofs: DofMap,
}

impl GlobalSystem {
    pub fn num_dofs(&self) -> usize {
        self.dofs.num_dofs
    }
}

/// Assembled system together with the per-cell operators it was built from.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub system: GlobalSystem,
    pub locals: Vec<LocalElementOperators>,
}

/// Assemble stiffness and boundary mass, cells and edges in ascending order.
pub fn assemble(mesh: &PolygonalMesh) -> Result<Discretization> {
    let locals = (0..mesh.num_cells())
        .map(|c| local_operators(&mesh.cell_points(c), c))
        .collect::<Result<Vec<_>>>()?;
    let dofs = DofMap::new(mesh);

    let mut k_trip = Vec::with_capacity(locals.iter().map(|l| l.num_vertices().pow(2)).sum());
    for (c, local) in locals.iter().enumerate() {
        let map = &dofs.cell_dofs[c];
        for (i, &gi) in map.iter().enumerate() {
            for (j, &gj) in map.iter().enumerate() {
                k_trip.push((gi, gj, local.stiffness[(i, j)]));
            }
        }
    }

    let mut m_trip = Vec::new();
    for (e, edge) in mesh.edges().iter().enumerate() {
        if edge.tag != BoundaryTag::Gamma0 {
            continue;
        }
        let local = local_boundary_mass(mesh, e)?;
        for (i, &gi) in edge.vertices.iter().enumerate() {
            for (j, &gj) in edge.vertices.iter().enumerate() {
                m_trip.push((gi, gj, local[i][j]));
            }
        }
    }

    let n = dofs.num_dofs;
    Ok(Discretization {
        system: GlobalSystem {
            stiffness: CsrMatrix::from_triplets(n, &k_trip),
            mass: CsrMatrix::from_triplets(n, &m_trip),
            dofs,
        },
        locals,
    })
}

/// Per-cell affine field `Pi_h w_h`.
#[derive(Clone, Debug)]
pub struct ProjectedSolution {
    pub coeffs: Vec<[f64; 3]>,
    pub gradients: Vec<Point2>,
}

impl ProjectedSolution {
    /// Squared broken H1 seminorm.
    pub fn broken_seminorm_sq(&self, locals: &[LocalElementOperators]) -> f64 {
        self.gradients.iter().zip(locals).map(|(g, l)| l.area * g.dot(*g)).sum()
    }

    pub fn value(&self, cell: usize, local: &LocalElementOperators, p: Point2) -> f64 {
        let c = &self.coeffs[cell];
        let d = (p - local.centroid) * (1.0 / local.diameter);
        c[0] + c[1] * d.x + c[2] * d.y
    }
}

pub fn project_solution(disc: &Discretization, w: &[f64]) -> ProjectedSolution {
    let (coeffs, gradients) = disc
        .locals
        .iter()
        .enumerate()
        .map(|(c, local)| {
            let coeffs = local.project(&disc.system.dofs.gather(c, w));
            (coeffs, local.gradient(&coeffs))
        })
        .unzip();
    ProjectedSolution { coeffs, gradients }
}

/// Extremal generalized eigenvalues of `a_h^E` against a computable
/// stand-in for the exact local energy: the P1 stiffness on the centroid fan
/// with the centroid value condensed out. Constants are excluded.
pub fn stability_interval(pts: &[Point2], cell: usize) -> Result<(f64, f64)> {
    let local = local_operators(pts, cell)?;
    let reference = condensed_fan_stiffness(pts, local.centroid);
    let n = pts.len();
    // Basis of the complement of constants: e_i - e_{n-1}.
    let mut z = DMatrix::zeros(n, n - 1);
    for i in 0..n - 1 {
        z[(i, i)] = 1.0;
        z[(n - 1, i)] = -1.0;
    }
    let a = z.transpose() * &local.stiffness * &z;
    let b = z.transpose() * &reference * &z;
    let chol = b.cholesky().ok_or(Error::SingularProjector { cell })?;
    let l_inv = chol.l().try_inverse().ok_or(Error::SingularProjector { cell })?;
    let c = &l_inv * a * l_inv.transpose();
    let eig = nalgebra::SymmetricEigen::new(symmetrize(c));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((min, max))
}

fn condensed_fan_stiffness(pts: &[Point2], centroid: Point2) -> DMatrix<f64> {
    let n = pts.len();
    // Index n is the centroid.
    let mut full = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..n {
        let ids = [n, i, (i + 1) % n];
        let tri = [centroid, pts[i], pts[(i + 1) % n]];
        let k = p1_triangle_stiffness(&tri);
        for a in 0..3 {
            for b in 0..3 {
                full[(ids[a], ids[b])] += k[a][b];
            }
        }
    }
    let kcc = full[(n, n)];
    DMatrix::from_fn(n, n, |i, j| full[(i, j)] - full[(i, n)] * full[(n, j)] / kcc)
}

/// Classical linear-element stiffness of a triangle.
pub fn p1_triangle_stiffness(t: &[Point2; 3]) -> [[f64; 3]; 3] {
    let area = signed_area(t).abs();
    // Gradient of barycentric i is the rotated opposite side over 2|T|.
    let sides = [t[2] - t[1], t[0] - t[2], t[1] - t[0]];
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = sides[i].dot(sides[j]) / (4.0 * area);
        }
    }
    k
}

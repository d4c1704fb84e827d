//! Smallest positive eigenpairs of the pencil `K w = lambda M w`.
//!
//! `M` only lives on gamma0, so most of the spectrum is infinite, and `K`
//! annihilates constants. Both are handled by working with
//! `M x = mu (K + M) x`, `mu = 1 / (lambda + 1)`: `K + M` is positive
//! definite, infinite eigenvalues map to `mu = 0` and the constant mode to
//! `mu = 1`. A Krylov-Schur (thick-restart Lanczos) iteration runs on
//! `(K + M)^{-1} M`, which is self-adjoint in the `K + M` inner product,
//! with the constant vector projected out of every new direction.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use crate::vem::GlobalSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    /// Number of positive eigenvalues wanted.
    pub count: usize,
    /// Bound on the relative residual of every returned pair.
    pub tol: f64,
    /// Budget of operator applications (one sparse solve each).
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { count: 1, tol: 1e-10, max_iterations: 500, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPair {
    pub lambda: f64,
    pub w: Vec<f64>,
    /// `||K w - lambda M w|| / (||K w|| + lambda ||M w||)`.
    pub residual: f64,
    pub normalized: bool,
}

pub fn relative_residual(system: &GlobalSystem, lambda: f64, w: &[f64]) -> f64 {
    let kw = system.stiffness.mul_vec(w);
    let mw = system.mass.mul_vec(w);
    let num = kw.iter().zip(&mw).map(|(k, m)| (k - lambda * m).powi(2)).sum::<f64>().sqrt();
    let den = norm(&kw) + lambda.abs() * norm(&mw);
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Scale `w` to unit boundary mass norm, with the first clearly nonzero
/// gamma0 value positive.
pub fn normalize(pair: SpectralPair, system: &GlobalSystem) -> Result<SpectralPair> {
    let SpectralPair { lambda, mut w, residual, .. } = pair;
    let mass = system.mass.form(&w, &w);
    if !(mass > 0.0) {
        return Err(Error::ZeroMassNorm);
    }
    let mut scale = 1.0 / mass.sqrt();
    if let Some(&d) = system.dofs.gamma0_dofs.iter().find(|&&d| (w[d] * scale).abs() > 1e-8) {
        if w[d] < 0.0 {
            scale = -scale;
        }
    }
    w.iter_mut().for_each(|x| *x *= scale);
    Ok(SpectralPair { lambda, w, residual, normalized: true })
}

struct ShiftedOperator<'a> {
    system: &'a GlobalSystem,
    shifted: CsrMatrix,
    llt: faer::sparse::linalg::solvers::Llt<usize, f64>,
    mass_ones: Vec<f64>,
    mass_total: f64,
}

impl<'a> ShiftedOperator<'a> {
    fn new(system: &'a GlobalSystem) -> Result<Self> {
        let n = system.num_dofs();
        let shifted = system.stiffness.add_scaled(&system.mass, 1.0);
        let triplets: Vec<_> = shifted.triplets().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::Factorization(format!("{e:?}")))?;
        faer::set_global_parallelism(faer::Par::Seq);
        let llt = mat.sp_cholesky(faer::Side::Lower).map_err(|e| Error::Factorization(format!("{e:?}")))?;
        let mass_ones = system.mass.mul_vec(&vec![1.0; n]);
        let mass_total = mass_ones.iter().sum();
        Ok(ShiftedOperator { system, shifted, llt, mass_ones, mass_total })
    }

    /// Remove the constant mode (M-orthogonal projection).
    fn deflate(&self, x: &mut [f64]) {
        let c = dot(&self.mass_ones, x) / self.mass_total;
        x.iter_mut().for_each(|v| *v -= c);
    }

    /// `(K + M)^{-1} M x`, deflated.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mx = self.system.mass.mul_vec(x);
        let mut rhs = faer::Mat::<f64>::from_fn(mx.len(), 1, |i, _| mx[i]);
        self.llt.solve_in_place(&mut rhs);
        let mut y: Vec<f64> = (0..mx.len()).map(|i| rhs[(i, 0)]).collect();
        self.deflate(&mut y);
        y
    }
}

/// The `count` smallest positive eigenpairs, ascending, normalized.
pub fn solve_smallest_positive(system: &GlobalSystem, options: &SolveOptions) -> Result<Vec<SpectralPair>> {
    if options.count == 0 || !(options.tol > 0.0) {
        return Err(Error::InvalidConfig("eigensolver needs count >= 1 and tol > 0".into()));
    }
    let available = system.dofs.gamma0_dofs.len().saturating_sub(1);
    if options.count > available {
        return Err(Error::TooManyEigenvalues { requested: options.count, available });
    }
    let op = ShiftedOperator::new(system)?;
    let n = system.num_dofs();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let max_basis = (2 * options.count + 18).min(available);

    // Basis V (K+M orthonormal) and (K+M) V.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis + 1);
    let mut b_basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis + 1);
    // Projected operator; column j is filled when basis vector j is expanded.
    let mut h = DMatrix::<f64>::zeros(max_basis + 1, max_basis + 1);
    let mut iterations = 0;
    let mut best_residual = f64::INFINITY;

    let start = op.apply(&random_vector(&mut rng, n));
    iterations += 1;
    push_orthonormal(&op, &mut basis, &mut b_basis, start, None).ok_or(Error::NoConvergence {
        iterations,
        best_residual,
    })?;

    loop {
        // Expand until the basis holds max_basis expanded vectors plus the
        // unexpanded residual direction.
        let mut exhausted = false;
        while basis.len() <= max_basis {
            let j = basis.len() - 1;
            let w = op.apply(&basis[j]);
            iterations += 1;
            let mut coeffs = vec![0.0; basis.len() + 1];
            match push_orthonormal(&op, &mut basis, &mut b_basis, w, Some(&mut coeffs)) {
                Some(()) => {
                    for (i, c) in coeffs.iter().enumerate() {
                        h[(i, j)] = *c;
                    }
                }
                None => {
                    for (i, c) in coeffs.iter().enumerate().take(j + 1) {
                        h[(i, j)] = *c;
                    }
                    // Invariant subspace: either everything finite is
                    // spanned, or restart the search in a fresh direction.
                    if basis.len() >= available {
                        exhausted = true;
                        break;
                    }
                    let fresh = op.apply(&random_vector(&mut rng, n));
                    iterations += 1;
                    if push_orthonormal(&op, &mut basis, &mut b_basis, fresh, None).is_none() {
                        exhausted = true;
                        break;
                    }
                }
            }
            if iterations >= options.max_iterations {
                break;
            }
        }

        let k = if exhausted { basis.len() } else { basis.len() - 1 };
        let mut hk = h.view((0, 0), (k, k)).into_owned();
        hk = 0.5 * (&hk + hk.transpose());
        let eig = SymmetricEigen::new(hk);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let mut pairs = Vec::with_capacity(options.count);
        let mut worst: f64 = 0.0;
        for &idx in order.iter().take(options.count) {
            let mu = eig.eigenvalues[idx];
            let s = eig.eigenvectors.column(idx);
            let mut y = combine(&basis[..k], s.as_slice());
            op.deflate(&mut y);
            let lambda = 1.0 / mu - 1.0;
            let residual = relative_residual(system, lambda, &y);
            worst = worst.max(residual);
            pairs.push(SpectralPair { lambda, w: y, residual, normalized: false });
        }
        best_residual = best_residual.min(worst);
        if pairs.len() == options.count && worst <= options.tol && pairs.iter().all(|p| p.lambda > 0.0) {
            pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
            return pairs.into_iter().map(|p| normalize(p, system)).collect();
        }
        if exhausted || iterations >= options.max_iterations {
            return Err(Error::NoConvergence { iterations, best_residual });
        }

        // Thick restart: keep the leading Ritz vectors and the residual direction.
        let keep = (options.count + (k - options.count) / 2).min(k - 1).max(options.count);
        let residual_row: Vec<f64> = (0..k).map(|j| h[(k, j)]).collect();
        let residual_dir = basis[k].clone();
        let residual_b = b_basis[k].clone();
        let mut new_basis = Vec::with_capacity(max_basis + 1);
        let mut new_b = Vec::with_capacity(max_basis + 1);
        let mut new_h = DMatrix::<f64>::zeros(max_basis + 1, max_basis + 1);
        for (p, &idx) in order.iter().take(keep).enumerate() {
            let s = eig.eigenvectors.column(idx);
            new_basis.push(combine(&basis[..k], s.as_slice()));
            new_b.push(combine(&b_basis[..k], s.as_slice()));
            new_h[(p, p)] = eig.eigenvalues[idx];
            new_h[(keep, p)] = s.iter().zip(&residual_row).map(|(a, b)| a * b).sum();
        }
        new_basis.push(residual_dir);
        new_b.push(residual_b);
        basis = new_basis;
        b_basis = new_b;
        h = new_h;
    }
}

/// Orthogonalize `w` against the basis (two passes of classical Gram-Schmidt
/// in the `K + M` inner product) and append it. Coefficients, including the
/// final norm, are written to `coeffs`. Returns `None` on breakdown.
fn push_orthonormal(
    op: &ShiftedOperator,
    basis: &mut Vec<Vec<f64>>,
    b_basis: &mut Vec<Vec<f64>>,
    mut w: Vec<f64>,
    mut coeffs: Option<&mut Vec<f64>>,
) -> Option<()> {
    let bw = op.shifted.mul_vec(&w);
    let initial = dot(&w, &bw).max(0.0).sqrt();
    if initial == 0.0 || !initial.is_finite() {
        return None;
    }
    for _ in 0..2 {
        for (i, bv) in b_basis.iter().enumerate() {
            let c = dot(bv, &w);
            axpy(-c, &basis[i], &mut w);
            if let Some(cs) = coeffs.as_deref_mut() {
                cs[i] += c;
            }
        }
    }
    op.deflate(&mut w);
    let bw = op.shifted.mul_vec(&w);
    let beta = dot(&w, &bw).max(0.0).sqrt();
    if let Some(cs) = coeffs.as_mut() {
        cs[basis.len()] = beta;
    }
    if beta <= 1e-10 * initial {
        return None;
    }
    let inv = 1.0 / beta;
    basis.push(w.iter().map(|x| x * inv).collect());
    b_basis.push(bw.iter().map(|x| x * inv).collect());
    Some(())
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn combine(vectors: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; vectors[0].len()];
    for (v, &c) in vectors.iter().zip(coeffs) {
        axpy(c, v, &mut out);
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Largest system the dense oracle accepts.
pub const DENSE_LIMIT: usize = 2000;

/// Every finite eigenvalue of the pencil, ascending, including the zero
/// eigenvalue of the constants. Dense Cholesky reduction of the shifted
/// pencil; meant as a test oracle.
pub fn dense_reference_solve(system: &GlobalSystem) -> Result<Vec<f64>> {
    let n = system.num_dofs();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { n, max: DENSE_LIMIT });
    }
    let k = system.stiffness.to_dense();
    let m = system.mass.to_dense();
    let chol = (&k + &m).cholesky().ok_or_else(|| Error::Factorization("dense K + M not positive definite".into()))?;
    let l_inv = chol.l().solve_lower_triangular(&DMatrix::identity(n, n)).ok_or_else(|| Error::Factorization("singular factor".into()))?;
    let c = &l_inv * m * l_inv.transpose();
    let c = 0.5 * (&c + c.transpose());
    let mus = SymmetricEigen::new(c).eigenvalues;
    let mut lambdas: Vec<f64> = mus.iter().filter(|&&mu| mu > 1e-10).map(|&mu| (1.0 - mu) / mu).collect();
    lambdas.sort_by(f64::total_cmp);
    Ok(lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{BoundaryTag, Point2, PolygonalMesh};
    use crate::vem::assemble;

    fn square_mesh(k: usize) -> PolygonalMesh {
        let mut v = Vec::new();
        for j in 0..=k {
            for i in 0..=k {
                v.push(Point2::new(i as f64 / k as f64, j as f64 / k as f64));
            }
        }
        let id = |i: usize, j: usize| j * (k + 1) + i;
        let mut cells = Vec::new();
        for j in 0..k {
            for i in 0..k {
                cells.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        PolygonalMesh::build_topology(v, cells, |_, a, b| {
            Some(if a.y == 1.0 && b.y == 1.0 { BoundaryTag::Gamma0 } else { BoundaryTag::Gamma1 })
        })
        .unwrap()
    }

    #[test]
    fn single_square_matches_dense() {
        let disc = assemble(&square_mesh(1)).unwrap();
        let dense = dense_reference_solve(&disc.system).unwrap();
        assert_eq!(dense.len(), 2);
        assert!(dense[0].abs() < 1e-12);
        let pairs = solve_smallest_positive(&disc.system, &SolveOptions::default()).unwrap();
        assert!((pairs[0].lambda - dense[1]).abs() < 1e-10 * dense[1]);
    }

    #[test]
    fn grid_matches_dense_and_normalizes() {
        let disc = assemble(&square_mesh(6)).unwrap();
        let dense = dense_reference_solve(&disc.system).unwrap();
        assert_eq!(dense.len(), disc.system.dofs.gamma0_dofs.len());
        let opts = SolveOptions { count: 3, ..Default::default() };
        let pairs = solve_smallest_positive(&disc.system, &opts).unwrap();
        for (p, d) in pairs.iter().zip(&dense[1..]) {
            assert!((p.lambda - d).abs() <= 1e-8 * d, "{} vs {}", p.lambda, d);
            assert!(p.residual <= 1e-10);
            assert!((disc.system.mass.form(&p.w, &p.w) - 1.0).abs() < 1e-10);
            let mw = disc.system.mass.mul_vec(&p.w);
            assert!(mw.iter().sum::<f64>().abs() <= 1e-8 * norm(&mw));
        }
        assert!(pairs.windows(2).all(|w| w[0].lambda <= w[1].lambda));
    }

    #[test]
    fn too_many_eigenvalues() {
        let disc = assemble(&square_mesh(1)).unwrap();
        let opts = SolveOptions { count: 2, ..Default::default() };
        assert!(matches!(
            solve_smallest_positive(&disc.system, &opts),
            Err(Error::TooManyEigenvalues { requested: 2, available: 1 })
        ));
    }

    #[test]
    fn normalization_rules() {
        let disc = assemble(&square_mesh(2)).unwrap();
        let sys = &disc.system;
        let pair = solve_smallest_positive(sys, &SolveOptions::default()).unwrap().remove(0);
        let doubled = SpectralPair { w: pair.w.iter().map(|x| 2.0 * x).collect(), normalized: false, ..pair.clone() };
        assert!((sys.mass.form(&doubled.w, &doubled.w) - 4.0).abs() < 1e-10);
        let again = normalize(doubled, sys).unwrap();
        let flipped = normalize(SpectralPair { w: pair.w.iter().map(|x| -x).collect(), ..pair.clone() }, sys).unwrap();
        let same = normalize(pair.clone(), sys).unwrap();
        for i in 0..pair.w.len() {
            assert!((again.w[i] - pair.w[i]).abs() < 1e-12);
            assert_eq!(flipped.w[i], same.w[i]);
        }
        let zero = SpectralPair { w: vec![0.0; pair.w.len()], ..pair };
        assert!(matches!(normalize(zero, sys), Err(Error::ZeroMassNorm)));
    }

    #[test]
    fn dense_size_guard() {
        let disc = assemble(&square_mesh(45)).unwrap();
        assert!(matches!(dense_reference_solve(&disc.system), Err(Error::TooLarge { .. })));
    }
}

//! On triangles the lowest-order virtual element space is the P1 space, so
//! the method and its estimator must coincide with textbook finite elements.

mod common;

use nalgebra::DMatrix;
use steklov::adapt::{mark_indicators, prepare_bisection, refine_fem, refine_uniform};
use steklov::eigen::{solve_smallest_positive, SolveOptions};
use steklov::estimator::element_indicators;
use steklov::experiment::{initial_mesh, TestCase};
use steklov::vem::assemble;
use steklov::{BoundaryTag, PolygonalMesh};

use common::{classical_estimator, jittered_triangulation, p1_stiffness};

fn triangulations() -> Vec<PolygonalMesh> {
    let mut meshes = vec![
        initial_mesh(TestCase::Square),
        initial_mesh(TestCase::Notched),
        jittered_triangulation(5, 1),
        jittered_triangulation(8, 2),
        refine_uniform(&initial_mesh(TestCase::Notched)).unwrap().0,
    ];
    // A few graded meshes from adaptive bisection.
    let mut mesh = prepare_bisection(&initial_mesh(TestCase::Notched)).unwrap();
    for _ in 0..4 {
        let disc = assemble(&mesh).unwrap();
        let pair = solve_smallest_positive(&disc.system, &SolveOptions::default()).unwrap().remove(0);
        let ind = element_indicators(&mesh, &disc, &pair).unwrap();
        mesh = refine_fem(&mesh, &mark_indicators(&ind, 0.5)).unwrap().0;
        meshes.push(mesh.clone());
    }
    meshes
}

/// Independent boundary mass: `l/6 [[2, 1], [1, 2]]` on every gamma0 edge.
fn p1_boundary_mass(mesh: &PolygonalMesh) -> DMatrix<f64> {
    let n = mesh.num_vertices();
    let mut m = DMatrix::zeros(n, n);
    for e in mesh.edges().iter().filter(|e| e.tag == BoundaryTag::Gamma0) {
        let [a, b] = e.vertices;
        let len = mesh.vertex(a).distance(mesh.vertex(b));
        m[(a, a)] += len / 3.0;
        m[(b, b)] += len / 3.0;
        m[(a, b)] += len / 6.0;
        m[(b, a)] += len / 6.0;
    }
    m
}

/// Smallest positive eigenvalue of the P1 pencil via nalgebra's dense
/// solvers: eigenvalues of `(K + M)^{-1} M` through a Cholesky factor.
fn p1_smallest_eigenvalue(mesh: &PolygonalMesh) -> f64 {
    let k = p1_stiffness(mesh);
    let m = p1_boundary_mass(mesh);
    let l = (&k + &m).cholesky().unwrap().l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * &m * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut mus: Vec<f64> = nalgebra::SymmetricEigen::new(c).eigenvalues.iter().copied().filter(|&mu| mu > 1e-10 && mu < 1.0 - 1e-10).collect();
    mus.sort_by(f64::total_cmp);
    let mu = *mus.last().unwrap();
    (1.0 - mu) / mu
}

#[test]
fn stiffness_matches_p1() {
    for mesh in triangulations() {
        let disc = assemble(&mesh).unwrap();
        let k = disc.system.stiffness.to_dense();
        let oracle = p1_stiffness(&mesh);
        let scale = oracle.abs().max();
        assert!((k - &oracle).abs().max() <= 1e-12 * scale);
    }
}

#[test]
fn boundary_mass_matches_p1() {
    for mesh in triangulations() {
        let disc = assemble(&mesh).unwrap();
        assert!((disc.system.mass.to_dense() - p1_boundary_mass(&mesh)).abs().max() < 1e-15);
    }
}

#[test]
fn indicators_match_the_classical_estimator() {
    for mesh in triangulations() {
        let disc = assemble(&mesh).unwrap();
        let pair = solve_smallest_positive(&disc.system, &SolveOptions::default()).unwrap().remove(0);
        let ours = element_indicators(&mesh, &disc, &pair).unwrap();
        let classical = classical_estimator(&mesh, pair.lambda, &pair.w);
        let scale = classical.iter().copied().fold(0.0, f64::max);
        for (a, b) in ours.iter().zip(&classical) {
            assert!(a.theta2 <= 1e-24 * scale.max(1.0), "theta2 = {}", a.theta2);
            assert!((a.eta2 - b).abs() <= 1e-12 * scale, "{} vs {b}", a.eta2);
        }
    }
}

#[test]
fn eigenvalue_matches_p1() {
    for mesh in triangulations().into_iter().filter(|m| m.num_vertices() <= 600) {
        let disc = assemble(&mesh).unwrap();
        let lambda = solve_smallest_positive(&disc.system, &SolveOptions::default()).unwrap()[0].lambda;
        let oracle = p1_smallest_eigenvalue(&mesh);
        assert!((lambda - oracle).abs() <= 1e-10 * oracle, "{lambda} vs {oracle}");
    }
}

//! Fixed low-order Gauss rules. Every integrand in the lowest-order method is
//! at most quadratic, so two points on edges and three on triangles are exact.

use crate::error::{Error, Result};
use crate::mesh::{signed_area, Point2};

/// Rule on the unit interval; weights sum to one.
#[derive(Clone, Copy, Debug)]
pub struct EdgeRule {
    pub nodes: &'static [f64],
    pub weights: &'static [f64],
    pub degree: usize,
}

/// Rule on triangles in barycentric coordinates; weights sum to one.
#[derive(Clone, Copy, Debug)]
pub struct TriangleRule {
    pub nodes: &'static [[f64; 3]],
    pub weights: &'static [f64],
    pub degree: usize,
}

const G: f64 = 0.211_324_865_405_187_1; // (1 - 1/sqrt(3)) / 2

pub const GAUSS_2: EdgeRule = EdgeRule { nodes: &[G, 1.0 - G], weights: &[0.5, 0.5], degree: 3 };

pub const TRIANGLE_3: TriangleRule = TriangleRule {
    nodes: &[
        [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
    ],
    weights: &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    degree: 2,
};

impl EdgeRule {
    /// Integral over the unit interval of a function of the parameter.
    pub fn integrate_unit(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(self.weights).map(|(&s, &w)| w * f(s)).sum()
    }

    /// Integral over the segment `a -> b` (length-scaled).
    pub fn integrate(&self, a: Point2, b: Point2, f: impl Fn(Point2) -> f64) -> f64 {
        let d = b - a;
        d.norm() * self.integrate_unit(|s| f(a + d * s))
    }
}

impl TriangleRule {
    pub fn integrate(&self, tri: &[Point2; 3], f: impl Fn(Point2) -> f64) -> Result<f64> {
        let area = signed_area(tri).abs();
        if area == 0.0 {
            return Err(Error::DegenerateTriangle { area });
        }
        let sum: f64 = self
            .nodes
            .iter()
            .zip(self.weights)
            .map(|(l, &w)| {
                let p = Point2::new(
                    l[0] * tri[0].x + l[1] * tri[1].x + l[2] * tri[2].x,
                    l[0] * tri[0].y + l[1] * tri[1].y + l[2] * tri[2].y,
                );
                w * f(p)
            })
            .sum();
        Ok(area * sum)
    }
}

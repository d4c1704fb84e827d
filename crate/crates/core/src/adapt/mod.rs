//! Marking and mesh refinement.
//!
//! Two refinement families are provided: [`refine_vem`] splits marked
//! polygons into quadrilaterals and leaves hanging vertices on unmarked
//! neighbours, while [`refine_fem`] and [`refine_uniform`] keep the mesh a
//! conforming triangulation.

mod polygon;
mod triangle;

pub use polygon::refine_vem;
pub use triangle::{min_angle, prepare_bisection, refine_fem, refine_uniform};

use std::collections::HashMap;

use crate::error::Result;
use crate::estimator::ElementIndicator;
use crate::mesh::{edge_key, BoundaryTag, Point2, PolygonalMesh};

/// Default marking fraction.
pub const DEFAULT_MARK_FRACTION: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct MarkSet {
    /// Marked cells, ascending.
    pub cells: Vec<usize>,
    pub threshold: f64,
}

/// Select every cell with `eta_E >= fraction * max eta`. `eta` holds the
/// indicators themselves, not their squares.
pub fn mark(eta: &[f64], fraction: f64) -> MarkSet {
    let max = eta.iter().copied().fold(0.0, f64::max);
    let threshold = fraction * max;
    if max <= 0.0 {
        log::warn!("all error indicators vanish; nothing to refine");
        return MarkSet { cells: Vec::new(), threshold };
    }
    let cells = eta.iter().enumerate().filter(|(_, &e)| e >= threshold).map(|(c, _)| c).collect();
    MarkSet { cells, threshold }
}

pub fn mark_indicators(indicators: &[ElementIndicator], fraction: f64) -> MarkSet {
    let eta: Vec<f64> = indicators.iter().map(|i| i.eta2.sqrt()).collect();
    mark(&eta, fraction)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RefinementRecord {
    /// For every old cell, the cells of the new mesh covering it.
    pub children: Vec<Vec<usize>>,
    /// Vertices created by this step.
    pub new_vertices: Vec<usize>,
    /// Unmarked cells that picked up a hanging vertex.
    pub hanging_neighbors: Vec<usize>,
}

/// Midpoints created during one refinement step, keyed by the split edge.
#[derive(Default)]
struct Midpoints {
    by_edge: HashMap<(usize, usize), usize>,
    parent: HashMap<usize, (usize, usize)>,
}

impl Midpoints {
    fn get_or_insert(&mut self, a: usize, b: usize, vertices: &mut Vec<Point2>) -> usize {
        let key = edge_key(a, b);
        *self.by_edge.entry(key).or_insert_with(|| {
            vertices.push(vertices[a].midpoint(vertices[b]));
            let m = vertices.len() - 1;
            self.parent.insert(m, key);
            m
        })
    }

    fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.by_edge.get(&edge_key(a, b)).copied()
    }
}

/// Rebuild a mesh whose boundary edges are either old boundary edges or
/// halves of old ones; halves inherit the parent's tag.
fn rebuild(old: &PolygonalMesh, vertices: Vec<Point2>, cells: Vec<Vec<usize>>, mids: &Midpoints) -> Result<PolygonalMesh> {
    let tags = old.boundary_tags();
    let lookup = |a: usize, b: usize| -> Option<BoundaryTag> {
        if let Some(t) = tags.get(&edge_key(a, b)) {
            return Some(*t);
        }
        for (m, other) in [(a, b), (b, a)] {
            if let Some(&(p, q)) = mids.parent.get(&m) {
                if other == p || other == q {
                    return tags.get(&(p, q)).copied();
                }
            }
        }
        None
    };
    PolygonalMesh::build_topology(vertices, cells, |[a, b], _, _| lookup(a, b))
}

//! JSON mesh interchange.
//!
//! ```json
//! {"vertices": [[x, y], ...],
//!  "cells": [[i0, i1, ...], ...],
//!  "boundary": [{"edge": [i, j], "tag": "gamma0"}, ...]}
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{edge_key, BoundaryTag, Point2, PolygonalMesh};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<Vec<usize>>,
    pub boundary: Vec<BoundaryEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    pub edge: [usize; 2],
    pub tag: BoundaryTag,
}

impl MeshFile {
    pub fn from_mesh(mesh: &PolygonalMesh) -> Self {
        MeshFile {
            vertices: mesh.vertices().iter().map(|p| [p.x, p.y]).collect(),
            cells: mesh.cells().to_vec(),
            boundary: mesh
                .edges()
                .iter()
                .filter(|e| e.is_boundary())
                .map(|e| BoundaryEntry { edge: e.vertices, tag: e.tag })
                .collect(),
        }
    }

    pub fn into_mesh(self) -> Result<PolygonalMesh> {
        let mut tags: HashMap<(usize, usize), (BoundaryTag, bool)> = HashMap::new();
        for entry in &self.boundary {
            let [a, b] = entry.edge;
            if entry.tag == BoundaryTag::Interior {
                return Err(Error::MisplacedBoundaryTag { edge: [a, b] });
            }
            tags.insert(edge_key(a, b), (entry.tag, false));
        }
        let vertices = self.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect();
        let mesh = PolygonalMesh::build_topology(vertices, self.cells, |[a, b], _, _| {
            tags.get_mut(&edge_key(a, b)).map(|(tag, seen)| {
                *seen = true;
                *tag
            })
        })?;
        // Tags naming interior edges or pairs that are not edges at all.
        if let Some((&(a, b), _)) = tags.iter().filter(|(_, (_, seen))| !seen).min_by_key(|(k, _)| **k) {
            return Err(Error::MisplacedBoundaryTag { edge: [a, b] });
        }
        Ok(mesh)
    }
}

pub fn save_mesh(mesh: &PolygonalMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string(&MeshFile::from_mesh(mesh))
        .map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<PolygonalMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: MeshFile = serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    file.into_mesh()
}

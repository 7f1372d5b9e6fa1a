//! Shared helpers for the integration and acceptance suites.

use std::collections::BTreeMap;

use trispline::geometry::{Covector2, Point2};
use trispline::mesh::{Mesh, MeshVertex};
use trispline::validate::sampling::SampleRng;

/// Structured grid mesh on [0, 1]²: `nx × ny` cells, each split along its
/// diagonal into two triangles.
pub fn grid_mesh(nx: usize, ny: usize, mut data: impl FnMut(Point2) -> (f64, Covector2)) -> Mesh {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for iy in 0..=ny {
        for ix in 0..=nx {
            let p = Point2::new(ix as f64 / nx as f64, iy as f64 / ny as f64);
            let (f, a) = data(p);
            vertices.push(MeshVertex::new(p, f, a));
        }
    }
    let idx = |ix: usize, iy: usize| iy * (nx + 1) + ix;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let (v00, v10) = (idx(ix, iy), idx(ix + 1, iy));
            let (v01, v11) = (idx(ix, iy + 1), idx(ix + 1, iy + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Mesh::build(vertices, triangles, BTreeMap::new()).expect("grid mesh is conforming")
}

/// Random Hermite data with values and gradient entries in [-1, 1].
pub fn random_vertex_data(rng: &mut SampleRng) -> (f64, Covector2) {
    (
        rng.uniform(-1.0, 1.0),
        Covector2::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
    )
}

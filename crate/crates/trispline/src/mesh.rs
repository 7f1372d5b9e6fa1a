//! Conforming triangular meshes with per-edge transversal vectors, global
//! spline assembly, point location, evaluation and C1 conformance scanning.
//!
//! Edges are keyed by sorted vertex-index pairs, so the two triangles
//! adjacent to an interior edge always resolve the identical transversal
//! vector — the coupling the C1 property depends on. Triangle `m` wires the
//! edge vector opposite its local vertex `k` into the patch slot `uk`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    default_edge_vector, Covector2, GeometryError, Point2, Triangle, Vector2,
};
use crate::rsd::{LocalPatch, RsdError, VertexGerm};
use crate::shape::RsdTuple;
use crate::validate::{check_rsd_conditions, ValidationReport};

/// Barycentric slack for point location: the located triangle must contain
/// the query with all weights `>= -1e-9`.
const LOCATE_TOL: f64 = 1e-9;
/// Above this triangle count, point location goes through a uniform
/// background grid instead of a brute-force scan.
const BRUTE_FORCE_LIMIT: usize = 64;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh must contain at least one triangle")]
    Empty,
    #[error("triangle {tri} vertex index {index} out of range ({len} vertices)")]
    IndexOutOfRange { tri: usize, index: usize, len: usize },
    #[error("triangle {tri} repeats vertex index {index}")]
    RepeatedVertex { tri: usize, index: usize },
    #[error("triangle {tri} is degenerate: {source}")]
    DegenerateTriangle {
        tri: usize,
        source: GeometryError,
    },
    #[error("triangles {a} and {b} are non-conforming: {reason}")]
    NonConforming { a: usize, b: usize, reason: String },
    #[error("edge {i}-{j} is shared by more than two triangles")]
    EdgeSharedByMoreThanTwo { i: usize, j: usize },
    #[error("supplied vector for edge {i}-{j} is parallel to the edge")]
    ParallelEdgeVector { i: usize, j: usize },
    #[error("edge vector key {key:?} does not name a mesh edge")]
    UnknownEdgeKey { key: String },
    #[error("tuple {name:?} failed RSD validation: {} (max violation {:e})", report.witness.check, report.max_violation)]
    TupleRejected {
        name: String,
        report: Box<ValidationReport>,
    },
    #[error("point ({x}, {y}) lies outside the mesh domain; nearest triangle is {nearest}")]
    OutOfDomain { x: f64, y: f64, nearest: usize },
    #[error("C1 scan requires at least 2 samples per edge")]
    TooFewSamples,
    #[error("malformed mesh file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Rsd(#[from] RsdError),
}

/// One mesh vertex: position plus its Hermite data.
#[derive(Debug, Clone, Copy)]
pub struct MeshVertex {
    pub p: Point2,
    pub f: f64,
    pub a: Covector2,
}

impl MeshVertex {
    pub fn new(p: Point2, f: f64, a: Covector2) -> Self {
        Self { p, f, a }
    }
}

/// A validated conforming triangular mesh with one transversal vector per
/// edge.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<MeshVertex>,
    triangles: Vec<[usize; 3]>,
    edges: BTreeMap<(usize, usize), Vector2>,
}

fn sorted_pair(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// True when the open segments (a1, a2) and (b1, b2) cross properly.
fn segments_cross(a1: Point2, a2: Point2, b1: Point2, b2: Point2) -> bool {
    let scale = (a2 - a1).norm().max((b2 - b1).norm());
    let eps = 1e-12 * scale * scale;
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    (d1 > eps && d2 < -eps || d1 < -eps && d2 > eps)
        && (d3 > eps && d4 < -eps || d3 < -eps && d4 > eps)
}

impl Mesh {
    /// Validates and assembles a mesh. Triangle index triples are normalized
    /// to ascending order; conformity is enforced (two triangles intersect
    /// in nothing, a shared vertex, or a full shared edge); missing edge
    /// vectors default to the unit edge normal with endpoints ordered by
    /// ascending vertex index, supplied vectors are checked non-parallel.
    pub fn build(
        vertices: Vec<MeshVertex>,
        triangles: Vec<[usize; 3]>,
        edge_vectors: BTreeMap<(usize, usize), Vector2>,
    ) -> Result<Self, MeshError> {
        if triangles.is_empty() {
            return Err(MeshError::Empty);
        }
        let mut tris = Vec::with_capacity(triangles.len());
        for (m, idx) in triangles.iter().enumerate() {
            let mut t = *idx;
            for &i in &t {
                if i >= vertices.len() {
                    return Err(MeshError::IndexOutOfRange {
                        tri: m,
                        index: i,
                        len: vertices.len(),
                    });
                }
            }
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] {
                return Err(MeshError::RepeatedVertex { tri: m, index: t[1] });
            }
            Triangle::new(vertices[t[0]].p, vertices[t[1]].p, vertices[t[2]].p)
                .map_err(|source| MeshError::DegenerateTriangle { tri: m, source })?;
            tris.push(t);
        }

        // edge table and over-shared edges
        let mut edge_owners: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (m, t) in tris.iter().enumerate() {
            for k in 0..3 {
                let pair = sorted_pair(t[(k + 1) % 3], t[(k + 2) % 3]);
                edge_owners.entry(pair).or_default().push(m);
            }
        }
        for (&(i, j), owners) in &edge_owners {
            if owners.len() > 2 {
                return Err(MeshError::EdgeSharedByMoreThanTwo { i, j });
            }
        }

        Self::check_conformity(&vertices, &tris)?;

        let mut edges = BTreeMap::new();
        for &pair in edge_owners.keys() {
            let (i, j) = pair;
            let u = match edge_vectors.get(&pair) {
                Some(&u) => {
                    let d = vertices[j].p - vertices[i].p;
                    if u.cross(d).abs() <= 1e-12 * u.norm() * d.norm() {
                        return Err(MeshError::ParallelEdgeVector { i, j });
                    }
                    u
                }
                None => default_edge_vector(vertices[i].p, vertices[j].p)?,
            };
            edges.insert(pair, u);
        }
        for key in edge_vectors.keys() {
            if !edges.contains_key(key) {
                return Err(MeshError::UnknownEdgeKey {
                    key: format!("{}-{}", key.0, key.1),
                });
            }
        }

        Ok(Self {
            vertices,
            triangles: tris,
            edges,
        })
    }

    /// Pairwise conformity scan: duplicate triangles, properly crossing
    /// edges, and vertices of one triangle lying in the closed hull of
    /// another without being shared (covers both overlapping interiors and
    /// T-junctions).
    fn check_conformity(vertices: &[MeshVertex], tris: &[[usize; 3]]) -> Result<(), MeshError> {
        for a in 0..tris.len() {
            for b in (a + 1)..tris.len() {
                let (ta, tb) = (tris[a], tris[b]);
                if ta == tb {
                    return Err(MeshError::NonConforming {
                        a,
                        b,
                        reason: "duplicate triangle".to_string(),
                    });
                }
                for ka in 0..3 {
                    let ea = (ta[(ka + 1) % 3], ta[(ka + 2) % 3]);
                    for kb in 0..3 {
                        let eb = (tb[(kb + 1) % 3], tb[(kb + 2) % 3]);
                        if ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1 {
                            continue;
                        }
                        if segments_cross(
                            vertices[ea.0].p,
                            vertices[ea.1].p,
                            vertices[eb.0].p,
                            vertices[eb.1].p,
                        ) {
                            return Err(MeshError::NonConforming {
                                a,
                                b,
                                reason: format!(
                                    "edge {}-{} crosses edge {}-{}",
                                    ea.0, ea.1, eb.0, eb.1
                                ),
                            });
                        }
                    }
                }
                for (x, y) in [(a, b), (b, a)] {
                    let (tx, ty) = (tris[x], tris[y]);
                    let hull =
                        Triangle::new(vertices[tx[0]].p, vertices[tx[1]].p, vertices[tx[2]].p)
                            .expect("validated above");
                    for &v in &ty {
                        if tx.contains(&v) {
                            continue;
                        }
                        if hull.contains(vertices[v].p, LOCATE_TOL) {
                            return Err(MeshError::NonConforming {
                                a,
                                b,
                                reason: format!(
                                    "vertex {v} lies inside or on triangle {x} without being shared"
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[MeshVertex] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Vector2> {
        &self.edges
    }

    /// Edges shared by exactly two triangles, with the adjacent triangle
    /// indices.
    pub fn interior_edges(&self) -> Vec<((usize, usize), [usize; 2])> {
        let mut owners: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (m, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                owners
                    .entry(sorted_pair(t[(k + 1) % 3], t[(k + 2) % 3]))
                    .or_default()
                    .push(m);
            }
        }
        owners
            .into_iter()
            .filter_map(|(pair, own)| match own[..] {
                [m0, m1] => Some((pair, [m0, m1])),
                _ => None,
            })
            .collect()
    }

    /// Axis-aligned bounding box `(xmin, ymin, xmax, ymax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            bb.0 = bb.0.min(v.p.x);
            bb.1 = bb.1.min(v.p.y);
            bb.2 = bb.2.max(v.p.x);
            bb.3 = bb.3.max(v.p.y);
        }
        bb
    }
}

/// Uniform background grid over triangle bounding boxes, used for point
/// location on larger meshes.
#[derive(Debug, Clone)]
struct BackgroundGrid {
    x0: f64,
    y0: f64,
    inv_dx: f64,
    inv_dy: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<usize>>,
}

impl BackgroundGrid {
    fn build(mesh: &Mesh) -> Self {
        let (xmin, ymin, xmax, ymax) = mesh.bounding_box();
        let n = (mesh.triangles().len() as f64).sqrt().ceil() as usize;
        let nx = n.max(1);
        let ny = n.max(1);
        let dx = ((xmax - xmin) / nx as f64).max(f64::MIN_POSITIVE);
        let dy = ((ymax - ymin) / ny as f64).max(f64::MIN_POSITIVE);
        let mut cells = vec![Vec::new(); nx * ny];
        let pad = 1e-9 * (xmax - xmin).max(ymax - ymin).max(1.0);
        for (m, t) in mesh.triangles().iter().enumerate() {
            let ps = [mesh.vertices[t[0]].p, mesh.vertices[t[1]].p, mesh.vertices[t[2]].p];
            let bxmin = ps.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - pad;
            let bxmax = ps.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max) + pad;
            let bymin = ps.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - pad;
            let bymax = ps.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max) + pad;
            let ix0 = (((bxmin - xmin) / dx).floor().max(0.0) as usize).min(nx - 1);
            let ix1 = (((bxmax - xmin) / dx).floor().max(0.0) as usize).min(nx - 1);
            let iy0 = (((bymin - ymin) / dy).floor().max(0.0) as usize).min(ny - 1);
            let iy1 = (((bymax - ymin) / dy).floor().max(0.0) as usize).min(ny - 1);
            for iy in iy0..=iy1 {
                for ix in ix0..=ix1 {
                    cells[iy * nx + ix].push(m);
                }
            }
        }
        Self {
            x0: xmin,
            y0: ymin,
            inv_dx: 1.0 / dx,
            inv_dy: 1.0 / dy,
            nx,
            ny,
            cells,
        }
    }

    fn candidates(&self, x: Point2) -> Option<&[usize]> {
        let ix = ((x.x - self.x0) * self.inv_dx).floor();
        let iy = ((x.y - self.y0) * self.inv_dy).floor();
        if ix < 0.0 || iy < 0.0 || ix >= self.nx as f64 || iy >= self.ny as f64 {
            return None;
        }
        Some(&self.cells[iy as usize * self.nx + ix as usize])
    }
}

/// A mesh together with one interpolation patch per triangle; globally C1
/// when the tuple satisfies the RSD conditions. Immutable after build.
#[derive(Debug, Clone)]
pub struct Spline {
    mesh: Mesh,
    tuple: Arc<RsdTuple>,
    patches: Vec<LocalPatch>,
    grid: Option<BackgroundGrid>,
}

impl Spline {
    /// Validates the tuple against the RSD edge-derivative conditions and
    /// builds one patch per triangle, wiring the edge vector opposite each
    /// local vertex into the corresponding transversal slot.
    pub fn build(mesh: Mesh, tuple: RsdTuple) -> Result<Self, MeshError> {
        let report = check_rsd_conditions(&tuple);
        if !report.pass {
            return Err(MeshError::TupleRejected {
                name: tuple.name.clone(),
                report: Box::new(report),
            });
        }
        let shared = Arc::new(tuple);
        let mut patches = Vec::with_capacity(mesh.triangles().len());
        for t in mesh.triangles() {
            let germs = [0, 1, 2].map(|k| {
                let v = &mesh.vertices[t[k]];
                VertexGerm::new(v.p, v.f, v.a)
            });
            let u = [0, 1, 2].map(|k| {
                let pair = sorted_pair(t[(k + 1) % 3], t[(k + 2) % 3]);
                mesh.edges[&pair]
            });
            patches.push(LocalPatch::new(shared.clone(), germs, u)?);
        }
        let grid = (mesh.triangles().len() >= BRUTE_FORCE_LIMIT)
            .then(|| BackgroundGrid::build(&mesh));
        Ok(Self {
            mesh,
            tuple: shared,
            patches,
            grid,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn tuple(&self) -> &RsdTuple {
        &self.tuple
    }

    pub fn patches(&self) -> &[LocalPatch] {
        &self.patches
    }

    fn best_over(&self, x: Point2, candidates: impl Iterator<Item = usize>) -> Option<(usize, [f64; 3], f64)> {
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for m in candidates {
            let b = self.patches[m].triangle().barycentric(x);
            let score = b.min();
            if best.is_none_or(|(_, _, s)| score > s) {
                best = Some((m, b.as_array(), score));
            }
        }
        best
    }

    /// Finds the triangle containing `x` by maximizing the minimum
    /// barycentric weight; ties on shared edges resolve to the lowest
    /// triangle index (value-irrelevant thanks to the C1 property).
    pub fn locate(&self, x: Point2) -> Result<(usize, [f64; 3]), MeshError> {
        if let Some(grid) = &self.grid {
            if let Some(cands) = grid.candidates(x) {
                if let Some((m, lam, score)) = self.best_over(x, cands.iter().copied()) {
                    if score >= -LOCATE_TOL {
                        return Ok((m, lam));
                    }
                }
            }
            // fall through to the full scan for out-of-domain reporting
        }
        match self.best_over(x, 0..self.patches.len()) {
            Some((m, lam, score)) if score >= -LOCATE_TOL => Ok((m, lam)),
            Some((m, _, _)) => Err(MeshError::OutOfDomain {
                x: x.x,
                y: x.y,
                nearest: m,
            }),
            None => unreachable!("meshes contain at least one triangle"),
        }
    }

    pub fn eval(&self, x: Point2) -> Result<f64, MeshError> {
        let (m, lam) = self.locate(x)?;
        Ok(self.patches[m].eval_at_barycentric(lam))
    }

    pub fn grad(&self, x: Point2) -> Result<Covector2, MeshError> {
        let (m, lam) = self.locate(x)?;
        Ok(self.patches[m].grad_at_barycentric(lam))
    }

    /// Scans every interior edge at `samples_per_edge` equispaced parameters
    /// and records the largest value and gradient jumps between the two
    /// adjacent patches.
    pub fn check_c1(&self, samples_per_edge: usize) -> Result<C1Report, MeshError> {
        if samples_per_edge < 2 {
            return Err(MeshError::TooFewSamples);
        }
        let mut edges = Vec::new();
        for ((i, j), [m0, m1]) in self.mesh.interior_edges() {
            let mut value_jump = 0.0_f64;
            let mut gradient_jump = 0.0_f64;
            for s in 0..samples_per_edge {
                let t = s as f64 / (samples_per_edge - 1) as f64;
                // exact local weights of the edge point in each patch
                let mut vals = [0.0_f64; 2];
                let mut grads = [Covector2::zero(); 2];
                for (slot, &m) in [m0, m1].iter().enumerate() {
                    let tri = self.mesh.triangles[m];
                    let mut lam = [0.0; 3];
                    for k in 0..3 {
                        if tri[k] == i {
                            lam[k] = 1.0 - t;
                        } else if tri[k] == j {
                            lam[k] = t;
                        }
                    }
                    vals[slot] = self.patches[m].eval_at_barycentric(lam);
                    grads[slot] = self.patches[m].grad_at_barycentric(lam);
                }
                value_jump = value_jump.max((vals[0] - vals[1]).abs());
                let d = grads[0] - grads[1];
                gradient_jump = gradient_jump.max(d.a.abs()).max(d.b.abs());
            }
            edges.push(EdgeJump {
                edge: (i, j),
                max_value_jump: value_jump,
                max_gradient_jump: gradient_jump,
            });
        }
        let max_value_jump = edges.iter().map(|e| e.max_value_jump).fold(0.0, f64::max);
        let max_gradient_jump = edges
            .iter()
            .map(|e| e.max_gradient_jump)
            .fold(0.0, f64::max);
        Ok(C1Report {
            edges,
            max_value_jump,
            max_gradient_jump,
        })
    }
}

/// Per-edge maxima of a C1 conformance scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJump {
    pub edge: (usize, usize),
    pub max_value_jump: f64,
    pub max_gradient_jump: f64,
}

/// Result of [`Spline::check_c1`]: per-interior-edge and overall maxima.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct C1Report {
    pub edges: Vec<EdgeJump>,
    pub max_value_jump: f64,
    pub max_gradient_jump: f64,
}

#[derive(Serialize, Deserialize)]
struct VertexRecord {
    x: f64,
    y: f64,
    f: f64,
    gx: f64,
    gy: f64,
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    vertices: Vec<VertexRecord>,
    triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    edge_vectors: BTreeMap<String, [f64; 2]>,
}

/// Parses a mesh file: `{"vertices": [{"x","y","f","gx","gy"}, ...],
/// "triangles": [[i,j,k], ...], "edge_vectors": {"i-j": [ux, uy], ...}}`
/// with zero-based indices and `i < j` in edge keys.
pub fn mesh_from_json_str(json: &str) -> Result<Mesh, MeshError> {
    let file: MeshFile = serde_json::from_str(json)?;
    let vertices = file
        .vertices
        .into_iter()
        .map(|v| MeshVertex::new(Point2::new(v.x, v.y), v.f, Covector2::new(v.gx, v.gy)))
        .collect();
    let mut edge_vectors = BTreeMap::new();
    for (key, [ux, uy]) in &file.edge_vectors {
        let parsed = key
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .filter(|(i, j)| i < j);
        match parsed {
            Some(pair) => edge_vectors.insert(pair, Vector2::new(*ux, *uy)),
            None => {
                return Err(MeshError::UnknownEdgeKey { key: key.clone() });
            }
        };
    }
    Mesh::build(vertices, file.triangles, edge_vectors)
}

/// Serializes a mesh, including its (fully resolved) edge vectors.
pub fn mesh_to_json_string(mesh: &Mesh) -> String {
    let file = MeshFile {
        vertices: mesh
            .vertices()
            .iter()
            .map(|v| VertexRecord {
                x: v.p.x,
                y: v.p.y,
                f: v.f,
                gx: v.a.a,
                gy: v.a.b,
            })
            .collect(),
        triangles: mesh.triangles().to_vec(),
        edge_vectors: mesh
            .edges()
            .iter()
            .map(|(&(i, j), u)| (format!("{i}-{j}"), [u.x, u.y]))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("mesh serialization cannot fail")
}

//! Mesh-level properties: global C1 conformance, edge agreement between
//! adjacent patches, the mismatched-transversal negative control, point
//! location consistency, and tangential continuity via data locality.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::{grid_mesh, random_vertex_data};
use trispline::geometry::{Covector2, Point2, Triangle, Vector2};
use trispline::mesh::{Mesh, MeshError, MeshVertex, Spline};
use trispline::rsd::{LocalPatch, VertexGerm};
use trispline::shape::{builtin_tuples, quintic_rsd};
use trispline::validate::sampling::SampleRng;

#[test]
fn two_triangle_c1_scan_all_tuples() {
    let mut rng = SampleRng::new(3);
    for tuple in builtin_tuples() {
        let mesh = grid_mesh(1, 1, |_| random_vertex_data(&mut rng));
        let spline = Spline::build(mesh, tuple).unwrap();
        let report = spline.check_c1(101).unwrap();
        assert!(report.max_value_jump <= 1e-12, "{report:?}");
        assert!(report.max_gradient_jump <= 1e-8, "{report:?}");
    }
}

#[test]
fn fan_mesh_c1_scan() {
    // 8-triangle fan around a center vertex
    let mut vertices = vec![MeshVertex::new(
        Point2::new(0.0, 0.0),
        0.7,
        Covector2::new(0.2, -0.4),
    )];
    let mut rng = SampleRng::new(5);
    let n = 8;
    for k in 0..n {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let (f, a) = random_vertex_data(&mut rng);
        vertices.push(MeshVertex::new(
            Point2::new(angle.cos(), angle.sin()),
            f,
            a,
        ));
    }
    let triangles: Vec<[usize; 3]> = (0..n)
        .map(|k| [0, 1 + k, 1 + (k + 1) % n])
        .collect();
    let mesh = Mesh::build(vertices, triangles, BTreeMap::new()).unwrap();
    assert_eq!(mesh.interior_edges().len(), 8);
    let spline = Spline::build(mesh, quintic_rsd()).unwrap();
    let report = spline.check_c1(101).unwrap();
    assert!(report.max_value_jump <= 1e-12, "{report:?}");
    assert!(report.max_gradient_jump <= 1e-8, "{report:?}");
}

#[test]
fn interior_edge_values_agree_between_patches() {
    let mut rng = SampleRng::new(7);
    let mesh = grid_mesh(2, 2, |_| random_vertex_data(&mut rng));
    let spline = Spline::build(mesh, quintic_rsd()).unwrap();
    for ((i, j), [m0, m1]) in spline.mesh().interior_edges() {
        let pa = spline.mesh().vertices()[i].p;
        let pb = spline.mesh().vertices()[j].p;
        for s in 0..=20 {
            let t = s as f64 / 20.0;
            let x = Point2::new(
                (1.0 - t) * pa.x + t * pb.x,
                (1.0 - t) * pa.y + t * pb.y,
            );
            let v0 = spline.patches()[m0].eval(x).unwrap();
            let v1 = spline.patches()[m1].eval(x).unwrap();
            assert!((v0 - v1).abs() <= 1e-12, "edge ({i},{j}) at t={t}");
        }
    }
}

#[test]
fn mismatched_transversal_breaks_c1() {
    // negative control: give the two triangles different vectors for their
    // shared edge and watch the transversal derivative jump
    let p = [
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.0, 1.0),
        Point2::new(1.0, 1.0),
    ];
    let mut rng = SampleRng::new(9);
    let data: Vec<(f64, Covector2)> = (0..4).map(|_| random_vertex_data(&mut rng)).collect();
    let germ = |k: usize| VertexGerm::new(p[k], data[k].0, data[k].1);
    let tuple = Arc::new(quintic_rsd());

    // triangle (0,1,2): shared edge (1,2) is opposite local vertex 0
    let tri_a = Triangle::new(p[0], p[1], p[2]).unwrap();
    let mut ua = tri_a.transversal_from_alphas([0.0, 0.0, 0.0]);
    ua[0] = Vector2::new(1.0, 1.0);
    let patch_a = LocalPatch::new(tuple.clone(), [germ(0), germ(1), germ(2)], ua).unwrap();

    // triangle (1,3,2): shared edge (1,2) is opposite local vertex 1
    let tri_b = Triangle::new(p[1], p[3], p[2]).unwrap();
    let mut ub = tri_b.transversal_from_alphas([0.0, 0.0, 0.0]);
    ub[1] = Vector2::new(1.0, 0.0);
    let patch_b = LocalPatch::new(tuple, [germ(1), germ(3), germ(2)], ub).unwrap();

    let mut max_grad_jump = 0.0_f64;
    for s in 0..=50 {
        let t = s as f64 / 50.0;
        let x = Point2::new(t, 1.0 - t); // the shared edge
        let ga = patch_a.grad(x).unwrap();
        let gb = patch_b.grad(x).unwrap();
        // values still agree: the trace depends only on edge data
        assert!((patch_a.eval(x).unwrap() - patch_b.eval(x).unwrap()).abs() <= 1e-12);
        max_grad_jump = max_grad_jump
            .max((ga.a - gb.a).abs())
            .max((ga.b - gb.b).abs());
    }
    assert!(
        max_grad_jump > 1e-4,
        "expected a visible gradient jump, got {max_grad_jump:e}"
    );
}

#[test]
fn tangential_continuity_by_data_locality() {
    // perturbing a vertex off the shared edge leaves both traces unchanged
    let mut rng = SampleRng::new(13);
    let base: Vec<(f64, Covector2)> = (0..4).map(|_| random_vertex_data(&mut rng)).collect();
    let build = |perturb: bool| {
        let mut data = base.clone();
        if perturb {
            data[0].0 += 5.0; // vertex 0 is not on the shared edge (1, 2)
            data[0].1 = Covector2::new(9.0, -4.0);
        }
        let vertices: Vec<MeshVertex> = [
            (0.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (1.0, 1.0),
        ]
        .iter()
        .zip(&data)
        .map(|(&(x, y), &(f, a))| MeshVertex::new(Point2::new(x, y), f, a))
        .collect();
        let mesh = Mesh::build(vertices, vec![[0, 1, 2], [1, 3, 2]], BTreeMap::new()).unwrap();
        Spline::build(mesh, quintic_rsd()).unwrap()
    };
    let s0 = build(false);
    let s1 = build(true);
    // triangle 1 = (1,3,2) does not contain vertex 0; its trace on edge (1,2)
    // must be identical in both splines
    for s in 0..=20 {
        let t = s as f64 / 20.0;
        let x = Point2::new(t, 1.0 - t);
        let v0 = s0.patches()[1].eval(x).unwrap();
        let v1 = s1.patches()[1].eval(x).unwrap();
        assert!((v0 - v1).abs() <= 1e-12);
        let g0 = s0.patches()[1].grad(x).unwrap();
        let g1 = s1.patches()[1].grad(x).unwrap();
        assert!((g0.a - g1.a).abs() <= 1e-12 && (g0.b - g1.b).abs() <= 1e-12);
    }
}

#[test]
fn point_location_consistency_brute_and_grid() {
    let mut rng = SampleRng::new(17);
    // 2×2 cells → 8 triangles (brute force); 7×7 cells → 98 (background grid)
    for cells in [2usize, 7] {
        let mesh = grid_mesh(cells, cells, |_| random_vertex_data(&mut rng));
        let spline = Spline::build(mesh, quintic_rsd()).unwrap();
        for _ in 0..1000 {
            let x = Point2::new(rng.uniform(-0.2, 1.2), rng.uniform(-0.2, 1.2));
            match spline.locate(x) {
                Ok((m, lam)) => {
                    assert!(lam.iter().all(|&l| l >= -1e-9), "triangle {m}: {lam:?}");
                    let b = spline.patches()[m].triangle().barycentric(x);
                    assert!(b.min() >= -1e-9);
                }
                Err(MeshError::OutOfDomain { .. }) => {
                    let inside = x.x >= 0.0 && x.x <= 1.0 && x.y >= 0.0 && x.y <= 1.0;
                    assert!(!inside, "point {x:?} is inside the unit square");
                }
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
        // a point on an interior vertex locates deterministically
        let x = Point2::new(0.5, 0.5);
        let (m0, _) = spline.locate(x).unwrap();
        let (m1, _) = spline.locate(x).unwrap();
        assert_eq!(m0, m1);
    }
}

#[test]
fn spline_eval_agrees_with_direct_patch_on_edges() {
    let mut rng = SampleRng::new(19);
    let mesh = grid_mesh(2, 2, |_| random_vertex_data(&mut rng));
    let spline = Spline::build(mesh, quintic_rsd()).unwrap();
    for ((i, j), [m0, m1]) in spline.mesh().interior_edges() {
        let pa = spline.mesh().vertices()[i].p;
        let pb = spline.mesh().vertices()[j].p;
        let x = Point2::new(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y));
        let via_spline = spline.eval(x).unwrap();
        let via_a = spline.patches()[m0].eval(x).unwrap();
        let via_b = spline.patches()[m1].eval(x).unwrap();
        assert!((via_spline - via_a).abs() <= 1e-12);
        assert!((via_spline - via_b).abs() <= 1e-12);
    }
}

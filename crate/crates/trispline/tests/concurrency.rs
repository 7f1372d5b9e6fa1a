//! The evaluation types are immutable after construction and shareable
//! across workers.

mod common;

use std::sync::Arc;

use common::{grid_mesh, random_vertex_data};
use trispline::geometry::Point2;
use trispline::mesh::Spline;
use trispline::rsd::LocalPatch;
use trispline::shape::{Curve, Modifier, RsdTuple};
use trispline::validate::sampling::SampleRng;

#[test]
fn core_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Curve>();
    assert_send_sync::<Modifier>();
    assert_send_sync::<RsdTuple>();
    assert_send_sync::<LocalPatch>();
    assert_send_sync::<Spline>();
}

#[test]
fn shared_spline_evaluates_identically_across_threads() {
    let mut rng = SampleRng::new(29);
    let mesh = grid_mesh(3, 3, |_| random_vertex_data(&mut rng));
    let spline = Arc::new(Spline::build(mesh, trispline::shape::affine_sextic()).unwrap());
    let points: Arc<Vec<Point2>> = Arc::new(
        (0..200)
            .map(|_| Point2::new(rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)))
            .collect(),
    );
    let reference: Vec<f64> = points.iter().map(|&p| spline.eval(p).unwrap()).collect();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let spline = spline.clone();
            let points = points.clone();
            std::thread::spawn(move || {
                points
                    .iter()
                    .map(|&p| spline.eval(p).unwrap())
                    .collect::<Vec<f64>>()
            })
        })
        .collect();
    for handle in handles {
        let values = handle.join().unwrap();
        assert_eq!(values, reference);
    }
}

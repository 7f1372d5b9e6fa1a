//! Numerical verifiers for the algebraic properties a tuple may carry:
//! admissibility of the shape pair, the RSD edge-derivative conditions,
//! range shift, affinity invariance and u-independence.
//!
//! All checks are sampled numerics, not symbolic proofs. Simplex properties
//! are probed on a deterministic low-discrepancy lattice (seeded, default
//! `0x5EED`); the functional tests interpolate concrete functions on random
//! triangles drawn from the same seed. Each report records the worst
//! violation relative to its sub-check tolerance, together with a witness
//! that can be replayed.

pub mod sampling;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::Covector2;
use crate::rsd::{LocalPatch, VertexGerm, S3};
use crate::shape::{Curve, RsdTuple};
use sampling::{simplex_lattice, SampleRng};

pub use sampling::DEFAULT_SEED;

/// Endpoint conditions of the admissible pair.
pub const TOL_ENDPOINT: f64 = 1e-10;
/// Edge-derivative conditions and analytic simplex identities: an order above
/// accumulated double-precision roundoff for degree-6 polynomials.
pub const TOL_ANALYTIC: f64 = 1e-9;
/// Functional interpolation tests (constants, affine functions, traces).
pub const TOL_FUNCTIONAL: f64 = 1e-10;

/// Number of lattice points used by the simplex property checks.
const SIMPLEX_SAMPLES: usize = 1000;
/// Equispaced samples per simplex edge for the edge-derivative conditions.
const EDGE_SAMPLES: usize = 201;
/// Equispaced samples of [0, 1] for curve identities.
const CURVE_SAMPLES: usize = 101;

/// Where and how the worst violation of a report occurred.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    /// Sample point: a simplex triple, a curve parameter, or a plane point,
    /// depending on the check.
    pub location: Vec<f64>,
    /// Which sub-check produced the violation.
    pub check: String,
    pub expected: f64,
    pub actual: f64,
    /// Tolerance of that sub-check; `pass` holds iff
    /// `max_violation <= tolerance` here.
    pub tolerance: f64,
}

/// Outcome of one property check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub property: String,
    pub pass: bool,
    pub max_violation: f64,
    pub witness: Witness,
}

/// Accumulates sub-check observations and keeps the one that is worst
/// relative to its own tolerance.
struct Tracker {
    property: String,
    pass: bool,
    worst_rel: f64,
    worst: Option<Witness>,
}

impl Tracker {
    fn new(property: &str) -> Self {
        Self {
            property: property.to_string(),
            pass: true,
            worst_rel: -1.0,
            worst: None,
        }
    }

    fn observe(&mut self, check: &str, tolerance: f64, location: &[f64], expected: f64, actual: f64) {
        let violation = (expected - actual).abs();
        if violation > tolerance {
            self.pass = false;
        }
        let rel = violation / tolerance;
        if rel > self.worst_rel {
            self.worst_rel = rel;
            self.worst = Some(Witness {
                location: location.to_vec(),
                check: check.to_string(),
                expected,
                actual,
                tolerance,
            });
        }
    }

    fn finish(self) -> ValidationReport {
        let witness = self.worst.unwrap_or(Witness {
            location: Vec::new(),
            check: "no samples".to_string(),
            expected: 0.0,
            actual: 0.0,
            tolerance: 1.0,
        });
        ValidationReport {
            property: self.property,
            pass: self.pass,
            max_violation: (witness.expected - witness.actual).abs(),
            witness,
        }
    }
}

fn curve_samples() -> impl Iterator<Item = f64> {
    (0..CURVE_SAMPLES).map(|i| i as f64 / (CURVE_SAMPLES - 1) as f64)
}

/// Checks the seven endpoint conditions of an admissible shape pair:
/// `Ψ0(0) = Ψ0'(0) = Ψ1(0) = Ψ1'(0) = Ψ0'(1) = 0`, `Ψ0(1) = Ψ1(1) = 1`.
pub fn check_admissible_pair(psi0: &Curve, psi1: &Curve) -> ValidationReport {
    let mut tr = Tracker::new("admissible-pair");
    let conditions: [(&str, f64, f64); 7] = [
        ("psi0(0) = 0", psi0.value(0.0), 0.0),
        ("psi0'(0) = 0", psi0.deriv(0.0), 0.0),
        ("psi1(0) = 0", psi1.value(0.0), 0.0),
        ("psi1'(0) = 0", psi1.deriv(0.0), 0.0),
        ("psi0'(1) = 0", psi0.deriv(1.0), 0.0),
        ("psi0(1) = 1", psi0.value(1.0), 1.0),
        ("psi1(1) = 1", psi1.value(1.0), 1.0),
    ];
    for (name, actual, expected) in conditions {
        let at = if name.contains("(1)") { 1.0 } else { 0.0 };
        tr.observe(name, TOL_ENDPOINT, &[at], expected, actual);
    }
    tr.finish()
}

/// Checks the edge-derivative conditions that make `[Ψ0, Ψ1, χ0, χ1]` an RSD
/// tuple, sampling each simplex edge:
///
/// - `χr` vanishes on all three edges;
/// - the full derivative of `χr` vanishes on `Δ3,1 ∪ Δ3,2`;
/// - `D1 χr = D2 χr = 0` on `Δ3,3`;
/// - `D3 χ0(t, 1−t, 0) = Ψ0'(t)` and `D3 χ1(t, 1−t, 0) = Ψ1'(t)(1−t)`.
pub fn check_rsd_conditions(tuple: &RsdTuple) -> ValidationReport {
    let mut tr = Tracker::new("rsd-conditions");
    for s in 0..EDGE_SAMPLES {
        let t = s as f64 / (EDGE_SAMPLES - 1) as f64;
        let edges = [
            [0.0, t, 1.0 - t], // Δ3,1
            [t, 0.0, 1.0 - t], // Δ3,2
            [t, 1.0 - t, 0.0], // Δ3,3
        ];
        for (r, chi) in [(0usize, &tuple.chi0), (1, &tuple.chi1)] {
            for (e, w) in edges.iter().enumerate() {
                tr.observe(
                    &format!("chi{r} vanishes on Delta3,{}", e + 1),
                    TOL_ANALYTIC,
                    w,
                    0.0,
                    chi.value(*w),
                );
            }
            // full derivative on Δ3,1 and Δ3,2
            for (e, w) in edges.iter().take(2).enumerate() {
                for k in 0..3 {
                    tr.observe(
                        &format!("D{} chi{r} vanishes on Delta3,{}", k + 1, e + 1),
                        TOL_ANALYTIC,
                        w,
                        0.0,
                        chi.partial(k, *w),
                    );
                }
            }
            // tangential partials on Δ3,3
            for k in 0..2 {
                tr.observe(
                    &format!("D{} chi{r} vanishes on Delta3,3", k + 1),
                    TOL_ANALYTIC,
                    &edges[2],
                    0.0,
                    chi.partial(k, edges[2]),
                );
            }
        }
        tr.observe(
            "D3 chi0(t,1-t,0) = psi0'(t)",
            TOL_ANALYTIC,
            &edges[2],
            tuple.psi0.deriv(t),
            tuple.chi0.partial(2, edges[2]),
        );
        tr.observe(
            "D3 chi1(t,1-t,0) = psi1'(t)(1-t)",
            TOL_ANALYTIC,
            &edges[2],
            tuple.psi1.deriv(t) * (1.0 - t),
            tuple.chi1.partial(2, edges[2]),
        );
    }
    tr.finish()
}

/// `Σ(w) = Σi Ψ0(wi) + Σ_{S3+} χ0(wℓ, wm, wn)`; the tuple interpolates the
/// constant 1 exactly iff `Σ ≡ 1` on the simplex.
fn sigma_value(tuple: &RsdTuple, w: [f64; 3]) -> f64 {
    tuple.psi0.value(w[0])
        + tuple.psi0.value(w[1])
        + tuple.psi0.value(w[2])
        + tuple.chi0.value([w[0], w[1], w[2]])
        + tuple.chi0.value([w[1], w[2], w[0]])
        + tuple.chi0.value([w[2], w[0], w[1]])
}

fn sigma_partials(tuple: &RsdTuple, w: [f64; 3]) -> [f64; 3] {
    let a = [w[0], w[1], w[2]];
    let b = [w[1], w[2], w[0]];
    let c = [w[2], w[0], w[1]];
    let chi = &tuple.chi0;
    [
        tuple.psi0.deriv(w[0]) + chi.partial(0, a) + chi.partial(2, b) + chi.partial(1, c),
        tuple.psi0.deriv(w[1]) + chi.partial(1, a) + chi.partial(0, b) + chi.partial(2, c),
        tuple.psi0.deriv(w[2]) + chi.partial(2, a) + chi.partial(1, b) + chi.partial(0, c),
    ]
}

/// Feeds the analytic range-shift criteria into `tr` and returns whether
/// they all held: Ψ0 partition and d-symmetry, χ0 exchange symmetry on the
/// simplex, `Σ ≡ 1`, and equality of the three partials of `Σ`.
fn observe_range_shift_analytic(tr: &mut Tracker, tuple: &RsdTuple, seed: u64) -> bool {
    let mut ok = true;
    let mut obs = |tr: &mut Tracker, check: &str, tol: f64, loc: &[f64], exp: f64, act: f64| {
        if (exp - act).abs() > tol {
            ok = false;
        }
        tr.observe(check, tol, loc, exp, act);
    };
    for t in curve_samples() {
        obs(
            tr,
            "psi0 partition: psi0(t) + psi0(1-t) = 1",
            TOL_ANALYTIC,
            &[t],
            1.0,
            tuple.psi0.value(t) + tuple.psi0.value(1.0 - t),
        );
        obs(
            tr,
            "psi0 d-symmetry: psi0'(t) = psi0'(1-t)",
            TOL_ANALYTIC,
            &[t],
            tuple.psi0.deriv(1.0 - t),
            tuple.psi0.deriv(t),
        );
    }
    for w in simplex_lattice(seed, SIMPLEX_SAMPLES) {
        obs(
            tr,
            "chi0 symmetric in first two arguments",
            TOL_ANALYTIC,
            &w,
            tuple.chi0.value([w[1], w[0], w[2]]),
            tuple.chi0.value(w),
        );
        obs(tr, "Sigma = 1 on simplex", TOL_ANALYTIC, &w, 1.0, sigma_value(tuple, w));
        let d = sigma_partials(tuple, w);
        obs(tr, "D1 Sigma = D2 Sigma", TOL_ANALYTIC, &w, d[1], d[0]);
        obs(tr, "D2 Sigma = D3 Sigma", TOL_ANALYTIC, &w, d[2], d[1]);
    }
    ok
}

/// Interpolates `f ≡ 1` on `triangles` random triangles with random
/// admissible transversals and feeds `max |F − 1|` observations into `tr`.
fn observe_constant_interpolation(
    tr: &mut Tracker,
    tuple: &RsdTuple,
    rng: &mut SampleRng,
    triangles: usize,
    points_per_triangle: usize,
) -> bool {
    let shared = Arc::new(tuple.clone());
    let mut ok = true;
    for idx in 0..triangles {
        let tri = rng.triangle();
        let u = tri.transversal_from_alphas(rng.alphas());
        let germs = tri
            .vertices()
            .map(|p| VertexGerm::new(p, 1.0, Covector2::zero()));
        let patch = LocalPatch::new(shared.clone(), germs, u)
            .expect("random triangle with alpha transversals is admissible");
        for x in rng.interior_points(&tri, points_per_triangle) {
            let v = patch.eval(x).expect("interior point");
            if (v - 1.0).abs() > TOL_FUNCTIONAL {
                ok = false;
            }
            tr.observe(
                &format!("interpolate constant 1 on random triangle {idx}"),
                TOL_FUNCTIONAL,
                &[x.x, x.y],
                1.0,
                v,
            );
        }
    }
    ok
}

/// Range-shift check: the analytic criterion (χ0 symmetry, `Σ ≡ 1`, equal
/// partials of `Σ`) plus the functional test (interpolating the constant 1).
/// Disagreement between the two routes is itself reported as a failure.
pub fn check_range_shift(tuple: &RsdTuple, seed: u64) -> ValidationReport {
    let mut tr = Tracker::new("range-shift");
    let analytic_ok = observe_range_shift_analytic(&mut tr, tuple, seed);
    let mut rng = SampleRng::new(seed);
    let functional_ok = observe_constant_interpolation(&mut tr, tuple, &mut rng, 5, 200);
    if analytic_ok != functional_ok {
        tr.observe(
            "analytic and functional range-shift tests disagree",
            0.5,
            &[],
            0.0,
            1.0,
        );
    }
    tr.finish()
}

/// Affinity-invariance check:
/// (i) `Ψ0 = Ψ1`, (ii) range shift, (iii) `χ0 = χ1(t1,t2,t3) + χ1(t2,t1,t3)`
/// on the simplex, (iv) the redistribution identity
/// `χ1(t2,t1,t3) + χ1(t3,t1,t2) = t1 Σ_{S3} χ1(tℓ,tm,tn)`, plus the
/// functional test interpolating random affine functions.
pub fn check_affinity_invariance(tuple: &RsdTuple, seed: u64) -> ValidationReport {
    let mut tr = Tracker::new("affinity-invariance");
    for t in curve_samples() {
        tr.observe(
            "psi1 = psi0",
            TOL_ANALYTIC,
            &[t],
            tuple.psi0.value(t),
            tuple.psi1.value(t),
        );
    }
    observe_range_shift_analytic(&mut tr, tuple, seed);
    for w in simplex_lattice(seed, SIMPLEX_SAMPLES) {
        tr.observe(
            "chi0 = chi1(t1,t2,t3) + chi1(t2,t1,t3) on simplex",
            TOL_ANALYTIC,
            &w,
            tuple.chi1.value(w) + tuple.chi1.value([w[1], w[0], w[2]]),
            tuple.chi0.value(w),
        );
        let full: f64 = S3
            .iter()
            .map(|&[l, m, n]| tuple.chi1.value([w[l], w[m], w[n]]))
            .sum();
        tr.observe(
            "chi1(t2,t1,t3) + chi1(t3,t1,t2) = t1 * S3-sum of chi1",
            TOL_ANALYTIC,
            &w,
            w[0] * full,
            tuple.chi1.value([w[1], w[0], w[2]]) + tuple.chi1.value([w[2], w[0], w[1]]),
        );
    }
    let mut rng = SampleRng::new(seed);
    observe_constant_interpolation(&mut tr, tuple, &mut rng, 5, 200);
    let shared = Arc::new(tuple.clone());
    for idx in 0..5 {
        let tri = rng.triangle();
        let (a, b, c) = rng.affine();
        let grad = Covector2::new(a, b);
        let germs = tri
            .vertices()
            .map(|p| VertexGerm::new(p, a * p.x + b * p.y + c, grad));
        let u = tri.transversal_from_alphas(rng.alphas());
        let patch = LocalPatch::new(shared.clone(), germs, u)
            .expect("random triangle with alpha transversals is admissible");
        for x in rng.interior_points(&tri, 200) {
            let expected = a * x.x + b * x.y + c;
            tr.observe(
                &format!("interpolate random affine function {idx}"),
                TOL_FUNCTIONAL,
                &[x.x, x.y],
                expected,
                patch.eval(x).expect("interior point"),
            );
        }
    }
    tr.finish()
}

/// u-independence check: for tuples of the affinity-invariant form
/// (`Ψ0 = Ψ1` and `χ0 = 2·χ1[s]` on the simplex), the interpolant of the
/// weight `λ1` must not depend on the transversal vectors. Interpolates `λ1`
/// of one random triangle with 10 random admissible transversal triples and
/// bounds the spread of the results.
pub fn check_u_independence(tuple: &RsdTuple, seed: u64) -> ValidationReport {
    let mut tr = Tracker::new("u-independence");
    let mut precondition_ok = true;
    for t in curve_samples() {
        let v = (tuple.psi0.value(t) - tuple.psi1.value(t)).abs();
        if v > TOL_ANALYTIC {
            precondition_ok = false;
        }
        tr.observe(
            "precondition: psi1 = psi0",
            TOL_ANALYTIC,
            &[t],
            tuple.psi0.value(t),
            tuple.psi1.value(t),
        );
    }
    for w in simplex_lattice(seed, SIMPLEX_SAMPLES) {
        let expected = tuple.chi1.value(w) + tuple.chi1.value([w[1], w[0], w[2]]);
        if (expected - tuple.chi0.value(w)).abs() > TOL_ANALYTIC {
            precondition_ok = false;
        }
        tr.observe(
            "precondition: chi0 = 2 chi1[s] on simplex",
            TOL_ANALYTIC,
            &w,
            expected,
            tuple.chi0.value(w),
        );
    }
    if !precondition_ok {
        return tr.finish();
    }

    let mut rng = SampleRng::new(seed);
    let tri = rng.triangle();
    let g1 = tri.weight_gradients()[0];
    let germs = [0, 1, 2].map(|k| {
        VertexGerm::new(tri.vertex(k), if k == 0 { 1.0 } else { 0.0 }, g1)
    });
    let shared = Arc::new(tuple.clone());
    let patches: Vec<LocalPatch> = (0..10)
        .map(|_| {
            let u = tri.transversal_from_alphas(rng.alphas());
            LocalPatch::new(shared.clone(), germs, u)
                .expect("alpha transversals are admissible")
        })
        .collect();
    for x in rng.interior_points(&tri, 200) {
        let values: Vec<f64> = patches
            .iter()
            .map(|p| p.eval(x).expect("interior point"))
            .collect();
        let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - values.iter().cloned().fold(f64::INFINITY, f64::min);
        tr.observe(
            "interpolants of lambda1 agree across transversal choices",
            TOL_FUNCTIONAL,
            &[x.x, x.y],
            0.0,
            spread,
        );
    }
    tr.finish()
}

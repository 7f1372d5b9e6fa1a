//! Deterministic sampling for the validators: a low-discrepancy lattice on
//! the unit simplex for property checks, and a seeded RNG for the functional
//! tests (random triangles, germs and transversal parameters).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::geometry::{Covector2, Point2, Triangle};
use crate::rsd::VertexGerm;

/// Default sampling seed; overridable through the `TRISPLINE_SEED`
/// environment variable at the CLI layer.
pub const DEFAULT_SEED: u64 = 0x5EED;

// 1/ρ, 1/ρ², 1/ρ³ for the plastic constant ρ (x³ = x + 1): the additive
// recurrence with these increments is a 3D low-discrepancy sequence.
const ALPHA: [f64; 3] = [
    0.754_877_666_246_692_8,
    0.569_840_290_998_053_2,
    0.430_159_709_001_946_8,
];

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` low-discrepancy points of the open simplex `Δ3`, produced by mapping
/// a Kronecker sequence in `[0,1)³` through normalization `t ↦ t / Σt`.
pub fn simplex_lattice(seed: u64, n: usize) -> Vec<[f64; 3]> {
    let mut state = seed;
    let offset = [
        splitmix64(&mut state) as f64 / u64::MAX as f64,
        splitmix64(&mut state) as f64 / u64::MAX as f64,
        splitmix64(&mut state) as f64 / u64::MAX as f64,
    ];
    (0..n)
        .map(|k| {
            let mut x = [0.0; 3];
            for i in 0..3 {
                x[i] = (offset[i] + (k + 1) as f64 * ALPHA[i]).fract();
            }
            let mut s = x[0] + x[1] + x[2];
            if s < 1e-9 {
                // only reachable if all three components vanish at once
                x = [1.0 / 3.0; 3];
                s = 1.0;
            }
            [x[0] / s, x[1] / s, x[2] / s]
        })
        .collect()
}

/// Seeded random source for functional validation tests.
pub struct SampleRng {
    rng: ChaCha12Rng,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// A non-degenerate triangle with vertices in `[-1, 1]²`; redraws until
    /// the area is a healthy fraction of the squared longest edge so the
    /// barycentric solve stays well-conditioned.
    pub fn triangle(&mut self) -> Triangle {
        loop {
            let p = [
                Point2::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
                Point2::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
                Point2::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
            ];
            if let Ok(tri) = Triangle::new(p[0], p[1], p[2]) {
                let e1 = p[1] - p[0];
                let e2 = p[2] - p[0];
                let l = tri.scale();
                if e1.cross(e2).abs() > 0.05 * l * l {
                    return tri;
                }
            }
        }
    }

    /// Hermite germs with values and gradient entries in `[-1, 1]`.
    pub fn germs(&mut self, tri: &Triangle) -> [VertexGerm; 3] {
        let p = tri.vertices();
        [0, 1, 2].map(|k| {
            VertexGerm::new(
                p[k],
                self.uniform(-1.0, 1.0),
                Covector2::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)),
            )
        })
    }

    /// Transversal parameters for `Triangle::transversal_from_alphas`; any
    /// value yields an admissible triple.
    pub fn alphas(&mut self) -> [f64; 3] {
        [0; 3].map(|_| self.uniform(-10.0, 10.0))
    }

    /// `count` points uniformly distributed over the triangle.
    pub fn interior_points(&mut self, tri: &Triangle, count: usize) -> Vec<Point2> {
        let p = tri.vertices();
        (0..count)
            .map(|_| {
                let r1 = self.uniform(0.0, 1.0).sqrt();
                let r2 = self.uniform(0.0, 1.0);
                let l1 = 1.0 - r1;
                let l2 = r1 * (1.0 - r2);
                let l3 = r1 * r2;
                Point2::new(
                    l1 * p[0].x + l2 * p[1].x + l3 * p[2].x,
                    l1 * p[0].y + l2 * p[1].y + l3 * p[2].y,
                )
            })
            .collect()
    }

    /// Random affine function, returned as `(a, b, c)` for `a·x + b·y + c`.
    pub fn affine(&mut self) -> (f64, f64, f64) {
        (
            self.uniform(-2.0, 2.0),
            self.uniform(-2.0, 2.0),
            self.uniform(-2.0, 2.0),
        )
    }
}

//! RSD tuples: the quadruple `[Ψ0, Ψ1, χ0, χ1]` defining a local
//! interpolation scheme, the built-in schemes, and the range-shift
//! enforcement constructor.

use std::sync::Arc;

use thiserror::Error;

use super::curve::{phi, theta, Curve};
use super::modifier::{symmetrize, Modifier};

/// Samples used by the numerical d-symmetry precondition check.
const D_SYMMETRY_SAMPLES: usize = 101;
/// Tolerance of the d-symmetry precondition check.
const D_SYMMETRY_TOL: f64 = 1e-10;
/// Below this sampled magnitude the range-shift defect counts as identically
/// zero and no correction term is attached.
const DEFECT_ZERO_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("Ψ0 is not d-symmetric: max |Ψ0'(t) − Ψ0'(1−t)| = {max_violation:e} at t = {at}")]
    NotDSymmetric { max_violation: f64, at: f64 },
}

/// A named local interpolation scheme `[Ψ0, Ψ1, χ0, χ1]`.
#[derive(Debug, Clone)]
pub struct RsdTuple {
    pub name: String,
    pub psi0: Curve,
    pub psi1: Curve,
    pub chi0: Modifier,
    pub chi1: Modifier,
}

impl RsdTuple {
    pub fn new(
        name: impl Into<String>,
        psi0: Curve,
        psi1: Curve,
        chi0: Modifier,
        chi1: Modifier,
    ) -> Self {
        Self {
            name: name.into(),
            psi0,
            psi1,
            chi0,
            chi1,
        }
    }
}

/// The legacy quintic scheme `[Φ, Θ, 30t1²t2²t3, 12t1²t2²t3]`.
pub fn quintic_rsd() -> RsdTuple {
    RsdTuple::new(
        "quintic-rsd",
        phi(),
        theta(),
        Modifier::monomials(vec![(2, 2, 1, 30.0)]),
        Modifier::monomials(vec![(2, 2, 1, 12.0)]),
    )
}

/// `[Φ, Φ, 30t1²t2²t3, 30t1²t2³t3]`: product-form tuple with equal shape
/// curves; has range shift but not affinity invariance.
pub fn phi_phi() -> RsdTuple {
    RsdTuple::new(
        "phi-phi",
        phi(),
        phi(),
        Modifier::monomials(vec![(2, 2, 1, 30.0)]),
        Modifier::monomials(vec![(2, 3, 1, 30.0)]),
    )
}

/// The affinity-invariant sextic scheme
/// `[Φ, Φ, 30t1²t2²t3, 30t1²t2³t3 + 15t1²t2²t3²]`.
pub fn affine_sextic() -> RsdTuple {
    RsdTuple::new(
        "affine-sextic",
        phi(),
        phi(),
        Modifier::monomials(vec![(2, 2, 1, 30.0)]),
        Modifier::monomials(vec![(2, 3, 1, 30.0), (2, 2, 2, 15.0)]),
    )
}

/// The three built-in tuples, in a fixed order.
pub fn builtin_tuples() -> Vec<RsdTuple> {
    vec![quintic_rsd(), phi_phi(), affine_sextic()]
}

/// Resolves a built-in tuple by name.
pub fn builtin_tuple(name: &str) -> Option<RsdTuple> {
    match name {
        "quintic-rsd" => Some(quintic_rsd()),
        "phi-phi" => Some(phi_phi()),
        "affine-sextic" => Some(affine_sextic()),
        _ => None,
    }
}

/// The range-shift defect of a symmetrized tuple, as a function on the
/// simplex together with its homogeneous degree-0 extension to the punctured
/// octant.
///
/// On `Δ3` the interpolant of the constant 1 equals
/// `Σ(t) = Σi Ψ0(ti) + Σ_{S3+} χ0s(tℓ, tm, tn)` over the three cyclic
/// permutations, so `δ = 1 − Σ` measures how far the tuple misses the range
/// shift property. `δ̂(t) = δ(t / (t1+t2+t3))` extends it off the simplex;
/// when the input tuple satisfies the edge-derivative conditions, `δ̂`
/// vanishes together with its full gradient on the punctured octant boundary
/// and therefore preserves them.
struct RangeShiftDefect {
    psi0: Curve,
    chi0s: Modifier,
}

impl RangeShiftDefect {
    // The sums below are parenthesized so that exchanging w1 and w2 permutes
    // addends only within commutative pairs; together with the bit-exact
    // symmetry of `chi0s` this keeps δ and δ̂ exactly symmetric.
    fn delta(&self, w: [f64; 3]) -> f64 {
        let psi = (self.psi0.value(w[0]) + self.psi0.value(w[1])) + self.psi0.value(w[2]);
        let cyc = self.chi0s.value([w[0], w[1], w[2]])
            + (self.chi0s.value([w[1], w[2], w[0]]) + self.chi0s.value([w[2], w[0], w[1]]));
        (1.0 - psi) - cyc
    }

    fn delta_partials(&self, w: [f64; 3]) -> [f64; 3] {
        let a = [w[0], w[1], w[2]];
        let b = [w[1], w[2], w[0]];
        let c = [w[2], w[0], w[1]];
        let chi = &self.chi0s;
        [
            -self.psi0.deriv(w[0])
                - (chi.partial(0, a) + (chi.partial(2, b) + chi.partial(1, c))),
            -self.psi0.deriv(w[1])
                - (chi.partial(1, a) + (chi.partial(0, b) + chi.partial(2, c))),
            -self.psi0.deriv(w[2])
                - (chi.partial(2, a) + (chi.partial(1, b) + chi.partial(0, c))),
        ]
    }

    fn hat_value(&self, t: [f64; 3]) -> f64 {
        let s = t[0] + t[1] + t[2];
        if s.abs() < 1e-300 {
            return 0.0;
        }
        self.delta([t[0] / s, t[1] / s, t[2] / s])
    }

    fn hat_partial(&self, k: usize, t: [f64; 3]) -> f64 {
        let s = t[0] + t[1] + t[2];
        if s.abs() < 1e-300 {
            return 0.0;
        }
        let w = [t[0] / s, t[1] / s, t[2] / s];
        let d = self.delta_partials(w);
        // ∂(tℓ/s)/∂tk = (δℓk − wℓ)/s
        (d[k] - ((d[0] * w[0] + d[1] * w[1]) + d[2] * w[2])) / s
    }
}

/// Replaces `χ0` by a symmetrized and defect-corrected modifier so that the
/// returned tuple interpolates constants exactly:
/// `χ0* = χ0[s] + ⅓ δ̂` with `δ = 1 − ΣΨ0(ti) − Σ_{S3+} χ0[s]` on `Δ3`.
///
/// `Ψ0` must be d-symmetric (checked numerically at 101 samples); together
/// with admissibility this forces the partition `Ψ0(t) + Ψ0(1−t) = 1` that
/// makes `δ` vanish on the simplex edges. When the input already satisfies
/// the edge-derivative conditions, the output does too. Tuples whose defect
/// is identically zero come back with `χ0* = χ0[s]` unchanged.
pub fn enforce_range_shift(tuple: &RsdTuple) -> Result<RsdTuple, ShapeError> {
    let (violation, at) = tuple.psi0.d_symmetry_violation(D_SYMMETRY_SAMPLES);
    if violation > D_SYMMETRY_TOL {
        return Err(ShapeError::NotDSymmetric {
            max_violation: violation,
            at,
        });
    }

    let chi0s = symmetrize(&tuple.chi0);
    let defect = Arc::new(RangeShiftDefect {
        psi0: tuple.psi0.clone(),
        chi0s: chi0s.clone(),
    });

    let chi0_star = if max_defect_on_lattice(&defect) <= DEFECT_ZERO_TOL {
        chi0s
    } else {
        let (d0, d1, d2, d3) = (
            defect.clone(),
            defect.clone(),
            defect.clone(),
            defect.clone(),
        );
        let base = [chi0s.clone(), chi0s.clone(), chi0s.clone(), chi0s.clone()];
        let [b0, b1, b2, b3] = base;
        Modifier::from_fns(
            move |t| b0.value(t) + d0.hat_value(t) / 3.0,
            move |t| b1.partial(0, t) + d1.hat_partial(0, t) / 3.0,
            move |t| b2.partial(1, t) + d2.hat_partial(1, t) / 3.0,
            move |t| b3.partial(2, t) + d3.hat_partial(2, t) / 3.0,
        )
    };

    Ok(RsdTuple::new(
        tuple.name.clone(),
        tuple.psi0.clone(),
        tuple.psi1.clone(),
        chi0_star,
        tuple.chi1.clone(),
    ))
}

fn max_defect_on_lattice(defect: &RangeShiftDefect) -> f64 {
    let n = 24;
    let mut worst = 0.0_f64;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let t1 = i as f64 / n as f64;
            let t2 = j as f64 / n as f64;
            worst = worst.max(defect.delta([t1, t2, 1.0 - t1 - t2]).abs());
        }
    }
    worst
}

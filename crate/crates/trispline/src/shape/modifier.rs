//! Trivariate modifier functions `χ(t1, t2, t3)` on the nonnegative octant,
//! with evaluable partial derivatives, plus the constructive operators:
//! product form, symmetrization and ratio form.

use std::fmt;
use std::sync::Arc;

use super::poly::{BiPoly, TriPoly};

type TriFn = dyn Fn([f64; 3]) -> f64 + Send + Sync;
type BiFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A trivariate `C¹` function with evaluable partials.
///
/// Monomial-backed modifiers carry exact formal partials; the callable
/// variant admits non-polynomial constructions. Whether a modifier vanishes
/// on the simplex edges (as the spline construction requires) is checked by
/// the validation module, not enforced here: the same representation also
/// serves ratio factors `φ` which need not vanish anywhere.
#[derive(Clone)]
pub enum Modifier {
    Poly {
        value: TriPoly,
        partials: [TriPoly; 3],
    },
    Callable {
        value: Arc<TriFn>,
        partials: [Arc<TriFn>; 3],
    },
}

impl Modifier {
    /// Monomial modifier; partials are formal derivatives, computed once.
    pub fn poly(p: TriPoly) -> Self {
        let partials = [p.partial(0), p.partial(1), p.partial(2)];
        Modifier::Poly { value: p, partials }
    }

    /// Monomial modifier from `(e1, e2, e3, coef)` entries.
    pub fn monomials(terms: impl IntoIterator<Item = (u32, u32, u32, f64)>) -> Self {
        Self::poly(TriPoly::new(terms))
    }

    pub fn zero() -> Self {
        Self::poly(TriPoly::zero())
    }

    pub fn from_fns(
        value: impl Fn([f64; 3]) -> f64 + Send + Sync + 'static,
        d1: impl Fn([f64; 3]) -> f64 + Send + Sync + 'static,
        d2: impl Fn([f64; 3]) -> f64 + Send + Sync + 'static,
        d3: impl Fn([f64; 3]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Modifier::Callable {
            value: Arc::new(value),
            partials: [Arc::new(d1), Arc::new(d2), Arc::new(d3)],
        }
    }

    pub fn value(&self, t: [f64; 3]) -> f64 {
        match self {
            Modifier::Poly { value, .. } => value.eval(t),
            Modifier::Callable { value, .. } => value(t),
        }
    }

    /// Partial derivative `D_{k+1} χ` (`k` is 0-based).
    pub fn partial(&self, k: usize, t: [f64; 3]) -> f64 {
        match self {
            Modifier::Poly { partials, .. } => partials[k].eval(t),
            Modifier::Callable { partials, .. } => partials[k](t),
        }
    }

    pub fn partials(&self, t: [f64; 3]) -> [f64; 3] {
        [self.partial(0, t), self.partial(1, t), self.partial(2, t)]
    }

    pub fn as_poly(&self) -> Option<&TriPoly> {
        match self {
            Modifier::Poly { value, .. } => Some(value),
            Modifier::Callable { .. } => None,
        }
    }

    /// Largest mismatch between stored partials and central finite
    /// differences at `points`, for validating representations.
    pub fn finite_difference_violation(&self, points: &[[f64; 3]], h: f64) -> f64 {
        let mut worst = 0.0_f64;
        for &t in points {
            for k in 0..3 {
                let mut tp = t;
                let mut tm = t;
                tp[k] += h;
                tm[k] -= h;
                let fd = (self.value(tp) - self.value(tm)) / (2.0 * h);
                worst = worst.max((self.partial(k, t) - fd).abs());
            }
        }
        worst
    }
}

impl fmt::Debug for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modifier::Poly { value, .. } => write!(f, "Modifier::Poly({:?})", value.terms()),
            Modifier::Callable { .. } => write!(f, "Modifier::Callable"),
        }
    }
}

/// A bivariate `C¹` factor `h(t1, t2)` for the product construction.
#[derive(Clone)]
pub enum Bivariate {
    Poly(BiPoly),
    Callable {
        value: Arc<BiFn>,
        d1: Arc<BiFn>,
        d2: Arc<BiFn>,
    },
}

impl Bivariate {
    pub fn poly(terms: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        Bivariate::Poly(BiPoly::new(terms))
    }

    pub fn from_fns(
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Bivariate::Callable {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }
}

/// Product construction `χ(t1, t2, t3) = h(t1, t2) · t3`.
///
/// When `h(t, 1−t) = Ψ0'(t)` (resp. `Ψ1'(t)(1−t)`) and `h` together with its
/// partials vanishes on the quadrant boundary, the result satisfies the
/// edge-derivative conditions for `χ0` (resp. `χ1`).
pub fn product_modifier(h: &Bivariate) -> Modifier {
    match h {
        Bivariate::Poly(p) => Modifier::poly(TriPoly::new(
            p.terms()
                .iter()
                .map(|m| (m.exps[0], m.exps[1], 1, m.coef)),
        )),
        Bivariate::Callable { value, d1, d2 } => {
            let (v, g1, g2, g3) = (value.clone(), d1.clone(), d2.clone(), value.clone());
            Modifier::from_fns(
                move |t| v(t[0], t[1]) * t[2],
                move |t| g1(t[0], t[1]) * t[2],
                move |t| g2(t[0], t[1]) * t[2],
                move |t| g3(t[0], t[1]),
            )
        }
    }
}

/// Symmetrization `χ[s](t1, t2, t3) = ½ χ(t1, t2, t3) + ½ χ(t2, t1, t3)`.
///
/// The output is built structurally as the half-sum, so the exchange symmetry
/// `χ[s](a, b, c) = χ[s](b, a, c)` holds bit-exactly (IEEE addition is
/// commutative), and the partials permute accordingly.
pub fn symmetrize(chi: &Modifier) -> Modifier {
    let swap = |t: [f64; 3]| [t[1], t[0], t[2]];
    let (c1, c2, c3, c4) = (chi.clone(), chi.clone(), chi.clone(), chi.clone());
    Modifier::from_fns(
        move |t| 0.5 * c1.value(t) + 0.5 * c1.value(swap(t)),
        move |t| 0.5 * c2.partial(0, t) + 0.5 * c2.partial(1, swap(t)),
        move |t| 0.5 * c3.partial(1, t) + 0.5 * c3.partial(0, swap(t)),
        move |t| 0.5 * c4.partial(2, t) + 0.5 * c4.partial(2, swap(t)),
    )
}

/// Ratio construction `χ1 = χ0 · φ` with product-rule partials.
///
/// Monomial inputs produce an exact monomial product; otherwise the result is
/// assembled from closures.
pub fn ratio_modifier(chi0: &Modifier, varphi: &Modifier) -> Modifier {
    if let (Modifier::Poly { value: a, .. }, Modifier::Poly { value: b, .. }) = (chi0, varphi) {
        return Modifier::poly(a.mul(b));
    }
    let pairs: Vec<(Modifier, Modifier)> = (0..4).map(|_| (chi0.clone(), varphi.clone())).collect();
    let mut it = pairs.into_iter();
    let (a0, b0) = it.next().unwrap();
    let (a1, b1) = it.next().unwrap();
    let (a2, b2) = it.next().unwrap();
    let (a3, b3) = it.next().unwrap();
    Modifier::from_fns(
        move |t| a0.value(t) * b0.value(t),
        move |t| a1.partial(0, t) * b1.value(t) + a1.value(t) * b1.partial(0, t),
        move |t| a2.partial(1, t) * b2.value(t) + a2.value(t) * b2.partial(1, t),
        move |t| a3.partial(2, t) * b3.value(t) + a3.value(t) * b3.partial(2, t),
    )
}

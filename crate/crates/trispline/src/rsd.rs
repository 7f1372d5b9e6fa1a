//! The local interpolation operator on one triangle: basic Hermite
//! interpolant `F0`, RSD correction `H`, and the combined patch `F = F0 − H`
//! with analytic gradient, edge traces, and the legacy quintic evaluator.
//!
//! With barycentric weights `λk`, germ data `(fk, Ak)` and transversal
//! vectors `uk`:
//!
//! ```text
//! F0(x) = Σk [ Ψ0(λk) fk + Ψ1(λk) Ak(x − pk) ]
//! H(x)  = Σ_{(ℓ,m,n) ∈ S3} (Gℓ(un)/Gn(un)) ·
//!           [ fℓ χ0(λℓ, λm, λn) + Aℓ(pm − pℓ) χ1(λℓ, λm, λn) ]
//! ```
//!
//! `H` vanishes on the boundary, so `F` matches `F0` there; along edge
//! `[pi, pj]` the transversal derivative of `F` reduces to
//! `Ψ1(t) Ai(uk) + Ψ1(1−t) Aj(uk)`, which depends only on that edge's data.

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{Covector2, GeometryError, Point2, Triangle, Vector2};
use crate::shape::{phi, theta, RsdTuple};

/// Boundary slack for the inside-triangle test: `λi >= -1e-12` after
/// normalization. Edge evaluations must succeed from both adjacent triangles.
pub const INSIDE_TOL: f64 = 1e-12;

/// Relative threshold for `|Gk(uk)|` below which the transversal vector
/// counts as parallel to its opposite edge.
const ADMISSIBLE_TOL: f64 = 1e-12;

/// All six permutations of `(0, 1, 2)`, in the order the summation is
/// carried out (fixed for reproducible floating-point results).
pub const S3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [1, 2, 0],
    [2, 1, 0],
    [2, 0, 1],
    [0, 2, 1],
];

#[derive(Debug, Error)]
pub enum RsdError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("transversal vector u{} is parallel to its opposite edge: |G(u)| = {value:e}", k + 1)]
    InadmissibleTransversal { k: usize, value: f64 },
    #[error("point ({x}, {y}) lies outside the triangle: barycentric ({l1:.6}, {l2:.6}, {l3:.6})")]
    OutOfDomain {
        x: f64,
        y: f64,
        l1: f64,
        l2: f64,
        l3: f64,
    },
    #[error("edge parameter t = {t} outside [0, 1]")]
    ParameterOutOfRange { t: f64 },
}

/// First-order Hermite data at one vertex: position, value, gradient
/// functional.
#[derive(Debug, Clone, Copy)]
pub struct VertexGerm {
    pub p: Point2,
    pub f: f64,
    pub a: Covector2,
}

impl VertexGerm {
    pub fn new(p: Point2, f: f64, a: Covector2) -> Self {
        Self { p, f, a }
    }
}

/// One triangle's interpolation patch. Immutable after construction; all
/// evaluations are pure, so patches may be shared across workers.
#[derive(Debug, Clone)]
pub struct LocalPatch {
    tuple: Arc<RsdTuple>,
    tri: Triangle,
    germs: [VertexGerm; 3],
    u: [Vector2; 3],
    grads: [Covector2; 3],
    /// `ratio[l][n] = Gl(un) / Gn(un)`
    ratio: [[f64; 3]; 3],
    /// `edge_diff[l][m] = Al(pm − pl)`
    edge_diff: [[f64; 3]; 3],
}

impl LocalPatch {
    /// Builds a patch, validating the triangle and the admissibility of the
    /// transversal vectors (`uk` must not be parallel to the edge opposite
    /// vertex `k`, i.e. `Gk(uk) ≠ 0`).
    pub fn new(
        tuple: Arc<RsdTuple>,
        germs: [VertexGerm; 3],
        u: [Vector2; 3],
    ) -> Result<Self, RsdError> {
        let tri = Triangle::new(germs[0].p, germs[1].p, germs[2].p)?;
        let grads = tri.weight_gradients();
        for k in 0..3 {
            let gu = grads[k].apply(u[k]);
            if gu.abs() <= ADMISSIBLE_TOL * u[k].norm() * grads[k].norm() {
                return Err(RsdError::InadmissibleTransversal { k, value: gu.abs() });
            }
        }
        let mut ratio = [[0.0; 3]; 3];
        for l in 0..3 {
            for n in 0..3 {
                ratio[l][n] = grads[l].apply(u[n]) / grads[n].apply(u[n]);
            }
        }
        let p = tri.vertices();
        let mut edge_diff = [[0.0; 3]; 3];
        for l in 0..3 {
            for m in 0..3 {
                edge_diff[l][m] = germs[l].a.apply(p[m] - p[l]);
            }
        }
        Ok(Self {
            tuple,
            tri,
            germs,
            u,
            grads,
            ratio,
            edge_diff,
        })
    }

    pub fn tuple(&self) -> &RsdTuple {
        &self.tuple
    }

    pub fn triangle(&self) -> &Triangle {
        &self.tri
    }

    pub fn germs(&self) -> &[VertexGerm; 3] {
        &self.germs
    }

    pub fn transversals(&self) -> &[Vector2; 3] {
        &self.u
    }

    pub fn weight_gradients(&self) -> &[Covector2; 3] {
        &self.grads
    }

    fn weights_checked(&self, x: Point2) -> Result<[f64; 3], RsdError> {
        let b = self.tri.barycentric(x);
        if b.min() < -INSIDE_TOL {
            return Err(RsdError::OutOfDomain {
                x: x.x,
                y: x.y,
                l1: b.l1,
                l2: b.l2,
                l3: b.l3,
            });
        }
        Ok(b.as_array())
    }

    /// Basic Hermite interpolant `F0`.
    pub fn eval_f0(&self, x: Point2) -> Result<f64, RsdError> {
        let lam = self.weights_checked(x)?;
        Ok(self.f0_at(lam, x))
    }

    fn f0_at(&self, lam: [f64; 3], x: Point2) -> f64 {
        let t = &self.tuple;
        (0..3)
            .map(|k| {
                let g = &self.germs[k];
                t.psi0.value(lam[k]) * g.f + t.psi1.value(lam[k]) * g.a.apply(x - g.p)
            })
            .sum()
    }

    /// Fréchet derivative of `F0`:
    /// `Σk [Ψ0'(λk) fk + Ψ1'(λk) Ak(x−pk)] Gk + Ψ1(λk) Ak`.
    pub fn grad_f0(&self, x: Point2) -> Result<Covector2, RsdError> {
        let lam = self.weights_checked(x)?;
        Ok(self.grad_f0_at(lam, x))
    }

    fn grad_f0_at(&self, lam: [f64; 3], x: Point2) -> Covector2 {
        let t = &self.tuple;
        let mut out = Covector2::zero();
        for ((germ, &l), &gk) in self.germs.iter().zip(&lam).zip(&self.grads) {
            let scalar = t.psi0.deriv(l) * germ.f + t.psi1.deriv(l) * germ.a.apply(x - germ.p);
            out = out + gk * scalar + germ.a * t.psi1.value(l);
        }
        out
    }

    /// RSD correction term `H`.
    pub fn eval_h(&self, x: Point2) -> Result<f64, RsdError> {
        let lam = self.weights_checked(x)?;
        Ok(self.h_at(lam))
    }

    fn h_at(&self, lam: [f64; 3]) -> f64 {
        let t = &self.tuple;
        let mut sum = 0.0;
        for perm in S3 {
            let [l, m, n] = perm;
            let args = [lam[l], lam[m], lam[n]];
            sum += self.ratio[l][n]
                * (self.germs[l].f * t.chi0.value(args)
                    + self.edge_diff[l][m] * t.chi1.value(args));
        }
        sum
    }

    /// Gradient of `H` via the chain rule through the weights.
    pub fn grad_h(&self, x: Point2) -> Result<Covector2, RsdError> {
        let lam = self.weights_checked(x)?;
        Ok(self.grad_h_at(lam))
    }

    fn grad_h_at(&self, lam: [f64; 3]) -> Covector2 {
        let t = &self.tuple;
        let mut out = Covector2::zero();
        for perm in S3 {
            let [l, m, n] = perm;
            let args = [lam[l], lam[m], lam[n]];
            let d0 = t.chi0.partials(args);
            let d1 = t.chi1.partials(args);
            let f = self.germs[l].f;
            let ed = self.edge_diff[l][m];
            let mut inner = Covector2::zero();
            for q in 0..3 {
                inner = inner + self.grads[perm[q]] * (f * d0[q] + ed * d1[q]);
            }
            out = out + inner * self.ratio[l][n];
        }
        out
    }

    /// The patch value `F = F0 − H`.
    pub fn eval(&self, x: Point2) -> Result<f64, RsdError> {
        let lam = self.weights_checked(x)?;
        Ok(self.f0_at(lam, x) - self.h_at(lam))
    }

    /// The patch gradient `F' = F0' − H'`.
    pub fn grad(&self, x: Point2) -> Result<Covector2, RsdError> {
        let lam = self.weights_checked(x)?;
        Ok(self.grad_f0_at(lam, x) - self.grad_h_at(lam))
    }

    /// The plane point with the given barycentric weights.
    pub fn point_at(&self, lam: [f64; 3]) -> Point2 {
        let p = self.tri.vertices();
        Point2::new(
            lam[0] * p[0].x + lam[1] * p[1].x + lam[2] * p[2].x,
            lam[0] * p[0].y + lam[1] * p[1].y + lam[2] * p[2].y,
        )
    }

    /// Evaluates `F` at explicitly supplied barycentric weights, with no
    /// domain check. Used by the mesh layer, where edge points carry exact
    /// weights like `(t, 1−t, 0)`.
    pub fn eval_at_barycentric(&self, lam: [f64; 3]) -> f64 {
        let x = self.point_at(lam);
        self.f0_at(lam, x) - self.h_at(lam)
    }

    /// Gradient counterpart of [`Self::eval_at_barycentric`].
    pub fn grad_at_barycentric(&self, lam: [f64; 3]) -> Covector2 {
        let x = self.point_at(lam);
        self.grad_f0_at(lam, x) - self.grad_h_at(lam)
    }

    /// The point `x_t = t·pi + (1−t)·pj` on the edge opposite vertex `k`,
    /// with `(i, j) = (k+1, k+2)` cyclically.
    pub fn edge_point(&self, k: usize, t: f64) -> Point2 {
        let p = self.tri.vertices();
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        Point2::new(
            t * p[i].x + (1.0 - t) * p[j].x,
            t * p[i].y + (1.0 - t) * p[j].y,
        )
    }

    /// Closed-form trace of `F` along the edge opposite vertex `k`:
    /// value and transversal derivative in direction `uk` at
    /// `x_t = t·pi + (1−t)·pj`.
    pub fn edge_trace(&self, k: usize, t: f64) -> Result<(f64, f64), RsdError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(RsdError::ParameterOutOfRange { t });
        }
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        let tu = &self.tuple;
        let gi = &self.germs[i];
        let gj = &self.germs[j];
        let value = tu.psi0.value(t) * gi.f
            + tu.psi1.value(t) * (1.0 - t) * self.edge_diff[i][j]
            + tu.psi0.value(1.0 - t) * gj.f
            + tu.psi1.value(1.0 - t) * t * self.edge_diff[j][i];
        let transversal = tu.psi1.value(t) * gi.a.apply(self.u[k])
            + tu.psi1.value(1.0 - t) * gj.a.apply(self.u[k]);
        Ok((value, transversal))
    }
}

/// The legacy quintic patch (shape functions `Φ, Θ`), written with the edge
/// factor cancelled symbolically:
///
/// ```text
/// F(x) = Σk [Φ(λk) fk + Θ(λk) Ak(x − pk)]
///        − Σk λi² λj² λk · Mk(uk) / Gk(uk),
/// Mk(u) = Gi(u)(30 fi + 12 Ai(pj − pi)) + Gj(u)(30 fj + 12 Aj(pi − pj))
/// ```
///
/// with `{i, j}` the complement of `k`. Each summand carries `λi²λj²λk`
/// directly, so nothing is divided by a vanishing weight on the edges.
/// Agrees with the general patch under the `quintic-rsd` tuple.
pub fn eval_legacy_quintic(
    germs: &[VertexGerm; 3],
    u: &[Vector2; 3],
    x: Point2,
) -> Result<f64, RsdError> {
    let tri = Triangle::new(germs[0].p, germs[1].p, germs[2].p)?;
    let grads = tri.weight_gradients();
    for k in 0..3 {
        let gu = grads[k].apply(u[k]);
        if gu.abs() <= ADMISSIBLE_TOL * u[k].norm() * grads[k].norm() {
            return Err(RsdError::InadmissibleTransversal { k, value: gu.abs() });
        }
    }
    let b = tri.barycentric(x);
    if b.min() < -INSIDE_TOL {
        return Err(RsdError::OutOfDomain {
            x: x.x,
            y: x.y,
            l1: b.l1,
            l2: b.l2,
            l3: b.l3,
        });
    }
    let lam = b.as_array();
    let p = tri.vertices();
    let (phi, theta) = (phi(), theta());

    let mut f0 = 0.0;
    for k in 0..3 {
        f0 += phi.value(lam[k]) * germs[k].f
            + theta.value(lam[k]) * germs[k].a.apply(x - germs[k].p);
    }

    let mut h = 0.0;
    for k in 0..3 {
        let i = (k + 1) % 3;
        let j = (k + 2) % 3;
        let m_k = grads[i].apply(u[k]) * (30.0 * germs[i].f + 12.0 * germs[i].a.apply(p[j] - p[i]))
            + grads[j].apply(u[k]) * (30.0 * germs[j].f + 12.0 * germs[j].a.apply(p[i] - p[j]));
        h += lam[i] * lam[i] * lam[j] * lam[j] * lam[k] * m_k / grads[k].apply(u[k]);
    }
    Ok(f0 - h)
}

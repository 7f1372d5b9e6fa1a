//! Planar triangle primitives: barycentric weights, their constant derivative
//! functionals, and transversal-vector construction.
//!
//! The barycentric weights `λ1, λ2, λ3` of a non-degenerate triangle are the
//! affine functions with `λi(pj) = δij` and `Σ λi ≡ 1`. Their (constant)
//! Fréchet derivatives `Gi` are [`Covector2`]s satisfying
//! `Gi(pj − pk) = δij − δik` and `G1 + G2 + G3 = 0`.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Scale-relative threshold below which a triangle counts as degenerate:
/// the triangle is rejected when `|det| <= EPS_DEGENERATE * L²` with `L`
/// the longest edge length.
pub const EPS_DEGENERATE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("degenerate triangle: |det| = {det_abs:e} <= {threshold:e} (relative to squared longest edge)")]
    DegenerateTriangle { det_abs: f64, threshold: f64 },
    #[error("zero-length edge between coincident points ({x}, {y})")]
    ZeroLengthEdge { x: f64, y: f64 },
}

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// A displacement of the plane (difference of points).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector2 {
    pub x: f64,
    pub y: f64,
}

impl Vector2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Cross product z-component; zero iff the vectors are parallel.
    pub fn cross(self, other: Vector2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Vector2) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl Sub for Point2 {
    type Output = Vector2;
    fn sub(self, rhs: Point2) -> Vector2 {
        Vector2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector2> for Point2 {
    type Output = Point2;
    fn add(self, rhs: Vector2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Add for Vector2 {
    type Output = Vector2;
    fn add(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vector2 {
    type Output = Vector2;
    fn sub(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vector2 {
    type Output = Vector2;
    fn mul(self, rhs: f64) -> Vector2 {
        Vector2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vector2 {
    type Output = Vector2;
    fn neg(self) -> Vector2 {
        Vector2::new(-self.x, -self.y)
    }
}

/// A linear functional on the plane, `u ↦ a·ux + b·uy`.
///
/// Houses the weight derivatives `Gi = λi'` and the gradient functionals
/// `Ai` of Hermite germs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covector2 {
    pub a: f64,
    pub b: f64,
}

impl Covector2 {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub const fn zero() -> Self {
        Self { a: 0.0, b: 0.0 }
    }

    pub fn apply(self, u: Vector2) -> f64 {
        self.a * u.x + self.b * u.y
    }

    pub fn norm(self) -> f64 {
        self.a.hypot(self.b)
    }
}

impl Add for Covector2 {
    type Output = Covector2;
    fn add(self, rhs: Covector2) -> Covector2 {
        Covector2::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Covector2 {
    type Output = Covector2;
    fn sub(self, rhs: Covector2) -> Covector2 {
        Covector2::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul<f64> for Covector2 {
    type Output = Covector2;
    fn mul(self, rhs: f64) -> Covector2 {
        Covector2::new(self.a * rhs, self.b * rhs)
    }
}

impl Neg for Covector2 {
    type Output = Covector2;
    fn neg(self) -> Covector2 {
        Covector2::new(-self.a, -self.b)
    }
}

/// Barycentric weights of a point with respect to a triangle.
///
/// Always sums to 1 by construction; points inside the triangle have all
/// components `>= -1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycentric {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl Barycentric {
    pub fn as_array(self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }

    pub fn min(self) -> f64 {
        self.l1.min(self.l2).min(self.l3)
    }
}

/// A validated non-degenerate triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    p1: Point2,
    p2: Point2,
    p3: Point2,
    // det[p1 - p3, p2 - p3], cached by the constructor
    det: f64,
}

impl Triangle {
    /// Builds a triangle, rejecting slivers with
    /// `|det[p1−p3, p2−p3]| <= 1e-12 · L²` where `L` is the longest edge.
    pub fn new(p1: Point2, p2: Point2, p3: Point2) -> Result<Self, GeometryError> {
        let e1 = p1 - p3;
        let e2 = p2 - p3;
        let det = e1.cross(e2);
        let longest = (p2 - p1)
            .norm()
            .max(e1.norm())
            .max(e2.norm());
        let threshold = EPS_DEGENERATE * longest * longest;
        // the comparison is written so that NaN coordinates also reject
        if det.abs() > threshold {
            Ok(Self { p1, p2, p3, det })
        } else {
            Err(GeometryError::DegenerateTriangle {
                det_abs: det.abs(),
                threshold,
            })
        }
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn vertex(&self, k: usize) -> Point2 {
        self.vertices()[k]
    }

    /// Longest edge length; the natural length scale of the triangle.
    pub fn scale(&self) -> f64 {
        (self.p2 - self.p1)
            .norm()
            .max((self.p1 - self.p3).norm())
            .max((self.p2 - self.p3).norm())
    }

    /// Barycentric weights of `x`: the unique `(l1, l2, l3)` with
    /// `x = Σ li·pi` and `Σ li = 1`.
    ///
    /// Solved as the 2×2 system `l1·(p1−p3) + l2·(p2−p3) = x−p3` by Cramer's
    /// rule, with `l3 = 1 − l1 − l2`.
    pub fn barycentric(&self, x: Point2) -> Barycentric {
        let e1 = self.p1 - self.p3;
        let e2 = self.p2 - self.p3;
        let r = x - self.p3;
        let l1 = r.cross(e2) / self.det;
        let l2 = e1.cross(r) / self.det;
        Barycentric {
            l1,
            l2,
            l3: 1.0 - l1 - l2,
        }
    }

    /// The constant Fréchet derivatives `G1, G2, G3` of the weights, with
    /// `Gi(pj − pk) = δij − δik` and `G1 + G2 + G3 = 0`.
    pub fn weight_gradients(&self) -> [Covector2; 3] {
        let e1 = self.p1 - self.p3;
        let e2 = self.p2 - self.p3;
        // ∇x det[x − p3, e] = (e.y, −e.x)
        let g1 = Covector2::new(e2.y / self.det, -e2.x / self.det);
        let g2 = Covector2::new(-e1.y / self.det, e1.x / self.det);
        let g3 = -(g1 + g2);
        [g1, g2, g3]
    }

    /// Transversal vectors realizing a prescribed ratio matrix.
    ///
    /// For any `(a1, a2, a3)`, returns `u1, u2, u3` with
    /// `uk = pk − ½(pi + pj) + (½ + ak)(pi − pj)` for the cyclic successor
    /// pair `(i, j)` of `k`, so that
    ///
    /// ```text
    /// [Gi(uj) / Gj(uj)] = | 1      −1−a2   a3    |
    ///                     | a1      1     −1−a3  |
    ///                     | −1−a1   a2     1     |
    /// ```
    ///
    /// In particular `Gk(uk) = 1`, hence `uk` is never parallel to the edge
    /// opposite vertex `k`.
    pub fn transversal_from_alphas(&self, a: [f64; 3]) -> [Vector2; 3] {
        let p = self.vertices();
        let mut u = [Vector2::new(0.0, 0.0); 3];
        for k in 0..3 {
            let i = (k + 1) % 3;
            let j = (k + 2) % 3;
            let mid = (p[i] - p[k]) * 0.5 + (p[j] - p[k]) * 0.5;
            u[k] = -mid + (p[i] - p[j]) * (0.5 + a[k]);
        }
        u
    }

    /// True when all weights of `x` are `>= -tol`.
    pub fn contains(&self, x: Point2, tol: f64) -> bool {
        self.barycentric(x).min() >= -tol
    }
}

/// Unit normal of the edge `a → b` (90° counterclockwise rotation of `b − a`).
///
/// Both triangles sharing an edge must call this with `(a, b)` in the same
/// order — the mesh layer orders endpoints by ascending global vertex index —
/// so that they receive the bit-identical vector.
pub fn default_edge_vector(a: Point2, b: Point2) -> Result<Vector2, GeometryError> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return Err(GeometryError::ZeroLengthEdge { x: a.x, y: a.y });
    }
    Ok(Vector2::new(-d.y / len, d.x / len))
}

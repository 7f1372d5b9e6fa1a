//! Once-differentiable scalar shape functions on [0, 1].

use std::fmt;
use std::sync::Arc;

use super::poly::Poly1;

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A `C¹` function on `[0, 1]` with an evaluable derivative.
///
/// Polynomial curves carry their exact formal derivative; the callable
/// variant keeps the framework open to non-polynomial shape functions.
#[derive(Clone)]
pub enum Curve {
    Poly { value: Poly1, deriv: Poly1 },
    Callable { value: Arc<ScalarFn>, deriv: Arc<ScalarFn> },
}

impl Curve {
    /// Polynomial curve from ascending coefficients; the derivative is formal.
    pub fn poly(coeffs: Vec<f64>) -> Self {
        let value = Poly1::new(coeffs);
        let deriv = value.derivative();
        Curve::Poly { value, deriv }
    }

    pub fn from_fns(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Curve::Callable {
            value: Arc::new(value),
            deriv: Arc::new(deriv),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Curve::Poly { value, .. } => value.eval(t),
            Curve::Callable { value, .. } => value(t),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            Curve::Poly { deriv, .. } => deriv.eval(t),
            Curve::Callable { deriv, .. } => deriv(t),
        }
    }

    /// Coefficients when the curve is stored as a polynomial.
    pub fn poly_coeffs(&self) -> Option<&[f64]> {
        match self {
            Curve::Poly { value, .. } => Some(value.coeffs()),
            Curve::Callable { .. } => None,
        }
    }

    /// Largest `|Ψ'(t) − Ψ'(1−t)|` over `n` equispaced samples, together with
    /// the worst `t`. Zero (up to roundoff) for d-symmetric curves.
    pub fn d_symmetry_violation(&self, n: usize) -> (f64, f64) {
        let mut worst = (0.0_f64, 0.0_f64);
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let v = (self.deriv(t) - self.deriv(1.0 - t)).abs();
            if v > worst.0 {
                worst = (v, t);
            }
        }
        worst
    }

    /// Largest mismatch between the stored derivative and a central finite
    /// difference of the value, over `n` samples of [0, 1]. Intended for
    /// validating callable representations.
    pub fn finite_difference_violation(&self, n: usize, h: f64) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            // keep the stencil inside the domain near the endpoints
            let t = t.clamp(h, 1.0 - h);
            let fd = (self.value(t + h) - self.value(t - h)) / (2.0 * h);
            worst = worst.max((self.deriv(t) - fd).abs());
        }
        worst
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Poly { value, .. } => write!(f, "Curve::Poly({:?})", value.coeffs()),
            Curve::Callable { .. } => write!(f, "Curve::Callable"),
        }
    }
}

/// `Φ(t) = t³(10 − 15t + 6t²)`, the quintic Hermite blend.
pub fn phi() -> Curve {
    Curve::poly(vec![0.0, 0.0, 0.0, 10.0, -15.0, 6.0])
}

/// `Θ(t) = t³(4 − 3t)`, the quintic gradient blend.
pub fn theta() -> Curve {
    Curve::poly(vec![0.0, 0.0, 0.0, 4.0, -3.0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_endpoint_conditions() {
        let p = phi();
        assert_eq!(p.value(0.0), 0.0);
        assert_eq!(p.value(1.0), 1.0);
        assert_eq!(p.deriv(0.0), 0.0);
        assert_eq!(p.deriv(1.0), 0.0);
    }

    #[test]
    fn phi_midpoint() {
        assert!((phi().value(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn theta_values() {
        let th = theta();
        assert!((th.value(0.5) - 0.3125).abs() < 1e-15);
        // Θ'(t) = 12t²(1 − t)
        assert_eq!(th.deriv(0.0), 0.0);
        assert_eq!(th.deriv(1.0), 0.0);
        assert!((th.deriv(0.25) - 12.0 * 0.0625 * 0.75).abs() < 1e-15);
    }

    #[test]
    fn phi_derivative_closed_form() {
        // Φ'(t) = 30t²(1 − t)²
        let p = phi();
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let expected = 30.0 * t * t * (1.0 - t) * (1.0 - t);
            assert!((p.deriv(t) - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn phi_is_d_symmetric_theta_is_not() {
        let (v, _) = phi().d_symmetry_violation(101);
        assert!(v < 1e-12);
        let (v, _) = theta().d_symmetry_violation(101);
        // Θ'(¼) = 12·(1/16)·(3/4) = 0.5625 but Θ'(¾) = 12·(9/16)·(1/4) = 1.6875
        assert!(v > 1.0);
    }

    #[test]
    fn phi_partition_of_unity() {
        let p = phi();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((p.value(t) + p.value(1.0 - t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn callable_matches_finite_differences() {
        let c = Curve::from_fns(|t| (t * t * t) * (10.0 - 15.0 * t + 6.0 * t * t), |t| {
            30.0 * t * t * (1.0 - t) * (1.0 - t)
        });
        assert!(c.finite_difference_violation(101, 1e-6) < 1e-6);
    }
}

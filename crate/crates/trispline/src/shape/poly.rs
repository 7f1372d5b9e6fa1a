//! Dense univariate and sparse trivariate polynomials with formal derivatives.

/// Univariate polynomial, coefficients ascending in degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1 {
    coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly1 {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Poly1::new(coeffs)
    }
}

/// One term `coef · t1^e1 · t2^e2 · t3^e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriMonomial {
    pub exps: [u32; 3],
    pub coef: f64,
}

/// Sparse trivariate polynomial in canonical form: terms merged by exponent
/// triple, zero coefficients dropped, sorted lexicographically by exponents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriPoly {
    terms: Vec<TriMonomial>,
}

impl TriPoly {
    pub fn new(terms: impl IntoIterator<Item = (u32, u32, u32, f64)>) -> Self {
        let mut terms: Vec<TriMonomial> = terms
            .into_iter()
            .map(|(e1, e2, e3, coef)| TriMonomial {
                exps: [e1, e2, e3],
                coef,
            })
            .collect();
        terms.sort_by_key(|m| m.exps);
        let mut merged: Vec<TriMonomial> = Vec::with_capacity(terms.len());
        for m in terms {
            match merged.last_mut() {
                Some(last) if last.exps == m.exps => last.coef += m.coef,
                _ => merged.push(m),
            }
        }
        merged.retain(|m| m.coef != 0.0);
        Self { terms: merged }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[TriMonomial] {
        &self.terms
    }

    pub fn eval(&self, t: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|m| {
                m.coef
                    * t[0].powi(m.exps[0] as i32)
                    * t[1].powi(m.exps[1] as i32)
                    * t[2].powi(m.exps[2] as i32)
            })
            .sum()
    }

    /// Formal partial derivative with respect to variable `k` (0, 1 or 2).
    pub fn partial(&self, k: usize) -> TriPoly {
        TriPoly::new(self.terms.iter().filter(|m| m.exps[k] > 0).map(|m| {
            let mut e = m.exps;
            let c = m.coef * e[k] as f64;
            e[k] -= 1;
            (e[0], e[1], e[2], c)
        }))
    }

    pub fn scale(&self, factor: f64) -> TriPoly {
        TriPoly::new(
            self.terms
                .iter()
                .map(|m| (m.exps[0], m.exps[1], m.exps[2], m.coef * factor)),
        )
    }

    pub fn add(&self, other: &TriPoly) -> TriPoly {
        TriPoly::new(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|m| (m.exps[0], m.exps[1], m.exps[2], m.coef)),
        )
    }

    pub fn mul(&self, other: &TriPoly) -> TriPoly {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push((
                    a.exps[0] + b.exps[0],
                    a.exps[1] + b.exps[1],
                    a.exps[2] + b.exps[2],
                    a.coef * b.coef,
                ));
            }
        }
        TriPoly::new(out)
    }

    /// Exchanges the first two variables.
    pub fn swap12(&self) -> TriPoly {
        TriPoly::new(
            self.terms
                .iter()
                .map(|m| (m.exps[1], m.exps[0], m.exps[2], m.coef)),
        )
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|m| m.exps.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

/// One term `coef · t1^e1 · t2^e2` of a bivariate polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiMonomial {
    pub exps: [u32; 2],
    pub coef: f64,
}

/// Sparse bivariate polynomial, used for the product-form factors `h(t1, t2)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    terms: Vec<BiMonomial>,
}

impl BiPoly {
    pub fn new(terms: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut terms: Vec<BiMonomial> = terms
            .into_iter()
            .map(|(e1, e2, coef)| BiMonomial { exps: [e1, e2], coef })
            .collect();
        terms.sort_by_key(|m| m.exps);
        let mut merged: Vec<BiMonomial> = Vec::with_capacity(terms.len());
        for m in terms {
            match merged.last_mut() {
                Some(last) if last.exps == m.exps => last.coef += m.coef,
                _ => merged.push(m),
            }
        }
        merged.retain(|m| m.coef != 0.0);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[BiMonomial] {
        &self.terms
    }

    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        self.terms
            .iter()
            .map(|m| m.coef * t1.powi(m.exps[0] as i32) * t2.powi(m.exps[1] as i32))
            .sum()
    }
}

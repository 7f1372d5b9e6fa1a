//! Tuple definition files.
//!
//! Format (JSON): `{"psi0": [c0, ..., cn], "psi1": [...],
//! "chi0": [[e1, e2, e3, coef], ...], "chi1": [...]}` — curve coefficients
//! ascending in degree, modifier entries as integer exponents plus a real
//! coefficient. Only polynomial representations are serializable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::curve::Curve;
use super::modifier::Modifier;
use super::tuple::RsdTuple;

#[derive(Debug, Error)]
pub enum TupleIoError {
    #[error("malformed tuple file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tuple {0:?} uses a callable representation and cannot be serialized")]
    NonPolynomial(String),
}

#[derive(Serialize, Deserialize)]
struct TupleFile {
    psi0: Vec<f64>,
    psi1: Vec<f64>,
    chi0: Vec<(u32, u32, u32, f64)>,
    chi1: Vec<(u32, u32, u32, f64)>,
}

/// Parses a tuple definition; `name` is attached to the result (callers
/// typically pass the file path or stem).
pub fn tuple_from_json_str(name: &str, json: &str) -> Result<RsdTuple, TupleIoError> {
    let file: TupleFile = serde_json::from_str(json)?;
    Ok(RsdTuple::new(
        name,
        Curve::poly(file.psi0),
        Curve::poly(file.psi1),
        Modifier::monomials(file.chi0),
        Modifier::monomials(file.chi1),
    ))
}

/// Serializes a polynomial-represented tuple.
pub fn tuple_to_json_string(tuple: &RsdTuple) -> Result<String, TupleIoError> {
    let poly_terms = |m: &Modifier| {
        m.as_poly().map(|p| {
            p.terms()
                .iter()
                .map(|t| (t.exps[0], t.exps[1], t.exps[2], t.coef))
                .collect::<Vec<_>>()
        })
    };
    let file = TupleFile {
        psi0: tuple
            .psi0
            .poly_coeffs()
            .ok_or_else(|| TupleIoError::NonPolynomial(tuple.name.clone()))?
            .to_vec(),
        psi1: tuple
            .psi1
            .poly_coeffs()
            .ok_or_else(|| TupleIoError::NonPolynomial(tuple.name.clone()))?
            .to_vec(),
        chi0: poly_terms(&tuple.chi0)
            .ok_or_else(|| TupleIoError::NonPolynomial(tuple.name.clone()))?,
        chi1: poly_terms(&tuple.chi1)
            .ok_or_else(|| TupleIoError::NonPolynomial(tuple.name.clone()))?,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

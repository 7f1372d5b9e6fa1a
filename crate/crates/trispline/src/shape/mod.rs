//! Shape-function pairs `(Ψ0, Ψ1)`, trivariate modifiers `(χ0, χ1)`, RSD
//! tuples, and the constructive operators: product form, symmetrization,
//! range-shift correction and ratio form.

pub mod curve;
pub mod io;
pub mod modifier;
pub mod poly;
pub mod tuple;

pub use curve::{phi, theta, Curve};
pub use io::{tuple_from_json_str, tuple_to_json_string, TupleIoError};
pub use modifier::{product_modifier, ratio_modifier, symmetrize, Bivariate, Modifier};
pub use poly::{BiPoly, Poly1, TriPoly};
pub use tuple::{
    affine_sextic, builtin_tuple, builtin_tuples, enforce_range_shift, phi_phi, quintic_rsd,
    RsdTuple, ShapeError,
};

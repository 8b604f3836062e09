//! Exact computation with SL2(C) character varieties of two-bridge knot
//! complements: trace polynomials, Riley curves, A-polynomials and their
//! Newton polygons, Puiseux branches at ideal points, limiting characters,
//! JSJ lift compatibility, and quaternion-algebra extension verdicts.

pub mod scalar;
pub mod upoly;
pub mod poly;
pub mod bigfloat;
pub mod cyclo;

//! Exact symbolic computation with Macdonald polynomials in superspace.
//!
//! The crate builds, from first principles and with exact arithmetic only,
//! the Macdonald superpolynomials `P_Λ` indexed by superpartitions, together
//! with the surrounding machinery: the Hecke/Cherednik operator calculus and
//! non-symmetric Macdonald polynomials, the power-sum scalar product, the
//! constant-term scalar product with its truncated q-series engine, integral
//! forms, generalized (q,t)-Kostka matrices, and a battery of verification
//! routines for the identities and conjectures these objects satisfy.

pub mod comb;
pub mod hecke;
pub mod kostka;
pub mod mac;
pub mod poly;
pub mod qt;

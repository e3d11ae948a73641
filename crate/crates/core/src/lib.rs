//! Exact computations with fans of toric varieties: lattice linear algebra,
//! fan predicates and constructions, divisor and curve classes, toric
//! morphisms, and recognisers for projective spaces, products and fiber
//! products.

pub mod classes;
pub mod corpus;
pub mod error;
pub mod exactla;
pub mod fan;
pub mod io;
pub mod morphism;
pub mod recognize;

pub use error::{Error, Result};

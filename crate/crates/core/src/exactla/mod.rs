//! Exact integer and rational linear algebra.

pub mod lp;
pub mod matrix;
pub mod rational;
pub mod smith;

pub use matrix::IntMatrix;
pub use rational::{RatMatrix, Rational};
pub use smith::{
    cokernel_invariants, hermite_normal_form, kernel_basis, smith_normal_form,
    CokernelInvariants, SmithDecomposition,
};

//! Chebyshev wavelet operational-matrix collocation for the variable-order
//! time-fractional mobile-immobile advection-dispersion equation on the unit
//! square.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod caputo_oracle;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod model;
pub mod opmat;
pub mod quadrature;
pub mod scalars;
pub mod solver;

pub use basis::{BasisVector, WaveletBasis};
pub use caputo_oracle::ScalarField;
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, LuFactorization};
pub use model::{builtin_example, ProblemSpec};
pub use opmat::{OperationalMatrices, OrderFunction};
pub use scalars::{gamma, ToleranceConfig};
pub use solver::{solve, CollocationSystem, Solution};

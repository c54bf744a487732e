//! Variable-order fractional nonlocal Euler–Bernoulli beams: fractional
//! operators, a fractional finite-element solver, dataset generation for
//! order identification, and a least-squares inverse baseline.

pub mod config;
pub mod dataset;
pub mod error;
pub mod fem;
pub mod inverse;
pub mod model;
pub mod operators;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use error::{Error, Result};

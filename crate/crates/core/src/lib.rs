//! Exact and numerical tools for weighted Bessel-period statistics of
//! degree-two Siegel cusp forms.
//!
//! The crate covers class groups of imaginary quadratic fields, Fourier
//! expansions and Hecke operators for level-one Siegel modular forms of
//! degree two, Satake parameters and local L-factors, the unramified
//! Plancherel measure of type C₂, the Bessel-period weights that enter the
//! equidistribution statement, and the quinary orthogonal model in which
//! those periods are defined.

pub mod arith;
pub mod bessel;
pub mod cyclotomic;
pub mod error;
pub mod linalg;
pub mod numfield;
pub mod ortho5;
pub mod plancherel;
pub mod poly;
pub mod quadform;
pub mod satake;
pub mod siegel;

pub use error::{Error, Result};

//! Degree-two Siegel modular forms of level one.

pub mod cache;
pub mod eigenforms;
pub mod eigensys;
pub mod eisenstein;
pub mod elliptic;
pub mod expansion;
pub mod halfint;
pub mod hecke;
pub mod igusa;

pub use expansion::FourierExpansion;
pub use halfint::{HalfIntMatrix, KeySet};

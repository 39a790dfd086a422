//! One-point algebraic-geometric codes on GGS maximal curves.

pub mod ffield;
pub mod curve;
pub mod semigroup;
pub mod qtwo;
pub mod pzero;
pub mod linalg;
pub mod agcode;
pub mod derived;
pub mod aut;
pub mod cli;

//! Exact computations for Hochschild, cyclic and Poisson calculi of Koszul
//! algebras, BV structures and gravity brackets.

pub mod algebra;
pub mod calculus;
pub mod gravity;
pub mod hochschild;
pub mod koszul;
pub mod linalg;
pub mod mixed;
pub mod poisson;

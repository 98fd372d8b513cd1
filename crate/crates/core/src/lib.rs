//! Fourier analysis on finite groups applied to the functional equation
//!
//! f1(xy) + f2(yx) + f3(xy⁻¹) + f4(y⁻¹x) = f5(x) f6(y).
//!
//! The crate builds finite groups and their unitary duals, computes Fourier
//! transforms of functions on a group, classifies the matrix tuples that
//! govern pure solutions of the equation, constructs and decomposes solution
//! spaces, and specializes the machinery to the d'Alembert and Wilson
//! equations.

pub mod admissible;
pub mod fourier;
pub mod group;
pub mod linalg;
pub mod repr;
pub mod solver;
pub mod special;

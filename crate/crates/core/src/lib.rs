//! Arithmetic of imaginary quadratic rings of integers, multiplicative
//! functions on their elements and ideals, and numerical engines for mean
//! values, concentration and partition-regularity diagnostics.

pub mod arith;
pub mod error;
pub mod ideal_arith;
pub mod mean_values;
pub mod mult_funcs;
pub mod quad_ring;
pub mod regularity;

pub use error::{Error, Result};
pub use quad_ring::{QuadField, QuadInt, TauCase};

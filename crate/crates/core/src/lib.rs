//! Impulsive fractional initial-value problems with a kernel function `phi`:
//! Picard solver on the equivalent integral equation, closed-form bound
//! certificates, and a harness that checks computed solutions against them.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod expr;
pub mod frac_calc;
pub mod phi;
mod quadrature;
pub mod solver;
pub mod special;
pub mod stability;

pub use error::{Error, Result};

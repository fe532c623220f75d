//! Exact jet-space differential algebra for scalar evolution equations with
//! non-constant separant.
//!
//! The crate generates and verifies two families of commuting integrable
//! hierarchies in exact rational arithmetic: a KdV-like family with a
//! second-order recursion operator, and a Sawada-Kotera/Kaup-like family
//! with a sixth-order one, both built over a level-graded ring of jet
//! variables whose coefficients are powers of the separant root `a` and its
//! derivative `ab`.
//!
//! Start with [`ring::DiffPoly`] for expressions, [`jetcalc`] for the
//! differential structure, and [`hierarchy`] for flows and recursion
//! operators. The `examples/` directory has one runnable program per major
//! capability.

pub mod error;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{DiffPoly, Indet, PowerProduct, Rat};
pub mod cli;
pub mod grading;
pub mod jetcalc;
pub mod solver;
pub mod densities;
pub mod hierarchy;

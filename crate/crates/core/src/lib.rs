//! Chemical-equilibrium quantities in the (T, P) plane.
//!
//! The crate covers activity quotients under seven modeling regimes, the
//! affine model of the reaction Gibbs slope, maximal-reaction and
//! equilibrium curve tracing, feasible composition paths, cell potentials
//! and the Kirchhoff correction to the reaction enthalpy.
//!
//! All quantities are SI: K, Pa, J, mol, V.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod electrochem;
pub mod enthalpy;
pub mod error;
pub mod error_model;
pub mod feasible;
pub mod gibbs;
pub mod numeric;
pub mod path;
pub mod surface;
pub mod thermo;

pub use error::{Error, Result};

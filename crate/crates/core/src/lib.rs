//! Experimental geometry of nonorientable hyperbolic surfaces.
//!
//! Holonomy of the small benchmark surfaces, enumeration of simple closed
//! geodesics, counting and exponent fits, symbolic models of projective
//! measured laminations, and volume integrals of the Norbury form.

// `!(x > 0.0)` style guards reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collar;
pub mod config;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod hypgeo;
pub mod pml;
pub mod surface;
pub mod volume;
pub mod word;

pub use error::{Error, Result};

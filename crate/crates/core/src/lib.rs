//! Binary compressed-sensing measurement matrices built from finite
//! geometries.
//!
//! The crate constructs incidence matrices of flats in EG(r,q) and PG(r,q),
//! analyses them (coherence, girth, spark and stopping distance together with
//! their lower bounds) and runs OMP recovery experiments against Gaussian
//! baselines.

pub mod error;
pub mod gf;
pub mod geometry;
pub mod incidence;
pub mod analysis;
pub mod fixtures;
pub mod recovery;
pub mod harness;
pub mod verify;
mod util;

pub use error::{Error, Result};
pub use util::{binomial, Combinations};

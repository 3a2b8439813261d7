//! Grass-Lattice: a structured Grassmannian constellation for noncoherent
//! SIMO communication over Rayleigh block-fading channels.
//!
//! The constellation is the image of a regular lattice of the unit hypercube
//! `(0,1)^{2(T-1)}` under a measure-preserving map onto the Grassmannian of
//! lines `G(1, C^T)`, built from three stages:
//!
//! * [`gaussmap`]: hypercube -> `CN(0, I)` by componentwise inverse CDF,
//! * [`ballmap`]: Gaussian space -> unit ball by radial rescaling,
//! * [`grassmap`]: unit ball -> Grassmannian by `w -> [sqrt(1-|w|^2); w]`.
//!
//! [`codec`] turns bit words into codewords and back with a decoder whose
//! cost does not depend on the constellation size, and [`simkit`] provides
//! the channel model and Monte Carlo error-rate tooling.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ballmap;
pub mod cli;
pub mod codec;
pub mod error;
pub mod gaussmap;
pub mod grassmap;
pub mod linalg;
pub mod simkit;
pub mod special;
pub mod stats;

pub use error::{Error, Result};

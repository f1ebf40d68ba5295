//! Representational similarity analysis between model representations and
//! brain recordings over a shared stimulus set.
//!
//! The pipeline: flatten and sample brain volumes ([`datamodel`]), build
//! dissimilarity matrices and score them against each other ([`rdm`]), then
//! aggregate and report ([`experiments`]).

pub mod datamodel;
pub mod error;
pub mod experiments;
pub mod rdm;
pub mod registry;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};

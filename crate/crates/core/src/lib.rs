//! Means, variances, uncertainty geometry and interferometric phase
//! sensitivity of Schwinger-boson angular momentum coherent and squeezed
//! states, with a truncated Fock-space oracle for every closed form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod output;
pub mod params;
pub mod surface;
pub mod sweep;
pub mod verify;

pub use closed_form::MomentSet;
pub use error::{Error, Result};
pub use params::{AngularParams, CoherentAmplitudes, SqueezeParams, StateParams};

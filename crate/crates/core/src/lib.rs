//! Frequency-dependent balanced truncation for continuous-time LTI systems.
//!
//! Two variants are provided: the single-frequency (SF) type, which targets a
//! neighborhood of one frequency, and the interval type, which targets a band
//! [w1, w2]. Both come with computable error bounds. Standard balanced
//! truncation, (generalized) singular perturbation and frequency-limited
//! Gramian truncation are included as baselines, together with a harness
//! that checks every bound against dense frequency sweeps.

pub mod baselines;
pub mod error;
pub mod harness;
pub mod interval_fdbt;
pub mod io;
pub mod numkit;
pub mod reduction;
pub mod sf_fdbt;
pub mod sysmodel;

pub use error::{Error, Result};
pub use numkit::{CMatrix, C64};
pub use reduction::{reduce, Bounds, EfBound, Method, ReductionResult};
pub use sysmodel::StateSpace;

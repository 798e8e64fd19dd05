//! Kernel mean embeddings and maximum mean discrepancy over finitely supported
//! signed measures, together with constructions that probe when MMD metrizes
//! weak convergence of probability measures.
//!
//! - [`kernels`]: base kernels, the shift / scale / center algebra, Gram
//!   matrices, PSD and decay probes.
//! - [`measures`]: signed discrete measures, Jordan decomposition, mixtures.
//! - [`embedding`]: KME evaluation, inner products, MMD and a brute-force oracle.
//! - [`constructions`]: diffusing sequences, annihilating kernels and
//!   MMD-convergent sequences that do not converge weakly.
//! - [`diagnostics`]: test-function batteries and convergence reports.
//! - [`experiment`]: named experiment presets and the runner behind the CLI.

// `!(x > 0.0)` guards are there to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod diagnostics;
pub mod embedding;
pub mod error;
pub mod experiment;
pub mod kernels;
pub mod measures;
pub mod point;
pub mod summation;

pub use error::{Error, Result};
pub use kernels::{Kernel, KernelSpec, ScalarField};
pub use measures::{MeasureSequence, SignedDiscreteMeasure};
pub use point::Point;

//! Sparse representations over redundant frames in ℂᴺ.
//!
//! * [`frame`]: frames, Vandermonde frames, sparse coefficient vectors.
//! * [`decoder`]: exact recovery of the sparsest representation over a
//!   Vandermonde frame with Reed–Solomon style decoding over ℂ.
//! * [`bounds`]: closed-form lower bounds on the average distortion of any
//!   frame at a given sparsity and redundancy.
//! * [`empirical`]: Monte Carlo estimates of that distortion via exhaustive
//!   sparse minimum-distance decoding.
//!
//! Heavy loops take an [`Execution`] and run on rayon when the `parallel`
//! feature is enabled.

pub mod bounds;
pub mod decoder;
pub mod empirical;
pub mod error;
pub mod exec;
pub mod frame;
pub mod poly;
pub mod rng;
mod wide;

pub use error::{Error, Result};
pub use exec::Execution;
pub use frame::{default_nodes, ComplexVector, Frame, FrameKind, SparseRep};
pub use num_complex::Complex64;
pub use poly::Polynomial;

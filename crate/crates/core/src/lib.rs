//! Spectral simulation of Lévy-driven Ornstein–Uhlenbeck processes and the
//! deterministic and Monte Carlo checks that decide when two generators
//! produce equivalent path laws.
//!
//! Everything lives on a diagonal (spectral) truncation: mode `n` of the
//! generator `A` decays at rate `a_n`, mode `n` of `Ã` at rate `ã_n`, and
//! the Gaussian noise has covariance eigenvalues `q_n`. Sequences may be
//! stored explicitly or as closed-form expressions in `n`, which is how
//! series tails are probed without materialising vectors.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! thread pools live in the companion `ou-levy` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod cameron_martin;
pub mod error;
pub mod expr;
pub mod girsanov;
pub mod levy;
pub mod math;
pub mod quad;
pub mod rigidity;
pub mod rng;
pub mod series;
pub mod simulate;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use series::{ExtendedReal, SeriesVerdict};
pub use spectral::{Direction, Generator, Sequence, SpectralModel};

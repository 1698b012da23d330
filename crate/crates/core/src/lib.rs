//! Exact Goldbach pair counting and the racetrack estimators built on it.
//!
//! The crate is layered bottom-up:
//!
//! - [`primes`]: bit-packed segmented sieve, primorials, `H_p` membership and
//!   the simulated prime sequence (`next = v + ln v`).
//! - [`goldbach`]: the Pen, band signatures, exact pair counts and the
//!   chunked batch [`scan`](goldbach::scan).
//! - [`numerics`]: the logarithmic integral and an adaptive Simpson
//!   quadrature used as an independent oracle.
//! - [`estimator`]: `F_H`, EGP, the TRPF family, the `α` correction, IGP and
//!   the `B₂` asymptotic constants.
//! - [`analysis`]: per-band aggregates and estimator error reports.
//! - [`format`]: CSV schemas for records, curves, profiles and reports.
//!
//! With the default `parallel` feature the sieve and the scan fan out over
//! rayon; without it every path runs sequentially and produces identical
//! output.

pub mod analysis;
pub mod error;
pub mod estimator;
pub mod format;
pub mod goldbach;
pub mod numerics;
pub mod primes;

pub use error::{Error, Result};
pub use goldbach::{BandSignature, GpRecord};
pub use primes::PrimalityTable;

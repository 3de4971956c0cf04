//! Reconstruction of bandlimited signals from interpolated waveforms
//! (sample-and-hold, linear, higher-order holds, cubic convolution) by
//! cosine-module mixing, with least-squares-optimal module coefficients.
//!
//! The pipeline: a bandlimited signal is decimated by T, re-expanded by an
//! interpolation kernel, multiplied by a mixer 1 + sum_j 2 c_j cos(2 pi j n/T),
//! and lowpass filtered. With c_j = 1 this is the classical modular method;
//! the [`optimizer`] module instead solves a small least-squares system over
//! the passband of the kernel spectrum for coefficients that minimize the
//! reconstruction residual. [`iterative`] wraps the same operator in a
//! relaxation loop, and [`bench`] drives the experiment harness behind the
//! `modrecon` CLI.

pub mod bench;
pub mod error;
mod fft;
pub mod interp;
pub mod io;
pub mod iterative;
pub mod modular;
pub mod optimizer;
pub mod signals;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

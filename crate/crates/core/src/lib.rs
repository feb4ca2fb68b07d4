//! Two identical bosons with a zero-range interaction in an isotropic 2D
//! harmonic trap: energy spectrum, relative wavefunction, Schmidt
//! decomposition and entanglement entropy, plus an independent kernel
//! oracle and the quasi-2D coupling map.
//!
//! Units: trap frequency and oscillator length are 1 (ħ = m = ω = 1).

pub mod error;
pub mod specfun;
pub mod cli;
pub mod oracle;
pub mod plot;
pub mod quad;
pub mod quasi2d;
pub mod schmidt;
pub mod spectrum;
pub mod wavefn;

pub use error::{Error, Result};

//! Power analysis of single-phase circuits under non-sinusoidal conditions
//! using Euclidean geometric algebra.
//!
//! Voltages and currents become grade-1 multivectors ([`phasor`]), loads
//! become per-harmonic spinors ([`circuit`]), the geometric product of
//! voltage and current gives the apparent power multivector ([`power`]) and
//! the current splits into active, scattered, quadrature and generated parts
//! ([`decompose`]). [`ingest`] turns sampled waveforms into spectra.

pub mod circuit;
pub mod decompose;
pub mod error;
pub mod ga;
pub mod ingest;
pub mod phasor;
pub mod power;
pub mod report;

pub use error::{Error, Result};
pub use ga::{Blade, GaError, Multivector};
pub use phasor::{BasisLayout, GeometricPhasor, HarmonicComponent, SpectralSignal};

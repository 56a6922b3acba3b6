//! Simulation and certification toolkit for a semi-device-independent
//! prepare-and-measure randomness generator with random blocking.
//!
//! * [`bloch`]: equatorial qubit states, measurements and the forced-outcome
//!   decomposition of two-outcome measurements.
//! * [`sim`]: the four-step protocol with honest and adversarial devices.
//! * [`estimation`]: conditional tables and confidence bounds from logs.
//! * [`certification`]: privacy test and min-entropy certification.
//! * [`extraction`]: raw strings and von Neumann debiasing.

pub mod bloch;
pub mod certification;
pub mod error;
pub mod estimation;
pub mod extraction;
pub mod rng;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};

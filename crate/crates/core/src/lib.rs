//! Numerics for the error-correction phase transition of noisy random
//! encoding circuits.
//!
//! The crate is organised around four independent engines:
//!
//! - [`stab`]: a mixed-state stabilizer simulator (generator-only tableau,
//!   bit-packed over GF(2)) with uniform two-qubit Clifford sampling.
//! - [`clifford_phase`]: Monte Carlo estimation of the coherent information of
//!   noisy 2D brickwork Clifford encoders followed by perfect syndrome
//!   measurement.
//! - [`haar`]: exact log-average purity of all-to-all Haar circuits through the
//!   permutation-symmetric second-moment transfer matrices.
//! - [`bounds`]: the worst-case coherent-information bound for any circuit with
//!   interspersed depolarizing noise, and the thresholds derived from it.
//!
//! [`collapse`] turns curves produced by the first two engines into critical
//! points through a finite-size scaling collapse.

pub mod bounds;
pub mod clifford_phase;
pub mod collapse;
pub mod error;
pub mod haar;
pub mod seed;
pub mod stab;

pub use error::{Error, Result};

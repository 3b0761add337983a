//! Mixed-state stabilizer formalism.

pub mod gate;
pub mod gf2;
pub mod pauli;
pub mod tableau;

pub use gate::{CliffordGate, LocalPauli};
pub use pauli::{Pauli, PauliString, Sign};
pub use tableau::{Measurement, RegisterLabels, StabilizerTableau};

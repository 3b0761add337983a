//! Log-average purity of all-to-all Haar random circuits.
//!
//! Averaging two copies of the circuit over Haar-random gates and random
//! qubit permutations confines the two-copy state to the span of the `n + 1`
//! operators `|S⟩`, the normalised symmetric sums of products of `𝓘/4` and
//! `𝓢/2` with exactly `S` swap factors. Gate layers and noise layers then act
//! as column-stochastic `(n+1)×(n+1)` transfer matrices on the coefficient
//! vector, and purities are read off with `Tr 𝕊|S⟩ = 2^{2S-n}`.

mod logspace;
mod purity;
mod transfer;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use logspace::{log_sum_exp, pairwise_sum, LnFactorial};
pub use purity::{
    initial_vectors, k_for_rate, log_average_purity, log_average_purity_profile, purity_sweep,
    PurityPoint,
};
pub use transfer::{gate_transfer_matrix, noise_transfer_matrix, TransferMatrix};

/// Tolerance on the coefficient sum of a moment vector.
pub const TRACE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFamily {
    Depolarizing,
    AmplitudeDamping,
}

impl NoiseFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseFamily::Depolarizing => "depolarizing",
            NoiseFamily::AmplitudeDamping => "amplitude_damping",
        }
    }
}

impl std::fmt::Display for NoiseFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NoiseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarizing" => Ok(NoiseFamily::Depolarizing),
            "amplitude_damping" => Ok(NoiseFamily::AmplitudeDamping),
            other => Err(Error::input(format!("unknown noise family {other:?}"))),
        }
    }
}

/// A single-qubit noise channel followed by a Haar-random single-qubit gate
/// acts on `(𝓘/4, 𝓢/2)` as `[[1-δ, γ], [δ, 1-γ]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub family: NoiseFamily,
    pub p: f64,
    /// Probability weight of `𝓘 → 𝓢`.
    pub delta: f64,
    /// Probability weight of `𝓢 → 𝓘`.
    pub gamma: f64,
}

impl NoiseParams {
    pub fn new(family: NoiseFamily, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::input(format!("noise strength {p} outside [0, 1]")));
        }
        let (delta, gamma) = match family {
            NoiseFamily::Depolarizing => {
                let keep = 1.0 - 4.0 * p / 3.0;
                (0.0, 1.0 - keep * keep)
            }
            NoiseFamily::AmplitudeDamping => (p * p / 3.0, 2.0 / 3.0 * (2.0 * p - p * p)),
        };
        Ok(Self {
            family,
            p,
            delta,
            gamma,
        })
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::new(NoiseFamily::Depolarizing, p)
    }

    pub fn amplitude_damping(p: f64) -> Result<Self> {
        Self::new(NoiseFamily::AmplitudeDamping, p)
    }
}

/// Coefficients of a permutation-symmetric two-copy operator in the `|S⟩`
/// basis, `S = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    n: usize,
    coeffs: Vec<f64>,
}

impl MomentVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::input("moment vector needs at least one entry"));
        }
        Ok(Self {
            n: coeffs.len() - 1,
            coeffs,
        })
    }

    /// Unit mass on swap weight `s`.
    pub fn basis(n: usize, s: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[s] = 1.0;
        Self { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.coeffs)
    }

    /// `log2 Tr(𝕊 · v) = log2 Σ_S v_S 2^{2S-n}`.
    ///
    /// Non-positive coefficients (round-off around exact zeros) are
    /// dropped; if nothing positive is left the purity has underflowed.
    pub fn log2_swap_trace(&self) -> Result<f64> {
        let ln2 = std::f64::consts::LN_2;
        let terms: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .map(|(s, &c)| c.ln() + (2.0 * s as f64 - self.n as f64) * ln2)
            .collect();
        let ln = log_sum_exp(&terms);
        if !ln.is_finite() {
            return Err(Error::Numerical(format!(
                "swap trace of a weight-{} moment vector is not positive (coefficient sum {})",
                self.n,
                self.total()
            )));
        }
        Ok(ln / ln2)
    }
}

use serde::{Deserialize, Serialize};

use super::logspace::LnFactorial;
use super::transfer::{gate_transfer_matrix, noise_transfer_matrix};
use super::{MomentVector, NoiseFamily, NoiseParams};
use crate::error::{Error, Result};

/// Two-copy states after the (noise-free) layer of single-qubit Haar gates
/// and a random permutation, for the `𝓘/4` and `𝓢/2` reference inputs.
///
/// Each ancilla in `|0⟩⟨0|^{⊗2}` twirls to `𝓘/6 + 𝓢/6 = (2/3)(𝓘/4) + (1/3)(𝓢/2)`,
/// giving a binomial profile over the `n - k` ancillas; the `𝓢/2` input
/// shifts it by `k`.
pub fn initial_vectors(n: usize, k: usize) -> Result<(MomentVector, MomentVector)> {
    if k == 0 || k > n {
        return Err(Error::input(format!("need n >= k >= 1, got n = {n}, k = {k}")));
    }
    let anc = n - k;
    let lf = LnFactorial::new(anc);
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3f64.ln();
    let mut v_i = vec![0.0; n + 1];
    let mut v_s = vec![0.0; n + 1];
    for s in 0..=anc {
        let c = (lf.ln_binomial(anc, s) + (anc - s) as f64 * ln2 - anc as f64 * ln3).exp();
        v_i[s] = c;
        v_s[s + k] = c;
    }
    Ok((MomentVector::new(v_i)?, MomentVector::new(v_s)?))
}

fn check_args(n: usize, k: usize) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::input(format!("all-to-all layers need even n >= 2, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::input(format!("need n >= k >= 1, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Log-average purity `I_p` in bits after `d` rounds of [gate layer, noise
/// layer]:
///
/// `I_p = -log2 Tr 𝕊 v_I + log2 Tr 𝕊 v_S - k`.
pub fn log_average_purity(n: usize, k: usize, d: usize, noise: &NoiseParams) -> Result<f64> {
    let profile = log_average_purity_profile(n, k, d, noise)?;
    Ok(profile[d])
}

/// `I_p` for every depth `0..=max_depth` from a single evolution.
pub fn log_average_purity_profile(
    n: usize,
    k: usize,
    max_depth: usize,
    noise: &NoiseParams,
) -> Result<Vec<f64>> {
    check_args(n, k)?;
    let gates = gate_transfer_matrix(n)?;
    let noise_m = noise_transfer_matrix(n, noise)?;
    let (mut v_i, mut v_s) = initial_vectors(n, k)?;
    let mut out = Vec::with_capacity(max_depth + 1);
    let readout = |v_i: &MomentVector, v_s: &MomentVector| -> Result<f64> {
        let t_i = v_i.log2_swap_trace()?;
        let t_s = v_s.log2_swap_trace()?;
        Ok(-t_i + t_s - k as f64)
    };
    out.push(readout(&v_i, &v_s)?);
    for _ in 0..max_depth {
        v_i = noise_m.apply(&gates.apply(&v_i));
        v_s = noise_m.apply(&gates.apply(&v_s));
        out.push(readout(&v_i, &v_s)?);
    }
    Ok(out)
}

/// `k = round(r·n)`, at least 1.
pub fn k_for_rate(n: usize, rate: f64) -> usize {
    ((rate * n as f64).round() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurityPoint {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub ip: f64,
}

impl PurityPoint {
    pub fn ip_per_k(&self) -> f64 {
        self.ip / self.k as f64
    }
}

/// Deterministic table of `I_p` over `n_list × p_grid` at depth `d`, with
/// `k = round(rate · n)`. Rows are ordered by `n`, then `p`.
pub fn purity_sweep(
    n_list: &[usize],
    rate: f64,
    d: usize,
    family: NoiseFamily,
    p_grid: &[f64],
) -> Result<Vec<PurityPoint>> {
    use rayon::prelude::*;
    let cells: Vec<(usize, f64)> = n_list
        .iter()
        .flat_map(|&n| p_grid.iter().map(move |&p| (n, p)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, p)| {
            let k = k_for_rate(n, rate);
            let noise = NoiseParams::new(family, p)?;
            let ip = log_average_purity(n, k, d, &noise)?;
            Ok(PurityPoint { n, k, d, p, ip })
        })
        .collect()
}

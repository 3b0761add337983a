//! Worst-case coherent-information bound for circuits with interspersed
//! depolarizing noise, and the depth/rate thresholds it implies.
//!
//! For any circuit on `n` qubits with `d` layers of depolarizing noise of
//! strength `p` on every qubit, encoding `k` qubits,
//!
//! ```text
//! I_c <= (1 - p)^d (n + k) - k <= e^{-pd} (n + k) - k
//! ```
//!
//! The exponential form is the default; the power form is the tighter
//! intermediate step. All logarithms here are natural.
//!
//! Rate threshold: setting `d = 1` in the exponential form shows that
//! `I_c >= 0` needs `r < 1 / (e^p - 1)`. Some statements of the result quote
//! `(2e^p - 1)^{-1}` instead; the value returned by
//! [`max_recoverable_rate`] is the one that follows from the bound itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which closed form of the bound to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundForm {
    /// `e^{-pd}(n + k) - k`.
    #[default]
    Exponential,
    /// `(1 - p)^d (n + k) - k`.
    Sharp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub d: usize,
}

impl BoundQuery {
    pub fn new(n: usize, k: usize, p: f64, d: usize) -> Result<Self> {
        let q = Self { n, k, p, d };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::input(format!(
                "need n >= k >= 1, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::input(format!("p = {} outside [0, 1]", self.p)));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Upper bound on the coherent information in bits.
pub fn coherent_info_upper_bound(q: &BoundQuery, form: BoundForm) -> Result<f64> {
    q.validate()?;
    let contraction = match form {
        BoundForm::Exponential => (-q.p * q.d as f64).exp(),
        BoundForm::Sharp => (1.0 - q.p).powi(q.d as i32),
    };
    Ok(contraction * (q.n + q.k) as f64 - q.k as f64)
}

/// A threshold that may be infinite when the noise vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Threshold {
    Finite(f64),
    /// `p = 0`: no finite threshold exists.
    Unbounded,
}

impl Threshold {
    pub fn value(self) -> f64 {
        match self {
            Threshold::Finite(v) => v,
            Threshold::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Threshold::Unbounded)
    }
}

/// Depth beyond which the bound is negative: `ln(1 + 1/r) / p`.
pub fn critical_depth(p: f64, r: f64) -> Result<Threshold> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::input(format!("rate must be positive, got {r}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("p = {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(Threshold::Unbounded);
    }
    Ok(Threshold::Finite((1.0 / r).ln_1p() / p))
}

/// Largest rate for which a single noisy layer can leave `I_c >= 0`:
/// `1 / (e^p - 1)`.
pub fn max_recoverable_rate(p: f64) -> Result<Threshold> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("p = {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(Threshold::Unbounded);
    }
    Ok(Threshold::Finite(1.0 / p.exp_m1()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(n: usize, k: usize, p: f64, d: usize) -> f64 {
        coherent_info_upper_bound(&BoundQuery::new(n, k, p, d).unwrap(), BoundForm::Exponential)
            .unwrap()
    }

    #[test]
    fn direct_values() {
        assert_eq!(bound(400, 50, 0.3, 0), 400.0);
        let v = bound(400, 50, 0.05, 12);
        assert!((v - ((-0.6f64).exp() * 450.0 - 50.0)).abs() < 1e-12);
        assert!((v - 196.97).abs() < 0.01);
    }

    #[test]
    fn root_at_critical_depth() {
        // pd = ln((n+k)/k) with n = 8k
        let (n, k) = (40usize, 5usize);
        let p = 0.05;
        let d = critical_depth(p, k as f64 / n as f64).unwrap().value();
        let v = (-p * d).exp() * (n + k) as f64 - k as f64;
        assert!(v.abs() < 1e-12);
        assert!((critical_depth(0.05, 0.125).unwrap().value() - 20.0 * 9f64.ln()).abs() < 1e-12);
        assert!((critical_depth(0.05, 0.125).unwrap().value() - 43.94).abs() < 0.01);
    }

    #[test]
    fn limits_and_sentinels() {
        assert!(critical_depth(0.0, 0.125).unwrap().is_unbounded());
        assert!(critical_depth(0.1, 1e300).unwrap().value() < 1e-290);
        assert!(critical_depth(0.1, 0.0).is_err());
        assert!(max_recoverable_rate(0.0).unwrap().is_unbounded());
        assert!((max_recoverable_rate(2f64.ln()).unwrap().value() - 1.0).abs() < 1e-12);
        assert!((max_recoverable_rate(0.1).unwrap().value() - 9.508).abs() < 1e-3);
    }

    #[test]
    fn rate_above_threshold_gives_negative_single_layer_bound() {
        let p = 0.1;
        let r_max = max_recoverable_rate(p).unwrap().value();
        // bound at d = 1 divided by n, for r slightly above the threshold
        let r = r_max * 1.001;
        assert!((-p).exp() * (1.0 + r) - r < 0.0);
    }

    #[test]
    fn sharp_form_is_tighter() {
        let q = BoundQuery::new(64, 8, 0.07, 9).unwrap();
        let e = coherent_info_upper_bound(&q, BoundForm::Exponential).unwrap();
        let s = coherent_info_upper_bound(&q, BoundForm::Sharp).unwrap();
        assert!(s <= e);
    }

    #[test]
    fn zero_noise_bound_is_n() {
        for d in [0, 1, 7, 100] {
            assert_eq!(bound(16, 2, 0.0, d), 16.0);
        }
    }

    #[test]
    fn doubly_exponential_ancilla_rate_escapes_bound() {
        // r = 2^{-d}: ln(1 + 2^d) >= d ln 2, so the critical depth is at least
        // d ln 2 / p, which exceeds d whenever p < ln 2.
        for d in 1..20 {
            let r = 2f64.powi(-(d as i32));
            for p in [0.01, 0.1, 0.5, 0.69] {
                let dc = critical_depth(p, r).unwrap().value();
                assert!(dc >= d as f64 * 2f64.ln() / p - 1e-9);
                assert!(dc > d as f64);
            }
        }
    }
}

use super::logspace::{ln_pow, pairwise_sum, LnFactorial};
use super::{MomentVector, NoiseParams};
use crate::error::{Error, Result};

/// `(n+1)×(n+1)` column-stochastic matrix; column = input swap weight `S`,
/// row = output weight `S'`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl TransferMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; (n + 1) * (n + 1)];
        for s in 0..=n {
            entries[s * (n + 1) + s] = 1.0;
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * (self.n + 1) + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..=self.n).map(|r| self.get(r, col)).collect()
    }

    /// Largest deviation of a column sum from 1.
    pub fn max_column_defect(&self) -> f64 {
        (0..=self.n)
            .map(|c| (pairwise_sum(&self.column(c)) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn apply(&self, v: &MomentVector) -> MomentVector {
        assert_eq!(v.n(), self.n, "moment vector size mismatch");
        let w = self.n + 1;
        let coeffs = (0..w)
            .map(|r| {
                let terms: Vec<f64> = (0..w).map(|c| self.entries[r * w + c] * v.coeffs()[c]).collect();
                pairwise_sum(&terms)
            })
            .collect();
        MomentVector::new(coeffs).expect("non-empty")
    }

    fn from_term_lists(n: usize, terms: Vec<Vec<f64>>) -> Self {
        let entries = terms
            .iter()
            .map(|ln_terms| {
                let vals: Vec<f64> = ln_terms.iter().map(|t| t.exp()).collect();
                pairwise_sum(&vals)
            })
            .collect();
        Self { n, entries }
    }
}

/// Transfer matrix of one layer of Haar two-qubit gates on a perfect matching
/// followed by a random permutation.
///
/// A configuration of weight `S` splits the `n/2` gates into `n_0, n_1, n_2`
/// gates seeing 0, 1 or 2 swap factors (`S = n_1 + 2 n_2`); there are
/// `2^{n_1} (n/2; n_0, n_1, n_2)` such configurations out of `C(n, S)`. A gate
/// seeing one swap outputs 0 swaps with weight 4/5 and 2 swaps with weight 1/5,
/// so the output weight is `2b + 2n_2` where `b` of the `n_1` mixed gates
/// output two swaps.
pub fn gate_transfer_matrix(n: usize) -> Result<TransferMatrix> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::input(format!("gate layer needs even n >= 2, got {n}")));
    }
    let lf = LnFactorial::new(n);
    let half = n / 2;
    let w = n + 1;
    let (ln_keep, ln_pair, ln2) = ((0.8f64).ln(), (0.2f64).ln(), std::f64::consts::LN_2);
    let mut terms = vec![Vec::new(); w * w];
    for s in 0..=n {
        let ln_norm = lf.ln_binomial(n, s);
        for n2 in 0..=s / 2 {
            let n1 = s - 2 * n2;
            if n1 + n2 > half {
                continue;
            }
            let n0 = half - n1 - n2;
            let ln_count = n1 as f64 * ln2 + lf.ln_multinomial(&[n0, n1, n2]) - ln_norm;
            for a in 0..=n1 {
                let b = n1 - a;
                let out = 2 * b + 2 * n2;
                let t = ln_count + lf.ln_binomial(n1, a) + a as f64 * ln_keep + b as f64 * ln_pair;
                terms[out * w + s].push(t);
            }
        }
    }
    Ok(TransferMatrix::from_term_lists(n, terms))
}

/// Transfer matrix of one layer of single-qubit noise on all `n` qubits.
///
/// `a` counts the `𝓢 → 𝓘` transitions; the remaining `S - a` swaps survive and
/// `S' - (S - a)` of the `n - S` identities turn into swaps.
pub fn noise_transfer_matrix(n: usize, noise: &NoiseParams) -> Result<TransferMatrix> {
    let (delta, gamma) = (noise.delta, noise.gamma);
    if !(0.0..=1.0).contains(&delta) || !(0.0..=1.0).contains(&gamma) {
        return Err(Error::input(format!(
            "noise transfer parameters out of range: delta = {delta}, gamma = {gamma}"
        )));
    }
    let lf = LnFactorial::new(n);
    let w = n + 1;
    let mut terms = vec![Vec::new(); w * w];
    for s in 0..=n {
        for sp in 0..=n {
            let lo = s.saturating_sub(sp);
            let hi = s.min(n - sp);
            for a in lo..=hi {
                let survive = s - a;
                let created = sp - survive;
                let t = lf.ln_binomial(s, a)
                    + lf.ln_binomial(n - s, created)
                    + ln_pow(delta, created)
                    + ln_pow(gamma, a)
                    + ln_pow(1.0 - delta, n - sp - a)
                    + ln_pow(1.0 - gamma, survive);
                if t > f64::NEG_INFINITY {
                    terms[sp * w + s].push(t);
                }
            }
        }
    }
    Ok(TransferMatrix::from_term_lists(n, terms))
}

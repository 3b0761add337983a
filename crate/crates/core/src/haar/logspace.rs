//! Log-domain combinatorics for the transfer-matrix builders.

/// `ln k!` for `k = 0..=max`, accumulated as a running sum of `ln i`.
#[derive(Clone, Debug)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        let mut acc = 0.0f64;
        table.push(0.0);
        for i in 1..=max {
            acc += (i as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    #[inline]
    pub fn ln_fact(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `ln C(n, k)`; `-inf` when `k > n`.
    #[inline]
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }

    /// `ln (n; parts...)` with `n = Σ parts`.
    pub fn ln_multinomial(&self, parts: &[usize]) -> f64 {
        let n: usize = parts.iter().sum();
        parts.iter().fold(self.table[n], |acc, &k| acc - self.table[k])
    }
}

/// `e * ln(base)` with `0^0 = 1`.
#[inline]
pub fn ln_pow(base: f64, e: usize) -> f64 {
    if e == 0 {
        0.0
    } else if base == 0.0 {
        f64::NEG_INFINITY
    } else {
        e as f64 * base.ln()
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `ln Σ exp(x_i)`; `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let shifted: Vec<f64> = xs.iter().map(|&x| (x - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

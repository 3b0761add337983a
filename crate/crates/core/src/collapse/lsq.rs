//! Weighted quadratic least squares in the collapse variable.

/// `(A, B, C)` and the weighted residual of the best `A + Bx + Cx²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct QuadFit {
    pub coeffs: [f64; 3],
    pub residual: f64,
}

/// Fits `y ≈ A + Bx + Cx²` minimising `Σ w (y - ŷ)²`.
///
/// `x` is rescaled to `[-1, 1]` before forming the normal equations, and the
/// coefficients are mapped back afterwards. Returns `None` when the design
/// matrix is (numerically) rank deficient.
pub(crate) fn weighted_quadratic(x: &[f64], y: &[f64], w: &[f64]) -> Option<QuadFit> {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for ((&xi, &yi), &wi) in x.iter().zip(y).zip(w) {
        let u = xi / scale;
        let row = [1.0, u, u * u];
        for i in 0..3 {
            atb[i] += wi * row[i] * yi;
            for j in 0..3 {
                ata[i][j] += wi * row[i] * row[j];
            }
        }
    }
    let sol = solve3(ata, atb)?;
    let coeffs = [sol[0], sol[1] / scale, sol[2] / (scale * scale)];
    let residual = x
        .iter()
        .zip(y)
        .zip(w)
        .map(|((&xi, &yi), &wi)| {
            let r = yi - (coeffs[0] + coeffs[1] * xi + coeffs[2] * xi * xi);
            wi * r * r
        })
        .sum();
    Some(QuadFit { coeffs, residual })
}

/// Gaussian elimination with partial pivoting; `None` if a pivot falls below
/// `1e-13` of the largest diagonal entry.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let norm = (0..3).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    if !(norm > 0.0) {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-13 * norm {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            for c in col..3 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut out = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|c| a[r][c] * out[c]).sum();
        out[r] = (b[r] - s) / a[r][r];
    }
    Some(out)
}

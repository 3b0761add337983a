//! Finite-size scaling collapse.
//!
//! Near a critical point `p*` the curves `y(n, p)` for different sizes are
//! assumed to collapse onto one function of `x = n^λ (p - p*)`, approximated
//! as `A + Bx + Cx²`. [`fit_collapse`] fits the five parameters on a window
//! around `p*`; [`crossing_estimate`] gives a starting point from pairwise
//! curve intersections; [`regress_pstar_vs_inverse_depth`] fits
//! `p* = slope / d + intercept` across depths.

mod lsq;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use lsq::weighted_quadratic;
use search::coordinate_descent;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub n: usize,
    pub p: f64,
    pub y: f64,
    /// Standard error of `y`; 0 for deterministic data.
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub p_star: f64,
    pub lambda: f64,
    /// Weighted sum of squared residuals over the window.
    pub residual: f64,
    /// `(p_lo, p_hi)`, centred on `p_star`.
    pub window: (f64, f64),
    pub n_points: usize,
}

impl FitResult {
    /// Collapse variable for one point.
    pub fn scaling_variable(&self, n: usize, p: f64) -> f64 {
        (n as f64).powf(self.lambda) * (p - self.p_star)
    }

    /// Fitted `A + Bx + Cx²` at collapse variable `x`.
    pub fn model(&self, x: f64) -> f64 {
        self.a + self.b * x + self.c * x * x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    /// `(d, p*)` inputs in the order given.
    pub points: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FitError {
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("need at least {need} distinct system sizes, got {got}")]
    TooFewSizes { got: usize, need: usize },
    #[error("window {center} ± {halfwidth} does not hold points on both sides of its centre")]
    OneSidedWindow { center: f64, halfwidth: f64 },
    #[error("degenerate design matrix: {0}")]
    Degenerate(String),
    #[error("window iteration did not reach a fixed point in {rounds} rounds")]
    NotConverged {
        rounds: usize,
        best: Option<Box<FitResult>>,
    },
    #[error("no bracketed crossing between curves of adjacent sizes")]
    NoCrossing,
    #[error("need ≥ 3 depths for a regression, got {got}")]
    TooFewDepths { got: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Half-width of the window around `p*`; `None` means
    /// `DEFAULT_WINDOW_FRACTION · init_p_star`.
    pub window_halfwidth: Option<f64>,
    /// Lower bound on the `σ` entering the weights `1/σ²`.
    pub sigma_floor: f64,
    pub lambda_bounds: (f64, f64),
    pub init_lambda: f64,
    pub max_rounds: usize,
    pub max_sweeps: usize,
}

/// Default window half-width as a fraction of the initial `p*`.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.1;

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            window_halfwidth: None,
            sigma_floor: 1e-4,
            lambda_bounds: (0.1, 2.0),
            init_lambda: 0.5,
            max_rounds: 20,
            max_sweeps: 500,
        }
    }
}

const MIN_POINTS: usize = 10;
const MIN_SIZES: usize = 3;

/// Fits the collapse ansatz on `|p - p*| <= window_halfwidth`, starting
/// from `init_p_star`, with default options otherwise.
pub fn fit_collapse(points: &[DataPoint], window_halfwidth: f64, init_p_star: f64) -> Result<FitResult, FitError> {
    let opts = FitOptions {
        window_halfwidth: Some(window_halfwidth),
        ..FitOptions::default()
    };
    fit_collapse_with(points, init_p_star, &opts)
}

struct Prepared {
    ln_n: Vec<f64>,
    p: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
    n: Vec<usize>,
}

impl Prepared {
    fn select(&self, center: f64, hw: f64) -> Vec<usize> {
        let slack = 1e-12 * hw;
        (0..self.p.len())
            .filter(|&i| (self.p[i] - center).abs() <= hw + slack)
            .collect()
    }

    fn check_window(&self, sel: &[usize], center: f64, hw: f64) -> Result<(), FitError> {
        if sel.len() < 4 {
            return Err(FitError::TooFewPoints { got: sel.len(), need: 4 });
        }
        let sizes = distinct_sizes(sel.iter().map(|&i| self.n[i]));
        if sizes < MIN_SIZES {
            return Err(FitError::TooFewSizes { got: sizes, need: MIN_SIZES });
        }
        let below = sel.iter().any(|&i| self.p[i] < center);
        let above = sel.iter().any(|&i| self.p[i] > center);
        if !(below && above) {
            return Err(FitError::OneSidedWindow { center, halfwidth: hw });
        }
        Ok(())
    }

    fn objective(&self, sel: &[usize], p_star: f64, lambda: f64, buf: &mut Buffers) -> Option<lsq::QuadFit> {
        buf.x.clear();
        buf.y.clear();
        buf.w.clear();
        for &i in sel {
            buf.x.push((lambda * self.ln_n[i]).exp() * (self.p[i] - p_star));
            buf.y.push(self.y[i]);
            buf.w.push(self.w[i]);
        }
        weighted_quadratic(&buf.x, &buf.y, &buf.w)
    }
}

#[derive(Default)]
struct Buffers {
    x: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

fn distinct_sizes(ns: impl Iterator<Item = usize>) -> usize {
    let mut v: Vec<usize> = ns.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Full-control variant of [`fit_collapse`].
///
/// For each starting `λ` (the configured one, then 0.25 and 1.0) the window
/// is re-centred on the fitted `p*` until the selected points stop
/// changing. If the selection instead cycles, the fit is redone once on the
/// points common to every set in the cycle. Among the results the smallest
/// residual wins, ties going to the smaller `p*`.
pub fn fit_collapse_with(points: &[DataPoint], init_p_star: f64, opts: &FitOptions) -> Result<FitResult, FitError> {
    if points.len() < MIN_POINTS {
        return Err(FitError::TooFewPoints { got: points.len(), need: MIN_POINTS });
    }
    for pt in points {
        if !pt.y.is_finite() || !pt.p.is_finite() || !(pt.sigma >= 0.0) || pt.n == 0 {
            return Err(FitError::InvalidData(format!("bad point {pt:?}")));
        }
    }
    let sizes = distinct_sizes(points.iter().map(|pt| pt.n));
    if sizes < MIN_SIZES {
        return Err(FitError::TooFewSizes { got: sizes, need: MIN_SIZES });
    }
    let hw = opts
        .window_halfwidth
        .unwrap_or(DEFAULT_WINDOW_FRACTION * init_p_star);
    if !(hw > 0.0) || !init_p_star.is_finite() {
        return Err(FitError::InvalidData(format!(
            "window half-width {hw} around {init_p_star} is not usable"
        )));
    }
    let (lam_lo, lam_hi) = opts.lambda_bounds;
    if !(lam_lo > 0.0 && lam_lo < lam_hi) {
        return Err(FitError::InvalidData(format!("bad λ bounds {:?}", opts.lambda_bounds)));
    }

    let prep = Prepared {
        ln_n: points.iter().map(|pt| (pt.n as f64).ln()).collect(),
        p: points.iter().map(|pt| pt.p).collect(),
        y: points.iter().map(|pt| pt.y).collect(),
        w: points
            .iter()
            .map(|pt| pt.sigma.max(opts.sigma_floor).powi(-2))
            .collect(),
        n: points.iter().map(|pt| pt.n).collect(),
    };
    let p_min = prep.p.iter().copied().fold(f64::INFINITY, f64::min);
    let p_max = prep.p.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let first = prep.select(init_p_star, hw);
    prep.check_window(&first, init_p_star, hw)?;

    let mut starts = vec![opts.init_lambda.clamp(lam_lo, lam_hi)];
    for l in [0.25, 1.0] {
        let l = f64::clamp(l, lam_lo, lam_hi);
        if !starts.contains(&l) {
            starts.push(l);
        }
    }

    let mut buf = Buffers::default();
    let mut fixed_points: Vec<FitResult> = Vec::new();
    let mut best_unconverged: Option<FitResult> = None;
    let mut last_error = None;

    let mut fit_on = |sel: &[usize], center: f64, lambda: f64| -> Result<FitResult, FitError> {
        let bounds = [
            ((center - hw).max(p_min), (center + hw).min(p_max)),
            (lam_lo, lam_hi),
        ];
        let mut f = |ps: f64, l: f64| match prep.objective(sel, ps, l, &mut buf) {
            Some(q) if q.residual.is_finite() => q.residual,
            _ => f64::INFINITY,
        };
        let min = coordinate_descent(&mut f, bounds, [center, lambda], opts.max_sweeps);
        let q = prep.objective(sel, min[0], min[1], &mut buf).ok_or_else(|| {
            FitError::Degenerate(format!("quadratic fit singular at p* = {}, λ = {}", min[0], min[1]))
        })?;
        Ok(FitResult {
            a: q.coeffs[0],
            b: q.coeffs[1],
            c: q.coeffs[2],
            p_star: min[0],
            lambda: min[1],
            residual: q.residual,
            window: (min[0] - hw, min[0] + hw),
            n_points: sel.len(),
        })
    };

    'starts: for &lam0 in &starts {
        let mut center = init_p_star;
        let mut lambda = lam0;
        let mut history = vec![first.clone()];
        for _ in 0..opts.max_rounds {
            let sel = history.last().expect("non-empty");
            let fit = match fit_on(sel, center, lambda) {
                Ok(f) => f,
                Err(e) => {
                    last_error = Some(e);
                    continue 'starts;
                }
            };
            center = fit.p_star;
            lambda = fit.lambda;
            let next = prep.select(center, hw);
            if &next == sel {
                fixed_points.push(fit);
                continue 'starts;
            }
            if let Some(pos) = history.iter().position(|h| *h == next) {
                // The recentred window cycles through the sets in
                // history[pos..]; settle on the points they all share.
                let mut common = history[pos].clone();
                for h in &history[pos + 1..] {
                    common.retain(|i| h.contains(i));
                }
                let res = prep
                    .check_window(&common, center, hw)
                    .and_then(|_| fit_on(&common, center, lambda));
                match res {
                    Ok(f) => fixed_points.push(f),
                    Err(e) => last_error = Some(e),
                }
                continue 'starts;
            }
            if let Err(e) = prep.check_window(&next, center, hw) {
                last_error = Some(e);
                continue 'starts;
            }
            if best_unconverged.as_ref().is_none_or(|b| fit.residual < b.residual) {
                best_unconverged = Some(fit);
            }
            history.push(next);
        }
    }

    let chosen = fixed_points.into_iter().reduce(|best, cand| {
        let tie = (cand.residual - best.residual).abs() <= 1e-12 * best.residual.abs().max(f64::MIN_POSITIVE);
        if (tie && cand.p_star < best.p_star) || (!tie && cand.residual < best.residual) {
            cand
        } else {
            best
        }
    });
    match (chosen, last_error) {
        (Some(fit), _) => Ok(fit),
        (None, Some(e)) if best_unconverged.is_none() => Err(e),
        (None, _) => Err(FitError::NotConverged {
            rounds: opts.max_rounds,
            best: best_unconverged.map(Box::new),
        }),
    }
}

/// `(x, y, n)` of every point inside the fit window, for overlay plots.
pub fn collapse_coordinates(points: &[DataPoint], fit: &FitResult) -> Vec<(f64, f64, usize)> {
    points
        .iter()
        .filter(|pt| pt.p >= fit.window.0 && pt.p <= fit.window.1)
        .map(|pt| (fit.scaling_variable(pt.n, pt.p), pt.y, pt.n))
        .collect()
}

/// Median of the crossings of adjacent-size curves.
///
/// For each pair of consecutive sizes the difference of their curves is
/// evaluated on the shared `p` values; every sign change is located by
/// linear interpolation (an exact zero counts as a crossing at that `p`).
pub fn crossing_estimate(points: &[DataPoint]) -> Result<f64, FitError> {
    let mut sizes: Vec<usize> = points.iter().map(|pt| pt.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(FitError::TooFewSizes { got: sizes.len(), need: 2 });
    }
    let curve = |n: usize| {
        let mut c: Vec<(f64, f64)> = points.iter().filter(|pt| pt.n == n).map(|pt| (pt.p, pt.y)).collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    };
    let mut crossings = Vec::new();
    for pair in sizes.windows(2) {
        let (lo, hi) = (curve(pair[0]), curve(pair[1]));
        if lo.len() < 4 || hi.len() < 4 {
            return Err(FitError::TooFewPoints { got: lo.len().min(hi.len()), need: 4 });
        }
        let diff: Vec<(f64, f64)> = lo
            .iter()
            .filter_map(|&(p, ya)| {
                hi.iter().find(|&&(q, _)| q == p).map(|&(_, yb)| (p, yb - ya))
            })
            .collect();
        for (i, &(p, d)) in diff.iter().enumerate() {
            if d == 0.0 {
                crossings.push(p);
                continue;
            }
            if let Some(&(q, e)) = diff.get(i + 1) {
                if d * e < 0.0 {
                    crossings.push(p + (q - p) * d / (d - e));
                }
            }
        }
    }
    if crossings.is_empty() {
        return Err(FitError::NoCrossing);
    }
    crossings.sort_by(f64::total_cmp);
    let mid = crossings.len() / 2;
    Ok(if crossings.len() % 2 == 1 {
        crossings[mid]
    } else {
        0.5 * (crossings[mid - 1] + crossings[mid])
    })
}

/// Ordinary least squares of `p*` against `1/d`.
pub fn regress_inverse_depth(points: &[(usize, f64)]) -> Result<RegressionResult, FitError> {
    let depths = distinct_sizes(points.iter().map(|&(d, _)| d));
    if depths < 3 {
        return Err(FitError::TooFewDepths { got: depths });
    }
    if points.iter().any(|&(d, p)| d == 0 || !p.is_finite()) {
        return Err(FitError::InvalidData("depths must be positive and p* finite".into()));
    }
    let len = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(d, _)| 1.0 / d as f64).collect();
    let mx = xs.iter().sum::<f64>() / len;
    let my = points.iter().map(|&(_, p)| p).sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(points).map(|(x, &(_, p))| (x - mx) * (p - my)).sum();
    let slope = sxy / sxx;
    Ok(RegressionResult {
        slope,
        intercept: my - slope * mx,
        points: points.to_vec(),
    })
}

/// [`regress_inverse_depth`] on the `p*` of per-depth fits.
pub fn regress_pstar_vs_inverse_depth(fits: &[(usize, FitResult)]) -> Result<RegressionResult, FitError> {
    let pts: Vec<(usize, f64)> = fits.iter().map(|(d, f)| (*d, f.p_star)).collect();
    regress_inverse_depth(&pts)
}

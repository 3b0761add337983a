//! Bounded derivative-free minimisation used by the collapse fit.

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const SCAN_POINTS: usize = 33;

/// Minimises `f` on `[lo, hi]`: a uniform scan locates the basin, then a
/// golden-section search refines it. Never returns a point worse than
/// `current`.
pub(crate) fn line_minimize(f: &mut impl FnMut(f64) -> f64, lo: f64, hi: f64, current: f64) -> (f64, f64) {
    let mut best = (current, f(current));
    if hi <= lo {
        return best;
    }
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let mut scan_best = (lo, f64::INFINITY);
    for i in 0..SCAN_POINTS {
        let x = if i + 1 == SCAN_POINTS { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v < scan_best.1 {
            scan_best = (x, v);
        }
    }
    let centre = if scan_best.1 < best.1 { scan_best.0 } else { best.0 };
    let (mut a, mut b) = ((centre - step).max(lo), (centre + step).min(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let tol = 1e-14 * (hi - lo).max(hi.abs().max(lo.abs()) * 1e-3);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for cand in [scan_best, (c, fc), (d, fd)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Alternating line searches over a box until neither coordinate moves by
/// more than `1e-13` of its range.
pub(crate) fn coordinate_descent(
    f: &mut impl FnMut(f64, f64) -> f64,
    bounds: [(f64, f64); 2],
    start: [f64; 2],
    max_sweeps: usize,
) -> [f64; 2] {
    let mut x = [
        start[0].clamp(bounds[0].0, bounds[0].1),
        start[1].clamp(bounds[1].0, bounds[1].1),
    ];
    let mut value = f(x[0], x[1]);
    for _ in 0..max_sweeps {
        let prev = x;
        let prev_value = value;
        let (p, _) = line_minimize(&mut |p| f(p, x[1]), bounds[0].0, bounds[0].1, x[0]);
        x[0] = p;
        let (l, v) = line_minimize(&mut |l| f(x[0], l), bounds[1].0, bounds[1].1, x[1]);
        x[1] = l;
        value = v;
        let still = (0..2).all(|i| (x[i] - prev[i]).abs() <= 1e-13 * (bounds[i].1 - bounds[i].0));
        if still || value == prev_value && value == 0.0 {
            break;
        }
    }
    x
}

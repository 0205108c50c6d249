//! Golden-section maximization and frequency suprema of bump sums.

use serde::Serialize;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` on `[a, b]` assuming it is unimodal there. Returns the best
/// point seen, endpoints included, and the final bracket width.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> (f64, f64, f64) {
    let (mut lo, mut hi) = (a, b);
    let fa = f(a);
    let fb = f(b);
    let (mut best_x, mut best_f) = if fa >= fb { (a, fa) } else { (b, fb) };

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let scale = a.abs().max(b.abs()).max(1.0);
    for _ in 0..200 {
        if hi - lo <= rel_tol * scale {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    (best_x, best_f, hi - lo)
}

/// Outcome of a supremum search over the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSup {
    pub argmax: f64,
    pub value: f64,
    /// Number of distinct candidate abscissae evaluated.
    pub candidates: usize,
    /// Number of gaps between candidates that were golden-section refined.
    pub refined: usize,
    /// Widest final bracket among refined gaps.
    pub residual: f64,
}

/// Supremum over ω ∈ ℝ of a function that is a finite sum of bumps centred at
/// the given candidate abscissae and decaying away from them.
///
/// Every candidate is evaluated; each gap between adjacent candidates is then
/// refined by golden section unless `gap_bound(a, b)` shows it cannot beat the
/// current best by more than the relative tolerance.
pub fn sup_over_line<F, B>(f: F, candidates: &[f64], gap_bound: B, rel_tol: f64) -> LineSup
where
    F: Fn(f64) -> f64,
    B: Fn(f64, f64) -> f64,
{
    let mut pts: Vec<f64> = candidates
        .iter()
        .copied()
        .filter(|x| x.is_finite())
        .collect();
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let mut best = LineSup {
        argmax: pts[0],
        value: f64::NEG_INFINITY,
        candidates: pts.len(),
        refined: 0,
        residual: 0.0,
    };
    for &x in &pts {
        let v = f(x);
        if v > best.value {
            best.value = v;
            best.argmax = x;
        }
    }
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if gap_bound(a, b) <= best.value * (1.0 + rel_tol) {
            continue;
        }
        let (x, v, width) = golden_max(&f, a, b, rel_tol);
        best.refined += 1;
        best.residual = best.residual.max(width);
        if v > best.value {
            best.value = v;
            best.argmax = x;
        }
    }
    best
}

/// Plain maximum of `f` on a uniform grid of `points` abscissae in `[lo, hi]`.
pub fn grid_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..points {
        let x = if points == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (points - 1) as f64
        };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

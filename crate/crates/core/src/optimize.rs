//! One-dimensional numerics: golden-section search, scan-and-refine
//! minimization, bracketed bisection and real cubic roots.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[lo, hi]`. Returns `(x, f(x))` for
/// the best point evaluated. Assumes `f` is unimodal on the bracket.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    iterations: usize,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 <= f2 {
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
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Settings for [`scan_minimize`].
#[derive(Debug, Clone, Copy)]
pub struct ScanRefine {
    pub samples: usize,
    pub iterations: usize,
    /// How many of the best local minima of the coarse scan get refined.
    pub candidates: usize,
}

impl Default for ScanRefine {
    fn default() -> Self {
        ScanRefine {
            samples: 512,
            iterations: 80,
            candidates: 4,
        }
    }
}

/// Global minimization on `[lo, hi]` (or a full period when `periodic`) by a
/// uniform coarse scan followed by golden-section refinement of the most
/// promising local minima.
pub fn scan_minimize<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    periodic: bool,
    cfg: ScanRefine,
) -> (f64, f64) {
    let n = cfg.samples.max(3);
    let step = if periodic {
        (hi - lo) / n as f64
    } else {
        (hi - lo) / (n - 1) as f64
    };
    let xs: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut minima: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = if k > 0 {
                Some(vals[k - 1])
            } else if periodic {
                Some(vals[n - 1])
            } else {
                None
            };
            let next = if k + 1 < n {
                Some(vals[k + 1])
            } else if periodic {
                Some(vals[0])
            } else {
                None
            };
            prev.is_none_or(|p| vals[k] <= p) && next.is_none_or(|q| vals[k] <= q)
        })
        .collect();
    if minima.is_empty() {
        minima = (0..n).collect();
    }
    minima.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    minima.truncate(cfg.candidates.max(1));

    let mut best = (xs[minima[0]], vals[minima[0]]);
    for &k in &minima {
        let (a, b) = if periodic {
            (xs[k] - step, xs[k] + step)
        } else {
            ((xs[k] - step).max(lo), (xs[k] + step).min(hi))
        };
        let cand = golden_section(&mut f, a, b, cfg.iterations);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Bisection for a sign change of `g` on `[lo, hi]`, where `g(lo) < 0 <= g(hi)`.
/// Returns the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut g: F,
    mut lo: f64,
    mut hi: f64,
    steps: usize,
) -> (f64, f64) {
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Real roots of `a s^3 + b s^2 + c s + d` with `a != 0`, each polished by a
/// few Newton steps.
pub fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    assert!(a != 0.0, "leading coefficient must be nonzero");
    let (b, c, d) = (b / a, c / a, d / a);
    // depressed cubic t^3 + p t + q with s = t - b/3
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if disc > 0.0 {
        let sq = disc.sqrt();
        vec![(-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt() - shift]
    } else if p == 0.0 {
        vec![-shift]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - std::f64::consts::TAU * k as f64 / 3.0).cos() - shift)
            .collect()
    };
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let val = ((*r + b) * *r + c) * *r + d;
            let der = (3.0 * *r + 2.0 * b) * *r + c;
            if der == 0.0 {
                break;
            }
            let next = *r - val / der;
            if !next.is_finite() {
                break;
            }
            *r = next;
        }
    }
    roots
}

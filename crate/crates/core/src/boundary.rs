//! Minimization over the boundary of a domain.
//!
//! This is the engine behind the suprema in the Cassinian and M-relative
//! metrics: both minimize a function of the two distances `|x - p|` and
//! `|p - y|` over boundary points `p`. Such an objective only depends on where
//! `p` sits relative to `x` and `y`, which lets every variant reduce to a
//! one-dimensional search:
//!
//! * sphere: the great circle in `span(x, y)`;
//! * hyperplane: the segment between the feet of `x` and `y`;
//! * sampled polyline: its arc-length parameter.
//!
//! The reductions require the objective to be nondecreasing in each distance,
//! which holds for the product and the sum (and is assumed for custom `M`).

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{Domain, Point, Polyline};
use crate::optimize::{cubic_real_roots, scan_minimize, ScanRefine};

/// Function of `(|x - p|, |p - y|)` minimized over boundary points `p`.
#[derive(Clone, Copy)]
pub enum Objective<'a> {
    /// `|x - p| * |p - y|`
    Product,
    Custom(&'a (dyn Fn(f64, f64) -> f64 + Sync)),
}

impl Objective<'_> {
    #[inline]
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        match self {
            Objective::Product => a * b,
            Objective::Custom(m) => m(a, b),
        }
    }
}

impl std::fmt::Debug for Objective<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Product => write!(f, "Product"),
            Objective::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryMinimum {
    pub point: Point,
    pub value: f64,
}

/// Minimize `objective(|x - p|, |p - y|)` over the finite boundary points `p`
/// of `domain`, with the default scan/refine settings.
pub fn boundary_minimize(
    domain: &Domain,
    x: &Point,
    y: &Point,
    objective: Objective<'_>,
) -> Result<BoundaryMinimum> {
    boundary_minimize_with(domain, x, y, objective, ScanRefine::default())
}

pub fn boundary_minimize_with(
    domain: &Domain,
    x: &Point,
    y: &Point,
    objective: Objective<'_>,
    cfg: ScanRefine,
) -> Result<BoundaryMinimum> {
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    Ok(minimize_unchecked(domain, x, y, objective, cfg))
}

pub(crate) fn minimize_unchecked(
    domain: &Domain,
    x: &Point,
    y: &Point,
    objective: Objective<'_>,
    cfg: ScanRefine,
) -> BoundaryMinimum {
    match domain {
        Domain::PuncturedSpace { puncture } => at_point(puncture, x, y, objective),
        Domain::UnitBall { .. } => sphere_minimize(x, y, objective, cfg),
        Domain::PuncturedUnitBall { puncture } => {
            let s = sphere_minimize(x, y, objective, cfg);
            let p = at_point(puncture, x, y, objective);
            if p.value < s.value {
                p
            } else {
                s
            }
        }
        Domain::HalfSpace { .. } => hyperplane_minimize(x, y, objective, cfg),
        Domain::SampledBoundary(poly) => polyline_minimize(poly, x, y, objective, cfg),
    }
}

fn at_point(p: &Point, x: &Point, y: &Point, objective: Objective<'_>) -> BoundaryMinimum {
    BoundaryMinimum {
        point: p.clone(),
        value: objective.eval(x.dist(p), p.dist(y)),
    }
}

/// Orthonormal pair spanning a plane that contains `x` and `y`.
fn plane_basis(x: &Point, y: &Point) -> (Point, Point) {
    let dim = x.dim();
    let e1 = x
        .normalized()
        .or_else(|| y.normalized())
        .unwrap_or_else(|| Point::axis(dim, 0, 1.0));
    let mut candidates = vec![y.clone(), x.clone()];
    candidates.extend((0..dim).map(|i| Point::axis(dim, i, 1.0)));
    for v in candidates {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v.offset(&e1, -v.dot(&e1));
        w = w.offset(&e1, -w.dot(&e1));
        if w.norm() > 1e-12 * scale {
            return (e1, w.normalized().unwrap());
        }
    }
    unreachable!("R^n with n >= 2 always has a direction orthogonal to e1")
}

fn sphere_minimize(
    x: &Point,
    y: &Point,
    objective: Objective<'_>,
    cfg: ScanRefine,
) -> BoundaryMinimum {
    let (e1, e2) = plane_basis(x, y);
    let (x1, x2, y1, y2) = (x.dot(&e1), x.dot(&e2), y.dot(&e1), y.dot(&e2));
    let (ax, ay) = (x.norm_sq() + 1.0, y.norm_sq() + 1.0);
    let g = |th: f64| {
        let (s, c) = th.sin_cos();
        let dx2 = (ax - 2.0 * (x1 * c + x2 * s)).max(0.0);
        let dy2 = (ay - 2.0 * (y1 * c + y2 * s)).max(0.0);
        match objective {
            Objective::Product => (dx2 * dy2).sqrt(),
            Objective::Custom(m) => m(dx2.sqrt(), dy2.sqrt()),
        }
    };
    let (th, _) = scan_minimize(g, 0.0, std::f64::consts::TAU, true, cfg);
    let (s, c) = th.sin_cos();
    let point = e1.scale(c).offset(&e2, s);
    at_point(&point, x, y, objective)
}

fn hyperplane_minimize(
    x: &Point,
    y: &Point,
    objective: Objective<'_>,
    cfg: ScanRefine,
) -> BoundaryMinimum {
    let n = x.dim();
    let foot = |p: &Point| {
        let mut c = p.coords().to_vec();
        c[n - 1] = 0.0;
        Point::from_vec_unchecked(c)
    };
    let (fx, fy) = (foot(x), foot(y));
    let (h1, h2) = (x.last(), y.last());
    let d = fx.dist(&fy);
    if d == 0.0 {
        return at_point(&fx, x, y, objective);
    }
    let dir = fy.sub(&fx).scale(1.0 / d);
    let g = |s: f64| objective.eval(s.hypot(h1), (d - s).hypot(h2));
    let s = match objective {
        Objective::Product => {
            // stationary points of (s^2 + h1^2)((d - s)^2 + h2^2)
            let mut cands = vec![0.0, d];
            cands.extend(
                cubic_real_roots(2.0, -3.0 * d, d * d + h1 * h1 + h2 * h2, -d * h1 * h1)
                    .into_iter()
                    .filter(|r| r.is_finite())
                    .map(|r| r.clamp(0.0, d)),
            );
            cands
                .into_iter()
                .min_by(|a, b| g(*a).total_cmp(&g(*b)))
                .unwrap()
        }
        Objective::Custom(_) => scan_minimize(g, 0.0, d, false, cfg).0,
    };
    at_point(&fx.offset(&dir, s), x, y, objective)
}

fn polyline_minimize(
    poly: &Polyline,
    x: &Point,
    y: &Point,
    objective: Objective<'_>,
    cfg: ScanRefine,
) -> BoundaryMinimum {
    let len = poly.length();
    let g = |s: f64| {
        let p = poly.point_at(s);
        objective.eval(x.dist(&p), p.dist(y))
    };
    let cfg = ScanRefine {
        samples: cfg.samples.max(4 * poly.segment_count()),
        ..cfg
    };
    let (s, _) = scan_minimize(g, 0.0, len, poly.is_closed(), cfg);
    let s = if poly.is_closed() {
        s.rem_euclid(len)
    } else {
        s
    };
    let mut best = at_point(&poly.point_at(s), x, y, objective);
    for v in poly.samples() {
        let cand = at_point(v, x, y, objective);
        if cand.value < best.value {
            best = cand;
        }
    }
    best
}

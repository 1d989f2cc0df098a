use serde::Serialize;

use crate::balls::{trace_2d, BallSpec, BallTrace, RayOutcome, TraceOptions};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Tolerance on the normalized cross product of consecutive polygon edges.
pub const CROSS_TOL: f64 = 1e-9;

/// Minimal excess `d(center, midpoint) - R` for a convexity witness to count.
const WITNESS_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub y1: Point,
    pub y2: Point,
    pub midpoint: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    pub strictly_convex: bool,
    pub starlike: bool,
    pub witness: Option<Witness>,
    /// Largest negative normalized cross product, as a positive number.
    pub max_cross_defect: f64,
}

pub fn check_convexity_2d(ball: &BallSpec, rays: usize) -> Result<ConvexityReport> {
    check_convexity_2d_with(ball, &TraceOptions::with_rays(rays))
}

/// Convexity of a traced planar ball. A concave turn of the traced polygon
/// only counts once a chord midpoint outside the ball confirms it.
pub fn check_convexity_2d_with(ball: &BallSpec, opts: &TraceOptions) -> Result<ConvexityReport> {
    let trace = trace_2d(ball, opts)?;
    if !trace.cap.is_finite() && !trace.is_bounded() {
        return Err(Error::Unsupported(
            "unbounded ball needs a finite cap radius".into(),
        ));
    }
    Ok(convexity_of_trace(ball, &trace))
}

fn normalized_cross(a: &Point, b: &Point, c: &Point) -> f64 {
    let (ux, uy) = (b.x() - a.x(), b.y() - a.y());
    let (vx, vy) = (c.x() - b.x(), c.y() - b.y());
    let n = ux.hypot(uy) * vx.hypot(vy);
    if n == 0.0 {
        0.0
    } else {
        (ux * vy - uy * vx) / n
    }
}

pub(crate) fn convexity_of_trace(ball: &BallSpec, trace: &BallTrace) -> ConvexityReport {
    let poly = trace.polygon();
    let n = poly.len();
    let crosses: Vec<f64> = (0..n)
        .map(|i| normalized_cross(&poly[(i + n - 1) % n], &poly[i], &poly[(i + 1) % n]))
        .collect();
    let max_cross_defect = crosses.iter().fold(0.0_f64, |m, &c| m.max(-c));
    let usable = |i: usize| !matches!(trace.rays[i].outcome, RayOutcome::Truncated { .. });

    let mut best: Option<(f64, Witness)> = None;
    for i in (0..n).filter(|&i| crosses[i] < -CROSS_TOL) {
        let mut k = 1;
        while k <= n / 2 {
            let (a, b) = ((i + n - k) % n, (i + k) % n);
            if usable(a) && usable(b) {
                let mid = poly[a].midpoint(&poly[b]);
                let excess = ball.metric_or_inf(&mid) - ball.radius;
                if excess > WITNESS_TOL * ball.radius.max(1.0)
                    && best.as_ref().is_none_or(|(m, _)| excess > *m)
                {
                    best = Some((
                        excess,
                        Witness {
                            y1: poly[a].clone(),
                            y2: poly[b].clone(),
                            midpoint: mid,
                        },
                    ));
                }
            }
            k *= 2;
        }
    }
    let convex = best.is_none();
    ConvexityReport {
        convex,
        strictly_convex: convex && crosses.iter().all(|&c| c > CROSS_TOL),
        starlike: trace.multi_crossing_rays().is_empty(),
        witness: best.map(|(_, w)| w),
        max_cross_defect,
    }
}

//! Metric balls: membership, boundary tracing along rays, and the
//! representation of a Cassinian ball as an intersection of once-punctured
//! Cassinian balls.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Domain, Point};
use crate::metrics::{cassinian, distance, MetricKind};
use crate::optimize::bisect;

/// The ball `{ z in D : d(center, z) < radius }`.
#[derive(Debug, Clone)]
pub struct BallSpec {
    pub domain: Domain,
    pub metric: MetricKind,
    pub center: Point,
    pub radius: f64,
}

impl BallSpec {
    pub fn new(domain: Domain, metric: MetricKind, center: Point, radius: f64) -> Result<Self> {
        domain.ensure_contains(&center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Range(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(BallSpec {
            domain,
            metric,
            center,
            radius,
        })
    }

    pub fn cassinian(domain: Domain, center: Point, radius: f64) -> Result<Self> {
        BallSpec::new(domain, MetricKind::Cassinian, center, radius)
    }

    pub fn distance_to(&self, y: &Point) -> Result<f64> {
        distance(&self.metric, &self.domain, &self.center, y)
    }

    /// Strict membership `d(center, y) < radius`.
    pub fn contains(&self, y: &Point) -> Result<bool> {
        Ok(self.distance_to(y)? < self.radius)
    }

    /// Distance from the center, with points outside the domain at infinity.
    pub(crate) fn metric_or_inf(&self, y: &Point) -> f64 {
        if self.domain.contains(y) {
            self.distance_to(y).unwrap_or(f64::INFINITY)
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub rays: usize,
    /// Scan limit along each ray; defaults to `1000 * delta_D(center)`.
    pub cap: Option<f64>,
    pub scan_points: usize,
    pub bisection_steps: usize,
    /// Points of the re-entry scan beyond the first crossing; 0 skips it.
    pub recheck_points: usize,
    pub trace_tol: f64,
    pub exec: Execution,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            rays: 720,
            cap: None,
            scan_points: 1024,
            bisection_steps: 80,
            recheck_points: 256,
            trace_tol: 1e-8,
            exec: Execution::default(),
        }
    }
}

impl TraceOptions {
    pub fn with_rays(rays: usize) -> Self {
        TraceOptions {
            rays,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RayOutcome {
    /// First boundary crossing of the ball at Euclidean distance `rho`.
    Crossing {
        point: Point,
        rho: f64,
        residual: f64,
    },
    /// Still inside the ball at the cap radius.
    Unbounded { cap_point: Point },
    /// Reached the domain boundary while still inside the ball.
    Truncated { exit_point: Point },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayRecord {
    pub direction: Point,
    pub outcome: RayOutcome,
    /// The ray re-enters the ball after its first crossing.
    pub multi_crossing: bool,
}

impl RayRecord {
    /// Point of the traced region on this ray: the crossing, or the cap /
    /// exit point for rays without one.
    pub fn hull_point(&self) -> &Point {
        match &self.outcome {
            RayOutcome::Crossing { point, .. } => point,
            RayOutcome::Unbounded { cap_point } => cap_point,
            RayOutcome::Truncated { exit_point } => exit_point,
        }
    }
}

/// Find where the ray `center + rho * dir` (unit `dir`) first leaves the ball.
pub fn first_crossing(ball: &BallSpec, dir: &Point, cap: f64, opts: &TraceOptions) -> RayRecord {
    let c = &ball.center;
    let r = ball.radius;
    let exit = ball.domain.exit_distance(c, dir);
    let (limit, truncated) = if exit <= cap {
        (exit * (1.0 - 1e-12), true)
    } else {
        (cap, false)
    };
    let g = |rho: f64| ball.metric_or_inf(&c.offset(dir, rho)) - r;

    let delta = ball.domain.boundary_distance_unchecked(c);
    let start = 1e-9 * limit.min(delta);
    let n = opts.scan_points.max(2);
    let ratio = (limit / start).powf(1.0 / (n - 1) as f64);
    let mut prev = 0.0;
    let mut bracket = None;
    let mut rho = start;
    for k in 0..n {
        if k == n - 1 {
            rho = limit;
        }
        if g(rho) >= 0.0 {
            bracket = Some((prev, rho));
            break;
        }
        prev = rho;
        rho *= ratio;
    }

    let Some((lo, hi)) = bracket else {
        let end = c.offset(dir, if truncated { exit } else { cap });
        let outcome = if truncated {
            RayOutcome::Truncated { exit_point: end }
        } else {
            RayOutcome::Unbounded { cap_point: end }
        };
        return RayRecord {
            direction: dir.clone(),
            outcome,
            multi_crossing: false,
        };
    };
    let (lo, hi) = bisect(g, lo, hi, opts.bisection_steps);
    let (glo, ghi) = (g(lo), g(hi));
    let (rho, residual) = if glo.abs() <= ghi.abs() {
        (lo, glo.abs())
    } else {
        (hi, ghi.abs())
    };

    // re-entry scan: any point beyond the crossing back inside the ball
    let m = opts.recheck_points;
    let step = (limit / rho).powf(1.0 / m.max(1) as f64);
    let multi_crossing = m > 0
        && step > 1.0
        && (1..=m).any(|k| {
            let s = (rho * step.powi(k as i32)).min(limit);
            g(s) < -opts.trace_tol
        });
    RayRecord {
        direction: dir.clone(),
        outcome: RayOutcome::Crossing {
            point: c.offset(dir, rho),
            rho,
            residual,
        },
        multi_crossing,
    }
}

/// A traced planar ball boundary: one record per ray, in increasing angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallTrace {
    pub center: Point,
    pub radius: f64,
    pub cap: f64,
    pub thetas: Vec<f64>,
    pub rays: Vec<RayRecord>,
}

impl BallTrace {
    pub fn vertices(&self) -> Vec<&Point> {
        self.rays
            .iter()
            .filter_map(|r| match &r.outcome {
                RayOutcome::Crossing { point, .. } => Some(point),
                _ => None,
            })
            .collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.rays
            .iter()
            .filter_map(|r| match r.outcome {
                RayOutcome::Crossing { residual, .. } => Some(residual),
                _ => None,
            })
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().into_iter().fold(0.0, f64::max)
    }

    fn thetas_where(&self, pred: impl Fn(&RayRecord) -> bool) -> Vec<f64> {
        self.thetas
            .iter()
            .zip(&self.rays)
            .filter(|(_, r)| pred(r))
            .map(|(t, _)| *t)
            .collect()
    }

    /// Angles of rays that stayed inside the ball up to the cap.
    pub fn unbounded_rays(&self) -> Vec<f64> {
        self.thetas_where(|r| matches!(r.outcome, RayOutcome::Unbounded { .. }))
    }

    /// Angles of rays cut off by the domain boundary.
    pub fn truncated_rays(&self) -> Vec<f64> {
        self.thetas_where(|r| matches!(r.outcome, RayOutcome::Truncated { .. }))
    }

    pub fn multi_crossing_rays(&self) -> Vec<f64> {
        self.thetas_where(|r| r.multi_crossing)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays
            .iter()
            .all(|r| !matches!(r.outcome, RayOutcome::Unbounded { .. }))
    }

    /// Closed polygon of crossings, with cap or exit points on rays that have none.
    pub fn polygon(&self) -> Vec<Point> {
        self.rays.iter().map(|r| r.hull_point().clone()).collect()
    }

    /// CSV with header `theta,x,y,residual`; rays without a crossing leave the
    /// last three fields empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,x,y,residual\n");
        for (theta, ray) in self.thetas.iter().zip(&self.rays) {
            match &ray.outcome {
                RayOutcome::Crossing {
                    point, residual, ..
                } => writeln!(out, "{theta},{},{},{residual}", point.x(), point.y()).unwrap(),
                _ => writeln!(out, "{theta},,,").unwrap(),
            }
        }
        out
    }
}

/// Trace the boundary of a planar ball along `opts.rays` equally spaced rays.
pub fn trace_2d(ball: &BallSpec, opts: &TraceOptions) -> Result<BallTrace> {
    if ball.center.dim() != 2 || ball.domain.dim() != 2 {
        return Err(Error::Unsupported("ball tracing is planar only".into()));
    }
    if opts.rays < 16 {
        return Err(Error::Range(format!(
            "need at least 16 rays, got {}",
            opts.rays
        )));
    }
    ball.domain.ensure_contains(&ball.center)?;
    let cap = match opts.cap {
        Some(c) if c > 0.0 => c,
        Some(c) => {
            return Err(Error::Range(format!(
                "cap radius must be positive, got {c}"
            )))
        }
        None => 1e3 * ball.domain.boundary_distance_unchecked(&ball.center),
    };
    let thetas: Vec<f64> = (0..opts.rays)
        .map(|k| std::f64::consts::TAU * k as f64 / opts.rays as f64)
        .collect();
    let rays = opts.exec.map(&thetas, |&th| {
        let dir = Point::xy(th.cos(), th.sin());
        first_crossing(ball, &dir, cap, opts)
    });
    Ok(BallTrace {
        center: ball.center.clone(),
        radius: ball.radius,
        cap,
        thetas,
        rays,
    })
}

/// SVG with one closed path per trace; y points up, viewBox fitted to the
/// data with a 5% margin.
pub fn traces_to_svg(traces: &[BallTrace]) -> String {
    let polys: Vec<Vec<(f64, f64)>> = traces
        .iter()
        .map(|t| t.polygon().iter().map(|p| (p.x(), -p.y())).collect())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in polys.iter().flatten() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let m = 0.05 * span;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        x0 - m,
        y0 - m,
        x1 - x0 + 2.0 * m,
        y1 - y0 + 2.0 * m
    )
    .unwrap();
    for (trace, poly) in traces.iter().zip(&polys) {
        let mut d = String::new();
        for (i, (x, y)) in poly.iter().enumerate() {
            write!(d, "{}{x} {y} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        d.push('Z');
        writeln!(
            out,
            r#"  <path data-radius="{}" d="{d}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            trace.radius
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub boundary_samples: usize,
    pub test_points: usize,
    pub agreements: usize,
    /// Disagreements with `|c_D(x, y) - R|` inside the tolerance band.
    pub band_disagreements: usize,
    pub violations: usize,
}

/// Tolerance band around the sphere `c_D(x, .) = R` where the two membership
/// tests may disagree.
pub const INTERSECTION_BAND: f64 = 1e-9;

/// Compare membership in `B_{c_D}(x, R)` with membership in every once-punctured
/// ball `B_{c_{R^n \ {z}}}(x, R)` over sampled boundary points `z`.
pub fn intersection_representation_check<R: Rng + ?Sized>(
    domain: &Domain,
    x: &Point,
    radius: f64,
    boundary_samples: usize,
    test_points: usize,
    rng: &mut R,
    exec: Execution,
) -> Result<IntersectionReport> {
    let delta = domain.boundary_distance(x)?;
    if !(radius > 0.0) {
        return Err(Error::Range(format!(
            "ball radius must be positive, got {radius}"
        )));
    }
    let zs = domain.boundary_samples(x, boundary_samples, rng);
    // Euclidean extent of the ball; unbounded balls get a generous box
    let t = radius * delta;
    let extent = if t < 1.0 {
        2.0 * radius * delta * delta / (1.0 - t)
    } else {
        4.0 * delta
    };
    let dim = x.dim();
    let mut ys = vec![x.clone()];
    while ys.len() < test_points {
        let y = Point::new(
            (0..dim)
                .map(|i| x.coords()[i] + extent * rng.gen_range(-1.0..1.0))
                .collect(),
        )?;
        if domain.contains(&y) {
            ys.push(y);
        }
    }
    let verdicts = exec.map(&ys, |y| -> Result<(bool, bool, bool)> {
        let c = cassinian(domain, x, y)?;
        let full = c < radius;
        let all = zs.iter().all(|z| {
            if z == y {
                return false;
            }
            let cz = if x == y {
                0.0
            } else {
                x.dist(y) / (x.dist(z) * z.dist(y))
            };
            cz < radius
        });
        Ok((
            full,
            all,
            (c - radius).abs() <= INTERSECTION_BAND * radius.max(1.0),
        ))
    });
    let mut report = IntersectionReport {
        boundary_samples: zs.len(),
        test_points: ys.len(),
        agreements: 0,
        band_disagreements: 0,
        violations: 0,
    };
    for v in verdicts {
        let (full, all, in_band) = v?;
        if full == all {
            report.agreements += 1;
        } else if in_band {
            report.band_disagreements += 1;
        } else {
            report.violations += 1;
        }
    }
    Ok(report)
}

//! The Cassinian metric and its hyperbolic-type companions.
//!
//! | metric | domains | evaluation |
//! |--------|---------|------------|
//! | Cassinian `c_D` | all | boundary minimization |
//! | M-relative `rho_{M,D}` | all | boundary minimization |
//! | distance ratio `j_D` | all | closed form from `delta_D` |
//! | hyperbolic `rho` | unit ball, half-space | closed form |
//! | quasihyperbolic `k_D` | punctured space, half-space | closed form |
//! | quasihyperbolic `k_D` | other planar domains | grid shortest path (approximate) |

mod grid;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use grid::{quasihyperbolic_grid, GridOptions};

use crate::boundary::{minimize_unchecked, Objective};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::optimize::ScanRefine;

/// A denominator function `M(|x - a|, |y - a|)` for the M-relative metric.
pub type MFunction = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum MetricKind {
    Cassinian,
    DistanceRatio,
    Hyperbolic,
    Quasihyperbolic,
    Euclidean,
    MRelative(MFunction),
}

impl MetricKind {
    /// The M-relative metric with `M(a, b) = a + b`.
    pub fn triangular_ratio() -> Self {
        MetricKind::MRelative(Arc::new(|a, b| a + b))
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Cassinian => "cassinian",
            MetricKind::DistanceRatio => "j",
            MetricKind::Hyperbolic => "rho",
            MetricKind::Quasihyperbolic => "k",
            MetricKind::Euclidean => "euclid",
            MetricKind::MRelative(_) => "m-relative",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "cassinian" | "c" => MetricKind::Cassinian,
            "j" | "distance-ratio" => MetricKind::DistanceRatio,
            "rho" | "hyperbolic" => MetricKind::Hyperbolic,
            "k" | "quasihyperbolic" => MetricKind::Quasihyperbolic,
            "euclid" | "euclidean" => MetricKind::Euclidean,
            "triangular" => MetricKind::triangular_ratio(),
            _ => return None,
        })
    }

    /// Whether the metric can be evaluated exactly (not approximately) on `domain`.
    pub fn is_exact_on(&self, domain: &Domain) -> bool {
        match self {
            MetricKind::Hyperbolic => {
                matches!(domain, Domain::UnitBall { .. } | Domain::HalfSpace { .. })
            }
            MetricKind::Quasihyperbolic => {
                matches!(
                    domain,
                    Domain::PuncturedSpace { .. } | Domain::HalfSpace { .. }
                )
            }
            _ => true,
        }
    }
}

impl fmt::Debug for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluate the selected metric.
pub fn distance(kind: &MetricKind, domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    match kind {
        MetricKind::Cassinian => cassinian(domain, x, y),
        MetricKind::DistanceRatio => distance_ratio(domain, x, y),
        MetricKind::Hyperbolic => hyperbolic(domain, x, y),
        MetricKind::Quasihyperbolic => quasihyperbolic(domain, x, y),
        MetricKind::Euclidean => {
            check_pair(domain, x, y)?;
            Ok(x.dist(y))
        }
        MetricKind::MRelative(m) => m_relative(domain, m.as_ref(), x, y),
    }
}

fn check_pair(domain: &Domain, x: &Point, y: &Point) -> Result<()> {
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)
}

/// `c_D(x, y) = sup_p |x - y| / (|x - p| |p - y|)` over finite boundary points.
pub fn cassinian(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    check_pair(domain, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    let inf = minimize_unchecked(domain, x, y, Objective::Product, ScanRefine::default()).value;
    Ok(x.dist(y) / inf)
}

/// `rho_{M,D}(x, y) = sup_a |x - y| / M(|x - a|, |y - a|)`.
///
/// `M` must be positive and nondecreasing in each argument on the relevant
/// range; the product gives the Cassinian metric and the sum the triangular
/// ratio metric.
pub fn m_relative(
    domain: &Domain,
    m: &(dyn Fn(f64, f64) -> f64 + Sync),
    x: &Point,
    y: &Point,
) -> Result<f64> {
    check_pair(domain, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    let inf = minimize_unchecked(domain, x, y, Objective::Custom(m), ScanRefine::default()).value;
    Ok(x.dist(y) / inf)
}

/// `j_D(x, y) = log(1 + |x - y| / min(delta_D(x), delta_D(y)))`.
pub fn distance_ratio(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    let dx = domain.boundary_distance(x)?;
    let dy = domain.boundary_distance(y)?;
    if x == y {
        return Ok(0.0);
    }
    Ok((x.dist(y) / dx.min(dy)).ln_1p())
}

/// Hyperbolic distance on the unit ball or the upper half-space.
pub fn hyperbolic(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    match domain {
        Domain::UnitBall { .. } => {
            check_pair(domain, x, y)?;
            let denom = ((1.0 - x.norm_sq()) * (1.0 - y.norm_sq())).sqrt();
            Ok(2.0 * (x.dist(y) / denom).asinh())
        }
        Domain::HalfSpace { .. } => {
            check_pair(domain, x, y)?;
            Ok(half_space_hyperbolic(x, y))
        }
        other => Err(Error::Unsupported(format!(
            "hyperbolic metric is only available on the unit ball and the half-space, not {other}"
        ))),
    }
}

fn half_space_hyperbolic(x: &Point, y: &Point) -> f64 {
    2.0 * (x.dist(y) / (2.0 * (x.last() * y.last()).sqrt())).asinh()
}

/// A metric value together with whether it was approximated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub approximate: bool,
}

/// Quasihyperbolic distance. Exact on punctured spaces and half-spaces; see
/// [`quasihyperbolic_estimate`] for the approximate route.
pub fn quasihyperbolic(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    quasihyperbolic_estimate(domain, x, y).map(|e| e.value)
}

pub fn quasihyperbolic_estimate(domain: &Domain, x: &Point, y: &Point) -> Result<Estimate> {
    check_pair(domain, x, y)?;
    let exact = |value| {
        Ok(Estimate {
            value,
            approximate: false,
        })
    };
    if x == y {
        return exact(0.0);
    }
    match domain {
        Domain::PuncturedSpace { puncture } => {
            let u = x.sub(puncture);
            let v = y.sub(puncture);
            let (nu, nv) = (u.norm(), v.norm());
            let cos = (u.dot(&v) / (nu * nv)).clamp(-1.0, 1.0);
            // atan2 form keeps small angles accurate
            let sin = (1.0 - cos * cos).max(0.0).sqrt();
            let theta = sin.atan2(cos);
            exact(theta.hypot((nu / nv).ln()))
        }
        Domain::HalfSpace { .. } => exact(half_space_hyperbolic(x, y)),
        _ if domain.dim() == 2 => Ok(Estimate {
            value: quasihyperbolic_grid(domain, x, y, &GridOptions::default())?,
            approximate: true,
        }),
        other => Err(Error::Unsupported(format!(
            "quasihyperbolic metric on {other} is only approximated in the plane"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cassinian_examples() {
        let ps = Domain::punctured_plane();
        assert!(close(
            cassinian(&ps, &Point::xy(1.0, 0.0), &Point::xy(2.0, 0.0)).unwrap(),
            0.5,
            1e-15
        ));
        let h = Domain::half_space(2).unwrap();
        let x = Point::xy(0.0, 1.0);
        assert!(close(
            cassinian(&h, &x, &Point::xy(0.0, 0.5)).unwrap(),
            1.0,
            1e-12
        ));
        assert!(close(
            cassinian(&h, &x, &Point::xy(2.0, 1.0)).unwrap(),
            1.0,
            1e-12
        ));
        let c3 = cassinian(&h, &x, &Point::xy(1.0, 0.75)).unwrap();
        assert!(c3 >= 9.0 * (17.0f64 / 1261.0).sqrt() - 1e-12, "{c3}");
        assert_eq!(cassinian(&h, &x, &x).unwrap(), 0.0);
    }

    #[test]
    fn m_relative_examples() {
        let ps = Domain::punctured_plane();
        let tri = MetricKind::triangular_ratio();
        let v = distance(&tri, &ps, &Point::xy(1.0, 0.0), &Point::xy(2.0, 0.0)).unwrap();
        assert!(close(v, 1.0 / 3.0, 1e-15));
        let ball = Domain::unit_ball(2).unwrap();
        let o = Point::origin(2);
        assert_eq!(distance(&tri, &ball, &o, &o).unwrap(), 0.0);
        let prod: MetricKind = MetricKind::MRelative(Arc::new(|a, b| a * b));
        for (d, x, y) in [
            (ball.clone(), Point::xy(0.3, 0.2), Point::xy(-0.5, 0.1)),
            (
                Domain::half_space(2).unwrap(),
                Point::xy(0.0, 1.0),
                Point::xy(1.0, 0.75),
            ),
        ] {
            let a = distance(&prod, &d, &x, &y).unwrap();
            let b = cassinian(&d, &x, &y).unwrap();
            assert!(close(a, b, 1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn distance_ratio_examples() {
        let ps = Domain::punctured_plane();
        let v = distance_ratio(&ps, &Point::xy(1.0, 0.0), &Point::xy(3.0, 0.0)).unwrap();
        assert!(close(v, 3f64.ln(), 1e-15));
        let x = Point::xy(1.0, 0.0);
        assert_eq!(distance_ratio(&ps, &x, &x).unwrap(), 0.0);
        assert!(distance_ratio(&ps, &x, &Point::origin(2)).is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        let ball = Domain::unit_ball(2).unwrap();
        let v = hyperbolic(&ball, &Point::origin(2), &Point::xy(0.5, 0.0)).unwrap();
        assert!(close(v, 3f64.ln(), 1e-14));
        let x = Point::xy(0.5, 0.0);
        let y = Point::xy(-0.5, 0.0);
        let rho = hyperbolic(&ball, &x, &y).unwrap();
        assert!(close(rho, 2.0 * 3f64.ln(), 1e-14));
        assert!(close(
            rho,
            2.0 * distance_ratio(&ball, &x, &y).unwrap(),
            1e-14
        ));
        assert_eq!(hyperbolic(&ball, &x, &x).unwrap(), 0.0);
        assert!(matches!(
            hyperbolic(&Domain::punctured_plane(), &x, &y),
            Err(Error::Unsupported(_))
        ));
        // half-plane vertical geodesic: log of the height ratio
        let h = Domain::half_space(2).unwrap();
        assert!(close(
            hyperbolic(&h, &Point::xy(0.0, 1.0), &Point::xy(0.0, E)).unwrap(),
            1.0,
            1e-14
        ));
    }

    #[test]
    fn quasihyperbolic_closed_forms() {
        let ps = Domain::punctured_plane();
        let k = quasihyperbolic_estimate(&ps, &Point::xy(1.0, 0.0), &Point::xy(E, 0.0)).unwrap();
        assert!(!k.approximate);
        assert!(close(k.value, 1.0, 1e-15));
        let k = quasihyperbolic(&ps, &Point::xy(1.0, 0.0), &Point::xy(0.0, 1.0)).unwrap();
        assert!(close(k, PI / 2.0, 1e-15));
        let k = quasihyperbolic(&ps, &Point::xy(1.0, 0.0), &Point::xy(-2.0, 0.0)).unwrap();
        assert!(close(k, PI.hypot(2f64.ln()), 1e-15));
    }

    #[test]
    fn quasihyperbolic_grid_route_is_flagged() {
        let ball = Domain::unit_ball(2).unwrap();
        let e = quasihyperbolic_estimate(&ball, &Point::origin(2), &Point::xy(0.5, 0.0)).unwrap();
        assert!(e.approximate);
        // radial segment: integral of 1/(1-r) = log 2
        assert!(
            (e.value - 2f64.ln()).abs() < 0.02 * 2f64.ln(),
            "{}",
            e.value
        );
        let ball3 = Domain::unit_ball(3).unwrap();
        let o = Point::origin(3);
        assert!(matches!(
            quasihyperbolic(&ball3, &o, &Point::axis(3, 0, 0.5)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn monotone_in_the_domain() {
        let big = Domain::punctured_plane();
        let ball = Domain::unit_ball(2).unwrap();
        let shift = |p: &Point| Point::xy(p.x() + 2.0, p.y());
        let pairs = [
            (Point::xy(0.1, 0.2), Point::xy(-0.3, 0.4)),
            (Point::xy(0.6, 0.0), Point::xy(0.0, -0.6)),
            (Point::xy(-0.2, -0.1), Point::xy(0.25, 0.05)),
        ];
        // the unit disk translated to (2, 0) is a subdomain of R^2 \ {0}
        for (x, y) in pairs {
            let small = cassinian(&ball, &x, &y).unwrap();
            let large = cassinian(&big, &shift(&x), &shift(&y)).unwrap();
            assert!(large <= small + 1e-12, "{large} > {small}");
        }
    }
}

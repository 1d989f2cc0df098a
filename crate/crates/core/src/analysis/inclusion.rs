use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::balls::{first_crossing, BallSpec, RayOutcome, TraceOptions};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{random_unit, Domain, Point};
use crate::metrics::{distance, MetricKind};

/// Inclusion results `B_d(x, r) ⊂ B_m(x, t) ⊂ B_d(x, R)` between metric balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InclusionTheorem {
    /// Euclidean balls around a Cassinian ball in any proper subdomain.
    CEuclid,
    /// Euclidean balls around a distance-ratio ball.
    JEuclid,
    /// Distance-ratio balls around a Cassinian ball.
    CJ,
    /// Sharp distance-ratio radii in a once-punctured space.
    CJPunctured,
    /// Hyperbolic balls around a Cassinian ball in the unit ball.
    CRho,
    /// Distance-ratio balls around a hyperbolic ball in the unit ball.
    JRho,
    /// Refined hyperbolic radii in the unit ball.
    CRhoRefined,
    /// A quasihyperbolic ball inside a Cassinian ball of a punctured space.
    KCPunctured,
    /// Distance-ratio balls around a quasihyperbolic ball.
    JK,
    /// Quasihyperbolic balls around a Cassinian ball.
    CK,
}

impl InclusionTheorem {
    pub const ALL: [InclusionTheorem; 10] = [
        InclusionTheorem::CEuclid,
        InclusionTheorem::JEuclid,
        InclusionTheorem::CJ,
        InclusionTheorem::CJPunctured,
        InclusionTheorem::CRho,
        InclusionTheorem::JRho,
        InclusionTheorem::CRhoRefined,
        InclusionTheorem::KCPunctured,
        InclusionTheorem::JK,
        InclusionTheorem::CK,
    ];

    pub fn id(self) -> &'static str {
        match self {
            InclusionTheorem::CEuclid => "c_euclid",
            InclusionTheorem::JEuclid => "j_euclid",
            InclusionTheorem::CJ => "c_j",
            InclusionTheorem::CJPunctured => "c_j_punctured",
            InclusionTheorem::CRho => "c_rho",
            InclusionTheorem::JRho => "j_rho",
            InclusionTheorem::CRhoRefined => "c_rho_refined",
            InclusionTheorem::KCPunctured => "k_c_punctured",
            InclusionTheorem::JK => "j_k",
            InclusionTheorem::CK => "c_k",
        }
    }

    /// Whether the theorem is stated for this kind of domain.
    pub fn applies_to(self, domain: &Domain) -> bool {
        use InclusionTheorem::*;
        match self {
            CEuclid | JEuclid | CJ => true,
            CJPunctured | KCPunctured => matches!(domain, Domain::PuncturedSpace { .. }),
            CRho | JRho | CRhoRefined => matches!(domain, Domain::UnitBall { .. }),
            JK | CK => MetricKind::Quasihyperbolic.is_exact_on(domain),
        }
    }

    fn chain(self) -> Chain {
        use InclusionTheorem::*;
        use MetricKind::{
            Cassinian as C, DistanceRatio as J, Euclidean as E, Hyperbolic as Rho,
            Quasihyperbolic as K,
        };
        let (inner, middle, outer) = match self {
            CEuclid => (E, C, Some(E)),
            JEuclid => (E, J, Some(E)),
            CJ | CJPunctured => (J, C, Some(J)),
            CRho | CRhoRefined => (Rho, C, Some(Rho)),
            JRho => (J, Rho, Some(J)),
            KCPunctured => (K, C, None),
            JK => (J, K, Some(K)),
            CK => (K, C, Some(K)),
        };
        // the outer claim of j_k concerns the j-ball of the middle radius
        let outer_sphere = if self == JK { J } else { middle.clone() };
        Chain {
            inner,
            middle,
            outer_sphere,
            outer,
        }
    }
}

impl fmt::Display for InclusionTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for InclusionTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InclusionTheorem::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown theorem '{s}'")))
    }
}

/// Inputs of the radius formulas. `delta` is `delta_D(x)`, which is `|x - a|`
/// in a punctured space and `1 - |x|` in the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionParams {
    pub t: f64,
    pub delta: f64,
}

/// Sampling plan: the inner sphere `S_inner(x, r)` is checked against
/// `middle <= t`, and the sphere `S_outer_sphere(x, t)` against `outer <= R`.
struct Chain {
    inner: MetricKind,
    middle: MetricKind,
    outer_sphere: MetricKind,
    outer: Option<MetricKind>,
}

fn range(msg: String) -> Error {
    Error::Range(msg)
}

/// The radii `(r, R)` of a theorem; `R` is absent where only the inner
/// inclusion is known.
pub fn inclusion_radii(
    theorem: InclusionTheorem,
    params: InclusionParams,
) -> Result<(f64, Option<f64>)> {
    use InclusionTheorem::*;
    let InclusionParams { t, delta } = params;
    if !(t > 0.0 && t.is_finite()) {
        return Err(range(format!("t must be positive, got {t}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(range(format!("delta must be positive, got {delta}")));
    }
    let s = t * delta;
    let need_below_one = || {
        if s < 1.0 {
            Ok(())
        } else {
            Err(range(format!("requires t*delta < 1, got {s}")))
        }
    };
    let norm_x = || {
        if delta <= 1.0 {
            Ok(1.0 - delta)
        } else {
            Err(range(format!(
                "delta = 1 - |x| must be at most 1, got {delta}"
            )))
        }
    };
    let u = s / (1.0 - s);
    Ok(match theorem {
        CEuclid => {
            if s == 1.0 {
                return Err(range("requires 1 - t*delta != 0".into()));
            }
            need_below_one()?;
            (
                t * delta * delta / (1.0 + s),
                Some(t * delta * delta / (1.0 - s)),
            )
        }
        JEuclid => (-(-t).exp_m1() * delta, Some(t.exp_m1() * delta)),
        CJ => {
            need_below_one()?;
            ((s / (1.0 + s)).ln_1p(), Some(u))
        }
        CJPunctured => {
            need_below_one()?;
            (s.ln_1p(), Some(-(-s).ln_1p()))
        }
        CRho => {
            norm_x()?;
            need_below_one()?;
            ((s / (1.0 + s)).ln_1p(), Some(2.0 * u))
        }
        JRho => {
            let nx = norm_x()?;
            let m1 = ((1.0 + nx) * (t / 2.0).sinh()).ln_1p();
            let m2 = ((1.0 - nx) * t.exp_m1() / 2.0).ln_1p();
            (m1.max(m2), Some(((1.0 + nx) * t.exp_m1() / 2.0).ln_1p()))
        }
        CRhoRefined => {
            let nx = norm_x()?;
            need_below_one()?;
            let r = (2.0 * s / ((1.0 + nx) * (1.0 + s))).ln_1p();
            let r1 = 2.0 * (u.exp_m1() / (1.0 + nx)).asinh();
            let r2 = (2.0 * u.exp_m1() / (1.0 - nx)).ln_1p();
            (r, Some(r1.min(r2)))
        }
        KCPunctured => (s.ln_1p(), None),
        JK => {
            if t >= std::f64::consts::LN_2 {
                return Err(range(format!("requires r < log 2, got {t}")));
            }
            ((2.0 - (-t).exp()).ln(), Some(-(2.0 - t.exp()).ln()))
        }
        CK => {
            let bound = std::f64::consts::LN_2 / (delta * (1.0 + std::f64::consts::LN_2));
            if t >= bound {
                return Err(range(format!(
                    "requires t < log 2 / (delta (1 + log 2)) = {bound}, got {t}"
                )));
            }
            ((s / (1.0 + s)).ln_1p(), Some(-(2.0 - u.exp()).ln()))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub theorem: InclusionTheorem,
    pub t: f64,
    pub inner_radius: f64,
    pub outer_radius: Option<f64>,
    pub inner_violations: usize,
    pub outer_violations: usize,
    /// Requested boundary samples per inclusion.
    pub sample_size: usize,
    pub inner_samples: usize,
    pub outer_samples: usize,
    /// Largest `middle(x, y) - t` seen on the inner sphere.
    pub max_inner_excess: f64,
    /// Largest `outer(x, y) - R` seen on the middle sphere.
    pub max_outer_excess: f64,
    pub sharpness_gap_inner: Option<f64>,
    pub sharpness_gap_outer: Option<f64>,
    /// `(t, R / r)` over a decreasing grid of `t`.
    pub ratio_limit_samples: Vec<(f64, f64)>,
}

/// Violation slack relative to the radius being tested.
pub(crate) fn slack(bound: f64) -> f64 {
    1e-9 * bound.max(1.0)
}

fn sphere_options() -> TraceOptions {
    TraceOptions {
        scan_points: 256,
        bisection_steps: 100,
        recheck_points: 0,
        ..Default::default()
    }
}

/// Points of the metric sphere `d(x, .) = radius` along the given directions;
/// `None` where a ray never leaves the ball.
pub(crate) fn sphere_points(
    domain: &Domain,
    metric: &MetricKind,
    x: &Point,
    radius: f64,
    dirs: &[Point],
    exec: Execution,
) -> Result<Vec<Option<Point>>> {
    if matches!(metric, MetricKind::Euclidean) {
        return Ok(dirs.iter().map(|u| Some(x.offset(u, radius))).collect());
    }
    let ball = BallSpec::new(domain.clone(), metric.clone(), x.clone(), radius)?;
    let cap = 1e9 * domain.boundary_distance(x)?;
    let opts = sphere_options();
    Ok(exec.map(dirs, |u| {
        match first_crossing(&ball, u, cap, &opts).outcome {
            RayOutcome::Crossing { point, .. } => Some(point),
            _ => None,
        }
    }))
}

/// Count points whose `metric(x, .)` exceeds `bound` beyond the slack; returns
/// `(violations, evaluated, max excess)`.
fn check_sphere(
    domain: &Domain,
    metric: &MetricKind,
    x: &Point,
    points: &[Option<Point>],
    bound: f64,
    exec: Execution,
) -> Result<(usize, usize, f64)> {
    let pts: Vec<&Point> = points.iter().flatten().collect();
    let values = exec.map(&pts, |y| distance(metric, domain, x, y));
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for v in values {
        let excess = v? - bound;
        max_excess = max_excess.max(excess);
        if excess > slack(bound) {
            violations += 1;
        }
    }
    Ok((violations, pts.len(), max_excess))
}

pub(crate) struct SandwichOutcome {
    pub inner: (usize, usize, f64),
    pub outer: (usize, usize, f64),
}

/// Sample both spheres of a sandwich and count violations.
#[allow(clippy::too_many_arguments)]
fn sandwich<R: Rng + ?Sized>(
    chain: &Chain,
    domain: &Domain,
    x: &Point,
    t: f64,
    r: f64,
    big_r: Option<f64>,
    samples: usize,
    rng: &mut R,
    exec: Execution,
) -> Result<SandwichOutcome> {
    let dim = x.dim();
    let inner_dirs: Vec<Point> = (0..samples).map(|_| random_unit(dim, rng)).collect();
    let outer_dirs: Vec<Point> = (0..samples).map(|_| random_unit(dim, rng)).collect();
    let inner_pts = sphere_points(domain, &chain.inner, x, r, &inner_dirs, exec)?;
    let inner = check_sphere(domain, &chain.middle, x, &inner_pts, t, exec)?;
    let outer = match (&chain.outer, big_r) {
        (Some(metric), Some(big_r)) => {
            let outer_pts = sphere_points(domain, &chain.outer_sphere, x, t, &outer_dirs, exec)?;
            check_sphere(domain, metric, x, &outer_pts, big_r, exec)?
        }
        _ => (0, 0, f64::NEG_INFINITY),
    };
    Ok(SandwichOutcome { inner, outer })
}

pub(crate) fn verify_custom<R: Rng + ?Sized>(
    inner: MetricKind,
    middle: MetricKind,
    outer: MetricKind,
    domain: &Domain,
    x: &Point,
    t: f64,
    radii: (f64, f64),
    samples: usize,
    rng: &mut R,
    exec: Execution,
) -> Result<SandwichOutcome> {
    let chain = Chain {
        inner,
        outer_sphere: middle.clone(),
        middle,
        outer: Some(outer),
    };
    sandwich(
        &chain,
        domain,
        x,
        t,
        radii.0,
        Some(radii.1),
        samples,
        rng,
        exec,
    )
}

/// Collinear points of the sphere `c_D(x, .) = t` on the line through the
/// puncture: `y1` toward it and `y2` away from it.
fn collinear_witnesses(domain: &Domain, x: &Point, t: f64) -> Result<Option<(Point, Point)>> {
    let Domain::PuncturedSpace { puncture } = domain else {
        return Ok(None);
    };
    let Some(e) = x.sub(puncture).normalized() else {
        return Ok(None);
    };
    let ball = BallSpec::cassinian(domain.clone(), x.clone(), t)?;
    let opts = TraceOptions {
        bisection_steps: 200,
        recheck_points: 0,
        ..Default::default()
    };
    let cap = 1e12 * x.dist(puncture);
    let crossing = |dir: &Point| match first_crossing(&ball, dir, cap, &opts).outcome {
        RayOutcome::Crossing { point, .. } => Some(point),
        _ => None,
    };
    Ok(crossing(&e.scale(-1.0)).zip(crossing(&e)))
}

/// Empirical check of an inclusion theorem at `(D, x, t)` over `samples`
/// random directions for each of the two inclusions.
pub fn verify_inclusion<R: Rng + ?Sized>(
    theorem: InclusionTheorem,
    domain: &Domain,
    x: &Point,
    t: f64,
    samples: usize,
    rng: &mut R,
    exec: Execution,
) -> Result<InclusionReport> {
    if !theorem.applies_to(domain) {
        return Err(Error::Unsupported(format!(
            "{theorem} is not stated for {domain}"
        )));
    }
    let delta = domain.boundary_distance(x)?;
    let (r, big_r) = inclusion_radii(theorem, InclusionParams { t, delta })?;
    let chain = theorem.chain();
    let outcome = sandwich(&chain, domain, x, t, r, big_r, samples, rng, exec)?;

    let (mut gap_inner, mut gap_outer) = (None, None);
    if matches!(chain.middle, MetricKind::Cassinian) {
        if let Some((y1, y2)) = collinear_witnesses(domain, x, t)? {
            gap_inner = Some((distance(&chain.inner, domain, x, &y1)? - r).abs());
            if let (Some(metric), Some(big_r)) = (&chain.outer, big_r) {
                gap_outer = Some((distance(metric, domain, x, &y2)? - big_r).abs());
            }
        }
    }

    let ratio_limit_samples = [1e-1, 1e-2, 1e-3, 1e-4]
        .into_iter()
        .filter_map(|s| {
            let t = match theorem {
                InclusionTheorem::JRho | InclusionTheorem::JK => s,
                _ => s / delta,
            };
            match inclusion_radii(theorem, InclusionParams { t, delta }) {
                Ok((r, Some(big_r))) => Some((t, big_r / r)),
                _ => None,
            }
        })
        .collect();

    Ok(InclusionReport {
        theorem,
        t,
        inner_radius: r,
        outer_radius: big_r,
        inner_violations: outcome.inner.0,
        outer_violations: outcome.outer.0,
        sample_size: samples,
        inner_samples: outcome.inner.1,
        outer_samples: outcome.outer.1,
        max_inner_excess: outcome.inner.2,
        max_outer_excess: outcome.outer.2,
        sharpness_gap_inner: gap_inner,
        sharpness_gap_outer: gap_outer,
        ratio_limit_samples,
    })
}

//! Exploration harnesses for open questions. They gather evidence and report
//! counterexample candidates; nothing here asserts a conjecture.

use rand::Rng;
use serde::Serialize;

use super::convexity::{check_convexity_2d, check_convexity_2d_with};
use super::inclusion::verify_custom;
use crate::balls::{BallSpec, TraceOptions};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Domain, Point};
use crate::metrics::MetricKind;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSample {
    pub center: Point,
    /// Largest multiplier found convex, within the resolution.
    pub estimate: f64,
    /// Smallest multiplier found nonconvex.
    pub upper: f64,
    pub floor_convex: bool,
    pub ceiling_convex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantEstimate {
    /// Minimum of the per-center estimates.
    pub estimate: f64,
    pub resolution: f64,
    pub rays: usize,
    pub samples: Vec<ConstantSample>,
}

/// Largest `a` in `[0.5, 1]` such that the Cassinian ball of the upper
/// half-plane about each center with radius `a / delta(center)` is convex.
///
/// The Cassinian metric scales like an inverse length, so the ball shape
/// depends only on `r * delta(x)`.
pub fn explore_convexity_constant(
    centers: &[Point],
    resolution: f64,
    rays: usize,
    exec: Execution,
) -> Result<ConstantEstimate> {
    if !(resolution >= 1e-3) {
        return Err(Error::Range(format!(
            "resolution must be at least 1e-3, got {resolution}"
        )));
    }
    if centers.is_empty() {
        return Err(Error::Precondition("need at least one center".into()));
    }
    let domain = Domain::half_space(2)?;
    for c in centers {
        domain.ensure_contains(c)?;
    }
    let opts = TraceOptions {
        rays,
        exec: Execution::Sequential,
        ..Default::default()
    };
    let results = exec.map(centers, |c| -> Result<ConstantSample> {
        let delta = c.last();
        let convex_at = |a: f64| -> Result<bool> {
            let ball = BallSpec::cassinian(domain.clone(), c.clone(), a / delta)?;
            Ok(check_convexity_2d_with(&ball, &opts)?.convex)
        };
        let (mut lo, mut hi) = (0.5, 1.0);
        let floor_convex = convex_at(lo)?;
        let ceiling_convex = convex_at(hi)?;
        if !floor_convex {
            hi = lo;
        } else if ceiling_convex {
            lo = hi;
        } else {
            while hi - lo > resolution {
                let mid = 0.5 * (lo + hi);
                if convex_at(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        Ok(ConstantSample {
            center: c.clone(),
            estimate: lo,
            upper: hi,
            floor_convex,
            ceiling_convex,
        })
    });
    let samples = results.into_iter().collect::<Result<Vec<_>>>()?;
    let estimate = samples
        .iter()
        .map(|s| s.estimate)
        .fold(f64::INFINITY, f64::min);
    Ok(ConstantEstimate {
        estimate,
        resolution,
        rays,
        samples,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarlikeEntry {
    pub radius: f64,
    pub starlike: bool,
    pub convex: bool,
    pub multi_crossing_rays: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarlikenessReport {
    pub center: Point,
    pub entries: Vec<StarlikeEntry>,
    /// Radii whose ball failed the starlikeness scan.
    pub counterexample_candidates: Vec<f64>,
}

/// Multi-crossing scan of Cassinian balls about `center` over a radius grid.
pub fn explore_starlikeness(
    domain: &Domain,
    center: &Point,
    radii: &[f64],
    rays: usize,
) -> Result<StarlikenessReport> {
    if domain.dim() != 2 {
        return Err(Error::Unsupported(
            "starlikeness scan is planar only".into(),
        ));
    }
    let mut entries = Vec::with_capacity(radii.len());
    for &radius in radii {
        let ball = BallSpec::cassinian(domain.clone(), center.clone(), radius)?;
        let opts = TraceOptions::with_rays(rays);
        let trace = crate::balls::trace_2d(&ball, &opts)?;
        let report = super::convexity::convexity_of_trace(&ball, &trace);
        entries.push(StarlikeEntry {
            radius,
            starlike: report.starlike,
            convex: report.convex,
            multi_crossing_rays: trace.multi_crossing_rays().len(),
        });
    }
    let counterexample_candidates = entries
        .iter()
        .filter(|e| !e.starlike)
        .map(|e| e.radius)
        .collect();
    Ok(StarlikenessReport {
        center: center.clone(),
        entries,
        counterexample_candidates,
    })
}

/// Conjectured sharper hyperbolic radii around `B_c(x, t)` in the unit ball.
pub fn conjectured_c_rho_radii(t: f64, norm_x: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) || !(0.0..1.0).contains(&norm_x) {
        return Err(Error::Range(format!(
            "need t > 0 and 0 <= |x| < 1, got t = {t}, |x| = {norm_x}"
        )));
    }
    let s = t * (1.0 - norm_x);
    let inner_sq = (1.0 + norm_x) * (1.0 + norm_x - 2.0 * s);
    if inner_sq <= 0.0 {
        return Err(Error::Range(format!(
            "requires 1 + |x| > 2 t (1 - |x|), got t = {t}"
        )));
    }
    let outer_sq = (1.0 + norm_x) * (1.0 + norm_x + 2.0 * s);
    Ok((s / inner_sq.sqrt(), s / outer_sq.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureEvidence {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub inner_violations: usize,
    pub outer_violations: usize,
    pub inner_samples: usize,
    pub outer_samples: usize,
    pub max_inner_excess: f64,
    pub max_outer_excess: f64,
}

/// Sample the conjectured hyperbolic radii around a Cassinian ball of the
/// unit ball and count points that contradict them.
pub fn explore_c_rho_conjecture<R: Rng + ?Sized>(
    domain: &Domain,
    x: &Point,
    t: f64,
    samples: usize,
    rng: &mut R,
    exec: Execution,
) -> Result<ConjectureEvidence> {
    if !matches!(domain, Domain::UnitBall { .. }) {
        return Err(Error::Unsupported(
            "the conjectured radii concern the unit ball".into(),
        ));
    }
    domain.ensure_contains(x)?;
    let (r, big_r) = conjectured_c_rho_radii(t, x.norm())?;
    let out = verify_custom(
        MetricKind::Hyperbolic,
        MetricKind::Cassinian,
        MetricKind::Hyperbolic,
        domain,
        x,
        t,
        (r, big_r),
        samples,
        rng,
        exec,
    )?;
    Ok(ConjectureEvidence {
        inner_radius: r,
        outer_radius: big_r,
        inner_violations: out.inner.0,
        outer_violations: out.outer.0,
        inner_samples: out.inner.1,
        outer_samples: out.outer.1,
        max_inner_excess: out.inner.2,
        max_outer_excess: out.outer.2,
    })
}

/// Convexity at a single multiplier, for sanity sweeps.
pub fn half_plane_convex_at(center: &Point, a: f64, rays: usize) -> Result<bool> {
    let ball = BallSpec::cassinian(Domain::half_space(2)?, center.clone(), a / center.last())?;
    Ok(check_convexity_2d(&ball, rays)?.convex)
}

//! Sphere inversions and distortion of the Cassinian metric under Möbius and
//! affine bi-Lipschitz maps.
//!
//! For `0 < |a| < 1` the inversion in the sphere `S(a / |a|^2, sqrt(1 - |a|^2) / |a|)`
//! is orthogonal to the unit sphere, swaps `0` and `a`, and so maps
//! `B^n \ {0}` onto `B^n \ {a}`. Under that map the Cassinian metric changes by
//! at most the factor `(1 + |a|) / (1 - |a|)` in either direction, and the factor
//! is attained on collinear pairs through the two punctures.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Domain, Point};
use crate::metrics::cassinian;

/// Inversion in the sphere `S(center, radius)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereInversion {
    center: Point,
    radius: f64,
}

impl SphereInversion {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Range(format!(
                "inversion radius must be positive, got {radius}"
            )));
        }
        Ok(SphereInversion { center, radius })
    }

    /// The inversion orthogonal to the unit sphere that sends `a` to the origin.
    pub fn canonical(a: &Point) -> Result<Self> {
        let n = a.norm();
        if n == 0.0 {
            return Err(Error::IdentityCase);
        }
        if n >= 1.0 {
            return Err(Error::Precondition(format!(
                "need 0 < |a| < 1, got |a| = {n}"
            )));
        }
        let center = a.scale(1.0 / (n * n));
        let radius = (1.0 - n * n).sqrt() / n;
        SphereInversion::new(center, radius)
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `sigma(x) = c + (r / |x - c|)^2 (x - c)`
    pub fn apply(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.center.dim())?;
        let w = x.sub(&self.center);
        let d2 = w.norm_sq();
        if d2 == 0.0 {
            return Err(Error::Pole);
        }
        Ok(self.center.offset(&w, self.radius * self.radius / d2))
    }
}

/// Free-function form of [`SphereInversion::canonical`].
pub fn canonical_inversion(a: &Point) -> Result<SphereInversion> {
    SphereInversion::canonical(a)
}

/// Which side of the distortion inequality an experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `c_{B\{a}}(f x, f y) / c_{B\{0}}(x, y)` for `x, y` in `B \ {0}`.
    Forward,
    /// `c_{B\{0}}(f^-1 u, f^-1 v) / c_{B\{a}}(u, v)` for `u, v` in `B \ {a}`.
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub puncture: Point,
    pub direction: Direction,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub pairs_evaluated: usize,
    /// Pairs skipped because `x = y`.
    pub excluded: usize,
    pub violations: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    /// `upper_bound - max_ratio`; zero when the upper bound is attained.
    pub sharpness_gap_upper: Option<f64>,
    /// `min_ratio - lower_bound`; zero when the lower bound is attained.
    pub sharpness_gap_lower: Option<f64>,
    pub ratios: Vec<f64>,
}

/// Relative slack allowed on the theoretical bounds.
pub const DISTORTION_TOL: f64 = 1e-9;

fn summarize(
    puncture: Point,
    direction: Direction,
    lower: f64,
    upper: f64,
    ratios: Vec<Option<f64>>,
) -> DistortionReport {
    let excluded = ratios.iter().filter(|r| r.is_none()).count();
    let ratios: Vec<f64> = ratios.into_iter().flatten().collect();
    let violations = ratios
        .iter()
        .filter(|&&r| r < lower * (1.0 - DISTORTION_TOL) || r > upper * (1.0 + DISTORTION_TOL))
        .count();
    let min_ratio = ratios.iter().copied().reduce(f64::min);
    let max_ratio = ratios.iter().copied().reduce(f64::max);
    DistortionReport {
        puncture,
        direction,
        lower_bound: lower,
        upper_bound: upper,
        pairs_evaluated: ratios.len(),
        excluded,
        violations,
        min_ratio,
        max_ratio,
        sharpness_gap_upper: max_ratio.map(|m| upper - m),
        sharpness_gap_lower: min_ratio.map(|m| m - lower),
        ratios,
    }
}

/// Distortion of `c` under the canonical Möbius map `B \ {0} -> B \ {a}`.
///
/// The map is the inversion itself (it sends `0` to `a`); for `a = 0` the
/// identity is used. Pairs with `x = y` are excluded.
pub fn distortion_experiment(
    a: &Point,
    pairs: &[(Point, Point)],
    direction: Direction,
    exec: Execution,
) -> Result<DistortionReport> {
    let n = a.norm();
    if n >= 1.0 {
        return Err(Error::Precondition(format!("need |a| < 1, got |a| = {n}")));
    }
    let dim = a.dim();
    let origin_ball = Domain::punctured_unit_ball(Point::origin(dim))?;
    let a_ball = Domain::punctured_unit_ball(a.clone())?;
    let map = if n == 0.0 {
        None
    } else {
        Some(SphereInversion::canonical(a)?)
    };
    let (src, dst) = match direction {
        Direction::Forward => (&origin_ball, &a_ball),
        Direction::Inverse => (&a_ball, &origin_ball),
    };
    for (x, y) in pairs {
        src.ensure_contains(x)?;
        src.ensure_contains(y)?;
    }
    let ratios = exec.map(pairs, |(x, y)| -> Result<Option<f64>> {
        if x == y {
            return Ok(None);
        }
        let (fx, fy) = match &map {
            Some(m) => (m.apply(x)?, m.apply(y)?),
            None => (x.clone(), y.clone()),
        };
        Ok(Some(cassinian(dst, &fx, &fy)? / cassinian(src, x, y)?))
    });
    let ratios = ratios.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(summarize(
        a.clone(),
        direction,
        (1.0 - n) / (1.0 + n),
        (1.0 + n) / (1.0 - n),
        ratios,
    ))
}

/// Collinear pairs `x = -t a/|a|`, `y = -s a/|a|` with `s < t` drawn from
/// `params`; these attain the upper distortion bound.
pub fn sharpness_pairs(a: &Point, params: &[(f64, f64)]) -> Result<Vec<(Point, Point)>> {
    let dir = a.normalized().ok_or(Error::IdentityCase)?;
    Ok(params
        .iter()
        .map(|&(s, t)| (dir.scale(-t), dir.scale(-s)))
        .collect())
}

/// An invertible affine map `x -> A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    linear: DMatrix<f64>,
    translation: Vec<f64>,
}

impl AffineMap {
    pub fn new(linear: DMatrix<f64>, translation: Vec<f64>) -> Result<Self> {
        let n = linear.nrows();
        if linear.ncols() != n || translation.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: translation.len(),
            });
        }
        let sv = linear.singular_values();
        if sv.min() <= 1e-14 * sv.max().max(1.0) {
            return Err(Error::Precondition("affine map is not invertible".into()));
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    pub fn scaling(dim: usize, lambda: f64) -> Result<Self> {
        AffineMap::new(DMatrix::identity(dim, dim) * lambda, vec![0.0; dim])
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        AffineMap::new(
            DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(entries)),
            vec![0.0; n],
        )
    }

    pub fn rotation2(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        AffineMap {
            linear: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            translation: vec![0.0; 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// Smallest `L` with `|x - y| / L <= |f x - f y| <= L |x - y|`.
    pub fn lipschitz(&self) -> f64 {
        let sv = self.linear.singular_values();
        sv.max().max(1.0 / sv.min())
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        x.ensure_dim(self.dim())?;
        let v = &self.linear * nalgebra::DVector::from_column_slice(x.coords());
        Point::new(
            v.iter()
                .zip(&self.translation)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    fn is_orthogonal(&self) -> bool {
        let n = self.dim();
        (self.linear.transpose() * &self.linear - DMatrix::<f64>::identity(n, n)).amax() < 1e-12
    }

    /// `f(D)` as a domain, when it is one of the supported variants.
    pub fn image_domain(&self, domain: &Domain) -> Result<Domain> {
        domain
            .dim()
            .eq(&self.dim())
            .then_some(())
            .ok_or(Error::DimensionMismatch {
                expected: self.dim(),
                found: domain.dim(),
            })?;
        let unsupported = || {
            Error::Unsupported(format!(
                "image of {domain} under this map is not a supported domain"
            ))
        };
        let linear_only = self.translation.iter().all(|&t| t == 0.0);
        match domain {
            Domain::PuncturedSpace { puncture } => {
                Ok(Domain::punctured_space(self.apply(puncture)?))
            }
            Domain::UnitBall { dim } if linear_only && self.is_orthogonal() => {
                Domain::unit_ball(*dim)
            }
            Domain::PuncturedUnitBall { puncture } if linear_only && self.is_orthogonal() => {
                Domain::punctured_unit_ball(self.apply(puncture)?)
            }
            Domain::HalfSpace { dim } => {
                let n = *dim;
                let last_row_ok = (0..n - 1).all(|j| self.linear[(n - 1, j)] == 0.0)
                    && self.linear[(n - 1, n - 1)] > 0.0
                    && self.translation[n - 1] == 0.0;
                if last_row_ok {
                    Domain::half_space(n)
                } else {
                    Err(unsupported())
                }
            }
            Domain::SampledBoundary(poly) => {
                let samples = poly
                    .samples()
                    .iter()
                    .map(|p| self.apply(p))
                    .collect::<Result<Vec<_>>>()?;
                Domain::sampled(samples, poly.is_closed())
            }
            _ => Err(unsupported()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilipschitzReport {
    pub lipschitz: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub pairs_evaluated: usize,
    pub excluded: usize,
    pub violations: usize,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

/// Check `c_D(x, y) / L^3 <= c_{f(D)}(f x, f y) <= L^3 c_D(x, y)` on `pairs`.
pub fn bilipschitz_distortion_check(
    map: &AffineMap,
    domain: &Domain,
    pairs: &[(Point, Point)],
    exec: Execution,
) -> Result<BilipschitzReport> {
    let image = map.image_domain(domain)?;
    let l3 = map.lipschitz().powi(3);
    let ratios = exec
        .map(pairs, |(x, y)| -> Result<Option<f64>> {
            if x == y {
                return Ok(None);
            }
            let before = cassinian(domain, x, y)?;
            let after = cassinian(&image, &map.apply(x)?, &map.apply(y)?)?;
            Ok(Some(after / before))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let r = summarize(
        Point::origin(domain.dim()),
        Direction::Forward,
        1.0 / l3,
        l3,
        ratios,
    );
    Ok(BilipschitzReport {
        lipschitz: map.lipschitz(),
        lower_bound: r.lower_bound,
        upper_bound: r.upper_bound,
        pairs_evaluated: r.pairs_evaluated,
        excluded: r.excluded,
        violations: r.violations,
        min_ratio: r.min_ratio,
        max_ratio: r.max_ratio,
    })
}

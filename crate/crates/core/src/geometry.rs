//! Points, domains and boundary access.
//!
//! A [`Domain`] is a proper subdomain of R^n with a boundary we can measure
//! distances to and search over. Boundaries are taken in the compactified
//! space, but the point at infinity is never returned: for every objective
//! used here it is never the extremal boundary point.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of R^n, n >= 2, with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// Planar point. Panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite coordinate");
        Point(vec![x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim.max(2)])
    }

    /// The i-th standard basis vector scaled by `len`.
    pub fn axis(dim: usize, i: usize, len: f64) -> Self {
        let mut p = Point::origin(dim);
        p.0[i] = len;
        p
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 2);
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    /// Last coordinate; the height above the boundary of the upper half-space.
    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, &c| acc.hypot(c))
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0_f64, |acc, (a, b)| acc.hypot(a - b))
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * dir`
    pub fn offset(&self, dir: &Point, s: f64) -> Point {
        Point(self.0.iter().zip(&dir.0).map(|(a, d)| a + s * d).collect())
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub(crate) fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Distance from `p` to the closed segment `[a, b]`, and the segment parameter
/// of the nearest point.
pub(crate) fn segment_distance(p: &Point, a: &Point, b: &Point) -> (f64, f64) {
    let ab = b.sub(a);
    let len_sq = ab.norm_sq();
    let s = if len_sq > 0.0 {
        (p.sub(a).dot(&ab) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.dist(&a.offset(&ab, s)), s)
}

/// A polyline boundary sampled in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    samples: Vec<Point>,
    closed: bool,
    /// Arc length at the start of each segment, plus the total at the end.
    cumulative: Vec<f64>,
}

impl Polyline {
    pub fn new(samples: Vec<Point>, closed: bool) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidDomain(format!(
                "sampled boundary needs at least 3 points, got {}",
                samples.len()
            )));
        }
        if let Some(p) = samples.iter().find(|p| p.dim() != 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: p.dim(),
            });
        }
        let mut cumulative = Vec::with_capacity(samples.len() + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        let n_seg = if closed {
            samples.len()
        } else {
            samples.len() - 1
        };
        for i in 0..n_seg {
            acc += samples[i].dist(&samples[(i + 1) % samples.len()]);
            cumulative.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::InvalidDomain(
                "sampled boundary has zero length".into(),
            ));
        }
        Ok(Polyline {
            samples,
            closed,
            cumulative,
        })
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        self.cumulative.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn segment(&self, i: usize) -> (&Point, &Point) {
        (
            &self.samples[i],
            &self.samples[(i + 1) % self.samples.len()],
        )
    }

    /// Point at arc length `s`, clamped to `[0, length]`.
    pub fn point_at(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.length());
        let i = match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(self.segment_count() - 1),
            Err(i) => i.saturating_sub(1).min(self.segment_count() - 1),
        };
        let (a, b) = self.segment(i);
        let len = self.cumulative[i + 1] - self.cumulative[i];
        let u = if len > 0.0 {
            (s - self.cumulative[i]) / len
        } else {
            0.0
        };
        a.offset(&b.sub(a), u)
    }

    pub fn distance(&self, p: &Point) -> f64 {
        (0..self.segment_count())
            .map(|i| {
                let (a, b) = self.segment(i);
                segment_distance(p, a, b).0
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the closed polygon around `p`.
    pub fn winding_number(&self, p: &Point) -> i32 {
        let (px, py) = (p.x(), p.y());
        let mut wn = 0;
        for i in 0..self.samples.len() {
            let a = &self.samples[i];
            let b = &self.samples[(i + 1) % self.samples.len()];
            let is_left = (b.x() - a.x()) * (py - a.y()) - (px - a.x()) * (b.y() - a.y());
            if a.y() <= py {
                if b.y() > py && is_left > 0.0 {
                    wn += 1;
                }
            } else if b.y() <= py && is_left < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    /// Smallest `rho > 0` with `origin + rho * dir` on the polyline.
    fn ray_hit(&self, origin: &Point, dir: &Point) -> f64 {
        let (ox, oy, dx, dy) = (origin.x(), origin.y(), dir.x(), dir.y());
        let mut best = f64::INFINITY;
        for i in 0..self.segment_count() {
            let (a, b) = self.segment(i);
            let (ex, ey) = (b.x() - a.x(), b.y() - a.y());
            let denom = dx * ey - dy * ex;
            if denom.abs() < 1e-300 {
                continue;
            }
            let (wx, wy) = (a.x() - ox, a.y() - oy);
            let rho = (wx * ey - wy * ex) / denom;
            let u = (wx * dy - wy * dx) / denom;
            if rho > 0.0 && (0.0..=1.0).contains(&u) {
                best = best.min(rho);
            }
        }
        best
    }
}

/// The domains used throughout the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// R^n minus one point.
    PuncturedSpace { puncture: Point },
    /// The open unit ball.
    UnitBall { dim: usize },
    /// The unit ball minus one interior point.
    PuncturedUnitBall { puncture: Point },
    /// The upper half-space `x_n > 0`.
    HalfSpace { dim: usize },
    /// A planar domain bounded by a sampled polyline. Closed polylines bound
    /// their interior; an open polyline is a slit removed from the plane.
    SampledBoundary(Polyline),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::PuncturedSpace { puncture } => {
                write!(f, "R^{} \\ {{{puncture}}}", puncture.dim())
            }
            Domain::UnitBall { dim } => write!(f, "B^{dim}"),
            Domain::PuncturedUnitBall { puncture } => {
                write!(f, "B^{} \\ {{{puncture}}}", puncture.dim())
            }
            Domain::HalfSpace { dim } => write!(f, "H^{dim}"),
            Domain::SampledBoundary(p) => write!(
                f,
                "sampled boundary ({} points, {})",
                p.samples().len(),
                if p.is_closed() { "closed" } else { "open" }
            ),
        }
    }
}

impl Domain {
    pub fn punctured_space(puncture: Point) -> Self {
        Domain::PuncturedSpace { puncture }
    }

    /// R^2 minus the origin.
    pub fn punctured_plane() -> Self {
        Domain::PuncturedSpace {
            puncture: Point::origin(2),
        }
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Domain::UnitBall { dim })
    }

    pub fn punctured_unit_ball(puncture: Point) -> Result<Self> {
        if puncture.norm() >= 1.0 {
            return Err(Error::InvalidDomain(format!(
                "puncture {puncture} must lie inside the unit ball"
            )));
        }
        Ok(Domain::PuncturedUnitBall { puncture })
    }

    pub fn half_space(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Domain::HalfSpace { dim })
    }

    pub fn sampled(samples: Vec<Point>, closed: bool) -> Result<Self> {
        Ok(Domain::SampledBoundary(Polyline::new(samples, closed)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::PuncturedSpace { puncture } | Domain::PuncturedUnitBall { puncture } => {
                puncture.dim()
            }
            Domain::UnitBall { dim } | Domain::HalfSpace { dim } => *dim,
            Domain::SampledBoundary(_) => 2,
        }
    }

    /// Whether the domain is bounded in R^n.
    pub fn is_bounded(&self) -> bool {
        match self {
            Domain::UnitBall { .. } | Domain::PuncturedUnitBall { .. } => true,
            Domain::PuncturedSpace { .. } | Domain::HalfSpace { .. } => false,
            Domain::SampledBoundary(p) => p.is_closed(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        match self {
            Domain::PuncturedSpace { puncture } => x != puncture,
            Domain::UnitBall { .. } => x.norm() < 1.0,
            Domain::PuncturedUnitBall { puncture } => x.norm() < 1.0 && x != puncture,
            Domain::HalfSpace { .. } => x.last() > 0.0,
            Domain::SampledBoundary(p) => {
                p.distance(x) > 0.0 && (!p.is_closed() || p.winding_number(x) != 0)
            }
        }
    }

    pub(crate) fn ensure_contains(&self, x: &Point) -> Result<()> {
        x.ensure_dim(self.dim())?;
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInDomain {
                domain: self.to_string(),
                point: x.coords().to_vec(),
            })
        }
    }

    /// Euclidean distance from `x` to the boundary.
    pub fn boundary_distance(&self, x: &Point) -> Result<f64> {
        self.ensure_contains(x)?;
        Ok(self.boundary_distance_unchecked(x))
    }

    pub(crate) fn boundary_distance_unchecked(&self, x: &Point) -> f64 {
        match self {
            Domain::PuncturedSpace { puncture } => x.dist(puncture),
            Domain::UnitBall { .. } => 1.0 - x.norm(),
            Domain::PuncturedUnitBall { puncture } => x.dist(puncture).min(1.0 - x.norm()),
            Domain::HalfSpace { .. } => x.last(),
            Domain::SampledBoundary(p) => p.distance(x),
        }
    }

    /// Distance along the ray `x + rho * dir` (unit `dir`) to the first boundary
    /// point, or infinity if the ray never meets the finite boundary.
    pub fn exit_distance(&self, x: &Point, dir: &Point) -> f64 {
        let puncture_hit = |a: &Point| {
            let w = a.sub(x);
            let along = w.dot(dir);
            if along > 0.0 && w.offset(dir, -along).norm() <= 1e-12 * w.norm().max(1.0) {
                along
            } else {
                f64::INFINITY
            }
        };
        let sphere_exit = || {
            let b = x.dot(dir);
            let c = x.norm_sq() - 1.0;
            -b + (b * b - c).max(0.0).sqrt()
        };
        match self {
            Domain::PuncturedSpace { puncture } => puncture_hit(puncture),
            Domain::UnitBall { .. } => sphere_exit(),
            Domain::PuncturedUnitBall { puncture } => puncture_hit(puncture).min(sphere_exit()),
            Domain::HalfSpace { .. } => {
                let dn = dir.last();
                if dn < 0.0 {
                    x.last() / -dn
                } else {
                    f64::INFINITY
                }
            }
            Domain::SampledBoundary(p) => p.ray_hit(x, dir),
        }
    }

    /// Finite boundary points spread over the boundary. Planar spheres and
    /// lines are sampled on a regular grid; higher-dimensional ones draw
    /// directions from `rng`. Half-space samples are spread uniformly in the
    /// visual angle seen from `around`.
    pub fn boundary_samples<R: Rng + ?Sized>(
        &self,
        around: &Point,
        count: usize,
        rng: &mut R,
    ) -> Vec<Point> {
        let count = count.max(1);
        let dim = self.dim();
        let sphere = |rng: &mut R| -> Vec<Point> {
            if dim == 2 {
                (0..count)
                    .map(|k| {
                        let th = std::f64::consts::TAU * k as f64 / count as f64;
                        Point::xy(th.cos(), th.sin())
                    })
                    .collect()
            } else {
                (0..count).map(|_| random_unit(dim, rng)).collect()
            }
        };
        match self {
            Domain::PuncturedSpace { puncture } => vec![puncture.clone()],
            Domain::UnitBall { .. } => sphere(rng),
            Domain::PuncturedUnitBall { puncture } => {
                let mut v = sphere(rng);
                v.push(puncture.clone());
                v
            }
            Domain::HalfSpace { .. } => {
                let h = around.last().abs().max(f64::MIN_POSITIVE);
                (0..count)
                    .map(|k| {
                        let mut c = around.coords().to_vec();
                        *c.last_mut().unwrap() = 0.0;
                        if dim == 2 {
                            let th = std::f64::consts::PI * ((k as f64 + 0.5) / count as f64 - 0.5);
                            c[0] += h * th.tan();
                        } else {
                            let th = std::f64::consts::FRAC_PI_2 * rng.gen::<f64>();
                            let dir = random_unit(dim - 1, rng);
                            for (ci, di) in c.iter_mut().zip(dir.coords()) {
                                *ci += h * th.tan() * di;
                            }
                        }
                        Point(c)
                    })
                    .collect()
            }
            Domain::SampledBoundary(p) => {
                let len = p.length();
                let n = if p.is_closed() {
                    count
                } else {
                    count.max(2) - 1
                };
                (0..count)
                    .map(|k| p.point_at(len * k as f64 / n as f64))
                    .collect()
            }
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::InvalidDomain(format!(
            "dimension must be at least 2, got {dim}"
        )))
    } else {
        Ok(())
    }
}

/// Uniform random direction on the unit sphere of R^dim (dim >= 1).
pub(crate) fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Point {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
        let n = v.iter().fold(0.0_f64, |a, &c| a.hypot(c));
        if n > 1e-12 {
            let v: Vec<f64> = v.into_iter().map(|c| c / n).collect();
            return if v.len() >= 2 {
                Point(v)
            } else {
                Point(vec![v[0], 0.0])
            };
        }
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

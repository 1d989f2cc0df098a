//! Grid-graph approximation of the quasihyperbolic metric in the plane.
//!
//! Nodes are the lattice points inside the domain; each node links to every
//! lattice offset `(dx, dy)` with `max(|dx|, |dy|) <= neighborhood` and
//! `gcd(dx, dy) = 1`, weighted by `|e| / delta_D(midpoint)`. With the default
//! neighborhood of 4 the direction bias of the lattice stays below 1%.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::geometry::{segment_distance, Domain, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptions {
    /// Cells along the longer side of the bounding box.
    pub cells: usize,
    pub neighborhood: i32,
    /// `[x_min, x_max, y_min, y_max]`; derived from the domain and the two
    /// points when absent.
    pub bounds: Option<[f64; 4]>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            cells: 320,
            neighborhood: 4,
            bounds: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| self.node.cmp(&other.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn auto_bounds(domain: &Domain, x: &Point, y: &Point) -> [f64; 4] {
    let bbox = |pts: &[&Point], pad: f64| {
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for p in pts {
            x0 = x0.min(p.x());
            x1 = x1.max(p.x());
            y0 = y0.min(p.y());
            y1 = y1.max(p.y());
        }
        [x0 - pad, x1 + pad, y0 - pad, y1 + pad]
    };
    match domain {
        Domain::UnitBall { .. } | Domain::PuncturedUnitBall { .. } => [-1.0, 1.0, -1.0, 1.0],
        Domain::PuncturedSpace { puncture } => {
            let r = 1.5 * x.dist(puncture).max(y.dist(puncture));
            [
                puncture.x() - r,
                puncture.x() + r,
                puncture.y() - r,
                puncture.y() + r,
            ]
        }
        Domain::HalfSpace { .. } => {
            let pad = 1.5 * x.dist(y).max(x.last()).max(y.last());
            let b = bbox(&[x, y], pad);
            [b[0], b[1], 0.0, b[3]]
        }
        Domain::SampledBoundary(poly) => {
            let pts: Vec<&Point> = poly.samples().iter().collect();
            if poly.is_closed() {
                bbox(&pts, 0.0)
            } else {
                let mut all = pts;
                all.push(x);
                all.push(y);
                let b = bbox(&all, 0.0);
                let pad = 0.5 * (b[1] - b[0]).max(b[3] - b[2]);
                [b[0] - pad, b[1] + pad, b[2] - pad, b[3] + pad]
            }
        }
    }
}

fn segments_cross(p: &Point, q: &Point, a: &Point, b: &Point) -> bool {
    let orient = |u: &Point, v: &Point, w: &Point| {
        (v.x() - u.x()) * (w.y() - u.y()) - (v.y() - u.y()) * (w.x() - u.x())
    };
    let d1 = orient(a, b, p);
    let d2 = orient(a, b, q);
    let d3 = orient(p, q, a);
    let d4 = orient(p, q, b);
    (d1 * d2 <= 0.0) && (d3 * d4 <= 0.0)
}

/// Weight of the straight edge `p -> q`, or `None` if it leaves the domain.
fn edge_weight(domain: &Domain, p: &Point, q: &Point) -> Option<f64> {
    let mid = p.midpoint(q);
    if !domain.contains(&mid) {
        return None;
    }
    match domain {
        Domain::PuncturedSpace { puncture } | Domain::PuncturedUnitBall { puncture } => {
            if segment_distance(puncture, p, q).0 == 0.0 {
                return None;
            }
        }
        Domain::SampledBoundary(poly) => {
            for i in 0..poly.segment_count() {
                let (a, b) = poly.segment(i);
                if segments_cross(p, q, a, b) {
                    return None;
                }
            }
        }
        _ => {}
    }
    Some(p.dist(q) / domain.boundary_distance_unchecked(&mid))
}

/// Shortest-path estimate of `k_D(x, y)` on a lattice graph.
pub fn quasihyperbolic_grid(
    domain: &Domain,
    x: &Point,
    y: &Point,
    opts: &GridOptions,
) -> Result<f64> {
    if domain.dim() != 2 {
        return Err(Error::Unsupported(
            "grid quasihyperbolic metric is planar only".into(),
        ));
    }
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    if x == y {
        return Ok(0.0);
    }
    if opts.cells < 4 || opts.neighborhood < 1 {
        return Err(Error::Range(
            "grid needs at least 4 cells and neighborhood >= 1".into(),
        ));
    }
    let [x0, x1, y0, y1] = opts.bounds.unwrap_or_else(|| auto_bounds(domain, x, y));
    let h = (x1 - x0).max(y1 - y0) / opts.cells as f64;
    let nx = ((x1 - x0) / h).ceil() as i32 + 1;
    let ny = ((y1 - y0) / h).ceil() as i32 + 1;
    let node_point = |i: i32, j: i32| Point::xy(x0 + i as f64 * h, y0 + j as f64 * h);
    let index = |i: i32, j: i32| (i * ny + j) as usize;
    let n_grid = (nx * ny) as usize;
    let inside: Vec<bool> = (0..nx)
        .flat_map(|i| (0..ny).map(move |j| (i, j)))
        .map(|(i, j)| domain.contains(&node_point(i, j)))
        .collect();

    let k = opts.neighborhood;
    let offsets: Vec<(i32, i32)> = (-k..=k)
        .flat_map(|dx| (-k..=k).map(move |dy| (dx, dy)))
        .filter(|&(dx, dy)| (dx, dy) != (0, 0) && gcd(dx, dy) == 1)
        .collect();

    // the two endpoints join every inside lattice node within k cells
    let attach = |p: &Point| -> Vec<(usize, f64)> {
        let ci = ((p.x() - x0) / h).round() as i32;
        let cj = ((p.y() - y0) / h).round() as i32;
        let mut out = Vec::new();
        for i in (ci - k).max(0)..=(ci + k).min(nx - 1) {
            for j in (cj - k).max(0)..=(cj + k).min(ny - 1) {
                if inside[index(i, j)] {
                    if let Some(w) = edge_weight(domain, p, &node_point(i, j)) {
                        out.push((index(i, j), w));
                    }
                }
            }
        }
        out
    };
    let source = n_grid;
    let target = n_grid + 1;
    let from_source = attach(x);
    let to_target: HashMap<usize, f64> = attach(y).into_iter().collect();
    let direct = if x.dist(y) <= k as f64 * h {
        edge_weight(domain, x, y)
    } else {
        None
    };

    let mut dist = vec![f64::INFINITY; n_grid + 2];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        cost: 0.0,
        node: source,
    });
    while let Some(State { cost, node }) = heap.pop() {
        if node == target {
            return Ok(cost);
        }
        if cost > dist[node] {
            continue;
        }
        let mut relax = |next: usize, w: f64, heap: &mut BinaryHeap<State>| {
            let c = cost + w;
            if c < dist[next] {
                dist[next] = c;
                heap.push(State {
                    cost: c,
                    node: next,
                });
            }
        };
        if node == source {
            for &(n, w) in &from_source {
                relax(n, w, &mut heap);
            }
            if let Some(w) = direct {
                relax(target, w, &mut heap);
            }
            continue;
        }
        let (i, j) = (node as i32 / ny, node as i32 % ny);
        let p = node_point(i, j);
        for &(dx, dy) in &offsets {
            let (a, b) = (i + dx, j + dy);
            if a < 0 || b < 0 || a >= nx || b >= ny || !inside[index(a, b)] {
                continue;
            }
            let q = node_point(a, b);
            if let Some(w) = edge_weight(domain, &p, &q) {
                relax(index(a, b), w, &mut heap);
            }
        }
        if let Some(&w) = to_target.get(&node) {
            relax(target, w, &mut heap);
        }
    }
    Err(Error::Precondition(
        "grid graph does not connect the two points".into(),
    ))
}

//! Acceptance suite. Every criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails.
//!
//! Run with `cargo test -p cassini-core --test acceptance -- --nocapture`.

use std::f64::consts::{E, TAU};
use std::time::Instant;

use cassini::analysis::{
    check_convexity_2d, explore_convexity_constant, inclusion_radii, verify_inclusion,
    InclusionParams, InclusionTheorem,
};
use cassini::balls::{trace_2d, BallSpec, RayOutcome, TraceOptions};
use cassini::metrics::{
    cassinian, distance_ratio, hyperbolic, quasihyperbolic, quasihyperbolic_grid, GridOptions,
};
use cassini::moebius::{distortion_experiment, sharpness_pairs, Direction};
use cassini::{Domain, Execution, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);

fn random_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = rng.gen_range(0.0..TAU);
    Point::xy(r * th.cos(), r * th.sin())
}

fn ball_geometry() -> Outcome {
    let domain = Domain::punctured_plane();
    let x = Point::xy(1.0, 0.0);
    let mut worst = 0.0_f64;
    let mut worst_radial = 0.0_f64;
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let (cx, rho) = (1.0 / (1.0 - r * r), r / (1.0 - r * r));
        let trace = trace_2d(
            &BallSpec::cassinian(domain.clone(), x.clone(), r).unwrap(),
            &TraceOptions::with_rays(720),
        )
        .unwrap();
        if !trace.is_bounded() || trace.vertices().len() != 720 {
            return (false, format!("R = {r}: trace has rays without a crossing"));
        }
        for (th, ray) in trace.thetas.iter().zip(&trace.rays) {
            let RayOutcome::Crossing { point, .. } = &ray.outcome else {
                unreachable!()
            };
            // vertex to circle
            worst = worst.max((point.dist(&Point::xy(cx, 0.0)) - rho).abs());
            // exact ray-circle intersection at the same angle
            let (ux, uy) = (th.cos(), th.sin());
            let b = ux * (1.0 - cx);
            let c = (1.0 - cx).powi(2) - rho * rho;
            let s = -b + (b * b - c).sqrt();
            worst_radial = worst_radial.max(point.dist(&Point::xy(1.0 + s * ux, s * uy)));
        }
    }
    let err = worst.max(worst_radial);
    (
        err <= 1e-6,
        format!("max deviation from Apollonius circles {err:.2e} (tol 1e-6)"),
    )
}

fn convexity_transition() -> Outcome {
    let domain = Domain::punctured_plane();
    let x = Point::xy(1.0, 0.0);
    let mut verdicts = Vec::new();
    let mut ok = true;
    for (r, want) in [
        (0.5, true),
        (0.9, true),
        (0.999, true),
        (1.001, false),
        (1.2, false),
    ] {
        let rep = check_convexity_2d(
            &BallSpec::cassinian(domain.clone(), x.clone(), r).unwrap(),
            720,
        )
        .unwrap();
        ok &= rep.convex == want;
        verdicts.push(format!(
            "R={r}:{}",
            if rep.convex { "convex" } else { "nonconvex" }
        ));
    }
    (ok, verdicts.join(" "))
}

fn half_plane_counterexample() -> Outcome {
    let h = Domain::half_space(2).unwrap();
    let x = Point::xy(0.0, 1.0);
    let c1 = cassinian(&h, &x, &Point::xy(0.0, 0.5)).unwrap();
    let c2 = cassinian(&h, &x, &Point::xy(2.0, 1.0)).unwrap();
    let c3 = cassinian(&h, &x, &Point::xy(1.0, 0.75)).unwrap();
    let bound = 9.0 * (17.0_f64 / 1261.0).sqrt();
    let rep = check_convexity_2d(&BallSpec::cassinian(h, x, 1.0).unwrap(), 720).unwrap();
    let ok =
        (c1 - 1.0).abs() <= 1e-9 && (c2 - 1.0).abs() <= 1e-9 && c3 >= bound - 1e-6 && !rep.convex;
    (
        ok,
        format!(
            "c(x,y1)-1 = {:.1e}, c(x,y2)-1 = {:.1e}, c(x,mid) = {c3:.6} >= {bound:.6}, convex = {}",
            c1 - 1.0,
            c2 - 1.0,
            rep.convex
        ),
    )
}

fn moebius_sharpness() -> Outcome {
    let a = Point::xy(0.5, 0.0);
    // the construction needs s + t >= 1 so that the sphere term is the infimum
    let params: Vec<(f64, f64)> = (0..20)
        .map(|k| {
            let s = 0.55 + 0.05 * (k / 4) as f64;
            (s, s + 0.05 * (1 + k % 4) as f64)
        })
        .collect();
    let pairs = sharpness_pairs(&a, &params).unwrap();
    let sharp = distortion_experiment(&a, &pairs, Direction::Forward, Execution::Parallel).unwrap();
    let max_dev = sharp
        .ratios
        .iter()
        .map(|r| (r - 3.0).abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let random: Vec<(Point, Point)> = (0..10_000)
        .map(|_| (random_in_disk(&mut rng, 1.0), random_in_disk(&mut rng, 1.0)))
        .collect();
    let rep = distortion_experiment(&a, &random, Direction::Forward, Execution::Parallel).unwrap();
    let (lo, hi) = (rep.min_ratio.unwrap(), rep.max_ratio.unwrap());
    let ok =
        sharp.ratios.len() == 20 && max_dev <= 1e-9 && lo >= 1.0 / 3.0 - 1e-9 && hi <= 3.0 + 1e-9;
    (
        ok,
        format!("sharp pairs |ratio - 3| <= {max_dev:.1e}; random ratios in [{lo:.6}, {hi:.6}]"),
    )
}

fn inclusion_sandwiches() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let punctured = Domain::punctured_plane();
    let half = Domain::half_space(2).unwrap();
    let ball = Domain::unit_ball(2).unwrap();
    let cases: Vec<(InclusionTheorem, &Domain, Point, f64)> = vec![
        (
            InclusionTheorem::CEuclid,
            &punctured,
            Point::xy(1.0, 0.0),
            0.5,
        ),
        (InclusionTheorem::CEuclid, &half, Point::xy(0.3, 0.8), 0.6),
        (InclusionTheorem::JEuclid, &half, Point::xy(0.3, 0.8), 0.5),
        (InclusionTheorem::CJ, &half, Point::xy(-0.2, 1.5), 0.3),
        (
            InclusionTheorem::CJPunctured,
            &punctured,
            Point::xy(1.0, 0.0),
            0.5,
        ),
        (InclusionTheorem::CRho, &ball, Point::xy(0.3, -0.2), 0.8),
        (InclusionTheorem::JRho, &ball, Point::xy(0.3, -0.2), 0.7),
        (
            InclusionTheorem::CRhoRefined,
            &ball,
            Point::xy(0.3, -0.2),
            0.8,
        ),
        (
            InclusionTheorem::KCPunctured,
            &punctured,
            Point::xy(0.6, 0.8),
            0.7,
        ),
        (InclusionTheorem::JK, &half, Point::xy(0.3, 0.8), 0.5),
        (InclusionTheorem::CK, &punctured, Point::xy(0.6, 0.8), 0.3),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (th, domain, x, t) in cases {
        let rep = verify_inclusion(th, domain, &x, t, 1000, &mut rng, Execution::Parallel).unwrap();
        let expected_outer = if rep.outer_radius.is_some() { 1000 } else { 0 };
        ok &= rep.inner_violations == 0
            && rep.outer_violations == 0
            && rep.inner_samples == 1000
            && rep.outer_samples == expected_outer;
        if matches!(
            th,
            InclusionTheorem::CEuclid | InclusionTheorem::CJPunctured
        ) && rep.sharpness_gap_inner.is_some()
        {
            let gap = rep
                .sharpness_gap_inner
                .unwrap()
                .max(rep.sharpness_gap_outer.unwrap());
            ok &= gap <= 1e-10;
            notes.push(format!("{th} gap {gap:.1e}"));
        }
        if rep.inner_violations + rep.outer_violations > 0 {
            notes.push(format!(
                "{th}: {}+{} violations",
                rep.inner_violations, rep.outer_violations
            ));
        }
    }
    (
        ok,
        format!(
            "10 theorems, 1000 samples per inclusion; {}",
            notes.join(", ")
        ),
    )
}

fn limit_ratios() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let delta = 0.7;
    let t = 1e-4 / delta;
    for (th, target) in [
        (InclusionTheorem::CEuclid, 1.0),
        (InclusionTheorem::CJ, 1.0),
        (InclusionTheorem::CJPunctured, 1.0),
        (InclusionTheorem::CK, 1.0),
        (InclusionTheorem::CRho, 2.0),
    ] {
        let (r, big_r) = inclusion_radii(th, InclusionParams { t, delta }).unwrap();
        let ratio = big_r.unwrap() / r;
        ok &= (ratio - target).abs() <= 0.01 * target;
        notes.push(format!("{th} {ratio:.5}"));
    }
    (ok, format!("R/r at t*delta = 1e-4: {}", notes.join(", ")))
}

/// Brute-force minimum of `f` on `[lo, hi]`: a dense uniform scan, then
/// repeated resampling around the best few samples.
fn zoom_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let mut samples: Vec<(f64, f64)> = (0..=n)
        .map(|k| lo + h * k as f64)
        .map(|s| (f(s), s))
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = samples[0].0;
    for &(_, centre) in samples.iter().take(8) {
        let (mut c, mut w) = (centre, h);
        for _ in 0..6 {
            let (v, s) = (0..=200)
                .map(|k| c - w + 2.0 * w * k as f64 / 200.0)
                .map(|s| (f(s), s))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap();
            best = best.min(v);
            c = s;
            w /= 50.0;
        }
    }
    best
}

/// Oracle for `inf |x - p| |p - y|` over the unit circle.
fn circle_oracle(x: &Point, y: &Point) -> f64 {
    zoom_min(
        |th| {
            let p = Point::xy(th.cos(), th.sin());
            x.dist(&p) * p.dist(y)
        },
        0.0,
        TAU,
    )
}

/// Oracle for the same infimum over the real line, searched around the feet.
fn line_oracle(x: &Point, y: &Point) -> f64 {
    let (lo, hi) = (x.x().min(y.x()) - 1.0, x.x().max(y.x()) + 1.0);
    zoom_min(
        |s| {
            let p = Point::xy(s, 0.0);
            x.dist(&p) * p.dist(y)
        },
        lo,
        hi,
    )
}

fn metric_cross_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ball = Domain::unit_ball(2).unwrap();
    let mut chain_viol = 0;
    for _ in 0..10_000 {
        let (x, y) = (random_in_disk(&mut rng, 1.0), random_in_disk(&mut rng, 1.0));
        let j = distance_ratio(&ball, &x, &y).unwrap();
        let rho = hyperbolic(&ball, &x, &y).unwrap();
        if rho < j - 1e-12 || rho > 2.0 * j + 1e-12 {
            chain_viol += 1;
        }
    }
    let mut antipodal_dev = 0.0_f64;
    for k in 1..100 {
        let x = random_in_disk(&mut rng, 1.0).scale(k as f64 / 100.0);
        let y = x.scale(-1.0);
        let j = distance_ratio(&ball, &x, &y).unwrap();
        antipodal_dev = antipodal_dev.max((hyperbolic(&ball, &x, &y).unwrap() - 2.0 * j).abs());
    }

    let punctured = Domain::punctured_space(Point::xy(0.3, -0.1));
    let mut kj_viol = 0;
    for _ in 0..10_000 {
        let (x, y) = (random_in_disk(&mut rng, 3.0), random_in_disk(&mut rng, 3.0));
        if !punctured.contains(&x) || !punctured.contains(&y) {
            continue;
        }
        if quasihyperbolic(&punctured, &x, &y).unwrap()
            < distance_ratio(&punctured, &x, &y).unwrap() - 1e-12
        {
            kj_viol += 1;
        }
    }

    let half = Domain::half_space(2).unwrap();
    let mut worst_rel = 0.0_f64;
    for _ in 0..1000 {
        let (x, y) = (
            random_in_disk(&mut rng, 0.999),
            random_in_disk(&mut rng, 0.999),
        );
        if x == y {
            continue;
        }
        let c = cassinian(&ball, &x, &y).unwrap();
        let oracle = x.dist(&y) / circle_oracle(&x, &y);
        worst_rel = worst_rel.max((c - oracle).abs() / oracle);
    }
    for _ in 0..1000 {
        let x = Point::xy(rng.gen_range(-2.0..2.0), rng.gen_range(0.01..2.0));
        let y = Point::xy(rng.gen_range(-2.0..2.0), rng.gen_range(0.01..2.0));
        let c = cassinian(&half, &x, &y).unwrap();
        let oracle = x.dist(&y) / line_oracle(&x, &y);
        worst_rel = worst_rel.max((c - oracle).abs() / oracle);
    }
    let ok = chain_viol == 0 && antipodal_dev <= 1e-9 && kj_viol == 0 && worst_rel <= 1e-6;
    (
        ok,
        format!(
            "j<=rho<=2j violations {chain_viol}, antipodal |rho-2j| {antipodal_dev:.1e}, k<j violations {kj_viol}, cassinian vs oracle rel {worst_rel:.1e}"
        ),
    )
}

fn quasihyperbolic_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = Point::xy(0.0, 0.0);
    let punctured = Domain::punctured_space(a.clone());
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let pick = |rng: &mut ChaCha8Rng| {
            let r = rng.gen_range(0.3..2.0);
            let th = rng.gen_range(0.0..TAU);
            Point::xy(r * th.cos(), r * th.sin())
        };
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        let exact = quasihyperbolic(&punctured, &x, &y).unwrap();
        let grid = quasihyperbolic_grid(&punctured, &x, &y, &GridOptions::default()).unwrap();
        worst = worst.max((grid - exact).abs() / exact);
    }
    // Simpson's rule for the integral of dt / t over [1, e] along the radius
    let n = 1000;
    let h = (E - 1.0) / n as f64;
    let f = |t: f64| 1.0 / t;
    let integral = (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * f(1.0 + i as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0;
    let radial = quasihyperbolic(&punctured, &Point::xy(1.0, 0.0), &Point::xy(E, 0.0)).unwrap();
    let ok = worst <= 0.02 && (radial - 1.0).abs() <= 1e-3 && (radial - integral).abs() <= 1e-3;
    (ok, format!("grid vs closed form max rel {worst:.2e} (tol 2e-2); radial k = {radial}, integral = {integral:.9}"))
}

fn convexity_constant() -> Outcome {
    let start = Instant::now();
    let centers: Vec<Point> = (0..10)
        .map(|i| Point::xy(0.7 * i as f64 - 3.0, 0.3 + 0.4 * i as f64))
        .collect();
    let est = explore_convexity_constant(&centers, 1e-3, 360, Execution::Parallel).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let sane = est
        .samples
        .iter()
        .all(|s| s.floor_convex && !s.ceiling_convex);
    let ok = (0.80..=0.90).contains(&est.estimate) && secs < 120.0 && sane;
    (
        ok,
        format!(
            "estimated a = {:.4} over 10 centers in {secs:.1}s",
            est.estimate
        ),
    )
}

fn determinism() -> Outcome {
    let run = |exec: Execution| {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rep = verify_inclusion(
            InclusionTheorem::CJ,
            &Domain::half_space(2).unwrap(),
            &Point::xy(0.1, 0.9),
            0.4,
            200,
            &mut rng,
            exec,
        )
        .unwrap();
        let ball =
            BallSpec::cassinian(Domain::punctured_plane(), Point::xy(1.0, 0.0), 0.6).unwrap();
        let opts = TraceOptions {
            exec,
            ..TraceOptions::with_rays(180)
        };
        (
            serde_json::to_string(&rep).unwrap(),
            trace_2d(&ball, &opts).unwrap().to_csv(),
        )
    };
    let first = run(Execution::Parallel);
    let second = run(Execution::Parallel);
    let sequential = run(Execution::Sequential);
    let ok = first == second && first == sequential;
    (
        ok,
        format!(
            "JSON {} bytes, CSV {} bytes identical across runs and execution modes",
            first.0.len(),
            first.1.len()
        ),
    )
}

#[test]
fn acceptance_suite() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("punctured-plane ball geometry", ball_geometry),
        ("convexity phase transition", convexity_transition),
        ("half-plane counterexample", half_plane_counterexample),
        ("Moebius sharpness", moebius_sharpness),
        ("inclusion sandwiches", inclusion_sandwiches),
        ("limit ratios", limit_ratios),
        ("metric cross-checks", metric_cross_checks),
        ("quasihyperbolic oracle", quasihyperbolic_oracle),
        ("convexity constant explorer", convexity_constant),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        println!(
            "{} [{:>2}] {name}: {detail} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

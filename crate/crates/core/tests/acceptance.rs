//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p kgon-core --test acceptance`.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use kgon_core::bounds::{BoundKind, BoundSearch, Criterion, SearchMode};
use kgon_core::curvature::{resample_curvature, CurvatureProfile};
use kgon_core::features::Predictor;
use kgon_core::geometry::{Contour, Curve, Parameterization, Point};
use kgon_core::pipeline::{analyze_batch, Analysis};
use kgon_core::regression::{fit_columns, t_cdf, FittedModel};
use kgon_core::shape::{preshape_distance, vw_distance, Preshape};
use kgon_core::smoothing::{smooth, SmootherConfig};
use kgon_core::synthetic;
use kgon_core::validation::{cv_8020, CvConfig, Response};
use kgon_core::{Error, Exec, FeatureRow};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StudentT};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// A bound that does not exist below `K` counts as `K + 1`.
fn bound_or_cap(b: &Result<usize, Error>, points: usize) -> Result<usize, String> {
    match b {
        Ok(k) => Ok(*k),
        Err(Error::NoFeasibleK { .. }) => Ok(points + 1),
        Err(e) => Err(e.to_string()),
    }
}

fn median(mut v: Vec<i64>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn shape_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let blobs = synthetic::smooth_blobs(11, 100, 200).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (i, c) in blobs.iter().enumerate() {
        let lambda = rng.random_range(0.1..10.0);
        let theta = rng.random_range(0.0..TAU);
        let beta = Point::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        let moved = c
            .transformed(Point::from_polar(lambda, theta), beta)
            .map_err(|e| e.to_string())?;
        let rho = vw_distance(c, &moved, c.len()).map_err(|e| e.to_string())?.rho;
        worst = worst.max(rho);
        ensure(rho < 1e-10, format!("contour {i}: rho = {rho:e}"))?;
        let a = BoundSearch::new(c).map_err(|e| e.to_string())?;
        let b = BoundSearch::new(&moved).map_err(|e| e.to_string())?;
        let ra = a.report("a", 0.005, SearchMode::Linear).bounds;
        let rb = b.report("b", 0.005, SearchMode::Linear).bounds;
        ensure(ra == rb, format!("contour {i}: bounds {ra:?} vs {rb:?}"))?;
    }
    Ok(format!("100 contours, max rho {worst:.1e}, bounds identical"))
}

fn circle_oracle() -> Check {
    let start = Instant::now();
    let c = synthetic::circle(2048, 1.0).map_err(|e| e.to_string())?;
    let search = BoundSearch::new(&c).map_err(|e| e.to_string())?;
    let kind = BoundKind::new(Criterion::Length, Parameterization::ArcLength);
    let curve = search.error_curve(kind, 64).map_err(|e| e.to_string())?;
    let closed = |k: usize| {
        let x = PI / k as f64;
        1.0 - x.sin() / x
    };
    let mut worst = 0.0f64;
    for &(k, err) in &curve.values {
        worst = worst.max((err - closed(k)).abs());
    }
    ensure(curve.values.len() == 61, "curve does not span k = 4..64")?;
    ensure(worst < 1e-4, format!("max deviation from closed form {worst:e}"))?;
    let expected = (4..).find(|&k| closed(k) <= 0.005).unwrap();
    let found = search
        .find_bound(kind, 0.005, SearchMode::Linear)
        .map_err(|e| e.to_string())?;
    ensure(found == expected, format!("kLA = {found}, closed form gives {expected}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, format!("took {secs:.2} s"))?;
    Ok(format!("max curve deviation {worst:.1e}, kLA = {found} = closed form, {secs:.2} s"))
}

fn square_fixed_point() -> Check {
    let sq = synthetic::square(100).map_err(|e| e.to_string())?;
    ensure(sq.anchor_fraction() == 0.0, "anchor is not the first corner")?;
    let kind = BoundKind::new(Criterion::Length, Parameterization::ArcLength);
    let search = BoundSearch::new(&sq).map_err(|e| e.to_string())?;
    for e in [0.05, 0.005, 0.0005] {
        let k = search.find_bound(kind, e, SearchMode::Linear).map_err(|e| e.to_string())?;
        ensure(k == 4, format!("E = {e}: kLA = {k}"))?;
    }
    Ok("K = 400 square, kLA = 4 at E = 0.05, 0.005, 0.0005".into())
}

fn random_unit(rng: &mut ChaCha8Rng, m: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..m)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `‖uu* − vv*‖²_F` from the explicit `m × m` matrices.
fn frobenius_sq(u: &[Complex64], v: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..u.len() {
        for j in 0..u.len() {
            acc += (u[i] * u[j].conj() - v[i] * v[j].conj()).norm_sqr();
        }
    }
    acc
}

fn vw_maximum() -> Check {
    let u = Preshape::new(&[Point::new(1.0, 0.0), Point::new(-1.0, 0.0), Point::new(0.0, 0.0)])
        .map_err(|e| e.to_string())?;
    let v = Preshape::new(&[Point::new(1.0, 0.0), Point::new(1.0, 0.0), Point::new(-2.0, 0.0)])
        .map_err(|e| e.to_string())?;
    let rho = preshape_distance(&u, &v).rho;
    ensure((rho - SQRT_2).abs() < 1e-12, format!("orthogonal rho = {rho}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = rng.random_range(4..=64);
        let a = random_unit(&mut rng, m);
        let b = random_unit(&mut rng, m);
        let inner: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        let shortcut = 2.0 * (1.0 - inner.norm_sqr());
        worst = worst.max((shortcut - frobenius_sq(&a, &b)).abs());
    }
    ensure(worst < 1e-12, format!("rank-one shortcut off by {worst:e}"))?;
    Ok(format!("orthogonal rho = sqrt 2, rank-one vs Frobenius max gap {worst:.1e} over 1000 pairs"))
}

fn curvature_oracle() -> Check {
    let c = smooth(&synthetic::circle(512, 1.0).map_err(|e| e.to_string())?, SmootherConfig::default())
        .map_err(|e| e.to_string())?;
    let profile = CurvatureProfile::new(&c).map_err(|e| e.to_string())?;
    let rel = (profile.total_absolute() - TAU).abs() / TAU;
    ensure(rel < 0.01, format!("total |kappa| off by {:.3}%", 100.0 * rel))?;
    let mut worst = 0.0f64;
    for k in [4, 7, 16, 33, 100, 512] {
        let a = c.resample_arclength(k).map_err(|e| e.to_string())?;
        let b = resample_curvature(&c, &profile, k).map_err(|e| e.to_string())?;
        for (p, q) in a.vertices().iter().zip(b.vertices()) {
            worst = worst.max((p - q).norm());
        }
    }
    ensure(worst < 1e-6, format!("curvature vs arc-length vertices differ by {worst:e}"))?;
    Ok(format!(
        "total |kappa| within {:.1e} of 2 pi, resampling gap {worst:.1e}",
        rel
    ))
}

fn smoothing_ordering() -> Check {
    let suite = synthetic::jagged_suite(1, 20).map_err(|e| e.to_string())?;
    let la = BoundKind::new(Criterion::Length, Parameterization::ArcLength);
    let lc = BoundKind::new(Criterion::Length, Parameterization::Curvature);
    let median_gap = |passes: usize| -> Result<f64, String> {
        let cfg = SmootherConfig::new(3, passes).map_err(|e| e.to_string())?;
        let gaps = Exec::default().map(suite.len(), |i| -> Result<i64, String> {
            let s = smooth(&suite[i], cfg).map_err(|e| e.to_string())?;
            let search = BoundSearch::new(&s).map_err(|e| e.to_string())?;
            let a = bound_or_cap(&search.find_bound(la, 0.005, SearchMode::Linear), s.len())?;
            let c = bound_or_cap(&search.find_bound(lc, 0.005, SearchMode::Linear), s.len())?;
            Ok(c as i64 - a as i64)
        });
        Ok(median(gaps.into_iter().collect::<Result<Vec<_>, _>>()?))
    };
    let one = median_gap(1)?;
    let four = median_gap(4)?;
    ensure(one > 0.0 && four < 0.0, format!("median kLC - kLA: {one} at 1 pass, {four} at 4 passes"))?;
    Ok(format!("median kLC - kLA = {one} at 1 pass, {four} at 4 passes"))
}

/// The 238-contour outline suite, smoothed four times, with bounds at the
/// two thresholds used by the monotonicity and validation criteria.
struct Dataset {
    tight: Vec<Analysis>,
    loose: Vec<Analysis>,
}

fn dataset() -> Result<&'static Dataset, String> {
    static DATA: OnceLock<Result<Dataset, String>> = OnceLock::new();
    DATA.get_or_init(|| {
        let suite = synthetic::outline_suite(2024).map_err(|e| e.to_string())?;
        let items: Vec<(String, Contour)> = suite.into_iter().map(|s| (s.id, s.contour)).collect();
        let run = |e: f64| -> Result<Vec<Analysis>, String> {
            analyze_batch(&items, SmootherConfig::default(), e, SearchMode::Linear, Exec::default())
                .into_iter()
                .map(|r| r.map_err(|e| e.to_string()))
                .collect()
        };
        Ok(Dataset {
            tight: run(0.005)?,
            loose: run(0.05)?,
        })
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn threshold_monotonicity() -> Check {
    let data = dataset()?;
    let mut extra = vec![
        synthetic::circle(256, 1.0),
        synthetic::ellipse(300, 2.0, 1.0),
        synthetic::square(50),
        synthetic::star(5, 1.0, 0.4, 40),
        synthetic::stadium(400, 1.0, 2.0),
    ]
    .into_iter()
    .collect::<Result<Vec<_>, _>>()
    .map_err(|e| e.to_string())?;
    extra.extend(synthetic::smooth_blobs(3, 20, 300).map_err(|e| e.to_string())?);
    let mut checked = 0;
    for (a, b) in data.tight.iter().zip(&data.loose) {
        for kind in BoundKind::ALL {
            let k_tight = bound_or_cap(a.bounds.get(kind), a.bounds.points)?;
            let k_loose = bound_or_cap(b.bounds.get(kind), b.bounds.points)?;
            ensure(k_tight >= k_loose, format!("{} {kind}: {k_tight} < {k_loose}", a.bounds.id))?;
            checked += 1;
        }
    }
    for (i, c) in extra.iter().enumerate() {
        let s = smooth(c, SmootherConfig::default()).map_err(|e| e.to_string())?;
        let search = BoundSearch::new(&s).map_err(|e| e.to_string())?;
        for kind in BoundKind::ALL {
            let k_tight = bound_or_cap(&search.find_bound(kind, 0.005, SearchMode::Linear), s.len())?;
            let k_loose = bound_or_cap(&search.find_bound(kind, 0.05, SearchMode::Linear), s.len())?;
            ensure(k_tight >= k_loose, format!("shape {i} {kind}: {k_tight} < {k_loose}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (contour, bound) pairs satisfy k(0.005) >= k(0.05)"))
}

fn regression_correctness() -> Check {
    // noiseless recovery
    let n = 50;
    let x1: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() * 4.0).collect();
    let x2: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).cos() * 10.0 + i as f64).collect();
    let y: Vec<f64> = (0..n).map(|i| 2.0 + 3.0 * x1[i] - 0.5 * x2[i]).collect();
    let cols = vec![("x1".to_string(), x1.clone()), ("x2".to_string(), x2.clone())];
    let m = fit_columns("y", &cols, &y).map_err(|e| e.to_string())?;
    let est: Vec<f64> = m.terms.iter().map(|t| t.estimate).collect();
    let gap = est
        .iter()
        .zip([2.0, 3.0, -0.5])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(gap < 1e-8 && m.rmse < 1e-8, format!("noiseless fit off by {gap:e}"))?;

    // t distribution against Monte Carlo
    let draws = 1_000_000;
    let df = 5.0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dist = StudentT::new(df).map_err(|e| e.to_string())?;
    let sample: Vec<f64> = (0..draws).map(|_| dist.sample(&mut rng)).collect();
    let mut worst_z = 0.0f64;
    for t in [-2.0, 0.0, 2.0] {
        let p = t_cdf(t, df);
        let hat = sample.iter().filter(|&&x| x <= t).count() as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        worst_z = worst_z.max((hat - p).abs() / se);
    }
    ensure(worst_z < 3.0, format!("t CDF differs from Monte Carlo by {worst_z:.2} SE"))?;

    // residual orthogonality on noisy data
    let noisy: Vec<f64> = y.iter().map(|v| v + rng.random_range(-1.0..1.0)).collect();
    let m: FittedModel = fit_columns("y", &cols, &noisy).map_err(|e| e.to_string())?;
    let resid: Vec<f64> = (0..n)
        .map(|i| noisy[i] - m.terms[0].estimate - m.terms[1].estimate * x1[i] - m.terms[2].estimate * x2[i])
        .collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ones = vec![1.0; n];
    let mut worst_dot = 0.0f64;
    for col in [&ones, &x1, &x2] {
        let dot: f64 = resid.iter().zip(col.iter()).map(|(r, x)| r * x).sum();
        worst_dot = worst_dot.max(dot.abs() / (norm(col) * norm(&noisy)));
    }
    ensure(worst_dot < 1e-8, format!("residual-regressor inner product {worst_dot:e}"))?;
    Ok(format!(
        "recovery gap {gap:.1e}, t CDF within {worst_z:.2} SE, orthogonality {worst_dot:.1e}"
    ))
}

fn responses(rows: &[Analysis]) -> Result<Vec<Response>, String> {
    BoundKind::ALL
        .iter()
        .map(|&kind| {
            let values = rows
                .iter()
                .map(|a| bound_or_cap(a.bounds.get(kind), a.bounds.points).map(|k| k as f64))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Response {
                name: kind.to_string(),
                values,
            })
        })
        .collect()
}

fn cv_determinism() -> Check {
    let data = dataset()?;
    let rows: Vec<FeatureRow> = data.tight.iter().map(|a| a.features.clone()).collect();
    ensure(rows.len() == 238, format!("{} rows", rows.len()))?;
    let responses = responses(&data.tight)?;
    let mut runs = Vec::new();
    let mut slowest = 0.0f64;
    for exec in [Exec::Sequential, Exec::Parallel { threads: 4 }, Exec::Parallel { threads: 8 }] {
        let cfg = CvConfig {
            replicates: 10_000,
            seed: 77,
            exec,
            ..CvConfig::default()
        };
        let start = Instant::now();
        let out = cv_8020(&rows, &responses, &cfg).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        ensure(secs < 120.0, format!("{exec:?} took {secs:.1} s"))?;
        let bits: Vec<u64> = out
            .iter()
            .flat_map(|s| s.rmse_samples.iter().map(|x| x.to_bits()))
            .collect();
        runs.push((bits, out));
    }
    for (bits, out) in &runs[1..] {
        ensure(*bits == runs[0].0, "replicate RMSEs differ between worker counts")?;
        ensure(
            out.iter().zip(&runs[0].1).all(|(a, b)| a.stats == b.stats && a.histogram == b.histogram),
            "summaries differ between worker counts",
        )?;
    }
    let terms: Vec<String> = runs[0]
        .1
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.terms.iter().map(|p: &Predictor| p.name()).collect();
            format!("{}[{}] mean {:.2}", s.response, names.join("+"), s.mean_rmse())
        })
        .collect();
    Ok(format!(
        "1/4/8 workers bit-identical, slowest run {slowest:.1} s; {}",
        terms.join(", ")
    ))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        (1, "shape invariance", shape_invariance),
        (2, "analytic circle", circle_oracle),
        (3, "exact polygon fixed point", square_fixed_point),
        (4, "VW maximum and rank-one identity", vw_maximum),
        (5, "curvature oracle", curvature_oracle),
        (6, "smoothing ordering effect", smoothing_ordering),
        (7, "threshold monotonicity", threshold_monotonicity),
        (8, "regression correctness", regression_correctness),
        (9, "CV determinism and scaling", cv_determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {id:>2}  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {id:>2}  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("SKIP  10  outline dataset regression: needs the external 238-contour dataset");
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

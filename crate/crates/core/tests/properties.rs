use std::f64::consts::{SQRT_2, TAU};

use kgon_core::bounds::{BoundKind, BoundSearch, SearchMode};
use kgon_core::curvature::{resample_curvature, CurvatureProfile};
use kgon_core::geometry::{Contour, Curve, Point};
use kgon_core::regression::fit_columns;
use kgon_core::shape::{preshape_distance, Preshape};
use kgon_core::smoothing::{smooth, SmootherConfig};
use kgon_core::synthetic::{self, RadialTemplate};
use kgon_core::validation::{Histogram, ResidualSigns, RunningStats};
use num_complex::Complex64;
use proptest::prelude::*;

/// Star-shaped simple polygon from sorted angles and positive radii.
fn star_polygon() -> impl Strategy<Value = Contour> {
    prop::collection::vec((0.0..TAU, 0.5f64..2.0), 6..40).prop_filter_map("degenerate", |mut v| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-3);
        Contour::ingest(v.into_iter().map(|(t, r)| Point::from_polar(r, t)).collect()).ok()
    })
}

/// Smooth radial blob with a few harmonics, `n` points.
fn blob(n: usize) -> impl Strategy<Value = Contour> {
    (prop::collection::vec((0.0f64..0.06, 0.0..TAU), 4), 1.0f64..1.6).prop_map(move |(amps, aspect)| {
        let t = RadialTemplate {
            harmonics: amps.iter().enumerate().map(|(i, &(a, p))| (i as u32 + 2, a, p)).collect(),
            bumps: vec![],
            aspect,
        };
        Contour::ingest(t.sample(n)).unwrap()
    })
}

fn unit_vector(m: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m).prop_filter_map("zero", |v| {
        let v: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| v.into_iter().map(|z| z / norm).collect())
    })
}

fn pair(max_m: usize) -> impl Strategy<Value = (Vec<Complex64>, Vec<Complex64>)> {
    (4..=max_m).prop_flat_map(|m| (unit_vector(m), unit_vector(m)))
}

fn is_rotation(a: &[Point], b: &[Point]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|r| a.iter().cycle().skip(r).zip(b).all(|(x, y)| x == y))
}

fn with_mean_removed(v: &[Complex64]) -> Preshape {
    Preshape::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ingest_is_orientation_insensitive(c in star_polygon()) {
        let mut rev = c.points().to_vec();
        rev.reverse();
        let again = Contour::ingest(rev).unwrap();
        prop_assert!(is_rotation(c.points(), again.points()));
        prop_assert!(kgon_core::geometry::signed_area2(again.points()) > 0.0);
    }

    #[test]
    fn centroid_ignores_starting_point(c in star_polygon(), start in 0usize..40) {
        let moved = c.rotated_start(start);
        prop_assert!((c.centroid() - moved.centroid()).norm() < 1e-12);
    }

    #[test]
    fn evaluation_is_unit_speed_continuous(c in star_polygon(), s in 0.0f64..0.999, e in -9i32..-2) {
        let eps = 10f64.powi(e);
        let d = (c.evaluate(s + eps) - c.evaluate(s)).norm();
        prop_assert!(d <= eps * c.perimeter() + 1e-12);
    }

    #[test]
    fn nested_arclength_refinement_does_not_shorten(c in blob(400), k in 4usize..100) {
        let coarse = c.resample_arclength(k).unwrap().perimeter();
        let fine = c.resample_arclength(2 * k).unwrap().perimeter();
        prop_assert!(fine >= coarse - 1e-12 * coarse);
    }

    #[test]
    fn rank_one_shortcut_matches_frobenius((u, v) in pair(64)) {
        let inner: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        let mut frob = 0.0;
        for i in 0..u.len() {
            for j in 0..u.len() {
                frob += (u[i] * u[j].conj() - v[i] * v[j].conj()).norm_sqr();
            }
        }
        prop_assert!((2.0 * (1.0 - inner.norm_sqr()) - frob).abs() < 1e-12);
    }

    #[test]
    fn distance_range_and_symmetry((u, v) in pair(64)) {
        let (a, b) = (with_mean_removed(&u), with_mean_removed(&v));
        let d = preshape_distance(&a, &b);
        prop_assert!(d.rho >= 0.0 && d.rho <= SQRT_2 + 1e-12);
        prop_assert_eq!(d.rho, preshape_distance(&b, &a).rho);
    }

    #[test]
    fn distance_vanishes_exactly_on_phase_multiples((u, v) in pair(32), theta in 0.0..TAU) {
        let a = with_mean_removed(&u);
        let w: Vec<Complex64> = u.iter().map(|z| z * Complex64::from_polar(1.0, theta)).collect();
        prop_assert!(preshape_distance(&a, &with_mean_removed(&w)).rho < 1e-7);
        let b = with_mean_removed(&v);
        let c = a.inner(&b).norm();
        prop_assume!(c < 1.0 - 1e-6);
        prop_assert!(preshape_distance(&a, &b).rho > 0.0);
    }

    #[test]
    fn total_turning_is_scale_invariant(c in blob(300)) {
        let base = CurvatureProfile::new(&c).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = c.transformed(Point::new(lambda, 0.0), Point::new(0.0, 0.0)).unwrap();
            let p = CurvatureProfile::new(&scaled).unwrap();
            prop_assert!((p.total_absolute() - base.total_absolute()).abs() < 1e-6);
            prop_assert_eq!(p.sign_changes(), base.sign_changes());
        }
    }

    #[test]
    fn sign_changes_are_even_and_similarity_invariant(c in blob(300), theta in 0.0..TAU) {
        let p = CurvatureProfile::new(&c).unwrap();
        prop_assert_eq!(p.sign_changes() % 2, 0);
        let moved = c.transformed(Point::from_polar(3.0, theta), Point::new(5.0, -2.0)).unwrap();
        prop_assert_eq!(CurvatureProfile::new(&moved).unwrap().sign_changes(), p.sign_changes());
    }

    #[test]
    fn curvature_samples_enclose_equal_turning(c in blob(300), k in 4usize..120) {
        let p = CurvatureProfile::new(&c).unwrap();
        let g = resample_curvature(&c, &p, k).unwrap();
        let s = g.source_fractions();
        prop_assert!(s.windows(2).all(|w| w[1] > w[0]));
        let total = p.total_absolute();
        // cumulative turning along the unwrapped fractions; the cell grid
        // starts half a cell before fraction 0
        let half = 0.5 / c.len() as f64;
        let at = |x: f64| p.cumulative_at(x) + (x + half).div_euclid(1.0) * total;
        for j in 0..k {
            let next = if j + 1 < k { s[j + 1] } else { s[0] + 1.0 };
            prop_assert!((at(next) - at(s[j]) - total / k as f64).abs() < 1e-9 * total);
        }
    }

    #[test]
    fn bounds_respect_definitions(c in blob(160), e in 0.001f64..0.2) {
        let search = BoundSearch::new(&c).unwrap();
        for kind in BoundKind::ALL {
            let k = search.find_bound(kind, e, SearchMode::Linear).unwrap();
            prop_assert!(kind.criterion.meets(search.error(kind, k).unwrap(), e));
            for smaller in 4..k {
                prop_assert!(!kind.criterion.meets(search.error(kind, smaller).unwrap(), e));
            }
        }
    }

    #[test]
    fn smaller_threshold_needs_no_fewer_points(c in blob(200), e1 in 0.001f64..0.05, ratio in 1.0f64..20.0) {
        let search = BoundSearch::new(&c).unwrap();
        let e2 = (e1 * ratio).min(0.99);
        for kind in BoundKind::ALL {
            let tight = search.find_bound(kind, e1, SearchMode::Linear).unwrap();
            let loose = search.find_bound(kind, e2, SearchMode::Linear).unwrap();
            prop_assert!(tight >= loose);
        }
    }

    #[test]
    fn bounds_are_similarity_invariant(c in blob(160), lambda in 0.1f64..10.0, theta in 0.0..TAU, bx in -20.0f64..20.0) {
        let moved = c.transformed(Point::from_polar(lambda, theta), Point::new(bx, -bx)).unwrap();
        let a = BoundSearch::new(&c).unwrap().report("a", 0.01, SearchMode::Linear);
        let b = BoundSearch::new(&moved).unwrap().report("b", 0.01, SearchMode::Linear);
        prop_assert_eq!(a.bounds, b.bounds);
    }

    #[test]
    fn accelerated_search_is_self_verifying(c in blob(200), e in 0.001f64..0.1) {
        let search = BoundSearch::new(&c).unwrap();
        for kind in BoundKind::ALL {
            let fast = search.find_bound(kind, e, SearchMode::Accelerated).unwrap();
            let linear = search.find_bound(kind, e, SearchMode::Linear).unwrap();
            let meets = |k: usize| kind.criterion.meets(search.error(kind, k).unwrap(), e);
            prop_assert!(meets(fast));
            prop_assert!(fast == 4 || !meets(fast - 1));
            prop_assert!(linear <= fast);
            // a single crossing of the threshold forces agreement
            let crossings = (4..fast).filter(|&k| meets(k) != meets(k + 1)).count();
            if crossings <= 1 {
                prop_assert_eq!(fast, linear);
            }
        }
    }

    #[test]
    fn smoothing_does_not_add_turning_to_convex_contours(n in 40usize..200, a in 1.0f64..3.0) {
        let mut c = synthetic::ellipse(n, a, 1.0).unwrap();
        let mut last = CurvatureProfile::new(&c).unwrap().total_absolute();
        for _ in 0..4 {
            c = smooth(&c, SmootherConfig::new(3, 1).unwrap()).unwrap();
            let t = CurvatureProfile::new(&c).unwrap().total_absolute();
            prop_assert!(t <= last + 1e-9, "{} > {}", t, last);
            prop_assert!(t >= TAU - 0.05);
            last = t;
        }
    }

    #[test]
    fn ols_residuals_are_orthogonal_and_f_is_consistent(
        data in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, -1.0f64..1.0), 12..60),
        b in (-3.0f64..3.0, -3.0f64..3.0),
    ) {
        let x1: Vec<f64> = data.iter().map(|d| d.0).collect();
        let x2: Vec<f64> = data.iter().map(|d| d.1 + 0.3 * d.0).collect();
        let y: Vec<f64> = data.iter().zip(&x2).map(|(d, x2)| 1.0 + b.0 * d.0 + b.1 * x2 + d.2).collect();
        let cols = vec![("x1".to_string(), x1.clone()), ("x2".to_string(), x2.clone())];
        let m = fit_columns("y", &cols, &y).unwrap();
        let n = y.len();
        let beta: Vec<f64> = m.terms.iter().map(|t| t.estimate).collect();
        let fitted: Vec<f64> = (0..n).map(|i| beta[0] + beta[1] * x1[i] + beta[2] * x2[i]).collect();
        let resid: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for col in [vec![1.0; n], x1, x2] {
            let dot: f64 = resid.iter().zip(&col).map(|(r, x)| r * x).sum();
            prop_assert!(dot.abs() < 1e-8 * ynorm * col.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
        let mean = y.iter().sum::<f64>() / n as f64;
        let sse: f64 = resid.iter().map(|r| r * r).sum();
        let ssr: f64 = fitted.iter().map(|f| (f - mean).powi(2)).sum();
        let f_direct = (ssr / 2.0) / (sse / (n - 3) as f64);
        let f = m.f.unwrap();
        prop_assert!((f - f_direct).abs() <= 1e-10 * f_direct.max(1.0));
        let r2 = m.r_squared;
        prop_assert!((f - (r2 / 2.0) / ((1.0 - r2) / (n - 3) as f64)).abs() <= 1e-8 * f.max(1.0));
        prop_assert!(resid.iter().sum::<f64>().abs() / n as f64 <= 1e-10 * ynorm);
        prop_assert!(m.terms.iter().all(|t| (0.0..=1.0).contains(&t.p)));
    }

    #[test]
    fn streaming_summary_matches_full_recomputation(xs in prop::collection::vec(0.0f64..50.0, 1000), split in 1usize..999) {
        let mut whole = RunningStats::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (RunningStats::default(), RunningStats::default());
        xs[..split].iter().for_each(|&x| a.push(x));
        xs[split..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        prop_assert!((whole.mean() - mean).abs() < 1e-12 * mean.max(1.0));
        prop_assert!((a.mean() - mean).abs() < 1e-12 * mean.max(1.0));
        prop_assert_eq!(a.min, xs.iter().copied().fold(f64::INFINITY, f64::min));
        prop_assert_eq!(a.max, xs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        prop_assert_eq!(a.count, 1000);
        prop_assert_eq!(Histogram::build(&xs).total(), 1000);
    }

    #[test]
    fn residual_shares_sum_to_one_hundred(rs in prop::collection::vec(prop_oneof![Just(0.0), -3.0f64..3.0], 1..200)) {
        let mut signs = ResidualSigns::default();
        rs.iter().for_each(|&r| signs.push(r));
        prop_assert_eq!(signs.positive + signs.negative + signs.zero, rs.len());
        let total = signs.positive_pct() + signs.negative_pct() + signs.zero_pct();
        prop_assert!((total - 100.0).abs() < 1e-12);
    }
}

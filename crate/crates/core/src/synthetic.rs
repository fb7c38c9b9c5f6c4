//! Seeded synthetic contours: analytic test shapes and a pixel-digitized
//! object suite with the category layout of a 238-contour outline dataset
//! (10 dogs, 6 × 20 fish, 4 × 5 hand gestures, 88 pears).

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{Contour, Curve, Point};

pub fn circle(n: usize, radius: f64) -> Result<Contour> {
    Contour::ingest(
        (0..n)
            .map(|i| Point::from_polar(radius, TAU * i as f64 / n as f64))
            .collect(),
    )
}

pub fn ellipse(n: usize, a: f64, b: f64) -> Result<Contour> {
    Contour::ingest(
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Point::new(a * t.cos(), b * t.sin())
            })
            .collect(),
    )
}

/// Polygon through `corners`, each edge split into `per_edge` pieces.
pub fn subdivided_polygon(corners: &[Point], per_edge: usize) -> Result<Contour> {
    let n = corners.len();
    let mut pts = Vec::with_capacity(n * per_edge);
    for i in 0..n {
        let a = corners[i];
        let b = corners[(i + 1) % n];
        for j in 0..per_edge {
            pts.push(a + (b - a) * (j as f64 / per_edge as f64));
        }
    }
    Contour::ingest(pts)
}

/// Unit square starting at a corner, `per_side` points per side.
pub fn square(per_side: usize) -> Result<Contour> {
    subdivided_polygon(
        &[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ],
        per_side,
    )
}

/// Star polygon with `tips` outer vertices.
pub fn star(tips: usize, outer: f64, inner: f64, per_edge: usize) -> Result<Contour> {
    let corners: Vec<Point> = (0..2 * tips)
        .map(|i| {
            let r = if i % 2 == 0 { outer } else { inner };
            Point::from_polar(r, PI * i as f64 / tips as f64)
        })
        .collect();
    subdivided_polygon(&corners, per_edge)
}

/// Two semicircular caps of `radius` joined by straight sides of length
/// `2 * half_length`, sampled at roughly uniform spacing.
pub fn stadium(n: usize, radius: f64, half_length: f64) -> Result<Contour> {
    let cap = PI * radius;
    let side = 2.0 * half_length;
    let total = 2.0 * cap + 2.0 * side;
    let pts = (0..n)
        .map(|i| {
            let mut s = total * i as f64 / n as f64;
            // right cap centred on +x, traversed CCW from its lowest point
            if s < cap {
                return Point::new(half_length, 0.0) + Point::from_polar(radius, -PI / 2.0 + s / radius);
            }
            s -= cap;
            if s < side {
                return Point::new(half_length - s, radius);
            }
            s -= side;
            if s < cap {
                return Point::new(-half_length, 0.0) + Point::from_polar(radius, PI / 2.0 + s / radius);
            }
            s -= cap;
            Point::new(-half_length + s, -radius)
        })
        .collect();
    Contour::ingest(pts)
}

/// Star-shaped curve `r(θ) = 1 + Σ aₙ cos(nθ + φₙ) + Σ bumps`, stretched by
/// `aspect` along x.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTemplate {
    /// `(n, amplitude, phase)`.
    pub harmonics: Vec<(u32, f64, f64)>,
    /// `(center angle, angular width, height)` Gaussian bumps.
    pub bumps: Vec<(f64, f64, f64)>,
    pub aspect: f64,
}

impl RadialTemplate {
    pub fn radius(&self, theta: f64) -> f64 {
        let mut r = 1.0;
        for &(n, a, phi) in &self.harmonics {
            r += a * (n as f64 * theta + phi).cos();
        }
        for &(c, w, h) in &self.bumps {
            let d = (theta - c + PI).rem_euclid(TAU) - PI;
            r += h * (-0.5 * (d / w).powi(2)).exp();
        }
        r
    }

    pub fn point(&self, theta: f64) -> Point {
        let r = self.radius(theta);
        Point::new(self.aspect * r * theta.cos(), r * theta.sin())
    }

    /// `n` points at equal angular steps.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        (0..n).map(|i| self.point(TAU * i as f64 / n as f64)).collect()
    }

    /// Multiply every amplitude, width and height by a factor in
    /// `[1 - spread, 1 + spread]`.
    fn jittered(&self, rng: &mut ChaCha8Rng, spread: f64) -> Self {
        let mut f = || 1.0 + rng.random_range(-spread..=spread);
        RadialTemplate {
            harmonics: self.harmonics.iter().map(|&(n, a, p)| (n, a * f(), p)).collect(),
            bumps: self
                .bumps
                .iter()
                .map(|&(c, w, h)| (c + 0.1 * (f() - 1.0), w * f(), h * f()))
                .collect(),
            aspect: self.aspect * f(),
        }
    }
}

/// Rasterize a densely sampled closed curve to integer pixel centres and
/// trace it back into an 8-connected chain.
pub fn digitize(dense: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(dense.len());
    for p in dense {
        let q = Point::new(p.re.round(), p.im.round());
        if out.last() == Some(&q) {
            continue;
        }
        // drop A B A back-steps
        if out.len() >= 2 && out[out.len() - 2] == q {
            out.pop();
            continue;
        }
        out.push(q);
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Digitize `template` at a scale of `radius` pixels, rotated by `angle`.
pub fn digitized(template: &RadialTemplate, radius: f64, angle: f64) -> Result<Contour> {
    let rot = Point::from_polar(radius, angle);
    let n = (TAU * radius * 3.0 * template.aspect.max(1.0)).ceil() as usize * 8;
    let dense: Vec<Point> = template.sample(n).into_iter().map(|p| rot * p).collect();
    Contour::ingest(digitize(&dense))
}

pub fn dog_template() -> RadialTemplate {
    RadialTemplate {
        harmonics: vec![(2, 0.12, 0.0), (3, 0.05, 0.7)],
        bumps: vec![
            (-2.25, 0.06, 0.75),
            (-1.95, 0.06, 0.8),
            (-1.15, 0.06, 0.8),
            (-0.85, 0.06, 0.75),
            (0.45, 0.2, 0.55),
            (0.8, 0.05, 0.45),
            (2.9, 0.04, 0.6),
        ],
        aspect: 1.5,
    }
}

/// Six fish species differing in fin layout.
pub fn fish_template(species: usize) -> RadialTemplate {
    let s = species as f64;
    RadialTemplate {
        harmonics: vec![(2, 0.08 + 0.02 * s, 0.0), (3, 0.03, 0.3 * s)],
        bumps: vec![
            (PI - 0.22, 0.07, 0.55 + 0.07 * s),
            (PI + 0.22, 0.07, 0.55 + 0.05 * s),
            (PI / 2.0 + 0.1 * s, 0.12 + 0.02 * s, 0.2 + 0.05 * s),
            (-PI / 2.0 - 0.05 * s, 0.08, 0.1 + 0.03 * s),
        ],
        aspect: 2.0 + 0.15 * s,
    }
}

/// Four hand gestures with 1 to 4 raised fingers plus a thumb.
pub fn hand_template(gesture: usize) -> RadialTemplate {
    let fingers = gesture + 1;
    let mut bumps: Vec<(f64, f64, f64)> = (0..fingers)
        .map(|f| (PI / 2.0 - 0.45 + 0.3 * f as f64, 0.07, 1.3))
        .collect();
    bumps.push((PI - 0.3, 0.09, 0.7));
    RadialTemplate {
        harmonics: vec![(2, 0.05, 0.0)],
        bumps,
        aspect: 1.0,
    }
}

pub fn pear_template() -> RadialTemplate {
    RadialTemplate {
        harmonics: vec![(1, 0.18, -PI / 2.0), (2, 0.08, 0.0), (3, 0.03, 0.5)],
        bumps: vec![(PI / 2.0, 0.08, 0.12)],
        aspect: 0.8,
    }
}

/// One labelled contour of the synthetic outline suite.
#[derive(Debug, Clone)]
pub struct Specimen {
    pub id: String,
    pub category: String,
    pub contour: Contour,
}

/// 238 digitized contours in 12 categories, deterministic in `seed`.
pub fn outline_suite(seed: u64) -> Result<Vec<Specimen>> {
    let mut layout: Vec<(String, RadialTemplate, usize)> = vec![("dog".into(), dog_template(), 10)];
    for s in 0..6 {
        layout.push((format!("fish{}", s + 1), fish_template(s), 20));
    }
    for g in 0..4 {
        layout.push((format!("hand{}", g + 1), hand_template(g), 5));
    }
    layout.push(("pear".into(), pear_template(), 88));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(238);
    for (category, template, count) in layout {
        for i in 0..count {
            let t = template.jittered(&mut rng, 0.15);
            let radius = rng.random_range(45.0..110.0);
            let angle = rng.random_range(0.0..TAU);
            out.push(Specimen {
                id: format!("{category}-{:02}", i + 1),
                category: category.clone(),
                contour: digitized(&t, radius, angle)?,
            });
        }
    }
    Ok(out)
}

/// Three random similarity copies each of a circle, ellipse, square, star,
/// stadium and a digitized hand-like outline (18 contours).
pub fn shape_suite(seed: u64) -> Result<Vec<Specimen>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = [
        ("circle", circle(256, 1.0)?),
        ("ellipse", ellipse(300, 2.0, 1.0)?),
        ("square", square(60)?),
        ("star", star(5, 1.0, 0.45, 40)?),
        ("stadium", stadium(360, 1.0, 1.5)?),
    ];
    let mut out = Vec::with_capacity(18);
    for (name, base) in &bases {
        for i in 0..3 {
            let scale = Point::from_polar(rng.random_range(30.0..90.0), rng.random_range(0.0..TAU));
            let shift = Point::new(rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0));
            out.push(Specimen {
                id: format!("{name}-{}", i + 1),
                category: name.to_string(),
                contour: base.transformed(scale, shift)?,
            });
        }
    }
    for i in 0..3 {
        let t = hand_template(3).jittered(&mut rng, 0.1);
        let radius = rng.random_range(40.0..70.0);
        let angle = rng.random_range(0.0..TAU);
        out.push(Specimen {
            id: format!("hand-{}", i + 1),
            category: "hand".into(),
            contour: digitized(&t, radius, angle)?,
        });
    }
    Ok(out)
}

/// `count` jagged contours: random smooth blobs of radius 50 to 100,
/// resampled every half unit of arc length with each coordinate perturbed by
/// uniform noise in `[-0.15, 0.15)`.
pub fn jagged_suite(seed: u64, count: usize) -> Result<Vec<Contour>> {
    const SPACING: f64 = 0.5;
    const NOISE: f64 = 0.15;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = random_blob(&mut rng, 0.3);
            let radius = rng.random_range(50.0..100.0);
            let dense = Contour::ingest(t.sample(20_000).into_iter().map(|p| p * radius).collect())?;
            let n = (dense.perimeter() / SPACING).round() as usize;
            let pts = (0..n)
                .map(|j| {
                    let jitter = Point::new(rng.random_range(-NOISE..NOISE), rng.random_range(-NOISE..NOISE));
                    dense.evaluate(j as f64 / n as f64) + jitter
                })
                .collect();
            Contour::ingest(pts)
        })
        .collect()
}

/// Harmonics 2 to 5 with amplitude below `budget / n` and random phase.
fn random_blob(rng: &mut ChaCha8Rng, budget: f64) -> RadialTemplate {
    let harmonics = (2..=5)
        .map(|k| (k, rng.random_range(0.0..budget / k as f64), rng.random_range(0.0..TAU)))
        .collect();
    RadialTemplate {
        harmonics,
        bumps: vec![],
        aspect: rng.random_range(1.0..1.8),
    }
}

/// Smooth random star-shaped contours (low-order harmonics, no
/// digitization), sampled at `n` points.
pub fn smooth_blobs(seed: u64, count: usize, n: usize) -> Result<Vec<Contour>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Contour::ingest(random_blob(&mut rng, 0.25).sample(n)))
        .collect()
}

//! Closed planar polylines, their arc-length parametrization and k-gons.
//!
//! Points are complex numbers (`x + iy`). A [`Contour`] is the digitized
//! original observation; a [`KGon`] is the polygon obtained by linearly
//! interpolating `k` points sampled from it. Both are evaluable at any
//! fraction `s` of their perimeter through the [`Curve`] trait.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Point = Complex64;

/// Relative tolerance under which two anchor candidates count as tied.
const ANCHOR_TIE_RTOL: f64 = 1e-12;

/// Uniform anchor search points per contour vertex.
const ANCHOR_GRID_FACTOR: usize = 4;

/// How the sampling fractions of a k-gon were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parameterization {
    /// Equal arc length between consecutive sampling points.
    ArcLength,
    /// Equal absolute curvature between consecutive sampling points.
    Curvature,
}

impl Parameterization {
    pub const ALL: [Parameterization; 2] = [Parameterization::ArcLength, Parameterization::Curvature];

    /// Single-letter code used in bound names (`A` / `C`).
    pub fn code(self) -> char {
        match self {
            Parameterization::ArcLength => 'A',
            Parameterization::Curvature => 'C',
        }
    }
}

/// Cumulative edge lengths of a closed polyline, closing edge included.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcTable {
    cumulative: Vec<f64>,
}

impl ArcTable {
    pub fn new(points: &[Point]) -> Self {
        let n = points.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..n {
            acc += (points[(i + 1) % n] - points[i]).norm();
            cumulative.push(acc);
        }
        ArcTable { cumulative }
    }

    /// `K + 1` values, first 0, last the total length.
    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    /// Length of edge `i` (from vertex `i` to vertex `i + 1`, cyclically).
    pub fn edge_length(&self, i: usize) -> f64 {
        self.cumulative[i + 1] - self.cumulative[i]
    }

    /// Perimeter fraction at which vertex `i` sits.
    pub fn vertex_fraction(&self, i: usize) -> f64 {
        self.cumulative[i] / self.total_length()
    }
}

/// Anything that can be walked at constant speed: contours and k-gons.
pub trait Curve {
    fn vertices(&self) -> &[Point];

    fn arc_table(&self) -> &ArcTable;

    /// Fraction from which anchor-aligned sampling grids start.
    fn anchor(&self) -> f64;

    fn len(&self) -> usize {
        self.vertices().len()
    }

    fn is_empty(&self) -> bool {
        self.vertices().is_empty()
    }

    fn perimeter(&self) -> f64 {
        self.arc_table().total_length()
    }

    /// Point at arc length `s * L` from the first vertex.
    fn evaluate(&self, s: f64) -> Point {
        evaluate_polyline(self.vertices(), self.arc_table(), s)
    }

    /// Evaluate at the `m` fractions `anchor + j/m (mod 1)`.
    fn anchored_grid(&self, m: usize) -> Vec<Point> {
        let a = self.anchor();
        (0..m)
            .map(|j| self.evaluate(a + j as f64 / m as f64))
            .collect()
    }
}

/// Linear interpolation along a closed polyline at perimeter fraction `s`.
///
/// Fractions outside `[0, 1)` are wrapped.
pub fn evaluate_polyline(points: &[Point], arc: &ArcTable, s: f64) -> Point {
    let total = arc.total_length();
    let mut s = s.rem_euclid(1.0);
    if s >= 1.0 {
        s = 0.0;
    }
    let target = s * total;
    let cum = arc.cumulative_lengths();
    let n = points.len();
    let j = cum[1..n]
        .partition_point(|&c| c <= target)
        .min(n - 1);
    let seg = cum[j + 1] - cum[j];
    let a = points[j];
    let b = points[(j + 1) % n];
    if seg <= 0.0 {
        return a;
    }
    let t = ((target - cum[j]) / seg).clamp(0.0, 1.0);
    a + (b - a) * t
}

/// Twice the signed area enclosed by a closed polyline (positive for CCW).
pub fn signed_area2(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let p = points[i];
            let q = points[(i + 1) % n];
            p.re * q.im - q.re * p.im
        })
        .sum()
}

/// Closed, counterclockwise planar polyline with at least four distinct
/// consecutive points.
#[derive(Debug, Clone)]
pub struct Contour {
    points: Vec<Point>,
    arc: ArcTable,
    anchor: OnceLock<f64>,
}

impl PartialEq for Contour {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Contour {
    /// Clean up a raw point list: collapse consecutive duplicates (including
    /// last == first) and force counterclockwise orientation.
    pub fn ingest(raw: Vec<Point>) -> Result<Self> {
        let mut points: Vec<Point> = Vec::with_capacity(raw.len());
        for p in raw {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(Error::InvalidConfig(format!("non-finite point {p}")));
            }
            if points.last() != Some(&p) {
                points.push(p);
            }
        }
        while points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        if points.len() < 4 {
            return Err(Error::TooFewPoints(points.len()));
        }

        let area2 = signed_area2(&points);
        let (lo, hi) = points.iter().fold(
            (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), p| {
                (
                    Point::new(lo.re.min(p.re), lo.im.min(p.im)),
                    Point::new(hi.re.max(p.re), hi.im.max(p.im)),
                )
            },
        );
        let scale = (hi - lo).norm_sqr();
        if area2.abs() <= 1e-14 * scale {
            return Err(Error::DegenerateContour);
        }
        if area2 < 0.0 {
            points[1..].reverse();
        }
        Ok(Self::from_clean(points))
    }

    pub fn from_xy(xy: &[(f64, f64)]) -> Result<Self> {
        Self::ingest(xy.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    fn from_clean(points: Vec<Point>) -> Self {
        let arc = ArcTable::new(&points);
        Contour {
            points,
            arc,
            anchor: OnceLock::new(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Number of points `K`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Arc-length-weighted centroid of the closed polyline (not the vertex mean).
    pub fn centroid(&self) -> Point {
        let n = self.points.len();
        let mut acc = Point::new(0.0, 0.0);
        for i in 0..n {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            acc += (a + b) * (0.5 * (b - a).norm());
        }
        acc / self.arc.total_length()
    }

    /// Perimeter fraction of the point farthest from the centroid.
    ///
    /// Candidates are all vertices plus `4K` uniform fractions; near-ties
    /// go to the smallest fraction.
    pub fn anchor_fraction(&self) -> f64 {
        *self.anchor.get_or_init(|| self.search_anchor())
    }

    fn search_anchor(&self) -> f64 {
        let c = self.centroid();
        let n = self.points.len();
        let grid = ANCHOR_GRID_FACTOR * n;
        let mut candidates: Vec<(f64, f64)> = (0..n)
            .map(|i| (self.arc.vertex_fraction(i), (self.points[i] - c).norm()))
            .chain((0..grid).map(|j| {
                let s = j as f64 / grid as f64;
                (s, (self.evaluate(s) - c).norm())
            }))
            .collect();
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        let best = candidates
            .iter()
            .map(|&(_, d)| d)
            .fold(f64::NEG_INFINITY, f64::max);
        candidates
            .iter()
            .find(|&&(_, d)| d >= best * (1.0 - ANCHOR_TIE_RTOL))
            .map(|&(s, _)| s)
            .unwrap_or(0.0)
    }

    /// Apply `z -> scale * z + shift` (a similarity when `scale != 0`).
    pub fn transformed(&self, scale: Point, shift: Point) -> Result<Self> {
        Self::ingest(self.points.iter().map(|&p| scale * p + shift).collect())
    }

    /// Same point cycle, starting at vertex `start`.
    pub fn rotated_start(&self, start: usize) -> Self {
        let mut points = self.points.clone();
        let n = points.len();
        points.rotate_left(start % n);
        Self::from_clean(points)
    }

    /// `k`-gon with equally spaced sampling fractions starting at the anchor.
    pub fn resample_arclength(&self, k: usize) -> Result<KGon> {
        self.check_k(k)?;
        let a = self.anchor_fraction();
        let fractions: Vec<f64> = (0..k).map(|j| a + j as f64 / k as f64).collect();
        Ok(self.kgon_at(fractions, Parameterization::ArcLength))
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<()> {
        if k < 4 || k > self.points.len() {
            return Err(Error::BadK {
                k,
                max: self.points.len(),
            });
        }
        Ok(())
    }

    /// Build a k-gon by evaluating the contour at the given (unwrapped,
    /// increasing) fractions.
    pub(crate) fn kgon_at(&self, fractions: Vec<f64>, parameterization: Parameterization) -> KGon {
        let vertices = fractions.iter().map(|&s| self.evaluate(s)).collect();
        KGon::from_parts(vertices, fractions, parameterization)
    }
}

impl Curve for Contour {
    fn vertices(&self) -> &[Point] {
        &self.points
    }

    fn arc_table(&self) -> &ArcTable {
        &self.arc
    }

    fn anchor(&self) -> f64 {
        self.anchor_fraction()
    }
}

/// Polygon through `k` points sampled from a parent contour.
///
/// `source_fractions` are kept unwrapped: they start at the parent's anchor
/// fraction and increase strictly, possibly past 1.
#[derive(Debug, Clone, PartialEq)]
pub struct KGon {
    vertices: Vec<Point>,
    source_fractions: Vec<f64>,
    parameterization: Parameterization,
    arc: ArcTable,
}

impl KGon {
    pub fn new(
        vertices: Vec<Point>,
        source_fractions: Vec<f64>,
        parameterization: Parameterization,
    ) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::TooFewPoints(vertices.len()));
        }
        if vertices.len() != source_fractions.len() {
            return Err(Error::InvalidConfig(
                "vertex and fraction counts differ".into(),
            ));
        }
        if source_fractions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "source fractions must increase strictly".into(),
            ));
        }
        Ok(Self::from_parts(vertices, source_fractions, parameterization))
    }

    fn from_parts(
        vertices: Vec<Point>,
        source_fractions: Vec<f64>,
        parameterization: Parameterization,
    ) -> Self {
        let arc = ArcTable::new(&vertices);
        KGon {
            vertices,
            source_fractions,
            parameterization,
            arc,
        }
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn source_fractions(&self) -> &[f64] {
        &self.source_fractions
    }

    pub fn parameterization(&self) -> Parameterization {
        self.parameterization
    }
}

impl Curve for KGon {
    fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn arc_table(&self) -> &ArcTable {
        &self.arc
    }

    /// The first vertex is the parent's anchor.
    fn anchor(&self) -> f64 {
        0.0
    }
}

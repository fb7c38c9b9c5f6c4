//! Discrete curvature of closed contours and curvature-parametrized sampling.
//!
//! Curvature is estimated on an arc-length-uniform resampling of the contour
//! with `K` points at fractions `i/K`, using central differences with
//! circular indexing. Point `i` owns the perimeter cell
//! `[(i - 1/2)/K, (i + 1/2)/K)`, so the cumulative absolute curvature is a
//! piecewise-linear function of the perimeter fraction with knots at cell
//! boundaries.

use crate::error::{Error, Result};
use crate::geometry::{Contour, Curve, KGon, Parameterization};

/// Signed curvatures below this multiple of `2π/L` count as zero when
/// counting sign changes.
const ZERO_CURVATURE_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    signed: Vec<f64>,
    cumulative: Vec<f64>,
    total_absolute: f64,
    sign_changes: usize,
}

impl CurvatureProfile {
    pub fn new(c: &Contour) -> Result<Self> {
        let n = c.len();
        if n < 5 {
            return Err(Error::TooFewPoints(n));
        }
        let length = c.perimeter();
        let ds = length / n as f64;
        let samples: Vec<_> = (0..n).map(|i| c.evaluate(i as f64 / n as f64)).collect();

        let mut signed = Vec::with_capacity(n);
        for i in 0..n {
            let prev = samples[(i + n - 1) % n];
            let here = samples[i];
            let next = samples[(i + 1) % n];
            let d1 = (next - prev) / (2.0 * ds);
            let d2 = (next - 2.0 * here + prev) / (ds * ds);
            let speed2 = d1.norm_sqr();
            if speed2 < 1e-30 {
                return Err(Error::DegenerateDerivative(i));
            }
            signed.push((d1.re * d2.im - d1.im * d2.re) / speed2.powf(1.5));
        }

        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for &k in &signed {
            acc += k.abs() * ds;
            cumulative.push(acc);
        }

        let zero_tol = ZERO_CURVATURE_RTOL * std::f64::consts::TAU / length;
        let sign_changes = count_sign_changes(&signed, zero_tol);

        Ok(CurvatureProfile {
            signed,
            cumulative,
            total_absolute: acc,
            sign_changes,
        })
    }

    /// Signed curvature at each of the `K` uniform sample points (CCW > 0).
    pub fn signed_curvatures(&self) -> &[f64] {
        &self.signed
    }

    /// `K + 1` running sums of `|κ_i| Δs`.
    pub fn cumulative_absolute(&self) -> &[f64] {
        &self.cumulative
    }

    /// Total turning `Σ |κ_i| Δs` (dimensionless).
    pub fn total_absolute(&self) -> f64 {
        self.total_absolute
    }

    /// Sign transitions around the closed cycle, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        self.sign_changes
    }

    fn points(&self) -> usize {
        self.signed.len()
    }

    fn offset(&self) -> f64 {
        -0.5 / self.points() as f64
    }

    /// Cumulative absolute curvature from the start of cell 0 up to perimeter
    /// fraction `s` (taken modulo 1 on the cell grid).
    pub fn cumulative_at(&self, s: f64) -> f64 {
        let n = self.points();
        let u = ((s - self.offset()) * n as f64).rem_euclid(n as f64);
        let i = (u.floor() as usize).min(n - 1);
        let t = u - i as f64;
        self.cumulative[i] + t * (self.cumulative[i + 1] - self.cumulative[i])
    }

    /// Smallest fraction (on the cell grid, in `[offset, offset + 1)`) whose
    /// cumulative value reaches `target`.
    pub fn inverse(&self, target: f64) -> f64 {
        let n = self.points();
        let i = self.cumulative[1..]
            .partition_point(|&c| c < target)
            .min(n - 1);
        let lo = self.cumulative[i];
        let step = self.cumulative[i + 1] - lo;
        let t = if step > 0.0 {
            ((target - lo) / step).clamp(0.0, 1.0)
        } else {
            0.0
        };
        self.offset() + (i as f64 + t) / n as f64
    }
}

fn count_sign_changes(signed: &[f64], zero_tol: f64) -> usize {
    let signs: Vec<bool> = signed
        .iter()
        .filter(|k| k.abs() > zero_tol)
        .map(|&k| k > 0.0)
        .collect();
    if signs.len() < 2 {
        return 0;
    }
    let n = signs.len();
    (0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count()
}

pub fn curvature_profile(c: &Contour) -> Result<CurvatureProfile> {
    CurvatureProfile::new(c)
}

/// `k`-gon whose consecutive vertices enclose equal absolute curvature,
/// starting at the anchor.
pub fn resample_curvature(c: &Contour, profile: &CurvatureProfile, k: usize) -> Result<KGon> {
    c.check_k(k)?;
    let total = profile.total_absolute();
    if total < 1e-12 {
        return Err(Error::FlatContour);
    }
    let anchor = c.anchor_fraction();
    let start = profile.cumulative_at(anchor);
    let step = total / k as f64;
    let mut fractions = Vec::with_capacity(k);
    fractions.push(anchor);
    for j in 1..k {
        let target = (start + j as f64 * step).rem_euclid(total);
        let mut s = profile.inverse(target).rem_euclid(1.0);
        if s < anchor {
            s += 1.0;
        }
        fractions.push(s);
    }
    Ok(c.kgon_at(fractions, Parameterization::Curvature))
}

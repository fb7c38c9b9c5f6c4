//! Kendall preshapes and the Veronese-Whitney extrinsic shape distance.
//!
//! A configuration of `m` complex points is reduced to a preshape by removing
//! its mean and scaling to unit norm. Rotation is quotiented out by the
//! distance itself: for preshapes `u`, `v` the Frobenius distance between the
//! projections `uu*` and `vv*` is `sqrt(2 (1 - |<u, v>|^2))`, at most `√2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Curve, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct Preshape {
    coords: Vec<Complex64>,
}

impl Preshape {
    /// Center and normalize a raw configuration.
    pub fn new(points: &[Point]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        let mean = points.iter().sum::<Complex64>() / points.len() as f64;
        let mut coords: Vec<Complex64> = points.iter().map(|p| p - mean).collect();
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if norm == 0.0 || norm <= 1e-14 * scale {
            return Err(Error::ZeroNorm);
        }
        coords.iter_mut().for_each(|z| *z /= norm);
        Ok(Preshape { coords })
    }

    /// Sample a curve at its `m` anchor-aligned fractions and center/normalize.
    pub fn of_curve<C: Curve + ?Sized>(curve: &C, m: usize) -> Result<Self> {
        Self::new(&curve.anchored_grid(m))
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Hermitian inner product `<self, other> = Σ conj(self_j) other_j`.
    pub fn inner(&self, other: &Preshape) -> Complex64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Extrinsic distance between two shapes and its `√2`-normalized value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeDistance {
    pub rho: f64,
}

impl ShapeDistance {
    pub fn normalized(&self) -> f64 {
        self.rho / std::f64::consts::SQRT_2
    }
}

/// `ρ(u, v) = sqrt(2 (1 - |<u, v>|^2))`.
///
/// Evaluated as `(1 + c) · ‖u - w v‖²` with `c = |<u, v>|` and `w` the phase
/// aligning `v` to `u`, which avoids the cancellation in `1 - c²` for nearly
/// equal shapes. Both argument orders are averaged so the result is exactly
/// symmetric.
pub fn preshape_distance(u: &Preshape, v: &Preshape) -> ShapeDistance {
    debug_assert_eq!(u.dim(), v.dim());
    let inner = u.inner(v);
    let c = inner.norm().min(1.0);
    let w = if c > 0.0 { inner.conj() / inner.norm() } else { Complex64::new(1.0, 0.0) };
    let gap = |a: &Preshape, b: &Preshape, w: Complex64| -> f64 {
        a.coords.iter().zip(&b.coords).map(|(x, y)| (x - w * y).norm_sqr()).sum()
    };
    let half_sq = 0.5 * (gap(u, v, w) + gap(v, u, w.conj()));
    ShapeDistance {
        rho: ((1.0 + c) * half_sq).min(2.0).sqrt(),
    }
}

/// Shape distance between two curves evaluated on a common grid of `m`
/// anchor-aligned arc-length fractions.
pub fn vw_distance<A, B>(a: &A, b: &B, m: usize) -> Result<ShapeDistance>
where
    A: Curve + ?Sized,
    B: Curve + ?Sized,
{
    let u = Preshape::of_curve(a, m)?;
    let v = Preshape::of_curve(b, m)?;
    Ok(preshape_distance(&u, &v))
}

//! Repeated circular moving-average smoothing of digitized contours.

use crate::error::{Error, Result};
use crate::geometry::{Contour, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmootherConfig {
    /// Number of points averaged, odd and >= 3.
    pub window: usize,
    /// How many times the smoother is applied.
    pub passes: usize,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        SmootherConfig { window: 3, passes: 4 }
    }
}

impl SmootherConfig {
    pub fn new(window: usize, passes: usize) -> Result<Self> {
        if window < 3 || window.is_multiple_of(2) {
            return Err(Error::BadWindow(window));
        }
        Ok(SmootherConfig { window, passes })
    }
}

/// One pass of the centered moving average with circular wraparound.
fn moving_average(points: &[Point], window: usize) -> Vec<Point> {
    let n = points.len();
    let half = window / 2;
    let inv = 1.0 / window as f64;
    (0..n)
        .map(|i| {
            let mut acc = Point::new(0.0, 0.0);
            for d in 0..window {
                acc += points[(i + n + d - half) % n];
            }
            acc * inv
        })
        .collect()
}

/// Smooth `c` by `cfg.passes` moving-average passes and re-validate.
pub fn smooth(c: &Contour, cfg: SmootherConfig) -> Result<Contour> {
    if cfg.window < 3 || cfg.window.is_multiple_of(2) {
        return Err(Error::BadWindow(cfg.window));
    }
    if cfg.window >= c.len() {
        return Err(Error::WindowTooLarge {
            window: cfg.window,
            points: c.len(),
        });
    }
    if cfg.passes == 0 {
        return Ok(c.clone());
    }
    let mut points = c.points().to_vec();
    for _ in 0..cfg.passes {
        points = moving_average(&points, cfg.window);
    }
    Contour::ingest(points)
}

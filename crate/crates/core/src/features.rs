//! Cheap per-contour predictors: total absolute curvature, length and the
//! number of curvature sign changes.

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureProfile;
use crate::error::Result;
use crate::geometry::{Contour, Curve};

/// Regression predictors, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    AbsCurvature,
    Length,
    SignChanges,
}

impl Predictor {
    pub const ALL: [Predictor; 3] = [
        Predictor::AbsCurvature,
        Predictor::Length,
        Predictor::SignChanges,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predictor::AbsCurvature => "abs_curvature",
            Predictor::Length => "length",
            Predictor::SignChanges => "sign_changes",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Predictor::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub id: String,
    pub total_abs_curvature: f64,
    pub length: f64,
    pub sign_changes: usize,
    pub points: usize,
    #[serde(default)]
    pub category: Option<String>,
}

impl FeatureRow {
    pub fn value(&self, p: Predictor) -> f64 {
        match p {
            Predictor::AbsCurvature => self.total_abs_curvature,
            Predictor::Length => self.length,
            Predictor::SignChanges => self.sign_changes as f64,
        }
    }

    /// Look a predictor up by its column name.
    pub fn lookup(&self, name: &str) -> Option<f64> {
        Predictor::from_name(name).map(|p| self.value(p))
    }
}

pub fn extract_features(id: &str, c: &Contour) -> Result<FeatureRow> {
    let profile = CurvatureProfile::new(c)?;
    Ok(features_from_profile(id, c, &profile))
}

pub fn features_from_profile(id: &str, c: &Contour, profile: &CurvatureProfile) -> FeatureRow {
    FeatureRow {
        id: id.to_string(),
        total_abs_curvature: profile.total_absolute(),
        length: c.perimeter(),
        sign_changes: profile.sign_changes(),
        points: c.len(),
        category: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use std::f64::consts::TAU;

    #[test]
    fn circle_features_scale_as_expected() {
        let circle = Contour::ingest(
            (0..512)
                .map(|i| Point::from_polar(1.0, TAU * i as f64 / 512.0))
                .collect(),
        )
        .unwrap();
        let f = extract_features("c", &circle).unwrap();
        assert!((f.total_abs_curvature - TAU).abs() < 1e-3);
        assert!((f.length - TAU).abs() < 1e-3);
        assert_eq!(f.sign_changes, 0);
        assert_eq!(f.points, 512);

        let big = circle.transformed(Point::new(3.0, 0.0), Point::new(0.0, 0.0)).unwrap();
        let g = extract_features("c3", &big).unwrap();
        assert!((g.total_abs_curvature - f.total_abs_curvature).abs() < 1e-9);
        assert!((g.length - 3.0 * f.length).abs() < 1e-9);
        assert_eq!(g.sign_changes, 0);
    }

    #[test]
    fn predictor_names() {
        for p in Predictor::ALL {
            assert_eq!(Predictor::from_name(p.name()), Some(p));
        }
        assert_eq!(Predictor::from_name("intercept"), None);
    }
}

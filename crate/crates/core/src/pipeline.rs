//! Batch driver: smooth, then compute features and bounds per contour.

use crate::bounds::{BoundReport, BoundSearch, SearchMode};
use crate::error::Result;
use crate::features::{features_from_profile, FeatureRow};
use crate::geometry::Contour;
use crate::par::Exec;
use crate::smoothing::{smooth, SmootherConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub features: FeatureRow,
    pub bounds: BoundReport,
}

/// Features and bounds of one already-smoothed contour.
pub fn analyze(id: &str, contour: &Contour, threshold: f64, mode: SearchMode) -> Result<Analysis> {
    let search = BoundSearch::new(contour)?;
    let features = features_from_profile(id, contour, search.profile()?);
    Ok(Analysis {
        features,
        bounds: search.report(id, threshold, mode),
    })
}

/// Smooth and analyze a batch of `(id, contour)` pairs; results keep input
/// order whatever the execution policy.
pub fn analyze_batch(
    items: &[(String, Contour)],
    smoother: SmootherConfig,
    threshold: f64,
    mode: SearchMode,
    exec: Exec,
) -> Vec<Result<Analysis>> {
    exec.map(items.len(), |i| {
        let (id, raw) = &items[i];
        let c = smooth(raw, smoother)?;
        analyze(id, &c, threshold, mode)
    })
}

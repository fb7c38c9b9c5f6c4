//! Discretizing closed planar contours into k-gons.
//!
//! The crate samples contours under arc-length and curvature
//! parameterizations, finds the smallest number of sampling points `k` that
//! keeps the relative length loss or the Kendall shape distance under a
//! threshold, and fits regression models that predict those bounds from
//! cheap contour features.
//!
//! ```
//! use kgon_core::bounds::{BoundKind, BoundSearch, SearchMode};
//! use kgon_core::synthetic;
//!
//! let circle = synthetic::circle(2048, 1.0).unwrap();
//! let search = BoundSearch::new(&circle).unwrap();
//! let k = search.find_bound(BoundKind::ALL[0], 0.005, SearchMode::Linear).unwrap();
//! assert_eq!(k, 19);
//! ```

pub mod bounds;
pub mod curvature;
pub mod error;
pub mod features;
pub mod geometry;
pub mod io;
pub mod par;
pub mod pipeline;
pub mod regression;
pub mod shape;
pub mod smoothing;
pub mod synthetic;
pub mod validation;

pub use bounds::{BoundKind, BoundReport, BoundSearch, Criterion, ErrorCurve, SearchMode};
pub use curvature::CurvatureProfile;
pub use error::{Error, Result};
pub use features::{FeatureRow, Predictor};
pub use geometry::{ArcTable, Contour, Curve, KGon, Parameterization, Point};
pub use par::Exec;
pub use regression::FittedModel;
pub use shape::{Preshape, ShapeDistance};
pub use smoothing::SmootherConfig;
pub use validation::{CvConfig, CvSummary};

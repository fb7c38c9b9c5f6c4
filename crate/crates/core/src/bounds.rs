//! Lower bounds on the number of sampling points.
//!
//! For a threshold `E`, the length bound is the smallest `k` with
//! `(L_K - L_k) / L_K <= E` and the distance bound the smallest `k` with
//! `ρ(z_k, γ_K) < √2 E`. Each is computed under arc-length and curvature
//! sampling, giving the four bounds `kLA`, `kDA`, `kLC`, `kDC`.

use std::fmt;

use crate::curvature::{resample_curvature, CurvatureProfile};
use crate::error::{Error, Result};
use crate::geometry::{Contour, Curve, KGon, Parameterization};
use crate::shape::{preshape_distance, Preshape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    Length,
    Distance,
}

impl Criterion {
    pub const ALL: [Criterion; 2] = [Criterion::Length, Criterion::Distance];

    pub fn code(self) -> char {
        match self {
            Criterion::Length => 'L',
            Criterion::Distance => 'D',
        }
    }

    /// `≤ E` for length, strict `< E` for the normalized distance.
    pub fn meets(self, error: f64, threshold: f64) -> bool {
        match self {
            Criterion::Length => error <= threshold,
            Criterion::Distance => error < threshold,
        }
    }
}

/// One of the four bound types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundKind {
    pub criterion: Criterion,
    pub parameterization: Parameterization,
}

impl BoundKind {
    /// Canonical order: kLA, kDA, kLC, kDC.
    pub const ALL: [BoundKind; 4] = [
        BoundKind::new(Criterion::Length, Parameterization::ArcLength),
        BoundKind::new(Criterion::Distance, Parameterization::ArcLength),
        BoundKind::new(Criterion::Length, Parameterization::Curvature),
        BoundKind::new(Criterion::Distance, Parameterization::Curvature),
    ];

    pub const fn new(criterion: Criterion, parameterization: Parameterization) -> Self {
        BoundKind {
            criterion,
            parameterization,
        }
    }

    pub fn index(self) -> usize {
        BoundKind::ALL.iter().position(|&b| b == self).unwrap()
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}{}", self.criterion.code(), self.parameterization.code())
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|b| b.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown bound `{s}`")))
    }
}

/// Relative length lost by the k-gon, clamped at 0.
pub fn length_error(c: &Contour, g: &KGon) -> f64 {
    let total = c.perimeter();
    ((total - g.perimeter()) / total).max(0.0)
}

/// Shape distance between contour and k-gon on a `K`-point grid, over `√2`.
pub fn distance_error(c: &Contour, g: &KGon) -> Result<f64> {
    let u = Preshape::of_curve(c, c.len())?;
    let v = Preshape::of_curve(g, c.len())?;
    Ok(preshape_distance(&u, &v).normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Scan `k = 4, 5, ...` and stop at the first success.
    #[default]
    Linear,
    /// Doubling then bisection; the result is checked to pass with `k - 1`
    /// failing. Agrees with the linear scan whenever the error curve crosses
    /// the threshold once.
    Accelerated,
}

/// Per-contour bound computations with the curvature profile and the
/// contour's preshape computed once.
#[derive(Debug, Clone)]
pub struct BoundSearch<'a> {
    contour: &'a Contour,
    profile: Result<CurvatureProfile>,
    reference: Preshape,
}

impl<'a> BoundSearch<'a> {
    pub fn new(contour: &'a Contour) -> Result<Self> {
        let reference = Preshape::of_curve(contour, contour.len())?;
        let profile = CurvatureProfile::new(contour);
        Ok(BoundSearch {
            contour,
            profile,
            reference,
        })
    }

    pub fn contour(&self) -> &Contour {
        self.contour
    }

    pub fn profile(&self) -> Result<&CurvatureProfile> {
        self.profile.as_ref().map_err(Clone::clone)
    }

    pub fn kgon(&self, parameterization: Parameterization, k: usize) -> Result<KGon> {
        match parameterization {
            Parameterization::ArcLength => self.contour.resample_arclength(k),
            Parameterization::Curvature => resample_curvature(self.contour, self.profile()?, k),
        }
    }

    pub fn error_of(&self, criterion: Criterion, g: &KGon) -> Result<f64> {
        match criterion {
            Criterion::Length => Ok(length_error(self.contour, g)),
            Criterion::Distance => {
                let v = Preshape::of_curve(g, self.contour.len())?;
                Ok(preshape_distance(&self.reference, &v).normalized())
            }
        }
    }

    pub fn error(&self, kind: BoundKind, k: usize) -> Result<f64> {
        let g = self.kgon(kind.parameterization, k)?;
        self.error_of(kind.criterion, &g)
    }

    fn passes(&self, kind: BoundKind, k: usize, threshold: f64) -> Result<bool> {
        Ok(kind.criterion.meets(self.error(kind, k)?, threshold))
    }

    /// Smallest `k` in `[4, K]` meeting the threshold.
    pub fn find_bound(&self, kind: BoundKind, threshold: f64, mode: SearchMode) -> Result<usize> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::BadThreshold(threshold));
        }
        let max = self.contour.len();
        match mode {
            SearchMode::Linear => {
                for k in 4..=max {
                    if self.passes(kind, k, threshold)? {
                        return Ok(k);
                    }
                }
                Err(Error::NoFeasibleK { max })
            }
            SearchMode::Accelerated => {
                // `fail` is a k known to fail (3 stands for "below range")
                let mut fail = 3;
                let mut pass = 4;
                while !self.passes(kind, pass, threshold)? {
                    if pass == max {
                        return Err(Error::NoFeasibleK { max });
                    }
                    fail = pass;
                    pass = (pass * 2).min(max);
                }
                while pass - fail > 1 {
                    let mid = fail + (pass - fail) / 2;
                    if self.passes(kind, mid, threshold)? {
                        pass = mid;
                    } else {
                        fail = mid;
                    }
                }
                debug_assert!(pass == 4 || !self.passes(kind, pass - 1, threshold)?);
                Ok(pass)
            }
        }
    }

    pub fn error_curve(&self, kind: BoundKind, k_max: usize) -> Result<ErrorCurve> {
        self.contour.check_k(k_max)?;
        let values = (4..=k_max)
            .map(|k| Ok((k, self.error(kind, k)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ErrorCurve { kind, values })
    }

    /// All four bounds; each field carries its own error.
    pub fn report(&self, id: &str, threshold: f64, mode: SearchMode) -> BoundReport {
        BoundReport {
            id: id.to_string(),
            threshold,
            points: self.contour.len(),
            bounds: BoundKind::ALL.map(|kind| self.find_bound(kind, threshold, mode)),
        }
    }
}

pub fn find_bound(
    c: &Contour,
    criterion: Criterion,
    parameterization: Parameterization,
    threshold: f64,
) -> Result<usize> {
    BoundSearch::new(c)?.find_bound(
        BoundKind::new(criterion, parameterization),
        threshold,
        SearchMode::Linear,
    )
}

pub fn bound_report(id: &str, c: &Contour, threshold: f64) -> Result<BoundReport> {
    Ok(BoundSearch::new(c)?.report(id, threshold, SearchMode::Linear))
}

pub fn error_curve(c: &Contour, kind: BoundKind, k_max: usize) -> Result<ErrorCurve> {
    BoundSearch::new(c)?.error_curve(kind, k_max)
}

/// Relative error against `k` for one bound type.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub kind: BoundKind,
    pub values: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub id: String,
    pub threshold: f64,
    /// `K` of the contour.
    pub points: usize,
    /// Indexed as [`BoundKind::ALL`].
    pub bounds: [Result<usize>; 4],
}

impl BoundReport {
    pub fn get(&self, kind: BoundKind) -> &Result<usize> {
        &self.bounds[kind.index()]
    }

    pub fn all_ok(&self) -> Result<[usize; 4]> {
        let mut out = [0; 4];
        for (slot, b) in out.iter_mut().zip(&self.bounds) {
            *slot = b.clone()?;
        }
        Ok(out)
    }
}

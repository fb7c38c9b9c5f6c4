//! Ordinary least squares with classical inference and backward selection.
//!
//! Fits use a Householder QR of the design matrix; standard errors come from
//! `σ̂² (XᵀX)⁻¹ = σ̂² R⁻¹ R⁻ᵀ`. p-values use the Student-t and F
//! distributions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};
use crate::features::{FeatureRow, Predictor};

pub const INTERCEPT: &str = "intercept";

/// Columns whose QR diagonal falls below this fraction of the column norm
/// are treated as linearly dependent.
const RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEstimate {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub response: String,
    /// Intercept first, then predictors in the order they were given.
    pub terms: Vec<TermEstimate>,
    pub rmse: f64,
    /// Overall F statistic; absent for an intercept-only model.
    pub f: Option<f64>,
    pub f_p: Option<f64>,
    pub n: usize,
    pub df_resid: usize,
    pub r_squared: f64,
}

/// Two-sided p-value of a t statistic.
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0)
}

/// Student-t CDF.
pub fn t_cdf(t: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df).expect("df > 0").cdf(t)
}

fn f_upper_p(f: f64, df1: f64, df2: f64) -> f64 {
    if f.is_infinite() {
        return 0.0;
    }
    FisherSnedecor::new(df1, df2).expect("df > 0").sf(f).clamp(0.0, 1.0)
}

/// Fit `y = β₀ + Σ βⱼ xⱼ + ε` for named predictor columns.
pub fn fit_columns(response: &str, columns: &[(String, Vec<f64>)], y: &[f64]) -> Result<FittedModel> {
    let n = y.len();
    let p = columns.len() + 1;
    if n <= p {
        return Err(Error::TooFewRows { rows: n, needed: p });
    }
    if columns.iter().any(|(_, c)| c.len() != n) {
        return Err(Error::InvalidConfig("column length differs from response".into()));
    }
    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { columns[j - 1].1[i] });
    let yv = DVector::from_column_slice(y);

    let col_norms: Vec<f64> = (0..p).map(|j| x.column(j).norm()).collect();
    let qr = x.clone().qr();
    let r = qr.r();
    for j in 0..p {
        if r[(j, j)].abs() <= RANK_RTOL * col_norms[j] || col_norms[j] == 0.0 {
            return Err(Error::RankDeficient);
        }
    }
    let qty = qr.q().transpose() * &yv;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::RankDeficient)?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or(Error::RankDeficient)?;

    let fitted = &x * &beta;
    let resid = &yv - &fitted;
    let sse = resid.norm_squared();
    let df_resid = n - p;
    let mse = sse / df_resid as f64;
    let y_mean = yv.mean();
    let sst: f64 = yv.iter().map(|v| (v - y_mean).powi(2)).sum();
    let ssr = (sst - sse).max(0.0);

    let terms = (0..p)
        .map(|j| {
            let var = r_inv.row(j).norm_squared() * mse;
            let se = var.sqrt();
            let t = beta[j] / se;
            TermEstimate {
                name: if j == 0 {
                    INTERCEPT.to_string()
                } else {
                    columns[j - 1].0.clone()
                },
                estimate: beta[j],
                se,
                t,
                p: t_two_sided_p(t, df_resid as f64),
            }
        })
        .collect();

    let (f, f_p) = if p > 1 {
        let f = (ssr / (p - 1) as f64) / mse;
        (Some(f), Some(f_upper_p(f, (p - 1) as f64, df_resid as f64)))
    } else {
        (None, None)
    };

    Ok(FittedModel {
        response: response.to_string(),
        terms,
        rmse: mse.sqrt(),
        f,
        f_p,
        n,
        df_resid,
        r_squared: if sst > 0.0 { 1.0 - sse / sst } else { 1.0 },
    })
}

fn feature_columns(rows: &[FeatureRow], terms: &[Predictor]) -> Vec<(String, Vec<f64>)> {
    terms
        .iter()
        .map(|&t| (t.name().to_string(), rows.iter().map(|r| r.value(t)).collect()))
        .collect()
}

/// OLS of a response on a subset of the contour predictors.
pub fn fit_ols(
    response: &str,
    rows: &[FeatureRow],
    y: &[f64],
    terms: &[Predictor],
) -> Result<FittedModel> {
    if rows.len() != y.len() {
        return Err(Error::InvalidConfig("rows and responses differ in length".into()));
    }
    fit_columns(response, &feature_columns(rows, terms), y)
}

/// Backward elimination on named columns: drop the predictor with the
/// largest p-value above `alpha` and refit until none remain above it.
/// Equal p-values drop the later column. The intercept always stays.
pub fn backward_select_columns(
    response: &str,
    columns: &[(String, Vec<f64>)],
    y: &[f64],
    alpha: f64,
) -> Result<FittedModel> {
    let mut active: Vec<(String, Vec<f64>)> = columns.to_vec();
    loop {
        let model = fit_columns(response, &active, y)?;
        let worst = model.terms[1..]
            .iter()
            .enumerate()
            .fold(None::<(usize, f64)>, |acc, (i, t)| match acc {
                Some((_, p)) if t.p < p => acc,
                _ => Some((i, t.p)),
            });
        match worst {
            Some((i, p)) if p > alpha => {
                active.remove(i);
            }
            _ => return Ok(model),
        }
    }
}

pub fn backward_select(
    response: &str,
    rows: &[FeatureRow],
    y: &[f64],
    alpha: f64,
) -> Result<FittedModel> {
    if rows.len() != y.len() {
        return Err(Error::InvalidConfig("rows and responses differ in length".into()));
    }
    backward_select_columns(response, &feature_columns(rows, &Predictor::ALL), y, alpha)
}

/// Model prediction, real-valued and rounded up to a whole number of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub value: f64,
    pub ceiled: i64,
}

impl FittedModel {
    /// Predictor terms (everything but the intercept).
    pub fn predictors(&self) -> Result<Vec<Predictor>> {
        self.terms[1..]
            .iter()
            .map(|t| Predictor::from_name(&t.name).ok_or_else(|| Error::MissingFeature(t.name.clone())))
            .collect()
    }

    pub fn term(&self, name: &str) -> Option<&TermEstimate> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// Evaluate with predictor values supplied by `lookup`.
    pub fn predict_with(&self, lookup: impl Fn(&str) -> Option<f64>) -> Result<Prediction> {
        let mut value = 0.0;
        for t in &self.terms {
            let x = if t.name == INTERCEPT {
                1.0
            } else {
                lookup(&t.name).ok_or_else(|| Error::MissingFeature(t.name.clone()))?
            };
            value += t.estimate * x;
        }
        Ok(Prediction {
            value,
            ceiled: value.ceil() as i64,
        })
    }

    pub fn predict(&self, row: &FeatureRow) -> Result<Prediction> {
        self.predict_with(|name| row.lookup(name))
    }
}

pub fn predict(model: &FittedModel, row: &FeatureRow) -> Result<Prediction> {
    model.predict(row)
}

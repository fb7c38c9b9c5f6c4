//! Cross-validation of the bound-prediction models.
//!
//! Two protocols: repeated random 80:20 splits, and leave-one-category-out
//! with a null distribution of RMSEs from random test sets of the same size
//! as the held-out category.
//!
//! Every replicate draws its test set from its own ChaCha stream, keyed by
//! the seed, the test-set size and the replicate index, so results are
//! identical for any worker count.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rand::seq::index;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureRow, Predictor};
use crate::par::Exec;
use crate::regression::{backward_select, fit_ols, FittedModel};

/// Replicates used to pick the histogram bin width.
const BIN_WIDTH_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    pub replicates: usize,
    pub test_fraction: f64,
    pub seed: u64,
    pub alpha: f64,
    /// Re-run backward selection inside every replicate instead of freezing
    /// the terms selected on the full data.
    pub reselect: bool,
    pub exec: Exec,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            replicates: 10_000,
            test_fraction: 0.2,
            seed: 0,
            alpha: 0.05,
            reselect: false,
            exec: Exec::default(),
        }
    }
}

impl CvConfig {
    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "test fraction {} outside (0, 1)",
                self.test_fraction
            )));
        }
        Ok(())
    }
}

/// One response column to validate.
#[derive(Debug, Clone, PartialEq)]
pub struct Response {
    pub name: String,
    pub values: Vec<f64>,
}

/// Count, sum, min and max, mergeable across chunks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    pub count: usize,
    pub sum: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for RunningStats {
    fn default() -> Self {
        RunningStats {
            count: 0,
            sum: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        self.count += other.count;
        self.sum += other.sum;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }
}

/// Fixed-width histogram; bins are `[origin + i w, origin + (i+1) w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub origin: f64,
    pub width: f64,
    /// Sparse `(bin index, count)` pairs in increasing bin order.
    pub bins: Vec<(i64, u64)>,
}

impl Histogram {
    /// Freedman-Diaconis width from the first replicates, then fixed.
    pub fn build(samples: &[f64]) -> Self {
        let head = &samples[..samples.len().min(BIN_WIDTH_SAMPLES)];
        let mut sorted = head.to_vec();
        sorted.sort_by(f64::total_cmp);
        let origin = sorted.first().copied().unwrap_or(0.0);
        let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
        let mut width = 2.0 * iqr / (head.len() as f64).cbrt();
        if !(width.is_finite() && width > 0.0) {
            let spread = sorted.last().copied().unwrap_or(0.0) - origin;
            width = if spread > 0.0 {
                spread
            } else {
                origin.abs().max(1e-300)
            };
        }
        let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
        for &x in samples {
            let bin = ((x - origin) / width).floor() as i64;
            *counts.entry(bin).or_default() += 1;
        }
        Histogram {
            origin,
            width,
            bins: counts.into_iter().collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|&(_, c)| c).sum()
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Signs of test residuals `observed - predicted`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualSigns {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl ResidualSigns {
    pub fn push(&mut self, r: f64) {
        if r > 0.0 {
            self.positive += 1;
        } else if r < 0.0 {
            self.negative += 1;
        } else {
            self.zero += 1;
        }
    }

    pub fn merge(&mut self, o: &ResidualSigns) {
        self.positive += o.positive;
        self.negative += o.negative;
        self.zero += o.zero;
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn positive_pct(&self) -> f64 {
        100.0 * self.positive as f64 / self.total() as f64
    }

    pub fn negative_pct(&self) -> f64 {
        100.0 * self.negative as f64 / self.total() as f64
    }

    pub fn zero_pct(&self) -> f64 {
        100.0 * self.zero as f64 / self.total() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub response: String,
    /// Held-out category (leave-one-category-out only).
    pub category: Option<String>,
    /// Predictors of the full-data model.
    pub terms: Vec<Predictor>,
    pub test_size: usize,
    pub replicates: usize,
    pub stats: RunningStats,
    pub histogram: Histogram,
    /// RMSE the replicate distribution is compared against: the full-data
    /// model RMSE for 80:20, the held-out category RMSE otherwise.
    pub observed_rmse: f64,
    /// Share of replicate RMSEs strictly above `observed_rmse`.
    pub upper_tail_prob: f64,
    /// Residual signs of the held-out category, or pooled over all
    /// replicate test sets for 80:20.
    pub residuals: ResidualSigns,
    pub positive_residual_pct: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rmse_samples: Vec<f64>,
}

impl CvSummary {
    pub fn mean_rmse(&self) -> f64 {
        self.stats.mean()
    }
}

struct Split {
    rmse: f64,
    signs: ResidualSigns,
}

fn split_rng(seed: u64, size: usize, replicate: usize) -> ChaCha8Rng {
    let key = seed ^ (size as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(replicate as u64);
    rng
}

fn subset<T: Clone>(items: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| items[i].clone()).collect()
}

/// Fit on `train`, score on `test`.
fn evaluate_split(
    rows: &[FeatureRow],
    response: &Response,
    terms: &[Predictor],
    train: &[usize],
    test: &[usize],
    cfg: &CvConfig,
) -> Result<Split> {
    let train_rows = subset(rows, train);
    let train_y = subset(&response.values, train);
    let model = if cfg.reselect {
        backward_select(&response.name, &train_rows, &train_y, cfg.alpha)?
    } else {
        fit_ols(&response.name, &train_rows, &train_y, terms)?
    };
    let mut sse = 0.0;
    let mut signs = ResidualSigns::default();
    for &i in test {
        let r = response.values[i] - model.predict(&rows[i])?.value;
        sse += r * r;
        signs.push(r);
    }
    Ok(Split {
        rmse: (sse / test.len() as f64).sqrt(),
        signs,
    })
}

/// RMSEs of `cfg.replicates` random test sets of `size` rows.
fn random_splits(
    rows: &[FeatureRow],
    response: &Response,
    terms: &[Predictor],
    size: usize,
    cfg: &CvConfig,
) -> Result<Vec<Split>> {
    let n = rows.len();
    cfg.exec
        .map(cfg.replicates, |r| {
            let mut rng = split_rng(cfg.seed, size, r);
            let mut in_test = vec![false; n];
            let mut test: Vec<usize> = index::sample(&mut rng, n, size).into_vec();
            test.sort_unstable();
            test.iter().for_each(|&i| in_test[i] = true);
            let train: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
            evaluate_split(rows, response, terms, &train, &test, cfg)
        })
        .into_iter()
        .collect()
}

fn summarize(
    response: &Response,
    category: Option<String>,
    terms: Vec<Predictor>,
    test_size: usize,
    samples: Vec<f64>,
    observed_rmse: f64,
    residuals: ResidualSigns,
) -> CvSummary {
    let mut stats = RunningStats::default();
    samples.iter().for_each(|&x| stats.push(x));
    let above = samples.iter().filter(|&&x| x > observed_rmse).count();
    CvSummary {
        response: response.name.clone(),
        category,
        terms,
        test_size,
        replicates: samples.len(),
        stats,
        histogram: Histogram::build(&samples),
        observed_rmse,
        upper_tail_prob: above as f64 / samples.len() as f64,
        positive_residual_pct: residuals.positive_pct(),
        residuals,
        rmse_samples: samples,
    }
}

fn full_model(rows: &[FeatureRow], response: &Response, alpha: f64) -> Result<FittedModel> {
    if rows.len() != response.values.len() {
        return Err(Error::InvalidConfig(format!(
            "response {} has {} values for {} rows",
            response.name,
            response.values.len(),
            rows.len()
        )));
    }
    backward_select(&response.name, rows, &response.values, alpha)
}

/// Repeated random 80:20 (or `test_fraction`) splits, one summary per response.
pub fn cv_8020(rows: &[FeatureRow], responses: &[Response], cfg: &CvConfig) -> Result<Vec<CvSummary>> {
    cfg.validate()?;
    let n = rows.len();
    if n < 10 {
        return Err(Error::TooFewRows { rows: n, needed: 9 });
    }
    let test_size = ((cfg.test_fraction * n as f64).round() as usize).clamp(1, n - 5);
    responses
        .iter()
        .map(|response| {
            let model = full_model(rows, response, cfg.alpha)?;
            let terms = model.predictors()?;
            let splits = random_splits(rows, response, &terms, test_size, cfg)?;
            let mut signs = ResidualSigns::default();
            splits.iter().for_each(|s| signs.merge(&s.signs));
            let samples = splits.into_iter().map(|s| s.rmse).collect();
            Ok(summarize(response, None, terms, test_size, samples, model.rmse, signs))
        })
        .collect()
}

/// Leave-one-category-out; `categories[i]` labels `rows[i]`.
///
/// Summaries come back response-major, categories in sorted order.
pub fn cv_leave_category(
    rows: &[FeatureRow],
    responses: &[Response],
    categories: &[String],
    cfg: &CvConfig,
) -> Result<Vec<CvSummary>> {
    cfg.validate()?;
    let n = rows.len();
    if categories.len() != n {
        return Err(Error::InvalidConfig("one category label per row required".into()));
    }
    let mut members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, c) in categories.iter().enumerate() {
        members.entry(c.as_str()).or_default().push(i);
    }
    if members.len() < 2 {
        return Err(Error::TooFewCategories(members.len()));
    }

    let mut out = Vec::new();
    for response in responses {
        let model = full_model(rows, response, cfg.alpha)?;
        let terms = model.predictors()?;
        let mut null_by_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (&name, held) in &members {
            let train: Vec<usize> = (0..n).filter(|i| !held.contains(i)).collect();
            if train.len() <= Predictor::ALL.len() + 1 {
                return Err(Error::SingletonCategory(name.to_string()));
            }
            let split = evaluate_split(rows, response, &terms, &train, held, cfg).map_err(|e| match e {
                Error::RankDeficient | Error::TooFewRows { .. } => Error::SingletonCategory(name.to_string()),
                other => other,
            })?;
            let size = held.len();
            let null = match null_by_size.entry(size) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(
                    random_splits(rows, response, &terms, size, cfg)?
                        .into_iter()
                        .map(|s| s.rmse)
                        .collect(),
                ),
            };
            out.push(summarize(
                response,
                Some(name.to_string()),
                terms.clone(),
                size,
                null.clone(),
                split.rmse,
                split.signs,
            ));
        }
    }
    Ok(out)
}

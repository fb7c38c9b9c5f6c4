use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use kgon_core::bounds::{BoundKind, BoundSearch, Criterion, SearchMode};
use kgon_core::features::features_from_profile;
use kgon_core::io::write_points;
use kgon_core::regression::backward_select;
use kgon_core::smoothing::{smooth, SmootherConfig};
use kgon_core::synthetic::{self, Specimen};
use kgon_core::validation::{cv_8020, cv_leave_category, CvConfig, CvSummary, Response};
use kgon_core::{Contour, Exec, FeatureRow, FittedModel, Parameterization};
use serde::Serialize;

use crate::inputs::{self, Item, MANIFEST_HEADER};
use crate::tables::{self, BoundsRow, CURVES_HEADER, PREDICTIONS_HEADER};
use crate::{Cli, Command, CriterionArg, CvMode, Failure, ModeArg, ParamArg, Source, Suite};

pub fn run(cli: Cli) -> Result<(), Failure> {
    let exec = Exec::from_threads(cli.threads);
    match cli.command {
        Command::Smooth {
            source,
            smooth_passes,
            smooth_window,
            suffix,
            out_dir,
        } => {
            let cfg = SmootherConfig::new(smooth_window, smooth_passes)?;
            cmd_smooth(&source, cfg, &suffix, out_dir.as_deref(), exec)
        }
        Command::Bounds {
            source,
            threshold,
            criterion,
            param,
            mode,
            curve_out,
            curve_k_max,
            out,
        } => {
            let mode = match mode {
                ModeArg::Linear => SearchMode::Linear,
                ModeArg::Accelerated => SearchMode::Accelerated,
            };
            let kinds = selected_kinds(criterion, param);
            let curves = curve_out.as_deref().map(|p| (p, curve_k_max.map_or(usize::MAX, |k| k as usize)));
            cmd_bounds(&source, threshold, &kinds, mode, curves, out.as_deref(), exec)
        }
        Command::Features { source, out } => cmd_features(&source, out.as_deref(), exec),
        Command::Fit {
            features,
            bounds,
            alpha,
            out,
        } => cmd_fit(&features, &bounds, alpha, &out),
        Command::Predict { models, features, out } => cmd_predict(&models, &features, out.as_deref()),
        Command::Validate {
            features,
            bounds,
            manifest,
            mode,
            replicates,
            test_fraction,
            alpha,
            reselect,
            out,
            samples_out,
        } => {
            let cfg = CvConfig {
                replicates,
                test_fraction,
                seed: cli.seed,
                alpha,
                reselect,
                exec,
            };
            cmd_validate(&features, &bounds, manifest.as_deref(), mode, &cfg, &out, samples_out.as_deref())
        }
        Command::Synth { suite, count, out } => cmd_synth(suite, count, cli.seed, &out),
    }
}

fn selected_kinds(criterion: CriterionArg, param: ParamArg) -> Vec<BoundKind> {
    BoundKind::ALL
        .into_iter()
        .filter(|k| match criterion {
            CriterionArg::Length => k.criterion == Criterion::Length,
            CriterionArg::Distance => k.criterion == Criterion::Distance,
            CriterionArg::Both => true,
        })
        .filter(|k| match param {
            ParamArg::Arclength => k.parameterization == Parameterization::ArcLength,
            ParamArg::Curvature => k.parameterization == Parameterization::Curvature,
            ParamArg::Both => true,
        })
        .collect()
}

/// Resolved items and whether their files need lenient parsing.
fn resolve_source(source: &Source) -> Result<(Vec<Item>, bool), Failure> {
    match (&source.input, &source.kimia) {
        (_, Some(dir)) => Ok((inputs::resolve_external(dir)?, true)),
        (Some(input), None) => Ok((inputs::resolve(input)?, false)),
        (None, None) => Err(Failure::Input("one of --input or --kimia is required".into())),
    }
}

fn load_all(items: &[Item], lenient: bool, exec: Exec) -> Result<Vec<Contour>, Failure> {
    if items.is_empty() {
        return Err(Failure::Input("no contour files found".into()));
    }
    exec.map(items.len(), |i| inputs::load(&items[i], lenient))
        .into_iter()
        .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::input_at(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::input_at(path, e))
}

/// Run `emit` against the file at `out`, or stdout.
fn emit_to(out: Option<&Path>, emit: impl FnOnce(&mut dyn Write) -> Result<(), Failure>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut w = create(path)?;
            emit(&mut w)?;
            w.flush().map_err(|e| Failure::input_at(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            emit(&mut w)?;
            Ok(w.flush()?)
        }
    }
}

fn relative_to(path: &Path, base: &Path) -> PathBuf {
    path.strip_prefix(base).map(Path::to_path_buf).unwrap_or_else(|_| path.to_path_buf())
}

fn write_manifest(path: &Path, rows: &[(String, PathBuf, Option<String>)]) -> Result<(), Failure> {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(MANIFEST_HEADER)?;
    for (id, file, category) in rows {
        w.write_record([
            id.as_str(),
            &relative_to(file, base).to_string_lossy(),
            category.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush().map_err(|e| Failure::input_at(path, e))
}

fn cmd_smooth(source: &Source, cfg: SmootherConfig, suffix: &str, out_dir: Option<&Path>, exec: Exec) -> Result<(), Failure> {
    let (items, lenient) = resolve_source(source)?;
    let contours = load_all(&items, lenient, exec)?;
    let smoothed = exec
        .map(contours.len(), |i| smooth(&contours[i], cfg))
        .into_iter()
        .zip(&items)
        .map(|(r, item)| r.map_err(|e| Failure::Input(format!("{}: {e}", item.path.display()))))
        .collect::<Result<Vec<_>, _>>()?;

    let mut manifest = Vec::with_capacity(items.len());
    for (item, c) in items.iter().zip(&smoothed) {
        let dir = out_dir
            .map(Path::to_path_buf)
            .or_else(|| item.path.parent().map(Path::to_path_buf))
            .unwrap_or_default();
        let stem = item.path.file_stem().unwrap_or_default().to_string_lossy();
        let name = match item.path.extension() {
            Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
            None => format!("{stem}{suffix}"),
        };
        let path = dir.join(name);
        let mut w = create(&path)?;
        write_points(&mut w, c.points()).map_err(|e| Failure::input_at(&path, e))?;
        w.flush().map_err(|e| Failure::input_at(&path, e))?;
        manifest.push((item.id.clone(), path, item.category.clone()));
    }
    let single_file = source.input.as_deref().is_some_and(|p| p.is_file() && !inputs::is_manifest(p));
    if !single_file {
        let dir = match (out_dir, source.input.as_deref(), source.kimia.as_deref()) {
            (Some(d), _, _) => d.to_path_buf(),
            (None, Some(input), _) if input.is_dir() => input.to_path_buf(),
            (None, Some(input), _) => input.parent().map(Path::to_path_buf).unwrap_or_default(),
            (None, None, Some(dir)) => dir.to_path_buf(),
            (None, None, None) => PathBuf::new(),
        };
        write_manifest(&dir.join(format!("manifest{suffix}.csv")), &manifest)?;
    }
    Ok(())
}

struct ContourBounds {
    row: BoundsRow,
    failures: Vec<String>,
    curves: Vec<(BoundKind, Vec<(usize, f64)>)>,
}

fn cmd_bounds(
    source: &Source,
    threshold: f64,
    kinds: &[BoundKind],
    mode: SearchMode,
    curve_out: Option<(&Path, usize)>,
    out: Option<&Path>,
    exec: Exec,
) -> Result<(), Failure> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(kgon_core::Error::BadThreshold(threshold).into());
    }
    let (items, lenient) = resolve_source(source)?;
    let contours = load_all(&items, lenient, exec)?;
    let results = exec.map(items.len(), |i| -> Result<ContourBounds, Failure> {
        let id = &items[i].id;
        let c = &contours[i];
        let search = BoundSearch::new(c)?;
        let mut bounds = [None; 4];
        let mut failures = Vec::new();
        for &kind in kinds {
            match search.find_bound(kind, threshold, mode) {
                Ok(k) => bounds[kind.index()] = Some(k),
                Err(e) if e.is_numeric() => failures.push(format!("{id} {kind}: {e}")),
                Err(e) => return Err(Failure::Input(format!("{id}: {e}"))),
            }
        }
        let mut curves = Vec::new();
        if let Some((_, k_max)) = curve_out {
            for &kind in kinds {
                curves.push((kind, search.error_curve(kind, k_max.min(c.len()))?.values));
            }
        }
        Ok(ContourBounds {
            row: BoundsRow {
                id: id.clone(),
                points: c.len(),
                threshold,
                bounds,
            },
            failures,
            curves,
        })
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<BoundsRow> = results.iter().map(|r| r.row.clone()).collect();
    emit_to(out, |w| tables::write_bounds(w, &rows))?;
    if let Some((path, _)) = curve_out {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(CURVES_HEADER)?;
        for r in &results {
            for (kind, values) in &r.curves {
                for (k, err) in values {
                    w.write_record([r.row.id.clone(), kind.to_string(), k.to_string(), err.to_string()])?;
                }
            }
        }
        w.flush().map_err(|e| Failure::input_at(path, e))?;
    }
    let failures: Vec<&String> = results.iter().flat_map(|r| &r.failures).collect();
    if let Some(first) = failures.first() {
        return Err(Failure::Numeric(format!(
            "{} bound(s) not found; first: {first}",
            failures.len()
        )));
    }
    Ok(())
}

fn cmd_features(source: &Source, out: Option<&Path>, exec: Exec) -> Result<(), Failure> {
    let (items, lenient) = resolve_source(source)?;
    let contours = load_all(&items, lenient, exec)?;
    let rows = exec
        .map(items.len(), |i| {
            let profile = kgon_core::CurvatureProfile::new(&contours[i])
                .map_err(|e| Failure::from(e).with_context(&items[i].id))?;
            Ok(features_from_profile(&items[i].id, &contours[i], &profile))
        })
        .into_iter()
        .collect::<Result<Vec<FeatureRow>, Failure>>()?;
    emit_to(out, |w| tables::write_features(w, &rows))
}

impl Failure {
    fn with_context(self, what: &str) -> Self {
        match self {
            Failure::Input(m) => Failure::Input(format!("{what}: {m}")),
            Failure::Numeric(m) => Failure::Numeric(format!("{what}: {m}")),
        }
    }
}

fn read_features_file(path: &Path) -> Result<Vec<FeatureRow>, Failure> {
    let file = File::open(path).map_err(|e| Failure::input_at(path, e))?;
    tables::read_features(file).map_err(|e| e.with_context(&path.display().to_string()))
}

fn read_bounds_file(path: &Path) -> Result<Vec<BoundsRow>, Failure> {
    let file = File::open(path).map_err(|e| Failure::input_at(path, e))?;
    tables::read_bounds(file).map_err(|e| e.with_context(&path.display().to_string()))
}

/// Features paired with bounds by contour id, in features order.
fn join(features: &[FeatureRow], bounds: &[BoundsRow]) -> Result<Vec<(FeatureRow, BoundsRow)>, Failure> {
    let by_id: BTreeMap<&str, &BoundsRow> = bounds.iter().map(|b| (b.id.as_str(), b)).collect();
    let joined: Vec<(FeatureRow, BoundsRow)> = features
        .iter()
        .filter_map(|f| by_id.get(f.id.as_str()).map(|b| (f.clone(), (*b).clone())))
        .collect();
    if joined.is_empty() {
        return Err(Failure::Input("features and bounds share no contour ids".into()));
    }
    Ok(joined)
}

fn cmd_fit(features: &Path, bounds: &Path, alpha: f64, out: &Path) -> Result<(), Failure> {
    let joined = join(&read_features_file(features)?, &read_bounds_file(bounds)?)?;
    let mut models = Vec::new();
    for kind in BoundKind::ALL {
        let (rows, y): (Vec<FeatureRow>, Vec<f64>) = joined
            .iter()
            .filter_map(|(f, b)| b.get(kind).map(|k| (f.clone(), k as f64)))
            .unzip();
        if rows.is_empty() {
            continue;
        }
        let model = backward_select(&kind.to_string(), &rows, &y, alpha).map_err(|e| Failure::from(e).with_context(&kind.to_string()))?;
        models.push(model);
    }
    if models.is_empty() {
        return Err(Failure::Input("bounds table has no values".into()));
    }
    let mut w = create(out)?;
    serde_json::to_writer_pretty(&mut w, &models)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Failure::input_at(out, e))
}

fn cmd_predict(models: &Path, features: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(models).map_err(|e| Failure::input_at(models, e))?;
    let models: Vec<FittedModel> = serde_json::from_str(&text).map_err(|e| Failure::input_at(models, e))?;
    let rows = read_features_file(features)?;
    emit_to(out, |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(PREDICTIONS_HEADER)?;
        for row in &rows {
            for m in &models {
                let p = m.predict(row)?;
                w.write_record([row.id.clone(), m.response.clone(), p.value.to_string(), p.ceiled.to_string()])?;
            }
        }
        Ok(w.flush()?)
    })
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    mode: &'static str,
    seed: u64,
    replicates: usize,
    test_fraction: f64,
    alpha: f64,
    reselect: bool,
    rows: usize,
    summaries: &'a [CvSummary],
}

fn read_categories(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    inputs::read_manifest(path)?
        .into_iter()
        .map(|item| match item.category {
            Some(c) => Ok((item.id, c)),
            None => Err(Failure::Input(format!("{}: contour {} has no category", path.display(), item.id))),
        })
        .collect()
}

fn cmd_validate(
    features: &Path,
    bounds: &Path,
    manifest: Option<&Path>,
    mode: CvMode,
    cfg: &CvConfig,
    out: &Path,
    samples_out: Option<&Path>,
) -> Result<(), Failure> {
    let joined = join(&read_features_file(features)?, &read_bounds_file(bounds)?)?;
    // rows need every bound so that all four responses share one design
    let complete: Vec<&(FeatureRow, BoundsRow)> = joined.iter().filter(|(_, b)| b.bounds.iter().all(Option::is_some)).collect();
    let rows: Vec<FeatureRow> = complete.iter().map(|(f, _)| f.clone()).collect();
    let responses: Vec<Response> = BoundKind::ALL
        .iter()
        .map(|&kind| Response {
            name: kind.to_string(),
            values: complete.iter().map(|(_, b)| b.get(kind).unwrap_or(0) as f64).collect(),
        })
        .collect();
    let mut summaries = match mode {
        CvMode::Split8020 => cv_8020(&rows, &responses, cfg)?,
        CvMode::Loco => {
            let manifest = manifest.ok_or_else(|| Failure::Input("--mode loco needs --manifest".into()))?;
            let categories = read_categories(manifest)?;
            let labels = rows
                .iter()
                .map(|r| {
                    categories
                        .get(&r.id)
                        .cloned()
                        .ok_or_else(|| Failure::Input(format!("{}: no category for {}", manifest.display(), r.id)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            cv_leave_category(&rows, &responses, &labels, cfg)?
        }
    };
    if let Some(path) = samples_out {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["response", "category", "replicate", "rmse"])?;
        for s in &summaries {
            for (r, x) in s.rmse_samples.iter().enumerate() {
                w.write_record([
                    s.response.clone(),
                    s.category.clone().unwrap_or_default(),
                    r.to_string(),
                    x.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Failure::input_at(path, e))?;
    }
    summaries.iter_mut().for_each(|s| s.rmse_samples.clear());
    let report = ValidationReport {
        mode: match mode {
            CvMode::Split8020 => "split8020",
            CvMode::Loco => "loco",
        },
        seed: cfg.seed,
        replicates: cfg.replicates,
        test_fraction: cfg.test_fraction,
        alpha: cfg.alpha,
        reselect: cfg.reselect,
        rows: rows.len(),
        summaries: &summaries,
    };
    let mut w = create(out)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Failure::input_at(out, e))
}

fn cmd_synth(suite: Suite, count: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    let specimens: Vec<Specimen> = match suite {
        Suite::Shapes => synthetic::shape_suite(seed)?,
        Suite::Outline => synthetic::outline_suite(seed)?,
        Suite::Jagged => synthetic::jagged_suite(seed, count)?
            .into_iter()
            .enumerate()
            .map(|(i, contour)| Specimen {
                id: format!("jagged-{:02}", i + 1),
                category: "jagged".into(),
                contour,
            })
            .collect(),
    };
    fs::create_dir_all(out).map_err(|e| Failure::input_at(out, e))?;
    let mut manifest = Vec::with_capacity(specimens.len());
    for s in &specimens {
        let path = out.join(format!("{}.txt", s.id));
        let mut w = create(&path)?;
        write_points(&mut w, s.contour.points()).map_err(|e| Failure::input_at(&path, e))?;
        w.flush().map_err(|e| Failure::input_at(&path, e))?;
        manifest.push((s.id.clone(), path, Some(s.category.clone())));
    }
    write_manifest(&out.join("manifest.csv"), &manifest)
}

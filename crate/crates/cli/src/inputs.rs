//! Resolving contour inputs: a single file, a directory, a dataset manifest,
//! or a directory of externally supplied outlines.

use std::fs;
use std::path::{Path, PathBuf};

use kgon_core::io::parse_points;
use kgon_core::Contour;

use crate::Failure;

/// One contour to process.
#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub id: String,
    pub path: PathBuf,
    pub category: Option<String>,
}

const CONTOUR_EXTENSIONS: [&str; 4] = ["txt", "csv", "dat", "xy"];

/// Header of a dataset manifest.
pub const MANIFEST_HEADER: [&str; 3] = ["contour_id", "path", "category"];

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// True when the file starts with a `contour_id` header line.
pub fn is_manifest(path: &Path) -> bool {
    fs::read_to_string(path)
        .map(|t| t.lines().next().is_some_and(|l| l.trim_start().starts_with("contour_id")))
        .unwrap_or(false)
}

fn list_dir(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("cannot list {}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| Failure::Input(format!("cannot list {}: {e}", dir.display())))?
            .path();
        if path.is_file() && !stem(&path).starts_with("manifest") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Expand `--input`: a contour file, a directory of contour files, or a
/// manifest CSV with a `contour_id,path[,category]` header.
pub fn resolve(input: &Path) -> Result<Vec<Item>, Failure> {
    if input.is_dir() {
        return Ok(list_dir(input)?
            .into_iter()
            .filter(|p| {
                p.extension()
                    .is_some_and(|e| CONTOUR_EXTENSIONS.contains(&e.to_string_lossy().as_ref()))
            })
            .map(|path| Item {
                id: stem(&path),
                path,
                category: None,
            })
            .collect());
    }
    if !input.exists() {
        return Err(Failure::Input(format!("cannot read {}: no such file or directory", input.display())));
    }
    if is_manifest(input) {
        return read_manifest(input);
    }
    Ok(vec![Item {
        id: stem(input),
        path: input.to_path_buf(),
        category: None,
    }])
}

/// Every file in `dir`, categories taken from the file name with trailing
/// digits and separators removed (`bird-07.txt` is a `bird`).
pub fn resolve_external(dir: &Path) -> Result<Vec<Item>, Failure> {
    if !dir.is_dir() {
        return Err(Failure::Input(format!("{} is not a directory", dir.display())));
    }
    Ok(list_dir(dir)?
        .into_iter()
        .map(|path| {
            let id = stem(&path);
            let category = id
                .trim_end_matches(|c: char| c.is_ascii_digit() || "-_ .".contains(c))
                .to_lowercase();
            Item {
                category: Some(if category.is_empty() { id.clone() } else { category }),
                id,
                path,
            }
        })
        .collect())
}

/// Read a dataset manifest; relative paths are taken from the manifest's
/// directory.
pub fn read_manifest(path: &Path) -> Result<Vec<Item>, Failure> {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut reader = csv::Reader::from_path(path).map_err(|e| Failure::input_at(path, e))?;
    let headers = reader.headers().map_err(|e| Failure::input_at(path, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let id_col = col("contour_id").ok_or_else(|| Failure::Input(format!("{}: no contour_id column", path.display())))?;
    let path_col = col("path");
    let cat_col = col("category");
    let mut items = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Failure::input_at(path, e))?;
        let id = record.get(id_col).unwrap_or_default().trim().to_string();
        let file = match path_col.and_then(|c| record.get(c)) {
            Some(p) if !p.trim().is_empty() => base.join(p.trim()),
            _ => PathBuf::new(),
        };
        let category = cat_col
            .and_then(|c| record.get(c))
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty());
        items.push(Item { id, path: file, category });
    }
    let mut ids: Vec<&str> = items.iter().map(|i| i.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Failure::Input(format!("{}: duplicate contour_id {}", path.display(), w[0])));
    }
    Ok(items)
}

/// Load and validate one contour; `lenient` also accepts whitespace-separated
/// coordinates.
pub fn load(item: &Item, lenient: bool) -> Result<Contour, Failure> {
    let text = read_text(&item.path)?;
    let text = if lenient {
        text.lines()
            .map(|l| l.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("\n")
    } else {
        text
    };
    let points = parse_points(&text).map_err(|e| Failure::Input(format!("{}: {e}", item.path.display())))?;
    Contour::ingest(points).map_err(|e| Failure::Input(format!("{}: {e}", item.path.display())))
}

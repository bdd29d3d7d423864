//! UCR-format datasets: one series per line, class label first.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Tab if the first record contains one, else comma, else runs of
    /// whitespace (the older space-padded archive files).
    #[default]
    Auto,
    Tab,
    Comma,
    Whitespace,
}

impl FromStr for Delimiter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Delimiter::Auto),
            "tab" => Ok(Delimiter::Tab),
            "comma" => Ok(Delimiter::Comma),
            "whitespace" | "space" => Ok(Delimiter::Whitespace),
            _ => Err(format!("unknown delimiter '{s}'")),
        }
    }
}

impl Delimiter {
    fn detect(line: &str) -> Self {
        if line.contains('\t') {
            Delimiter::Tab
        } else if line.contains(',') {
            Delimiter::Comma
        } else {
            Delimiter::Whitespace
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Delimiter::Tab => line.split('\t').map(str::trim).collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace | Delimiter::Auto => line.split_whitespace().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub label: i64,
    pub series: TimeSeries,
}

fn parse_label(field: &str, line: usize) -> Result<i64> {
    if let Ok(v) = field.parse::<i64>() {
        return Ok(v);
    }
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15 => Ok(v as i64),
        _ => Err(Error::Parse {
            line,
            column: 1,
            message: format!("class label '{field}' is not an integer"),
        }),
    }
}

/// Parse UCR-format text. `line` and `column` in errors are 1-based; the
/// label is column 1.
pub fn parse_ucr(text: &str, delimiter: Delimiter) -> Result<Vec<LabeledSeries>> {
    let mut delimiter = delimiter;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if delimiter == Delimiter::Auto {
            delimiter = Delimiter::detect(line);
        }
        let fields = delimiter.split(line);
        let label = parse_label(fields[0], line_no)?;
        if fields.len() < 2 {
            return Err(Error::Parse {
                line: line_no,
                column: 2,
                message: "record has a label but no values".into(),
            });
        }
        let values = fields[1..]
            .iter()
            .enumerate()
            .map(|(i, f)| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(v) => Err(Error::Parse {
                    line: line_no,
                    column: i + 2,
                    message: format!("non-finite value {v}"),
                }),
                Err(e) => Err(Error::Parse {
                    line: line_no,
                    column: i + 2,
                    message: format!("'{f}': {e}"),
                }),
            })
            .collect::<Result<Vec<f64>>>()?;
        records.push(LabeledSeries {
            label,
            series: TimeSeries::new(values)?,
        });
    }
    Ok(records)
}

pub fn load_ucr(path: impl AsRef<Path>, delimiter: Delimiter) -> Result<Vec<LabeledSeries>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let records = parse_ucr(&text, delimiter).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })?;
    if records.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    Ok(records)
}

/// A named train/test split.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub train: Vec<LabeledSeries>,
    pub test: Vec<LabeledSeries>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, train: Vec<LabeledSeries>, test: Vec<LabeledSeries>) -> Result<Self> {
        let name = name.into();
        if train.is_empty() {
            return Err(Error::DegenerateSample(format!(
                "dataset {name} has an empty train split"
            )));
        }
        Ok(Self { name, train, test })
    }

    /// Build from unlabeled series (label 0).
    pub fn from_series(name: impl Into<String>, train: Vec<TimeSeries>, test: Vec<TimeSeries>) -> Result<Self> {
        let wrap = |v: Vec<TimeSeries>| v.into_iter().map(|series| LabeledSeries { label: 0, series }).collect();
        Self::new(name, wrap(train), wrap(test))
    }

    pub fn train_series(&self) -> impl Iterator<Item = &TimeSeries> {
        self.train.iter().map(|r| &r.series)
    }

    pub fn test_series(&self) -> impl Iterator<Item = &TimeSeries> {
        self.test.iter().map(|r| &r.series)
    }

    /// Load `<dir>/<Name>_TRAIN[.tsv|.txt]` and the matching `_TEST` file;
    /// the dataset is named after the directory.
    pub fn load_dir(dir: impl AsRef<Path>, delimiter: Delimiter) -> Result<Self> {
        let dir = dir.as_ref();
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| dir.display().to_string());
        let train_path = find_split(dir, &name, "TRAIN")?;
        let test_path = find_split(dir, &name, "TEST")?;
        Self::new(name, load_ucr(train_path, delimiter)?, load_ucr(test_path, delimiter)?)
    }

    pub fn average_length(&self) -> f64 {
        let all: Vec<usize> = self.train.iter().chain(&self.test).map(|r| r.series.len()).collect();
        all.iter().sum::<usize>() as f64 / all.len().max(1) as f64
    }
}

fn find_split(dir: &Path, name: &str, split: &str) -> Result<PathBuf> {
    for ext in [".tsv", ".txt", "", ".csv"] {
        let candidate = dir.join(format!("{name}_{split}{ext}"));
        if candidate.is_file() {
            return Ok(candidate);
        }
    }
    Err(Error::io(
        dir.join(format!("{name}_{split}.tsv")),
        std::io::Error::new(std::io::ErrorKind::NotFound, format!("no {split} split found")),
    ))
}

/// Dataset directories under `root`: every subdirectory holding a
/// `<Name>_TRAIN*` file, or `root` itself if it holds one. Sorted by name.
pub fn discover_datasets(root: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let root = root.as_ref();
    let has_train = |dir: &Path| {
        dir.file_name()
            .map(|n| find_split(dir, &n.to_string_lossy(), "TRAIN").is_ok())
            .unwrap_or(false)
    };
    if has_train(root) {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && has_train(p))
        .collect();
    dirs.sort();
    Ok(dirs)
}

/// Expected shape of a benchmark dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifestEntry {
    pub name: &'static str,
    pub train: usize,
    pub test: usize,
    pub avg_length: usize,
    pub classes: usize,
}

const fn entry(name: &'static str, train: usize, test: usize, avg_length: usize, classes: usize) -> ManifestEntry {
    ManifestEntry {
        name,
        train,
        test,
        avg_length,
        classes,
    }
}

/// The twenty evaluation datasets and their published sizes.
pub const MANIFEST: [ManifestEntry; 20] = [
    entry("Adiac", 390, 391, 176, 37),
    entry("Beef", 30, 30, 470, 5),
    entry("BeetleFly", 20, 20, 512, 2),
    entry("CBF", 30, 900, 128, 3),
    entry("Coffee", 28, 28, 286, 2),
    entry("FaceAll", 560, 1690, 131, 14),
    entry("FaceFour", 24, 88, 350, 4),
    entry("Fish", 175, 175, 463, 7),
    entry("GunPoint", 50, 150, 150, 2),
    entry("Lightning2", 60, 61, 637, 2),
    entry("Lightning7", 70, 73, 319, 7),
    entry("OSULeaf", 200, 242, 427, 6),
    entry("OliveOil", 30, 30, 570, 4),
    entry("SwedishLeaf", 500, 625, 128, 15),
    entry("SyntheticControl", 300, 300, 60, 6),
    entry("Trace", 100, 100, 275, 4),
    entry("TwoPatterns", 1000, 4000, 128, 4),
    entry("Wafer", 1000, 6164, 152, 2),
    entry("Worms", 181, 77, 900, 5),
    entry("Yoga", 300, 3000, 326, 2),
];

pub fn manifest_entry(name: &str) -> Option<&'static ManifestEntry> {
    let key = name.replace([' ', '.', '_'], "").to_ascii_lowercase();
    MANIFEST.iter().find(|e| {
        let n = e.name.to_ascii_lowercase();
        n == key || (key == "syncontrol" && e.name == "SyntheticControl")
    })
}

/// Mismatches between a loaded dataset and the manifest, as human-readable
/// warnings. Unknown datasets yield no warnings.
pub fn validate_against_manifest(dataset: &Dataset) -> Vec<String> {
    let Some(expected) = manifest_entry(&dataset.name) else {
        return Vec::new();
    };
    let mut warnings = Vec::new();
    if dataset.train.len() != expected.train {
        warnings.push(format!(
            "{}: {} train series, manifest lists {}",
            dataset.name,
            dataset.train.len(),
            expected.train
        ));
    }
    if dataset.test.len() != expected.test {
        warnings.push(format!(
            "{}: {} test series, manifest lists {}",
            dataset.name,
            dataset.test.len(),
            expected.test
        ));
    }
    let avg = dataset.average_length();
    if (avg - expected.avg_length as f64).abs() > 1.0 {
        warnings.push(format!(
            "{}: average length {avg:.1}, manifest lists {}",
            dataset.name, expected.avg_length
        ));
    }
    let mut labels: Vec<i64> = dataset.train.iter().chain(&dataset.test).map(|r| r.label).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() != expected.classes {
        warnings.push(format!(
            "{}: {} classes, manifest lists {}",
            dataset.name,
            labels.len(),
            expected.classes
        ));
    }
    warnings
}

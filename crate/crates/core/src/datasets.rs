//! CSV ingestion, the vendored iris data, and the banana-shaped generator.
//!
//! CSV files hold one sample per row; the optional label is the last column.
//! A first row containing any non-numeric cell is taken as a header.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

const IRIS_CSV: &str = include_str!("../data/iris.csv");

/// SHA-256 of the vendored `data/iris.csv`.
pub const IRIS_SHA256: &str = "81269defbe7c559bfe8c9c79a46698e32ef1dd3dbdf9d9c91a42a039bf85df2d";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub name: String,
    pub x: DataMatrix,
    pub labels: Option<Vec<i64>>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, x: DataMatrix, labels: Option<Vec<i64>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != x.n() {
                return Err(Error::DimensionMismatch {
                    expected: x.n(),
                    found: l.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            x,
            labels,
        })
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }
}

/// Raw text of the vendored iris table.
pub fn iris_csv() -> &'static str {
    IRIS_CSV
}

/// Fisher's iris data: 150 samples, 4 features, labels 0, 1, 2.
pub fn iris() -> Dataset {
    read_csv(IRIS_CSV.as_bytes(), Path::new("iris.csv"), "iris", true, b',')
        .expect("vendored iris table parses")
}

pub fn load_csv(path: &Path, has_labels: bool, delimiter: u8) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    read_csv(file, path, &name, has_labels, delimiter)
}

fn parse_label(cell: &str) -> Option<i64> {
    cell.parse::<i64>().ok().or_else(|| {
        let v = cell.parse::<f64>().ok()?;
        (v.fract() == 0.0 && v.abs() < 9.0e15).then_some(v as i64)
    })
}

/// Parses a CSV table from `reader`; `path` is only used in error messages.
pub fn read_csv<R: Read>(reader: R, path: &Path, name: &str, has_labels: bool, delimiter: u8) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let at = |p: &Path| p.to_path_buf();
    let mut samples: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<i64> = Vec::new();
    let mut width: Option<usize> = None;
    let mut first = true;
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(samples.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if first {
            first = false;
            let looks_like_header = record
                .iter()
                .enumerate()
                .any(|(c, cell)| {
                    if has_labels && c + 1 == record.len() {
                        parse_label(cell).is_none()
                    } else {
                        cell.parse::<f64>().is_err()
                    }
                });
            if looks_like_header {
                width = Some(record.len());
                continue;
            }
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                path: at(path),
                row,
                expected,
                found: record.len(),
            });
        }
        let features = if has_labels { expected.saturating_sub(1) } else { expected };
        if features == 0 {
            return Err(Error::InvalidParameter(format!(
                "{}: no feature columns",
                path.display()
            )));
        }
        let mut s = Vec::with_capacity(features);
        for (c, cell) in record.iter().take(features).enumerate() {
            let v = cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::NonNumeric {
                path: at(path),
                row,
                col: c + 1,
                cell: cell.to_string(),
            })?;
            s.push(v);
        }
        if has_labels {
            let cell = &record[features];
            labels.push(parse_label(cell).ok_or_else(|| Error::NonNumeric {
                path: at(path),
                row,
                col: features + 1,
                cell: cell.to_string(),
            })?);
        }
        samples.push(s);
    }
    if samples.is_empty() {
        return Err(Error::EmptyFile { path: PathBuf::from(path) });
    }
    Dataset::new(name, DataMatrix::from_samples(&samples)?, has_labels.then_some(labels))
}

/// Writes a header (`x1..xd[,label]`) and one row per sample. Values use
/// Rust's shortest round-trip formatting, so reading the file back gives
/// the same bits.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=dataset.x.dim()).map(|i| format!("x{i}")).collect();
    if dataset.labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (j, s) in dataset.x.samples().enumerate() {
        let mut row: Vec<String> = s.iter().map(|v| format!("{v}")).collect();
        if let Some(l) = &dataset.labels {
            row.push(l[j].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: PathBuf::from("<csv writer>"),
        source,
    })?;
    Ok(())
}

/// The SplitMix64 generator (Steele, Lea and Flood), used because it is a
/// few lines in any language.
///
/// Each call adds `0x9E3779B97F4A7C15` to the state and returns
/// `mix(state)` with
/// `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9`,
/// `z = (z ^ (z >> 27)) * 0x94D049BB133111EB`,
/// `z ^ (z >> 31)` (wrapping arithmetic). Uniform doubles in `[0, 1)` are
/// `(next >> 11) · 2⁻⁵³`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Banana-shaped data: `(ζ, ζ² + σ·z)` with `ζ` uniform on `[−1, 1]` and
/// `z` standard normal.
///
/// Per point, three uniforms `u₀, u₁, u₂` are drawn from [`SplitMix64`] in
/// that order: `ζ = 2u₀ − 1`, and `z = √(−2 ln(1 − u₁)) · cos(2π u₂)`
/// (Box–Muller, cosine branch only). The draws happen even when
/// `noise_std = 0`.
pub fn banana(n: usize, noise_std: f64, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidParameter("banana needs at least one point".into()));
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise standard deviation must be finite and non-negative, got {noise_std}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let zeta = 2.0 * rng.next_f64() - 1.0;
            let u1 = 1.0 - rng.next_f64();
            let u2 = rng.next_f64();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            vec![zeta, zeta * zeta + noise_std * z]
        })
        .collect();
    Dataset::new("banana", DataMatrix::from_samples(&samples)?, None)
}

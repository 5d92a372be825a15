//! Feature rows consumed by the loss kernels and the evaluator, plus the
//! CSV format `identity,camera,path,f0..f{d-1}[,p0..p{C-1}]`.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub identity: i64,
    pub camera: i64,
    pub path: String,
    pub feature: Vec<f64>,
    /// Class probabilities for the ID loss, when available.
    pub probs: Option<Vec<f64>>,
}

impl FeatureRecord {
    pub fn new(identity: i64, feature: Vec<f64>) -> Self {
        Self {
            identity,
            camera: 0,
            path: String::new(),
            feature,
            probs: None,
        }
    }

    pub fn with_camera(mut self, camera: i64) -> Self {
        self.camera = camera;
        self
    }

    pub fn with_probs(mut self, probs: Vec<f64>) -> Self {
        self.probs = Some(probs);
        self
    }
}

pub const PROB_SUM_TOLERANCE: f64 = 1e-6;

/// Checks nonnegativity and unit sum within [`PROB_SUM_TOLERANCE`].
pub fn check_probs(probs: &[f64]) -> std::result::Result<(), String> {
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(format!("probability {p} is not a finite nonnegative number"));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
        return Err(format!("probabilities sum to {sum}"));
    }
    Ok(())
}

struct Layout {
    dims: usize,
    classes: usize,
}

fn parse_header(header: &csv::StringRecord) -> Result<Layout> {
    let bad = |message: String| Error::Parse { line: 1, message };
    let cols: Vec<&str> = header.iter().map(str::trim).collect();
    if cols.len() < 4 || cols[..3] != ["identity", "camera", "path"] {
        return Err(bad("header must start with identity,camera,path,f0".into()));
    }
    let rest = &cols[3..];
    let dims = rest.iter().take_while(|c| c.starts_with('f')).count();
    if dims == 0 {
        return Err(bad("no feature columns".into()));
    }
    for (i, c) in rest[..dims].iter().enumerate() {
        if *c != format!("f{i}") {
            return Err(bad(format!("expected column f{i}, found {c}")));
        }
    }
    for (i, c) in rest[dims..].iter().enumerate() {
        if *c != format!("p{i}") {
            return Err(bad(format!("expected column p{i}, found {c}")));
        }
    }
    Ok(Layout {
        dims,
        classes: rest.len() - dims,
    })
}

pub fn read_features<R: Read>(reader: R) -> Result<Vec<FeatureRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    let layout = parse_header(&header)?;

    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| csv_error(e, line))?;
        let bad = |message: String| Error::Parse { line, message };
        let int = |j: usize| -> Result<i64> {
            row[j]
                .trim()
                .parse()
                .map_err(|_| bad(format!("column {}: {:?} is not an integer", header[j].trim(), &row[j])))
        };
        let reals = |from: usize, n: usize| -> Result<Vec<f64>> {
            (from..from + n)
                .map(|j| {
                    let v: f64 = row[j]
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("column {}: {:?} is not a number", header[j].trim(), &row[j])))?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(bad(format!("column {}: non-finite value", header[j].trim())))
                    }
                })
                .collect()
        };
        let identity = int(0)?;
        let camera = int(1)?;
        let feature = reals(3, layout.dims)?;
        let probs = if layout.classes > 0 {
            let p = reals(3 + layout.dims, layout.classes)?;
            check_probs(&p).map_err(bad)?;
            Some(p)
        } else {
            None
        };
        out.push(FeatureRecord {
            identity,
            camera,
            path: row[2].to_string(),
            feature,
            probs,
        });
    }
    Ok(out)
}

fn csv_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback_line);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<features>", io),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Parse {
            line,
            message: format!("ragged row: expected {expected_len} fields, found {len}"),
        },
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

pub fn load_features(path: impl AsRef<Path>) -> Result<Vec<FeatureRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_features(file)
}

/// Writes rows with the shared header. All rows must agree on feature
/// dimension and on whether probabilities are present.
pub fn write_features<W: Write>(records: &[FeatureRecord], writer: W) -> Result<()> {
    let dims = records.first().map_or(0, |r| r.feature.len());
    let classes = records.first().and_then(|r| r.probs.as_ref()).map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::io("<features>", e.into());
    let mut header = vec!["identity".to_string(), "camera".into(), "path".into()];
    header.extend((0..dims).map(|i| format!("f{i}")));
    header.extend((0..classes).map(|i| format!("p{i}")));
    w.write_record(&header).map_err(io)?;
    for r in records {
        if r.feature.len() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: r.feature.len(),
            });
        }
        let probs = r.probs.as_deref().unwrap_or(&[]);
        if probs.len() != classes {
            return Err(Error::DimensionMismatch {
                expected: classes,
                actual: probs.len(),
            });
        }
        let mut row = vec![r.identity.to_string(), r.camera.to_string(), r.path.clone()];
        row.extend(r.feature.iter().chain(probs).map(|v| format!("{v:?}")));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io("<features>", e))
}

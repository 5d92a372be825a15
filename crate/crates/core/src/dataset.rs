//! Labeled corpus manifests: Market1501-style directory scanning and a
//! JSON-Lines on-disk format (`{"path":..,"identity":..,"camera":..}`).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One labeled image. Identities below 1 (Market1501 uses `-1` for junk and
/// `0000` for distractors) are kept but flagged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub path: String,
    pub identity: i64,
    pub camera: i64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub distractor: bool,
    /// Position in the manifest; not serialized.
    #[serde(skip)]
    pub index: usize,
}

impl SampleRecord {
    pub fn new(path: impl Into<String>, identity: i64, camera: i64) -> Self {
        Self {
            path: path.into(),
            identity,
            camera,
            distractor: is_distractor(identity),
            index: 0,
        }
    }
}

pub fn is_distractor(identity: i64) -> bool {
    identity < 1
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Manifest {
    records: Vec<SampleRecord>,
    identities: usize,
}

impl Manifest {
    /// Validates and re-indexes `records` in their given order.
    pub fn new(mut records: Vec<SampleRecord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for (i, r) in records.iter_mut().enumerate() {
            if r.camera < 0 {
                return Err(Error::InvalidConfig(format!(
                    "{}: negative camera id {}",
                    r.path, r.camera
                )));
            }
            if !seen.insert(r.path.clone()) {
                return Err(Error::DuplicatePath(r.path.clone()));
            }
            r.index = i;
            r.distractor = is_distractor(r.identity);
        }
        let identities = records
            .iter()
            .map(|r| r.identity)
            .collect::<BTreeSet<_>>()
            .len();
        Ok(Self {
            records,
            identities,
        })
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of distinct identity labels, distractors included.
    pub fn identities(&self) -> usize {
        self.identities
    }

    /// Record indices grouped by identity, distractors excluded, ordered by label.
    pub fn identity_groups(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for r in self.records.iter().filter(|r| !r.distractor) {
            groups.entry(r.identity).or_default().push(r.index);
        }
        groups
    }

    pub fn write_jsonl<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = BufWriter::new(writer);
        let io = |e| Error::io("<manifest>", e);
        for r in &self.records {
            serde_json::to_writer(&mut w, r).map_err(|e| Error::io("<manifest>", e.into()))?;
            w.write_all(b"\n").map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn read_jsonl<R: Read>(reader: R) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::io("<manifest>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: SampleRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            if rec.camera < 0 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("negative camera id {}", rec.camera),
                });
            }
            records.push(rec);
        }
        Self::new(records)
    }
}

pub fn save_manifest(manifest: &Manifest, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    manifest.write_jsonl(file).map_err(|e| relabel(e, path))
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Manifest::read_jsonl(file).map_err(|e| relabel(e, path))
}

fn relabel(err: Error, path: &Path) -> Error {
    match err {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    }
}

/// Result of scanning a directory: the manifest plus files whose names did
/// not follow the `<pid>_c<cam>...` convention.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub manifest: Manifest,
    pub skipped: Vec<PathBuf>,
}

fn market_name() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(-?\d+)_c(\d+)").unwrap())
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

/// Parses `(identity, camera)` out of a Market1501 file name such as
/// `0002_c1s1_000451_03.jpg`.
pub fn parse_market_name(name: &str) -> Option<(i64, i64)> {
    let caps = market_name().captures(name)?;
    Some((caps[1].parse().ok()?, caps[2].parse().ok()?))
}

/// Scans one directory level for Market1501-named PNG/JPEG files.
pub fn scan_market_layout(dir: impl AsRef<Path>) -> Result<ScanReport> {
    let dir = dir.as_ref();
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for path in paths {
        let parsed = is_image(&path)
            .then(|| path.file_name().and_then(|n| n.to_str()))
            .flatten()
            .and_then(parse_market_name);
        match (parsed, path.to_str()) {
            (Some((identity, camera)), Some(p)) => records.push(SampleRecord::new(p, identity, camera)),
            _ => skipped.push(path),
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    Ok(ScanReport {
        manifest: Manifest::new(records)?,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn touch(dir: &Path, name: &str) {
        std::fs::write(dir.join(name), b"").unwrap();
    }

    #[test]
    fn parses_market_names() {
        assert_eq!(parse_market_name("0002_c1s1_000451_03.jpg"), Some((2, 1)));
        assert_eq!(parse_market_name("-1_c3s2_012345_00.jpg"), Some((-1, 3)));
        assert_eq!(parse_market_name("0000_c6s1_000001_01.jpg"), Some((0, 6)));
        assert_eq!(parse_market_name("Thumbs.db"), None);
        assert_eq!(parse_market_name("12_x1.jpg"), None);
    }

    #[test]
    fn scan_sorts_and_reports_junk() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "0007_c2s1_000001_01.jpg");
        touch(dir.path(), "0002_c1s1_000451_03.jpg");
        touch(dir.path(), "notes.txt");
        touch(dir.path(), "nonsense.png");
        let report = scan_market_layout(dir.path()).unwrap();
        let recs = report.manifest.records();
        assert_eq!(recs.len(), 2);
        assert_eq!((recs[0].identity, recs[0].camera), (2, 1));
        assert_eq!((recs[1].identity, recs[1].camera), (7, 2));
        assert_eq!(recs[1].index, 1);
        assert_eq!(report.skipped.len(), 2);
    }

    #[test]
    fn empty_dir_is_empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(scan_market_layout(dir.path()), Err(Error::EmptyCorpus(_))));
    }

    #[test]
    fn missing_dir_is_io_error() {
        assert!(matches!(scan_market_layout("/no/such/dir"), Err(Error::Io { .. })));
    }

    #[test]
    fn identities_counts_distinct_labels() {
        let dir = tempfile::tempdir().unwrap();
        touch(dir.path(), "0007_c1s1_000001_01.jpg");
        touch(dir.path(), "0007_c2s1_000002_01.jpg");
        assert_eq!(scan_market_layout(dir.path()).unwrap().manifest.identities(), 1);
    }

    #[test]
    fn distractors_flagged_and_excluded_from_groups() {
        let m = Manifest::new(vec![
            SampleRecord::new("a", -1, 1),
            SampleRecord::new("b", 0, 1),
            SampleRecord::new("c", 3, 1),
        ])
        .unwrap();
        assert!(m.records()[0].distractor && m.records()[1].distractor);
        assert_eq!(m.identity_groups().keys().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(m.identities(), 3);
    }

    #[test]
    fn duplicate_paths_rejected() {
        let err = Manifest::new(vec![SampleRecord::new("a", 1, 1), SampleRecord::new("a", 2, 1)]);
        assert!(matches!(err, Err(Error::DuplicatePath(_))));
    }

    #[test]
    fn jsonl_round_trip() {
        let m = Manifest::new(vec![
            SampleRecord::new("x/1.jpg", 1, 0),
            SampleRecord::new("x/2.jpg", -1, 2),
            SampleRecord::new("x/3.jpg", 5, 4),
        ])
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.jsonl");
        save_manifest(&m, &path).unwrap();
        assert_eq!(load_manifest(&path).unwrap(), m);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"path":"x/1.jpg","identity":1,"camera":0}"#
        );
    }

    #[test]
    fn large_manifest_resaves_byte_identical() {
        let records = (0..10_000)
            .map(|i| SampleRecord::new(format!("img/{i:05}.png"), (i % 750) as i64 - 1, (i % 6) as i64))
            .collect();
        let m = Manifest::new(records).unwrap();
        let mut first = Vec::new();
        m.write_jsonl(&mut first).unwrap();
        let reloaded = Manifest::read_jsonl(first.as_slice()).unwrap();
        let mut second = Vec::new();
        reloaded.write_jsonl(&mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn bad_line_reports_its_number() {
        let text = "{\"path\":\"a\",\"identity\":1,\"camera\":1}\n{\"path\":\"b\",\"identity\":\"x\",\"camera\":1}\n";
        match Manifest::read_jsonl(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}

//! Majority-vote ensemble error analysis.
//!
//! `N` component classifiers vote `+1`/`-1` on `m` instances with known
//! expected outputs. An ensemble answers `sgn(sum of votes)`; a tie scores
//! half an error. Replacing component `k` with a color-dropout trained
//! component `g` changes the per-instance sum to `Sum_j - f_kj + g_kj`, and
//! the new ensemble is no worse exactly when
//!
//! ```text
//! sum_j [ Error(sgn(Sum_j) d_j) - Error(sgn(Sum_j - f_kj + g_kj) d_j) ] >= 0
//! ```
//!
//! That sum equals `m * (E - E')`, so the condition and the direct error
//! comparison always agree; [`sweep`] measures how often it holds under an
//! i.i.d. error model.

use std::io::{BufRead, BufReader, Read, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::imgcore::RngStream;

/// `N x m` matrix of `+-1` votes plus the expected output per instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteMatrix {
    votes: Vec<Vec<i8>>,
    expected: Vec<i8>,
}

fn check_votes(values: &[i8]) -> Result<()> {
    match values.iter().find(|&&v| v != 1 && v != -1) {
        Some(&v) => Err(Error::BadVoteValue(v as i64)),
        None => Ok(()),
    }
}

impl VoteMatrix {
    pub fn new(votes: Vec<Vec<i8>>, expected: Vec<i8>) -> Result<Self> {
        check_votes(&expected)?;
        for row in &votes {
            if row.len() != expected.len() {
                return Err(Error::DimensionMismatch {
                    expected: expected.len(),
                    actual: row.len(),
                });
            }
            check_votes(row)?;
        }
        Ok(Self { votes, expected })
    }

    /// Component count N.
    pub fn components(&self) -> usize {
        self.votes.len()
    }

    /// Instance count m.
    pub fn instances(&self) -> usize {
        self.expected.len()
    }

    pub fn votes(&self) -> &[Vec<i8>] {
        &self.votes
    }

    pub fn expected(&self) -> &[i8] {
        &self.expected
    }

    /// Per-instance vote sums.
    pub fn sums(&self) -> Vec<i64> {
        (0..self.instances())
            .map(|j| self.votes.iter().map(|row| row[j] as i64).sum())
            .collect()
    }

    fn row(&self, k: usize) -> Result<&[i8]> {
        self.votes.get(k).map(Vec::as_slice).ok_or(Error::IndexOutOfRange {
            index: k,
            len: self.votes.len(),
        })
    }

    /// Text form: expected outputs on the first line, then one line per
    /// component, all space-separated.
    pub fn read_from<R: Read>(reader: R) -> Result<Self> {
        let mut lines = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::io("<votes>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let values = line
                .split_whitespace()
                .map(|t| match t.parse::<i64>() {
                    Ok(v @ (-1 | 1)) => Ok(v as i8),
                    Ok(v) => Err(Error::BadVoteValue(v)),
                    Err(_) => Err(Error::Parse {
                        line: i + 1,
                        message: format!("{t:?} is not an integer"),
                    }),
                })
                .collect::<Result<Vec<i8>>>()?;
            lines.push(values);
        }
        let mut it = lines.into_iter();
        let expected = it.next().ok_or(Error::Parse {
            line: 1,
            message: "missing expected-output line".into(),
        })?;
        Self::new(it.collect(), expected)
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> Result<()> {
        let line = |v: &[i8]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let io = |e| Error::io("<votes>", e);
        writeln!(writer, "{}", line(&self.expected)).map_err(io)?;
        for row in &self.votes {
            writeln!(writer, "{}", line(row)).map_err(io)?;
        }
        Ok(())
    }
}

/// 1 for a wrong answer (-1), 0.5 for a tie (0), 0 for a correct one (1).
pub fn error_fn(x: i64) -> Result<f64> {
    match x {
        -1 => Ok(1.0),
        0 => Ok(0.5),
        1 => Ok(0.0),
        other => Err(Error::Domain(other)),
    }
}

pub fn sgn(x: i64) -> i64 {
    x.signum()
}

#[inline]
fn err(x: i64) -> f64 {
    error_fn(x).expect("argument is a product of signs")
}

/// Fraction of instances component `i` gets wrong.
pub fn component_error(f: &VoteMatrix, i: usize) -> Result<f64> {
    let row = f.row(i)?;
    let total: f64 = row
        .iter()
        .zip(&f.expected)
        .map(|(&v, &d)| err(v as i64 * d as i64))
        .sum();
    Ok(total / f.instances() as f64)
}

fn majority_error(sums: &[i64], expected: &[i8]) -> f64 {
    let total: f64 = sums
        .iter()
        .zip(expected)
        .map(|(&s, &d)| err(sgn(s) * d as i64))
        .sum();
    total / expected.len() as f64
}

/// Error of the majority vote, ties counted as half an error.
pub fn ensemble_error(f: &VoteMatrix) -> f64 {
    majority_error(&f.sums(), &f.expected)
}

fn check_replacement(f: &VoteMatrix, k: usize, replacement: &[i8]) -> Result<()> {
    f.row(k)?;
    if replacement.len() != f.instances() {
        return Err(Error::DimensionMismatch {
            expected: f.instances(),
            actual: replacement.len(),
        });
    }
    check_votes(replacement)
}

/// Replaces component `k` with the votes `replacement`.
pub fn swap_component(f: &VoteMatrix, k: usize, replacement: &[i8]) -> Result<VoteMatrix> {
    check_replacement(f, k, replacement)?;
    let mut out = f.clone();
    out.votes[k] = replacement.to_vec();
    Ok(out)
}

/// Returns the per-instance error-difference sum for replacing component
/// `k` with `replacement`, and whether it is nonnegative.
pub fn check_condition(f: &VoteMatrix, k: usize, replacement: &[i8]) -> Result<(f64, bool)> {
    check_replacement(f, k, replacement)?;
    let old = &f.votes[k];
    let sum: f64 = f
        .sums()
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let d = f.expected[j] as i64;
            let swapped = s - old[j] as i64 + replacement[j] as i64;
            err(sgn(s) * d) - err(sgn(swapped) * d)
        })
        .sum();
    Ok((sum, sum >= 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub component_errors: Vec<f64>,
    pub sum_votes: Vec<i64>,
    pub ensemble_error: f64,
    pub swapped_error: f64,
    pub condition_lhs: f64,
    pub condition_holds: bool,
    pub improvement: f64,
}

pub fn analyze(f: &VoteMatrix, k: usize, replacement: &[i8]) -> Result<EnsembleReport> {
    let swapped = swap_component(f, k, replacement)?;
    let (condition_lhs, condition_holds) = check_condition(f, k, replacement)?;
    let ensemble_error = ensemble_error(f);
    let swapped_error = self::ensemble_error(&swapped);
    Ok(EnsembleReport {
        component_errors: (0..f.components())
            .map(|i| component_error(f, i))
            .collect::<Result<_>>()?,
        sum_votes: f.sums(),
        ensemble_error,
        swapped_error,
        condition_lhs,
        condition_holds,
        improvement: ensemble_error - swapped_error,
    })
}

/// Monte-Carlo grid over component counts and error rates.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub components: Vec<usize>,
    pub instances: usize,
    /// Error rates for the original components.
    pub base_rates: Vec<f64>,
    /// Error rates for the replacement component.
    pub deviated_rates: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub components: usize,
    pub err_base: f64,
    pub err_dev: f64,
    pub trials: usize,
    pub frac_holds: f64,
    pub mean_improvement: f64,
    /// Sample standard deviation of the per-trial improvement.
    pub sd_improvement: f64,
}

pub const SWEEP_CSV_HEADER: &str = "N,err_base,err_dev,frac_holds,mean_improvement";

fn noisy_votes(rng: &mut RngStream, expected: &[i8], error_rate: f64) -> Vec<i8> {
    expected
        .iter()
        .map(|&d| if rng.unit() < error_rate { -d } else { d })
        .collect()
}

/// For each grid cell, draws `trials` random ensembles where every vote is
/// independently wrong with the cell's error rate, replaces component 0
/// with a component of the deviated error rate, and records how often the
/// replacement is no worse. Each cell has its own stream, so the table does
/// not depend on thread scheduling.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    for &r in cfg.base_rates.iter().chain(&cfg.deviated_rates) {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidConfig(format!("error rate {r} outside [0, 1]")));
        }
    }
    if cfg.instances == 0 || cfg.components.contains(&0) {
        return Err(Error::InvalidConfig("need N >= 1 and m >= 1".into()));
    }
    if cfg.trials == 0 {
        return Ok(Vec::new());
    }

    let mut cells = Vec::new();
    for &n in &cfg.components {
        for &eb in &cfg.base_rates {
            for &ed in &cfg.deviated_rates {
                cells.push((n, eb, ed));
            }
        }
    }
    let rows = cells
        .par_iter()
        .enumerate()
        .map(|(cell, &(n, eb, ed))| {
            let mut rng = RngStream::with_stream(cfg.seed, cell as u64);
            let mut holds = 0usize;
            let mut improvements = Vec::with_capacity(cfg.trials);
            for _ in 0..cfg.trials {
                let expected: Vec<i8> = (0..cfg.instances)
                    .map(|_| if rng.below(2) == 0 { -1 } else { 1 })
                    .collect();
                let votes = (0..n).map(|_| noisy_votes(&mut rng, &expected, eb)).collect();
                let g = noisy_votes(&mut rng, &expected, ed);
                let f = VoteMatrix { votes, expected };
                let (lhs, ok) = check_condition(&f, 0, &g).expect("shapes match by construction");
                holds += ok as usize;
                improvements.push(lhs / cfg.instances as f64);
            }
            let t = cfg.trials as f64;
            let mean = improvements.iter().sum::<f64>() / t;
            let var = if cfg.trials > 1 {
                improvements.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
            } else {
                0.0
            };
            SweepRow {
                components: n,
                err_base: eb,
                err_dev: ed,
                trials: cfg.trials,
                frac_holds: holds as f64 / t,
                mean_improvement: mean,
                sd_improvement: var.sqrt(),
            }
        })
        .collect();
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut writer: W) -> Result<()> {
    let io = |e| Error::io("<sweep>", e);
    writeln!(writer, "{SWEEP_CSV_HEADER}").map_err(io)?;
    for r in rows {
        writeln!(
            writer,
            "{},{},{},{},{}",
            r.components, r.err_base, r.err_dev, r.frac_holds, r.mean_improvement
        )
        .map_err(io)?;
    }
    Ok(())
}

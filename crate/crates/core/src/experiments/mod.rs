//! Sweeps over family sizes with exact edge counts next to the bound
//! functions, and audits of the bad/good split of a witness.

mod audit;

use std::io::{Read, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{BoundReport, BoundsError, RegularityTuple};
use crate::families::{splitmix64, FamilyError, FamilySpec};

pub use audit::{audit_decomposition, ClassBreakdown, DecompositionAudit};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("size grid is empty")]
    EmptyGrid,
    #[error("size grid must be strictly increasing")]
    GridOrder,
    #[error("epsilon = {0} must be positive")]
    Epsilon(f64),
    #[error("u must be at least 1")]
    ZeroU,
    #[error("tuple has {tuple} exponents, family {family} has arity {arity}")]
    Arity { family: String, tuple: usize, arity: usize },
    #[error("grid point {index} (size {size}, {family}): {source}")]
    Generation {
        index: usize,
        size: u64,
        family: String,
        source: FamilyError,
    },
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed csv row: {0}")]
    CsvRow(String),
}

impl SweepError {
    /// Whether the failure lies in the configuration rather than in generation or I/O.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            SweepError::EmptyGrid
                | SweepError::GridOrder
                | SweepError::Epsilon(_)
                | SweepError::ZeroU
                | SweepError::Arity { .. }
                | SweepError::Bounds(_)
                | SweepError::Json(_)
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: FamilySpec,
    /// Values for the family's size parameter, see [`FamilySpec::resized`].
    pub sizes: Vec<u64>,
    pub u: usize,
    pub c: Vec<f64>,
    pub lambda: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Seeded families get `splitmix64(seed + index)` at grid point `index`.
    #[serde(default)]
    pub seed: u64,
}

impl SweepConfig {
    pub fn from_reader(r: impl Read) -> Result<Self, SweepError> {
        let config: SweepConfig = serde_json::from_reader(r)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.sizes.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SweepError::GridOrder);
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(SweepError::Epsilon(self.epsilon));
        }
        if self.u == 0 {
            return Err(SweepError::ZeroU);
        }
        if self.c.len() != self.family.arity() {
            return Err(SweepError::Arity {
                family: self.family.name().to_string(),
                tuple: self.c.len(),
                arity: self.family.arity(),
            });
        }
        RegularityTuple::new(self.c.clone(), self.lambda)?;
        // catches exponents below one before any instance is built
        crate::bounds::gammas(&self.c)?;
        Ok(())
    }

    /// The family at grid point `index`.
    pub fn point(&self, index: usize) -> FamilySpec {
        self.family
            .resized(self.sizes[index])
            .with_seed(splitmix64(self.seed.wrapping_add(index as u64)))
    }
}

/// One sweep row: the family point, its freeness, and the evaluated bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub params: String,
    pub free: bool,
    pub report: BoundReport,
}

impl SweepRow {
    pub fn edges(&self) -> u64 {
        self.report.exact_edges.unwrap_or(0)
    }

    /// Exact edges over `E_c(n)`.
    pub fn ratio(&self) -> f64 {
        self.edges() as f64 / self.report.e_value
    }

    pub fn record(&self) -> RowRecord {
        RowRecord {
            family: self.family.clone(),
            params: self.params.clone(),
            k: self.report.n.len(),
            u: self.report.u,
            n: self.report.n.clone(),
            edges: self.edges(),
            free: self.free,
            f_value: self.report.f_value,
            e_value: self.report.e_value,
            kst_exp: self.report.kst_exponent,
            erdos_exp: self.report.erdos_exponent,
            ratio: self.ratio(),
        }
    }
}

/// The flat row written to CSV and JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowRecord {
    pub family: String,
    pub params: String,
    pub k: usize,
    pub u: usize,
    pub n: Vec<u64>,
    pub edges: u64,
    pub free: bool,
    pub f_value: f64,
    pub e_value: f64,
    pub kst_exp: f64,
    pub erdos_exp: f64,
    pub ratio: f64,
}

/// Rows in grid order; grid points are evaluated in parallel.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    config.validate()?;
    (0..config.sizes.len())
        .into_par_iter()
        .map(|index| {
            let spec = config.point(index);
            let generation = |source| SweepError::Generation {
                index,
                size: config.sizes[index],
                family: spec.to_string(),
                source,
            };
            let instance = spec.instance().map_err(generation)?;
            let n: Vec<u64> = instance.sizes().iter().map(|&x| x as u64).collect();
            let edges = instance.edge_count() as u64;
            let free = !instance.contains_complete(config.u);
            let report = BoundReport::evaluate(&config.c, &n, config.epsilon, config.u, Some(edges))?;
            Ok(SweepRow {
                family: spec.name().to_string(),
                params: spec.params(),
                free,
                report,
            })
        })
        .collect()
}

fn header(k: usize) -> Vec<String> {
    let mut h: Vec<String> = ["family", "params", "k", "u"].iter().map(|s| s.to_string()).collect();
    h.extend((1..=k).map(|i| format!("n{i}")));
    h.extend(
        ["edges", "free", "f_value", "e_value", "kst_exp", "erdos_exp", "ratio"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

pub fn write_csv(rows: &[SweepRow], out: impl Write) -> Result<(), SweepError> {
    let mut w = csv::Writer::from_writer(out);
    let k = rows.first().map_or(0, |r| r.report.n.len());
    w.write_record(header(k))?;
    for row in rows {
        let r = row.record();
        let mut fields = vec![r.family, r.params, r.k.to_string(), r.u.to_string()];
        fields.extend(r.n.iter().map(u64::to_string));
        fields.extend([
            r.edges.to_string(),
            r.free.to_string(),
            r.f_value.to_string(),
            r.e_value.to_string(),
            r.kst_exp.to_string(),
            r.erdos_exp.to_string(),
            r.ratio.to_string(),
        ]);
        w.write_record(fields)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json(rows: &[SweepRow], mut out: impl Write) -> Result<(), SweepError> {
    let records: Vec<RowRecord> = rows.iter().map(SweepRow::record).collect();
    serde_json::to_writer_pretty(&mut out, &records)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows(rows: &[SweepRow], format: Format, out: impl Write) -> Result<(), SweepError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv(input: impl Read) -> Result<Vec<RowRecord>, SweepError> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for record in r.records() {
        let rec = record?;
        let bad = || SweepError::CsvRow(format!("{rec:?}"));
        let k: usize = rec.get(2).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if rec.len() != 4 + k + 7 {
            return Err(bad());
        }
        let int = |i: usize| rec[i].parse::<u64>().map_err(|_| bad());
        let float = |i: usize| rec[i].parse::<f64>().map_err(|_| bad());
        let n = (4..4 + k).map(int).collect::<Result<Vec<_>, _>>()?;
        let at = 4 + k;
        out.push(RowRecord {
            family: rec[0].to_string(),
            params: rec[1].to_string(),
            k,
            u: int(3)? as usize,
            n,
            edges: int(at)?,
            free: rec[at + 1].parse().map_err(|_| bad())?,
            f_value: float(at + 2)?,
            e_value: float(at + 3)?,
            kst_exp: float(at + 4)?,
            erdos_exp: float(at + 5)?,
            ratio: float(at + 6)?,
        });
    }
    Ok(out)
}

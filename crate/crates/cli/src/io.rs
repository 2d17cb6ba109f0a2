//! File formats: sample CSVs, trajectory CSV + metadata JSON, RDF CSV and
//! JSON reports.
//!
//! CSV dialect: comma separated, mandatory header row, `.` decimal point,
//! UTF-8. Floats are written in Rust's shortest round-trip form, so a file
//! read back reproduces the in-memory values exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use copent_core::{
    BoxSpec, PotentialSpec, RdfEstimate, SampleMatrix, SimParams, Trajectory, UnitsSpec,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Version of every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

pub const TRAJECTORY_HEADER: [&str; 4] = ["sample", "particle", "axis", "coordinate"];
pub const RDF_HEADER: [&str; 2] = ["bin_center", "g"];

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Reads a numeric CSV with a header row into a sample matrix. Errors name
/// the offending data row (1-based, header excluded) and column.
pub fn read_sample_csv(path: &Path) -> Result<SampleMatrix> {
    let bytes = read_bytes(path)?;
    parse_sample_csv(&bytes)
}

pub fn parse_sample_csv(bytes: &[u8]) -> Result<SampleMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Input(format!("cannot read CSV header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if names.is_empty() || names.iter().all(String::is_empty) {
        return Err(CliError::Input("CSV header row is empty".into()));
    }
    let d = names.len();
    let mut values = Vec::new();
    let mut n = 0;
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| CliError::Input(format!("row {row}: {e}")))?;
        if record.len() != d {
            return Err(CliError::Input(format!(
                "row {row} has {} fields, header has {d}",
                record.len()
            )));
        }
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                CliError::Input(format!(
                    "row {row}, column {} ('{}'): cannot parse '{field}' as a number",
                    c + 1,
                    names[c]
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Input(format!(
                    "row {row}, column {} ('{}'): non-finite value '{field}'",
                    c + 1,
                    names[c]
                )));
            }
            values.push(v);
        }
        n += 1;
    }
    let m = SampleMatrix::new(n, d, values)?;
    Ok(m.with_column_names(names)?)
}

pub fn sample_csv_bytes(samples: &SampleMatrix) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = match samples.column_names() {
        Some(names) => names.to_vec(),
        None => (0..samples.d()).map(|j| format!("x{j}")).collect(),
    };
    w.write_record(&header).map_err(csv_err)?;
    for i in 0..samples.n() {
        w.write_record(samples.row(i).iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Input(e.to_string())
}

pub fn trajectory_csv_bytes(trajectory: &Trajectory) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_HEADER).map_err(csv_err)?;
    let (n, dim) = (trajectory.particles(), trajectory.dimension());
    for s in 0..trajectory.n_samples() {
        let cfg = trajectory.configuration(s);
        for p in 0..n {
            for a in 0..dim {
                w.write_record([
                    s.to_string(),
                    p.to_string(),
                    a.to_string(),
                    cfg[p * dim + a].to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

/// Parses trajectory rows, requiring the `sample, particle, axis` ordering
/// the writer produces.
pub fn parse_trajectory_csv(bytes: &[u8], particles: usize, dimension: usize) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let header = reader
        .headers()
        .map_err(|e| CliError::Input(format!("trajectory header: {e}")))?;
    if header.iter().collect::<Vec<_>>() != TRAJECTORY_HEADER {
        return Err(CliError::Input(format!(
            "trajectory header must be '{}'",
            TRAJECTORY_HEADER.join(",")
        )));
    }
    let stride = particles * dimension;
    let mut coords = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| CliError::Input(format!("trajectory row {row}: {e}")))?;
        let idx = coords.len();
        let expected = [idx / stride, (idx % stride) / dimension, idx % dimension];
        for (c, want) in expected.iter().enumerate() {
            let got: usize = record[c].parse().map_err(|_| {
                CliError::Input(format!(
                    "trajectory row {row}, column '{}': bad index '{}'",
                    TRAJECTORY_HEADER[c], &record[c]
                ))
            })?;
            if got != *want {
                return Err(CliError::Input(format!(
                    "trajectory row {row}: {} = {got}, expected {want}",
                    TRAJECTORY_HEADER[c]
                )));
            }
        }
        let x: f64 = record[3].parse().map_err(|_| {
            CliError::Input(format!(
                "trajectory row {row}, column 'coordinate': bad value '{}'",
                &record[3]
            ))
        })?;
        coords.push(x);
    }
    if coords.len() % stride != 0 {
        return Err(CliError::Input(
            "trajectory ends with a partial configuration".into(),
        ));
    }
    Ok(coords)
}

pub fn rdf_csv_bytes(rdf: &RdfEstimate) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RDF_HEADER).map_err(csv_err)?;
    for (r, g) in rdf.bin_centers.iter().zip(&rdf.g_values) {
        w.write_record([r.to_string(), g.to_string()])
            .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Input(e.to_string()))
}

/// Sidecar written next to every trajectory CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMetadata {
    pub schema_version: u32,
    pub kind: String,
    pub params: SimParams,
    pub potential: PotentialSpec,
    #[serde(rename = "box")]
    pub sim_box: BoxSpec,
    pub units: UnitsSpec,
    pub seed: u64,
    pub acceptance_rate: f64,
    pub n_samples: usize,
    pub max_energy_drift: f64,
    pub overlap_events: usize,
    pub warnings: Vec<String>,
    pub trajectory_file: String,
    pub trajectory_sha256: String,
    pub config: BTreeMap<String, String>,
}

pub const TRAJECTORY_METADATA_KIND: &str = "trajectory_metadata";

pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn read_metadata(path: &Path) -> Result<TrajectoryMetadata> {
    let bytes = read_bytes(path)?;
    let meta: TrajectoryMetadata = serde_json::from_slice(&bytes).map_err(|e| {
        CliError::Input(format!(
            "{}: not a trajectory metadata file: {e}",
            path.display()
        ))
    })?;
    if meta.schema_version != SCHEMA_VERSION || meta.kind != TRAJECTORY_METADATA_KIND {
        return Err(CliError::Input(format!(
            "{}: unsupported metadata kind '{}' version {}",
            path.display(),
            meta.kind,
            meta.schema_version
        )));
    }
    Ok(meta)
}

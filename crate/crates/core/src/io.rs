//! CSV ingestion and CSV/JSON/plot-data emission.
//!
//! Files always carry full precision (shortest round-trip representation of
//! each `f64`); numbers are never written with thousands separators, and
//! ingestion strips them.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calibration::{CalibrationObservation, PhiACalibrationAssumptions};
use crate::error::{Error, Result};
use crate::fitting::SeriesData;
use crate::scenario::{ComparisonSeries, SimulationResult, SweepRow};

pub const CURRENCY_NOTE: &str = "nominal USD, undeflated";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    Csv,
    Json,
    Plotdata,
}

impl FromStr for EmitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(EmitFormat::Csv),
            "json" => Ok(EmitFormat::Json),
            "plotdata" => Ok(EmitFormat::Plotdata),
            other => Err(Error::Config(format!(
                "unknown format '{other}'; expected csv, json or plotdata"
            ))),
        }
    }
}

/// Where and how a run's results are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Builtin scenario name or scenario file path.
    pub source: String,
    pub out_dir: PathBuf,
    pub formats: Vec<EmitFormat>,
    /// The engine has no randomness; recorded for provenance.
    pub deterministic: bool,
}

impl RunManifest {
    pub fn new(
        source: impl Into<String>,
        out_dir: impl Into<PathBuf>,
        mut formats: Vec<EmitFormat>,
    ) -> Result<Self> {
        formats.sort();
        formats.dedup();
        if formats.is_empty() {
            return Err(Error::Config("at least one emit format is required".into()));
        }
        Ok(RunManifest {
            source: source.into(),
            out_dir: out_dir.into(),
            formats,
            deterministic: true,
        })
    }
}

fn parse_number(raw: &str) -> std::result::Result<f64, String> {
    let cleaned: String = raw.trim().chars().filter(|c| *c != ',').collect();
    cleaned
        .parse::<f64>()
        .map_err(|_| format!("'{}' is not a decimal number", raw.trim()))
}

fn open_csv(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

fn check_headers(path: &Path, reader: &mut csv::Reader<fs::File>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().map_err(|e| Error::Parse {
        path: path.into(),
        line: 1,
        message: e.to_string(),
    })?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Parse {
            path: path.into(),
            line: 1,
            message: format!(
                "expected header '{}', got '{}'",
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(())
}

/// Reads numeric rows of a CSV file with the given header.
fn read_numeric_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = open_csv(path)?;
    check_headers(path, &mut reader, header)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.into(),
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(Error::Parse {
                path: path.into(),
                line,
                message: format!("expected {} fields, got {}", header.len(), record.len()),
            });
        }
        let row = record
            .iter()
            .map(parse_number)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|message| Error::Parse {
                path: path.into(),
                line,
                message,
            })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data(format!("{} has no data rows", path.display())));
    }
    Ok(rows)
}

/// Reads a `t,value` CSV into a time-sorted series.
pub fn ingest_series(path: &Path) -> Result<SeriesData> {
    let rows = read_numeric_rows(path, &["t", "value"])?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    SeriesData::from_unsorted(label, rows.into_iter().map(|r| (r[0], r[1])).collect())
}

/// Reads a `year,gdp,capital,population` CSV, sorted by year.
pub fn ingest_observations(path: &Path) -> Result<Vec<CalibrationObservation>> {
    let rows = read_numeric_rows(path, &["year", "gdp", "capital", "population"])?;
    let mut obs = rows
        .into_iter()
        .map(|r| {
            let year = r[0];
            if year.fract() != 0.0 {
                return Err(Error::Data(format!("year {year} is not an integer")));
            }
            let o = CalibrationObservation {
                year: year as i32,
                gdp: r[1],
                capital: r[2],
                population: r[3],
            };
            o.validate()?;
            Ok(o)
        })
        .collect::<Result<Vec<_>>>()?;
    obs.sort_by_key(|o| o.year);
    Ok(obs)
}

/// Reads calibration assumptions from a TOML file with keys `omega`, `s`,
/// `delta`, `agents`.
pub fn ingest_assumptions(path: &Path) -> Result<PhiACalibrationAssumptions> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let a: PhiACalibrationAssumptions =
        toml::from_str(&text).map_err(|e| Error::Serde(e.to_string()))?;
    a.validate()?;
    Ok(a)
}

/// JSON body written for a simulation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub currency: String,
    pub deterministic: bool,
    pub source: String,
    pub result: SimulationResult,
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Serde(format!("{other:?}")),
    }
}

fn write_rows(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub const RESULT_HEADER: [&str; 8] = ["t", "s", "A", "p", "theta", "y_total", "y_human", "y_ai"];

/// Records of `result` as strings, formatted by `fmt`.
pub fn result_rows(result: &SimulationResult, fmt: impl Fn(f64) -> String) -> Vec<Vec<String>> {
    result
        .records
        .iter()
        .map(|r| {
            let mut row = vec![r.t.to_string()];
            row.extend(
                [
                    r.s,
                    r.agents,
                    r.penetration,
                    r.theta,
                    r.y_total,
                    r.y_human,
                    r.y_ai,
                ]
                .into_iter()
                .map(&fmt),
            );
            row
        })
        .collect()
}

fn full(v: f64) -> String {
    v.to_string()
}

/// Writes the requested formats for one simulation result and returns the
/// created paths.
pub fn emit_result(result: &SimulationResult, manifest: &RunManifest) -> Result<Vec<PathBuf>> {
    ensure_dir(&manifest.out_dir)?;
    let mut written = Vec::new();
    for fmt in &manifest.formats {
        let path = match fmt {
            EmitFormat::Csv => {
                let path = manifest.out_dir.join(format!("{}.csv", result.scenario));
                write_rows(&path, &RESULT_HEADER, result_rows(result, full))?;
                path
            }
            EmitFormat::Json => {
                let path = manifest.out_dir.join(format!("{}.json", result.scenario));
                let doc = ResultDocument {
                    currency: CURRENCY_NOTE.into(),
                    deterministic: manifest.deterministic,
                    source: manifest.source.clone(),
                    result: result.clone(),
                };
                write_json(&path, &doc)?;
                path
            }
            EmitFormat::Plotdata => {
                let path = manifest
                    .out_dir
                    .join(format!("{}.plot.csv", result.scenario));
                write_rows(
                    &path,
                    &["t", "y_total"],
                    result
                        .records
                        .iter()
                        .map(|r| vec![r.t.to_string(), full(r.y_total)]),
                )?;
                path
            }
        };
        written.push(path);
    }
    Ok(written)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Serde(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_result_json(path: &Path) -> Result<ResultDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Serde(e.to_string()))
}

/// Reads back a result CSV written by [`emit_result`].
pub fn read_result_csv(path: &Path) -> Result<Vec<[f64; 8]>> {
    let rows = read_numeric_rows(path, &RESULT_HEADER)?;
    Ok(rows
        .into_iter()
        .map(|r| r.try_into().expect("row length checked"))
        .collect())
}

pub fn comparison_stem(cmp: &ComparisonSeries) -> String {
    format!("{}-vs-{}", cmp.a, cmp.b)
}

/// Comparison output. Both the CSV and the plot data use columns
/// `t,ratio,enhancement_pct`.
pub fn emit_comparison(cmp: &ComparisonSeries, manifest: &RunManifest) -> Result<Vec<PathBuf>> {
    ensure_dir(&manifest.out_dir)?;
    let stem = comparison_stem(cmp);
    let rows = || {
        cmp.points
            .iter()
            .map(|p| vec![p.t.to_string(), full(p.ratio), full(p.enhancement_pct)])
    };
    let mut written = Vec::new();
    for fmt in &manifest.formats {
        let path = match fmt {
            EmitFormat::Csv => manifest.out_dir.join(format!("{stem}.csv")),
            EmitFormat::Plotdata => manifest.out_dir.join(format!("{stem}.plot.csv")),
            EmitFormat::Json => manifest.out_dir.join(format!("{stem}.json")),
        };
        match fmt {
            EmitFormat::Json => write_json(&path, cmp)?,
            _ => write_rows(&path, &["t", "ratio", "enhancement_pct"], rows())?,
        }
        written.push(path);
    }
    Ok(written)
}

pub fn emit_sweep(
    scenario: &str,
    param: &str,
    rows: &[SweepRow],
    out_dir: &Path,
) -> Result<PathBuf> {
    ensure_dir(out_dir)?;
    let path = out_dir.join(format!("{scenario}-sweep-{param}.csv"));
    write_rows(
        &path,
        &[param, "final_y_total", "mean_enhancement_pct"],
        rows.iter().map(|r| {
            vec![
                full(r.value),
                full(r.final_y_total),
                full(r.mean_enhancement_pct),
            ]
        }),
    )?;
    Ok(path)
}

/// Six significant digits, switching to exponent form for large or small
/// magnitudes.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

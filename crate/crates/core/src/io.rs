//! Diagram files (JSON) and metric files (CSV).
//!
//! A diagram file is `{"points": [[birth, death], ...]}` in any point order.
//! A metric file has a header row of labels followed by one row of distances
//! per point.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diagram::Diagram;
use crate::embeddings::{EmbedError, FiniteMetricSpace};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid diagram file: {source}")]
    DiagramJson { path: PathBuf, source: serde_json::Error },
    #[error("{path}: invalid metric file: {message}")]
    MetricCsv { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Metric { path: PathBuf, source: EmbedError },
}

pub fn diagram_from_json(text: &str) -> Result<Diagram, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn diagram_to_json(diagram: &Diagram) -> String {
    serde_json::to_string(diagram).expect("diagrams serialize to JSON")
}

pub fn read_diagram(path: &Path) -> Result<Diagram, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })?;
    diagram_from_json(&text).map_err(|source| IoError::DiagramJson {
        path: path.to_owned(),
        source,
    })
}

pub fn write_diagram(path: &Path, diagram: &Diagram) -> Result<(), IoError> {
    fs::write(path, diagram_to_json(diagram) + "\n").map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })
}

/// Raw contents of a metric file, before axiom validation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

pub fn parse_metric_csv<R: Read>(reader: R) -> Result<MetricTable, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let labels: Vec<String> = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut matrix = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let values = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .parse::<f64>()
                    .map_err(|_| format!("row {}, column {}: {field:?} is not a number", row + 1, col + 1))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        matrix.push(values);
    }
    if labels.len() != matrix.len() {
        return Err(format!("{} labels but {} matrix rows", labels.len(), matrix.len()));
    }
    Ok(MetricTable { labels, matrix })
}

pub fn write_metric_csv<W: Write>(writer: W, labels: &[String], matrix: &[Vec<f64>]) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(labels)?;
    for row in matrix {
        wtr.write_record(row.iter().map(f64::to_string))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_metric_table(path: &Path) -> Result<MetricTable, IoError> {
    let file = fs::File::open(path).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })?;
    parse_metric_csv(file).map_err(|message| IoError::MetricCsv {
        path: path.to_owned(),
        message,
    })
}

/// Reads and validates a metric file.
pub fn read_metric(path: &Path) -> Result<FiniteMetricSpace, IoError> {
    let table = read_metric_table(path)?;
    FiniteMetricSpace::new(table.labels, table.matrix).map_err(|source| IoError::Metric {
        path: path.to_owned(),
        source,
    })
}

pub fn write_metric(path: &Path, space: &FiniteMetricSpace) -> Result<(), IoError> {
    let file = fs::File::create(path).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })?;
    write_metric_csv(file, space.labels(), space.matrix()).map_err(|e| IoError::MetricCsv {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

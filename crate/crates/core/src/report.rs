//! Result files.
//!
//! Every file is one pretty-printed JSON object with a `kind` tag
//! (`immunization`, `saved`, `evaluation`, `spread` or `bench`). Nodes are
//! written as external ids; field order is fixed by the struct definitions.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::BenchReport;
use crate::graph::Graph;
use crate::immunization::{Algorithm, ImmunizationResult};
use crate::spread::{SavedReport, SpreadOutcome};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Format(#[from] serde_json::Error),
    #[error("report references unknown node id {0:?}")]
    UnknownId(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedNode {
    pub id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImmunizationRecord {
    pub algorithm: Algorithm,
    pub k: usize,
    pub selected: Vec<SelectedNode>,
    pub elapsed_seconds: f64,
}

impl ImmunizationRecord {
    pub fn from_result(result: &ImmunizationResult, g: &Graph) -> Self {
        Self {
            algorithm: result.algorithm,
            k: result.k,
            selected: result
                .selected
                .iter()
                .zip(&result.node_scores)
                .map(|(&v, &score)| SelectedNode { id: g.external_id(v).to_owned(), score })
                .collect(),
            elapsed_seconds: result.elapsed_seconds,
        }
    }

    pub fn to_result(&self, g: &Graph) -> Result<ImmunizationResult, ReportError> {
        let selected = self
            .selected
            .iter()
            .map(|s| g.index_of(&s.id).ok_or_else(|| ReportError::UnknownId(s.id.clone())))
            .collect::<Result<_, _>>()?;
        Ok(ImmunizationResult {
            algorithm: self.algorithm,
            k: self.k,
            selected,
            node_scores: self.selected.iter().map(|s| s.score).collect(),
            elapsed_seconds: self.elapsed_seconds,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFrequency {
    pub id: String,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadRecord {
    pub runs: usize,
    pub blocked: Vec<String>,
    pub mean_infected: f64,
    /// Nodes infected in at least one run, by decreasing frequency.
    pub affected: Vec<NodeFrequency>,
    pub per_run_counts: Vec<usize>,
}

impl SpreadRecord {
    pub fn new(outcome: &SpreadOutcome, blocked: &[usize], g: &Graph) -> Self {
        let mut affected: Vec<(usize, f64)> = outcome
            .per_node_frequency
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, f)| f > 0.0)
            .collect();
        affected.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Self {
            runs: outcome.runs,
            blocked: blocked.iter().map(|&v| g.external_id(v).to_owned()).collect(),
            mean_infected: outcome.mean_infected,
            affected: affected
                .into_iter()
                .map(|(v, frequency)| NodeFrequency { id: g.external_id(v).to_owned(), frequency })
                .collect(),
            per_run_counts: outcome.per_run_counts.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Immunization(ImmunizationRecord),
    Saved(SavedReport),
    Evaluation { reports: Vec<SavedReport> },
    Spread(SpreadRecord),
    Bench(BenchReport),
}

pub fn write_report<W: Write>(report: &Report, mut out: W) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut out, report).map_err(json_error)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_report<R: Read>(source: R) -> Result<Report, ReportError> {
    serde_json::from_reader(source).map_err(json_error)
}

fn json_error(e: serde_json::Error) -> ReportError {
    if e.is_io() { ReportError::Io(e.into()) } else { ReportError::Format(e) }
}

pub fn write_result(report: &Report, path: impl AsRef<Path>) -> Result<(), ReportError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_report(report, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn read_result(path: impl AsRef<Path>) -> Result<Report, ReportError> {
    read_report(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, EdgeListOptions};

    fn graph() -> Graph {
        load_edge_list("a b\nb c\n".as_bytes(), &EdgeListOptions::default()).unwrap()
    }

    fn result(selected: Vec<usize>) -> ImmunizationResult {
        let node_scores = selected.iter().map(|_| 2.0).collect();
        ImmunizationResult { algorithm: Algorithm::HighestDegree, k: 1, selected, node_scores, elapsed_seconds: 0.125 }
    }

    #[test]
    fn immunization_file_contents() {
        let g = graph();
        let report = Report::Immunization(ImmunizationRecord::from_result(&result(vec![1]), &g));
        let mut buf = Vec::new();
        write_report(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"kind\": \"immunization\""));
        assert!(text.contains("\"algorithm\": \"HighestDegree\""));
        assert!(text.contains("\"k\": 1"));
        assert!(text.contains("\"id\": \"b\""));
    }

    #[test]
    fn empty_selection_round_trips() {
        let g = graph();
        let record = ImmunizationRecord::from_result(&result(vec![]), &g);
        let mut buf = Vec::new();
        write_report(&Report::Immunization(record.clone()), &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("\"selected\": []"));
        assert_eq!(read_report(buf.as_slice()).unwrap(), Report::Immunization(record));
    }

    #[test]
    fn file_round_trip() {
        let g = graph();
        let original = result(vec![1, 0]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        write_result(&Report::Immunization(ImmunizationRecord::from_result(&original, &g)), &path).unwrap();
        let Report::Immunization(back) = read_result(&path).unwrap() else { panic!("wrong kind") };
        assert_eq!(back.to_result(&g).unwrap(), original);
    }

    #[test]
    fn unknown_id_on_read_back() {
        let mut record = ImmunizationRecord::from_result(&result(vec![0]), &graph());
        record.selected[0].id = "zz".into();
        assert!(matches!(record.to_result(&graph()), Err(ReportError::UnknownId(id)) if id == "zz"));
    }

    #[test]
    fn unwritable_path() {
        let report = Report::Saved(SavedReport { algorithm: None, k: 0, baseline_mean: 1.0, blocked_mean: 1.0, saved: 0.0 });
        assert!(matches!(write_result(&report, "/nonexistent-dir/x.json"), Err(ReportError::Io(_))));
    }
}

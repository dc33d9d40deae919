//! Seed-label table produced by the upstream harmful-content detector.
//!
//! Format: UTF-8 CSV with header `id,score`; one row per user, `score` the
//! detector confidence in `[0, 1]`. Users scoring at least the threshold
//! become seeds.

use std::io::Read;

use thiserror::Error;

use crate::graph::{Graph, GraphError, SeedSet};

#[derive(Debug, Error)]
pub enum SeedLabelError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("unknown node ids in seed labels: {}", .0.join(", "))]
    UnknownIds(Vec<String>),
    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn load_seed_labels<R: Read>(source: R, g: &Graph, threshold: f64) -> Result<SeedSet, SeedLabelError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(SeedLabelError::InvalidThreshold(threshold));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let parse_err = |line: u64, message: String| SeedLabelError::Parse { line, message };

    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?;
    if header.len() != 2 || &header[0] != "id" || &header[1] != "score" {
        return Err(parse_err(1, format!("expected header `id,score`, found {:?}", header.iter().collect::<Vec<_>>())));
    }

    let mut scores = Vec::new();
    let mut unknown = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(parse_err(line, format!("expected 2 fields, found {}", record.len())));
        }
        let score: f64 = record[1]
            .parse()
            .map_err(|_| parse_err(line, format!("malformed score {:?}", &record[1])))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(parse_err(line, format!("score {score} outside [0, 1]")));
        }
        match g.index_of(&record[0]) {
            Some(v) => scores.push((v, score)),
            None => unknown.push(record[0].to_owned()),
        }
    }
    if !unknown.is_empty() {
        return Err(SeedLabelError::UnknownIds(unknown));
    }
    Ok(SeedSet::from_scores(g, scores, threshold)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_edge_list, EdgeListOptions};

    fn graph() -> Graph {
        load_edge_list("u1 u2\nu2 u3\n".as_bytes(), &EdgeListOptions::default()).unwrap()
    }

    #[test]
    fn threshold_selects() {
        let g = graph();
        let s = load_seed_labels("id,score\nu1,0.9\nu2,0.3\n".as_bytes(), &g, 0.5).unwrap();
        assert_eq!(s.members(), &[0]);
        assert_eq!(s.threshold(), 0.5);
    }

    #[test]
    fn boundary_included() {
        let g = graph();
        let s = load_seed_labels("id,score\nu3,0.5\n".as_bytes(), &g, 0.5).unwrap();
        assert_eq!(s.members(), &[2]);
    }

    #[test]
    fn unknown_id_named() {
        let g = graph();
        let err = load_seed_labels("id,score\nghost,0.9\nu1,0.2\n".as_bytes(), &g, 0.5).unwrap_err();
        assert!(err.to_string().contains("ghost"), "{err}");
    }

    #[test]
    fn malformed_score_line() {
        let g = graph();
        match load_seed_labels("id,score\nu1,0.9\nu2,high\n".as_bytes(), &g, 0.5) {
            Err(SeedLabelError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load_seed_labels("id,score\nu1,1.5\n".as_bytes(), &g, 0.5),
            Err(SeedLabelError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn header_and_threshold_checked() {
        let g = graph();
        assert!(matches!(load_seed_labels("u1,0.9\n".as_bytes(), &g, 0.5), Err(SeedLabelError::Parse { line: 1, .. })));
        assert!(matches!(load_seed_labels("id,score\n".as_bytes(), &g, 1.5), Err(SeedLabelError::InvalidThreshold(_))));
    }
}

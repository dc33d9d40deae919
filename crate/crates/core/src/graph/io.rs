use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Graph, GraphBuilder, GraphError};

/// Edge-list tokenization. `delimiter = None` splits on any whitespace.
#[derive(Debug, Clone)]
pub struct EdgeListOptions {
    pub delimiter: Option<char>,
    pub comment_prefix: String,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            delimiter: None,
            comment_prefix: "#".to_owned(),
        }
    }
}

/// Parses one edge per line: two id tokens and an optional third token
/// (weight or interaction type) which is ignored. Blank lines and comment
/// lines are skipped.
pub fn load_edge_list<R: BufRead>(source: R, options: &EdgeListOptions) -> Result<Graph, GraphError> {
    let mut builder = GraphBuilder::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty()
            || (!options.comment_prefix.is_empty() && trimmed.starts_with(&options.comment_prefix))
        {
            continue;
        }
        let tokens: Vec<&str> = match options.delimiter {
            None => trimmed.split_whitespace().collect(),
            Some(d) => trimmed.split(d).map(str::trim).collect(),
        };
        if !(2..=3).contains(&tokens.len()) || tokens[..2].iter().any(|t| t.is_empty()) {
            return Err(GraphError::Parse {
                line: lineno + 1,
                message: format!("expected 2 or 3 tokens, found {:?}", trimmed),
            });
        }
        builder.add_edge_ids(tokens[0], tokens[1]);
    }
    let g = builder.build();
    if g.is_empty() {
        return Err(GraphError::Empty);
    }
    Ok(g)
}

pub fn read_edge_list_file(path: impl AsRef<Path>, options: &EdgeListOptions) -> Result<Graph, GraphError> {
    load_edge_list(BufReader::new(File::open(path)?), options)
}

/// Writes every edge once as `id_a<TAB>id_b`, lowest indices first.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for (a, b) in g.edges() {
        writeln!(out, "{}\t{}", g.external_id(a), g.external_id(b))?;
    }
    Ok(())
}

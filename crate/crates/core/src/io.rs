//! Text formats: plain edge lists, KONECT `out.*` files and vertex label files.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `u v [w]` per line, `#` comments.
    EdgeList,
    /// KONECT: `%` header lines, columns 1-2 endpoints, optional weight column, further
    /// columns (timestamps) ignored.
    Konect,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" => Ok(Format::EdgeList),
            "konect" => Ok(Format::Konect),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

pub fn load_graph(path: impl AsRef<Path>, format: Format, directed: bool) -> Result<Graph> {
    let file = File::open(path)?;
    read_graph(BufReader::new(file), format, directed)
}

/// Parses a graph. Vertex tokens are densified in order of first appearance.
pub fn read_graph(reader: impl BufRead, format: Format, directed: bool) -> Result<Graph> {
    let comment = match format {
        Format::EdgeList => '#',
        Format::Konect => '%',
    };
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut builder = GraphBuilder::new(0, directed);
    let mut id_of = |tok: &str| -> usize {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = names.len();
        ids.insert(tok.to_string(), id);
        names.push(tok.to_string());
        id
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(comment) {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        if tokens.len() < 2 {
            return Err(parse_err(format!(
                "expected at least two endpoints, got '{trimmed}'"
            )));
        }
        if format == Format::EdgeList && tokens.len() > 3 {
            return Err(parse_err(format!("expected 'u v [w]', got '{trimmed}'")));
        }
        let weight = match tokens.get(2) {
            Some(tok) => tok
                .parse::<f64>()
                .ok()
                .filter(|w| w.is_finite())
                .ok_or_else(|| parse_err(format!("invalid weight '{tok}'")))?,
            None => 1.0,
        };
        let u = id_of(tokens[0]);
        let v = id_of(tokens[1]);
        builder.add_edge(u, v, weight);
    }
    builder.ensure_vertex(names.len().saturating_sub(1));
    if names.is_empty() {
        return Ok(GraphBuilder::new(0, directed).build());
    }
    builder.build().with_names(names)
}

/// Writes the edge list in stored order, using vertex names when present. Unit weights are
/// omitted.
pub fn write_edge_list(graph: &Graph, mut out: impl Write) -> Result<()> {
    for e in graph.edges() {
        let (u, v) = (graph.vertex_name(e.source), graph.vertex_name(e.target));
        if e.weight == 1.0 {
            writeln!(out, "{u} {v}")?;
        } else {
            writeln!(out, "{u} {v} {}", e.weight)?;
        }
    }
    Ok(())
}

/// Reads a `vertex label` file and attaches the labels to `graph`. Every vertex must be
/// labelled exactly once.
pub fn read_labels(graph: Graph, reader: impl BufRead) -> Result<Graph> {
    let mut labels: Vec<Option<String>> = vec![None; graph.n_vertices()];
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 'vertex label', got '{trimmed}'"),
            });
        }
        let v = graph.find_vertex(tokens[0]).ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("unknown vertex '{}'", tokens[0]),
        })?;
        labels[v] = Some(tokens[1].to_string());
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| {
            l.ok_or_else(|| {
                Error::Contract(format!("vertex {} has no label", graph.vertex_name(v)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    graph.with_labels(labels)
}

pub fn load_labels(graph: Graph, path: impl AsRef<Path>) -> Result<Graph> {
    read_labels(graph, BufReader::new(File::open(path)?))
}

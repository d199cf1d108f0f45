//! Edge-list text format.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v
//! ...
//! ```
//!
//! Vertices are 0-based. The writer emits edges sorted by (min, max).

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::{DuplicatePolicy, Graph, GraphError};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header declares {declared} edges but {found} were listed")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), EdgeListError> {
    let mut it = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize, EdgeListError> {
        let tok = it.next().ok_or_else(|| EdgeListError::Parse {
            line,
            msg: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| EdgeListError::Parse {
            line,
            msg: format!("invalid {what} {tok:?}"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(EdgeListError::Parse {
            line,
            msg: "expected exactly two fields".into(),
        });
    }
    Ok((a, b))
}

pub fn read_edge_list<R: BufRead>(reader: R, policy: DuplicatePolicy) -> Result<Graph, EdgeListError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let pair = parse_pair(i + 1, text)?;
        if header.is_none() {
            header = Some(pair);
        } else {
            edges.push(pair);
        }
    }
    let (n, m) = header.ok_or(EdgeListError::Parse {
        line: 0,
        msg: "missing `n m` header".into(),
    })?;
    if edges.len() != m {
        return Err(EdgeListError::CountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, edges, policy)?)
}

pub fn write_edge_list<W: Write>(mut w: W, g: &Graph) -> io::Result<()> {
    writeln!(w, "{} {}", g.n(), g.m())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(&mut buf, g).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}

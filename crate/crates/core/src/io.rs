//! Plain-text instance format.
//!
//! A graph file holds a header `n m` followed by `m` endpoint lines `u v`
//! (1-based spine positions; order within a line does not matter). Anything
//! after `#` is a comment, blank lines are skipped. Diagnostics carry the
//! 1-based line number of the offending input.

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;

pub fn parse_graph(text: &str) -> Result<OrderedGraph> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::invalid("empty graph file"))?;
    let fields = parse_fields(line_no, &header, 2)?;
    let (n, m) = (fields[0], fields[1]);
    let mut edges = Vec::with_capacity(m as usize);
    let mut last_line = line_no;
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or_else(|| Error::Parse {
            line: last_line,
            msg: format!("expected {m} edges, found {}", edges.len()),
        })?;
        last_line = line_no;
        let fields = parse_fields(line_no, &line, 2)?;
        edges.push((fields[0], fields[1]));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("more than the declared {m} edges"),
        });
    }
    OrderedGraph::new(n, &edges).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::Parse { line: 0, msg },
        other => other,
    })
}

pub fn format_graph(g: &OrderedGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line.to_string()))
        }
    })
}

pub(crate) fn parse_fields(line_no: usize, line: &str, want: usize) -> Result<Vec<u32>> {
    let fields: Vec<u32> = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("expected a non-negative integer, found {tok:?}"),
            })
        })
        .collect::<Result<_>>()?;
    if fields.len() != want {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("expected {want} fields, found {}", fields.len()),
        });
    }
    Ok(fields)
}

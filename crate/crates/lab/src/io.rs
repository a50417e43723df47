//! Edge-list files and label tables.
//!
//! The native format is a header line `n m` followed by `m` lines `u v`
//! with `0 ≤ u < v < n`. Files with arbitrary vertex names go through
//! [`read_labelled_edges`], which assigns dense ids by first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use perturb_core::{Graph, Vertex};

use crate::error::{LabError, Result};

fn parse_err(line: usize, message: impl Into<String>) -> LabError {
    LabError::Parse { line, message: message.into() }
}

fn parse_pair<T: std::str::FromStr>(text: &str, line: usize) -> Result<(T, T)> {
    let mut it = text.split_ascii_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(parse_err(line, "expected two fields"));
    };
    let a = a.parse().map_err(|_| parse_err(line, format!("not an integer: {a}")))?;
    let b = b.parse().map_err(|_| parse_err(line, format!("not an integer: {b}")))?;
    Ok((a, b))
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader.lines().enumerate();
    let (n, m): (usize, usize) = match lines.next() {
        Some((_, header)) => parse_pair(&header?, 1)?,
        None => return Err(parse_err(1, "missing header")),
    };
    if n > Vertex::MAX as usize {
        return Err(parse_err(1, "too many vertices"));
    }
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (u, v): (Vertex, Vertex) = parse_pair(&line, i + 1)?;
        if u >= v || v as usize >= n {
            return Err(parse_err(i + 1, format!("need u < v < n, got {u} {v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(1, format!("header promises {m} edges, found {}", edges.len())));
    }
    let g = Graph::from_edges(n, edges)?;
    if g.edge_count() != m {
        return Err(parse_err(1, "repeated edges"));
    }
    Ok(g)
}

pub fn write_edge_list<W: Write>(g: &Graph, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

/// A graph read from named vertices; `labels[i]` is the name of vertex `i`.
#[derive(Clone, Debug)]
pub struct LabelledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

/// One edge `a b` per line, or a lone name for an isolated vertex. Blank
/// lines and lines starting with `#` are skipped; self-loops are rejected.
pub fn read_labelled_edges<R: BufRead>(reader: R) -> Result<LabelledGraph> {
    let mut ids: HashMap<String, Vertex> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut id_of = |name: &str, labels: &mut Vec<String>| {
        *ids.entry(name.to_owned()).or_insert_with(|| {
            labels.push(name.to_owned());
            (labels.len() - 1) as Vertex
        })
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_ascii_whitespace().collect();
        match fields[..] {
            [a] => {
                id_of(a, &mut labels);
            }
            [a, b] => {
                if a == b {
                    return Err(parse_err(i + 1, format!("self-loop at {a}")));
                }
                let (u, v) = (id_of(a, &mut labels), id_of(b, &mut labels));
                edges.push((u, v));
            }
            _ => return Err(parse_err(i + 1, "expected one or two names")),
        }
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(LabelledGraph { graph, labels })
}

#[derive(serde::Serialize, serde::Deserialize)]
struct LabelRow {
    id: Vertex,
    label: String,
}

/// CSV with columns `id,label`.
pub fn write_label_table<W: Write>(labels: &[String], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (id, label) in labels.iter().enumerate() {
        w.serialize(LabelRow { id: id as Vertex, label: label.clone() })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_label_table<R: Read>(reader: R) -> Result<Vec<String>> {
    let mut labels = Vec::new();
    for (i, row) in csv::Reader::from_reader(reader).deserialize::<LabelRow>().enumerate() {
        let row = row?;
        if row.id as usize != i {
            return Err(parse_err(i + 2, "label ids must be 0, 1, 2, … in order"));
        }
        labels.push(row.label);
    }
    Ok(labels)
}

pub fn load_edge_list(path: &Path) -> Result<Graph> {
    read_edge_list(BufReader::new(File::open(path)?))
}

pub fn load_labelled(path: &Path) -> Result<LabelledGraph> {
    read_labelled_edges(BufReader::new(File::open(path)?))
}

pub fn save_edge_list(g: &Graph, path: &Path) -> Result<()> {
    write_edge_list(g, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 4), (2, 3)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "5 3\n0 1\n1 4\n2 3\n");
        let back = read_edge_list(&buf[..]).unwrap();
        assert_eq!(back.digest(), g.digest());
        assert_eq!(back.n(), 5);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["3 1\n1 0\n", "3 2\n0 1\n", "3 1\n0 3\n", "3 2\n0 1\n0 1\n", "x 1\n", "3 1\n0 1 2\n"] {
            assert!(read_edge_list(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn labels_by_first_appearance() {
        let text = "# social\nalice bob\nbob carol\n\ndave\nalice carol\n";
        let lg = read_labelled_edges(text.as_bytes()).unwrap();
        assert_eq!(lg.labels, ["alice", "bob", "carol", "dave"]);
        assert_eq!(lg.graph.edge_count(), 3);
        assert_eq!(lg.graph.degree(3), 0);
        let mut buf = Vec::new();
        write_label_table(&lg.labels, &mut buf).unwrap();
        assert_eq!(read_label_table(&buf[..]).unwrap(), lg.labels);
        assert!(read_labelled_edges("a a\n".as_bytes()).is_err());
    }
}

//! Edge-list text format: a `# n=<N>` header followed by one `u v` pair per
//! line. Community labels live in a sidecar file with one `node community`
//! pair per line.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::Graph;
use crate::error::{io_err, Error, Result};

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    (|| {
        writeln!(out, "# n={}", g.n())?;
        for &(u, v) in g.edges() {
            writeln!(out, "{u} {v}")?;
        }
        out.flush()
    })()
    .map_err(io_err(path))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_pair(path: &Path, lineno: usize, line: &str) -> Result<(u32, u32)> {
    let mut it = line.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(parse_error(path, lineno, format!("expected two integers, got {line:?}")));
    };
    let a = a
        .parse()
        .map_err(|_| parse_error(path, lineno, format!("bad integer {a:?}")))?;
    let b = b
        .parse()
        .map_err(|_| parse_error(path, lineno, format!("bad integer {b:?}")))?;
    Ok((a, b))
}

/// Reads an edge list written by [`write_edge_list`]. Blank lines and `#`
/// comments after the header are ignored.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines().enumerate();
    let n = loop {
        let Some((i, line)) = lines.next() else {
            return Err(parse_error(path, 1, "missing '# n=<N>' header"));
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let n = line
            .strip_prefix('#')
            .and_then(|rest| rest.trim().strip_prefix("n="))
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| parse_error(path, i + 1, format!("expected '# n=<N>' header, got {line:?}")))?;
        break n;
    };
    let mut edges = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        edges.push(parse_pair(path, i + 1, line)?);
    }
    Graph::from_edges(n, &edges, None)
}

pub fn write_communities(g: &Graph, path: &Path) -> Result<()> {
    let labels = g
        .communities()
        .ok_or_else(|| Error::InvalidArgument("graph has no community labels".into()))?;
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    (|| {
        for (v, c) in labels.iter().enumerate() {
            writeln!(out, "{v} {c}")?;
        }
        out.flush()
    })()
    .map_err(io_err(path))
}

/// Reads a community sidecar for a graph with `n` nodes. Every node must be
/// labelled exactly once.
pub fn read_communities(path: &Path, n: usize) -> Result<Vec<u32>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut labels: Vec<Option<u32>> = vec![None; n];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (v, c) = parse_pair(path, i + 1, line)?;
        let slot = labels
            .get_mut(v as usize)
            .ok_or_else(|| parse_error(path, i + 1, format!("node {v} out of range for n={n}")))?;
        if slot.replace(c).is_some() {
            return Err(parse_error(path, i + 1, format!("node {v} labelled twice")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| parse_error(path, 0, format!("node {v} has no community"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_lfr, LfrParams};

    #[test]
    fn edge_list_and_sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = generate_lfr(&LfrParams::mesoscale(0.1), 3).unwrap();
        let edges = dir.path().join("g.edges");
        let comms = dir.path().join("g.comm");
        write_edge_list(&g, &edges).unwrap();
        write_communities(&g, &comms).unwrap();

        let text = fs::read_to_string(&edges).unwrap();
        assert!(text.starts_with("# n=250\n"));
        let back = read_edge_list(&edges).unwrap();
        let labels = read_communities(&comms, back.n()).unwrap();
        assert_eq!(back.with_communities(labels).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.edges");
        fs::write(&p, "# n=3\n0 1\n1 x\n").unwrap();
        match read_edge_list(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        fs::write(&p, "0 1\n").unwrap();
        assert!(matches!(read_edge_list(&p), Err(Error::Parse { line: 1, .. })));

        let c = dir.path().join("bad.comm");
        fs::write(&c, "0 0\n1 0\n").unwrap();
        assert!(read_communities(&c, 3).is_err());
    }
}

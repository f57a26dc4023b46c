//! Plain-text edge-list format.
//!
//! ```text
//! # optional comments
//! p <n> <m>
//! e <u> <v>      (m lines, 0-based endpoints)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap();
        let nums: Vec<usize> = fields
            .map(|f| {
                f.parse::<usize>()
                    .map_err(|_| err(&format!("bad integer {f:?}")))
            })
            .collect::<Result<_>>()?;
        match (tag, nums.as_slice()) {
            ("p", &[n, m]) => {
                if header.is_some() {
                    return Err(err("second header line"));
                }
                header = Some((n, m));
            }
            ("e", &[u, v]) => {
                if header.is_none() {
                    return Err(err("edge before header"));
                }
                pairs.push((u, v));
            }
            _ => return Err(err("expected `p <n> <m>` or `e <u> <v>`")),
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing `p` header".into(),
    })?;
    if pairs.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", pairs.len()),
        });
    }
    Graph::new(n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_edge_list("# square\np 4 4\ne 0 1\ne 1 2\n\ne 2 3\ne 3 0\n").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.edge(3), (0, 3));
    }

    #[test]
    fn write_is_canonical() {
        let g = Graph::new(3, &[(1, 2), (0, 1)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "p 3 2\ne 1 2\ne 0 1\n");
        assert_eq!(write_edge_list(&parse_edge_list(&text).unwrap()), text);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_edge_list("e 0 1\n").is_err());
        assert!(parse_edge_list("p 2 2\ne 0 1\n").is_err());
        assert!(parse_edge_list("p 2 1\ne 0 x\n").is_err());
        assert!(matches!(
            parse_edge_list("p 2 2\ne 0 1\ne 1 0\n"),
            Err(Error::DuplicateEdge(0, 1))
        ));
    }
}

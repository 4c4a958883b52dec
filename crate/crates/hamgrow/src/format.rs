//! Plain-text graph files.
//!
//! ```text
//! <n> <m>
//! <u> <v>      (m lines)
//! ```
//!
//! Lines starting with `#` are comments and may appear anywhere.
//! Serialization writes edges in ascending canonical order with `\n`
//! endings and no comments.

use std::fmt::Write as _;

use hamgrow_core::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; 0 when the input ends early.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("malformed header, expected \"<n> <m>\"")]
    MalformedHeader,
    #[error("malformed edge line, expected \"<u> <v>\"")]
    MalformedEdge,
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("header declares {declared} edges, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
}

fn pair(line: &str) -> Option<(usize, usize)> {
    let (a, b) = line.split_once(' ')?;
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    if !digits(a) || !digits(b) {
        return None;
    }
    Some((a.parse().ok()?, b.parse().ok()?))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingHeader })?;
    let (n, m) = pair(header).ok_or(ParseError { line: hline, kind: ParseErrorKind::MalformedHeader })?;

    let mut g = Graph::empty(n);
    let mut found = 0;
    let mut last_line = hline;
    for (line, l) in lines {
        last_line = line;
        let err = |kind| ParseError { line, kind };
        let (u, v) = pair(l).ok_or_else(|| err(ParseErrorKind::MalformedEdge))?;
        for x in [u, v] {
            if x >= n {
                return Err(err(ParseErrorKind::VertexOutOfRange { vertex: x, n }));
            }
        }
        if u == v {
            return Err(err(ParseErrorKind::SelfLoop(u)));
        }
        if g.has_edge(u, v) {
            let e = Edge::new(u, v);
            return Err(err(ParseErrorKind::DuplicateEdge(e.u(), e.v())));
        }
        g.add_edge(u, v).expect("checked above");
        found += 1;
    }
    if found != m {
        return Err(ParseError { line: last_line, kind: ParseErrorKind::EdgeCountMismatch { declared: m, found } });
    }
    Ok(g)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(s, "{} {}", e.u(), e.v());
    }
    s
}

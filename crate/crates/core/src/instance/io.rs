//! Plain-text edge lists.
//!
//! One edge per line, `<set-id> <element-id> [value]`, whitespace separated.
//! Lines starting with `#` are comments, except two recognized headers:
//!
//! * `#dims n=<sets> m=<elements>` fixes the dimensions (needed when trailing
//!   sets are empty, as in sketches);
//! * `#U <int>` gives the weight/fraction resolution for the third column.

use std::io::{BufRead, Write};

use super::CoverageInstance;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRecord {
    pub set: u32,
    pub element: u32,
    pub value: Option<u64>,
    pub line: usize,
}

/// Raw content of an edge-list file before it is turned into an instance.
#[derive(Debug, Clone, Default)]
pub struct ParsedEdgeList {
    pub dims: Option<(usize, usize)>,
    pub resolution: Option<u64>,
    pub records: Vec<EdgeRecord>,
}

impl ParsedEdgeList {
    /// `(n, m)`: header dimensions if present, otherwise one past the max ids.
    pub fn dimensions(&self) -> Result<(usize, usize)> {
        let n_ids = self.records.iter().map(|r| r.set as usize + 1).max().unwrap_or(0);
        let m_ids = self.records.iter().map(|r| r.element as usize + 1).max().unwrap_or(0);
        match self.dims {
            Some((n, m)) if n < n_ids || m < m_ids => Err(Error::InvalidParameter(format!(
                "#dims n={n} m={m} is smaller than the ids used (n >= {n_ids}, m >= {m_ids})"
            ))),
            Some(d) => Ok(d),
            None => Ok((n_ids, m_ids)),
        }
    }

    pub fn to_instance(&self) -> Result<CoverageInstance> {
        if self.records.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let (n, m) = self.dimensions()?;
        CoverageInstance::from_edges(n, m, self.records.iter().map(|r| (r.set, r.element)))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(token: &str, line: usize) -> Result<u32> {
    token
        .parse::<u32>()
        .map_err(|_| parse_err(line, format!("expected a nonnegative integer id, found {token:?}")))
}

fn parse_dims(rest: &str, line: usize) -> Result<(usize, usize)> {
    let mut n = None;
    let mut m = None;
    for tok in rest.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("malformed #dims field {tok:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_err(line, format!("malformed #dims value {value:?}")))?;
        match key {
            "n" => n = Some(value),
            "m" => m = Some(value),
            _ => return Err(parse_err(line, format!("unknown #dims key {key:?}"))),
        }
    }
    match (n, m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(parse_err(line, "#dims needs both n= and m=")),
    }
}

/// Parses an edge list without interpreting the optional value column.
pub fn parse_edge_list<R: BufRead>(source: R) -> Result<ParsedEdgeList> {
    let mut parsed = ParsedEdgeList::default();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(rest) = comment.strip_prefix("dims") {
                parsed.dims = Some(parse_dims(rest, line_no)?);
            } else if let Some(rest) = comment.strip_prefix("U ") {
                let u: u64 = rest
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("malformed #U header {rest:?}")))?;
                if u == 0 {
                    return Err(parse_err(line_no, "#U must be positive"));
                }
                parsed.resolution = Some(u);
            }
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(parse_err(
                line_no,
                format!(
                    "expected `<set-id> <element-id> [value]`, found {} fields",
                    tokens.len()
                ),
            ));
        }
        let set = parse_id(tokens[0], line_no)?;
        let element = parse_id(tokens[1], line_no)?;
        let value = match tokens.get(2) {
            Some(tok) => Some(
                tok.parse::<u64>()
                    .map_err(|_| parse_err(line_no, format!("malformed value {tok:?}")))?,
            ),
            None => None,
        };
        parsed.records.push(EdgeRecord {
            set,
            element,
            value,
            line: line_no,
        });
    }
    Ok(parsed)
}

/// Loads an unweighted instance. A value column, if present, is ignored.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<CoverageInstance> {
    parse_edge_list(source)?.to_instance()
}

/// Writes `instance` as an edge list, set-major. `header` lines are emitted
/// first, each prefixed with `#`.
pub fn write_edge_list<W: Write>(instance: &CoverageInstance, mut out: W, header: &[String]) -> std::io::Result<()> {
    for line in header {
        writeln!(out, "#{line}")?;
    }
    writeln!(out, "#dims n={} m={}", instance.n(), instance.m())?;
    for (s, e) in instance.edges() {
        writeln!(out, "{s} {e}")?;
    }
    out.flush()
}

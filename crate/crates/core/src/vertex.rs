use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Label of a vertex. Integer labels sort before names, integers numerically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Name(String),
}

impl VertexId {
    pub fn name(s: impl Into<String>) -> Self {
        VertexId::Name(s.into())
    }

    /// Parses a token: decimal integers become `Int`, anything else `Name`.
    pub fn parse(token: &str) -> Self {
        let t = token.trim();
        match t.parse::<i64>() {
            Ok(i) => VertexId::Int(i),
            Err(_) => VertexId::Name(t.to_string()),
        }
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (VertexId::Int(a), VertexId::Int(b)) => a.cmp(b),
            (VertexId::Int(_), VertexId::Name(_)) => Ordering::Less,
            (VertexId::Name(_), VertexId::Int(_)) => Ordering::Greater,
            (VertexId::Name(a), VertexId::Name(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(i) => write!(f, "{i}"),
            VertexId::Name(s) => f.write_str(s),
        }
    }
}

impl From<i64> for VertexId {
    fn from(i: i64) -> Self {
        VertexId::Int(i)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId::Int(i as i64)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::Name(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId::Name(s)
    }
}

/// Formats a list of vertex labels as `{a,b,c}`.
pub(crate) fn fmt_labels(labels: &[VertexId], idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|&i| labels[i].to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

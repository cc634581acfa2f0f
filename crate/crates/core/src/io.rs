//! JSON file formats for complexes and vertex maps.
//!
//! ```json
//! {"type":"simplicial","facets":[["a","b","c"],["b","c","d"]]}
//! {"type":"cubical","dim":2,"cubes":[[0,1,2,3],[2,3,4,5]]}
//! {"vertex_map":{"a":"x","b":"y"}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::generate::Complex;
use crate::simplicial::SimplicialComplex;
use crate::vertex::VertexId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ComplexFile {
    Simplicial { facets: Vec<Vec<VertexId>> },
    Cubical { dim: usize, cubes: Vec<Vec<VertexId>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub vertex_map: BTreeMap<String, VertexId>,
}

impl ComplexFile {
    pub fn build(&self) -> Result<Complex> {
        match self {
            ComplexFile::Simplicial { facets } => Ok(Complex::Simplicial(SimplicialComplex::new(facets)?)),
            ComplexFile::Cubical { dim, cubes } => {
                if let Some(bad) = cubes.iter().find(|c| c.len() != 1usize.checked_shl(*dim as u32).unwrap_or(0)) {
                    let s: Vec<String> = bad.iter().map(ToString::to_string).collect();
                    return Err(Error::invalid(format!("cube [{}] does not have 2^{} corners", s.join(","), dim)));
                }
                Ok(Complex::Cubical(CubicalComplex::new(cubes)?))
            }
        }
    }

    pub fn from_simplicial(k: &SimplicialComplex) -> Self {
        ComplexFile::Simplicial { facets: k.facets().iter().map(|f| k.labels(f)).collect() }
    }

    pub fn from_cubical(k: &CubicalComplex) -> Self {
        ComplexFile::Cubical { dim: k.dim(), cubes: k.cubes().iter().map(|c| k.labels(c.corners())).collect() }
    }
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed complex file: {e}")))?;
    file.build()
}

pub fn complex_to_json(c: &Complex) -> String {
    let file = match c {
        Complex::Simplicial(k) => ComplexFile::from_simplicial(k),
        Complex::Cubical(k) => ComplexFile::from_cubical(k),
    };
    serde_json::to_string(&file).expect("complex files always serialize")
}

/// Parses `{"vertex_map":{…}}` into label pairs. Keys are parsed as tokens,
/// so `"1"` names the integer vertex `1`.
pub fn parse_map(text: &str) -> Result<BTreeMap<VertexId, VertexId>> {
    let file: MapFile = serde_json::from_str(text).map_err(|e| Error::invalid(format!("malformed map file: {e}")))?;
    Ok(file.vertex_map.into_iter().map(|(k, v)| (VertexId::parse(&k), v)).collect())
}

/// Finds a label in a sorted vertex list, accepting `"3"` for `3` and vice versa.
pub fn resolve_label(vertices: &[VertexId], v: &VertexId) -> Option<usize> {
    if let Ok(i) = vertices.binary_search(v) {
        return Some(i);
    }
    let alt = match v {
        VertexId::Int(i) => VertexId::Name(i.to_string()),
        VertexId::Name(s) => match VertexId::parse(s) {
            VertexId::Int(i) => VertexId::Int(i),
            VertexId::Name(_) => return None,
        },
    };
    vertices.binary_search(&alt).ok()
}

/// Normalizes every label of a parsed map against the two vertex lists.
pub fn normalize_map(
    pairs: &BTreeMap<VertexId, VertexId>,
    source: &[VertexId],
    target: &[VertexId],
) -> Result<BTreeMap<VertexId, VertexId>> {
    pairs
        .iter()
        .map(|(k, v)| {
            let i = resolve_label(source, k).ok_or_else(|| Error::invalid(format!("unknown source vertex {k}")))?;
            let j = resolve_label(target, v).ok_or_else(|| Error::invalid(format!("unknown target vertex {v}")))?;
            Ok((source[i].clone(), target[j].clone()))
        })
        .collect()
}

/// Parses a comma-separated vertex list such as `a,b,c`.
pub fn parse_vertex_list(s: &str) -> Vec<VertexId> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(VertexId::parse).collect()
}

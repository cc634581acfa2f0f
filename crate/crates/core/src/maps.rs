//! Vertex maps between complexes and the non-degeneracy test.

use std::collections::BTreeMap;

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::simplicial::SimplicialComplex;
use crate::vertex::VertexId;

/// A total map on vertex indices: `image[i]` is the target index of source vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct VertexMap {
    pub image: Vec<usize>,
}

impl VertexMap {
    pub fn new(image: Vec<usize>) -> Self {
        VertexMap { image }
    }

    pub fn identity(n: usize) -> Self {
        VertexMap { image: (0..n).collect() }
    }

    /// Resolves a label-level map. Every source vertex must be mapped to a
    /// declared target vertex.
    pub fn from_labels(source: &[VertexId], target: &[VertexId], pairs: &BTreeMap<VertexId, VertexId>) -> Result<Self> {
        let mut image = Vec::with_capacity(source.len());
        for v in source {
            let w = pairs.get(v).ok_or_else(|| Error::invalid(format!("vertex {v} has no image")))?;
            let j = target.binary_search(w).map_err(|_| Error::invalid(format!("image {w} of {v} is not a target vertex")))?;
            image.push(j);
        }
        for k in pairs.keys() {
            if source.binary_search(k).is_err() {
                return Err(Error::invalid(format!("map mentions unknown source vertex {k}")));
            }
        }
        Ok(VertexMap { image })
    }

    pub fn to_labels(&self, source: &[VertexId], target: &[VertexId]) -> BTreeMap<VertexId, VertexId> {
        self.image.iter().enumerate().map(|(i, &j)| (source[i].clone(), target[j].clone())).collect()
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// Image of a vertex set, sorted and deduplicated.
    pub fn apply_set(&self, s: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = s.iter().map(|&v| self.image[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &VertexMap) -> VertexMap {
        VertexMap { image: self.image.iter().map(|&v| then.image[v]).collect() }
    }

    pub fn is_injective_on(&self, s: &[usize]) -> bool {
        self.apply_set(s).len() == s.len()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        self.image.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v < self.image.len() && self.image[v] == i)
    }

    /// Images of all simplices of `k` are simplices of `l`.
    pub fn is_simplicial(&self, k: &SimplicialComplex, l: &SimplicialComplex) -> bool {
        self.image.len() == k.num_vertices() && k.facets().iter().all(|f| l.contains(&self.apply_set(f)))
    }

    /// Simplicial and injective on every facet (hence on every simplex).
    pub fn is_nondegenerate(&self, k: &SimplicialComplex, l: &SimplicialComplex) -> bool {
        self.is_simplicial(k, l) && k.facets().iter().all(|f| self.is_injective_on(f))
    }

    /// Every top cube of `k` is carried isomorphically onto a cube of `l`.
    pub fn is_nondegenerate_cubical(&self, k: &CubicalComplex, l: &CubicalComplex) -> bool {
        if self.image.len() != k.vertices().len() || k.dim() > l.dim() {
            return false;
        }
        k.cubes().iter().all(|c| {
            let img: Vec<usize> = c.corners().iter().map(|&v| self.image[v]).collect();
            let set = self.apply_set(c.corners());
            if set.len() != img.len() {
                return false;
            }
            match l.face_id(&set) {
                Some((d, i)) if d == k.dim() => {
                    let mapped = crate::cubical::Cube::new(img);
                    mapped.edges() == l.faces_of_dim(d)[i].edges()
                }
                _ => false,
            }
        })
    }
}

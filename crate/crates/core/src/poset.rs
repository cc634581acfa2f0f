//! Finite posets given by cover relations, face posets, and order complexes.

use std::collections::HashMap;

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::vertex::VertexId;

/// A finite poset on `0..n` stored by its Hasse diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    rank: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl Poset {
    /// `up[i]` lists the elements covering `i`; `rank[i]` is a grading hint
    /// used only for reporting.
    pub fn from_covers(rank: Vec<usize>, mut up: Vec<Vec<usize>>) -> Self {
        let n = up.len();
        assert_eq!(rank.len(), n);
        let mut down = vec![Vec::new(); n];
        for (i, us) in up.iter_mut().enumerate() {
            us.sort_unstable();
            us.dedup();
            for &j in us.iter() {
                down[j].push(i);
            }
        }
        Poset { rank, up, down }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    /// Largest rank plus one (the number of rank levels), 0 when empty.
    pub fn height(&self) -> usize {
        self.rank.iter().map(|r| r + 1).max().unwrap_or(0)
    }

    /// Number of elements of each rank.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.height()];
        for &r in &self.rank {
            c[r] += 1;
        }
        c
    }

    /// `a <= b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut stack = vec![a];
        let mut seen = vec![false; self.len()];
        while let Some(x) = stack.pop() {
            for &y in &self.up[x] {
                if y == b {
                    return true;
                }
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// All maximal chains, each listed bottom-up, in lexicographic DFS order.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chain = Vec::new();
        for m in 0..self.len() {
            if self.down[m].is_empty() {
                self.extend_chains(m, &mut chain, &mut out);
            }
        }
        out
    }

    fn extend_chains(&self, x: usize, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        chain.push(x);
        if self.up[x].is_empty() {
            out.push(chain.clone());
        } else {
            for &y in &self.up[x] {
                self.extend_chains(y, chain, out);
            }
        }
        chain.pop();
    }

    /// The order complex: vertices are the elements (labelled by index),
    /// simplices are chains.
    pub fn order_complex(&self) -> SimplicialComplex {
        if self.is_empty() {
            return SimplicialComplex::empty();
        }
        let labels: Vec<VertexId> = (0..self.len()).map(VertexId::from).collect();
        let facets: Vec<Simplex> = self.maximal_chains();
        SimplicialComplex::from_indexed(labels, facets)
    }
}

/// The face poset of a complex: elements are faces (as vertex sets), ordered
/// by containment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoset {
    pub faces: Vec<Vec<usize>>,
    pub poset: Poset,
}

impl FacePoset {
    pub fn of_simplicial(k: &SimplicialComplex) -> Self {
        let faces = k.all_faces();
        let index: HashMap<&[usize], usize> = faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let mut up = vec![Vec::new(); faces.len()];
        for (i, f) in faces.iter().enumerate() {
            for drop in 0..f.len() {
                if f.len() == 1 {
                    break;
                }
                let mut g = f.clone();
                g.remove(drop);
                up[index[g.as_slice()]].push(i);
            }
        }
        let rank = faces.iter().map(|f| f.len() - 1).collect();
        FacePoset { poset: Poset::from_covers(rank, up), faces }
    }

    pub fn of_cubical(k: &CubicalComplex) -> Self {
        let mut faces: Vec<Vec<usize>> = Vec::new();
        let mut rank = Vec::new();
        for j in 0..=k.dim() {
            for c in k.faces_of_dim(j) {
                faces.push(c.vertex_set());
                rank.push(j);
            }
        }
        let index: HashMap<Vec<usize>, usize> = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut up = vec![Vec::new(); faces.len()];
        for j in 1..=k.dim() {
            for c in k.faces_of_dim(j) {
                let me = index[&c.vertex_set()];
                for (f, _, _) in c.faces_with_coords(j - 1) {
                    up[index[&f.vertex_set()]].push(me);
                }
            }
        }
        FacePoset { poset: Poset::from_covers(rank, up), faces }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// Order complex of an explicit poset on `n` elements given by a `<=` predicate.
/// Covers are computed from the predicate, so this is quadratic-to-cubic in `n`.
pub fn order_complex_of<F: Fn(usize, usize) -> bool>(n: usize, rank: impl Fn(usize) -> usize, le: F) -> Result<SimplicialComplex> {
    let mut up = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            if a == b || !le(a, b) {
                continue;
            }
            if le(b, a) {
                return Err(Error::invalid("relation is not antisymmetric"));
            }
            let covered = (0..n).all(|c| c == a || c == b || !(le(a, c) && le(c, b)));
            if covered {
                up[a].push(b);
            }
        }
    }
    let ranks = (0..n).map(rank).collect();
    Ok(Poset::from_covers(ranks, up).order_complex())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_poset_of_edge() {
        let k = SimplicialComplex::new(&[vec!["a", "b"]]).unwrap();
        let p = FacePoset::of_simplicial(&k);
        assert_eq!(p.len(), 3);
        assert_eq!(p.poset.rank_counts(), vec![2, 1]);
        let oc = p.poset.order_complex();
        assert_eq!(oc.f_vector(), vec![3, 2]);
    }

    #[test]
    fn face_poset_of_square() {
        let k = CubicalComplex::new(&[vec![0i64, 1, 2, 3]]).unwrap();
        let p = FacePoset::of_cubical(&k);
        assert_eq!(p.len(), 9);
        assert_eq!(p.poset.rank_counts(), vec![4, 4, 1]);
    }

    #[test]
    fn face_poset_of_c3() {
        let k = SimplicialComplex::new(&[vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]]).unwrap();
        let p = FacePoset::of_simplicial(&k);
        assert_eq!(p.len(), 6);
        assert_eq!(p.poset.height(), 2);
        assert!(p.poset.le(0, 3));
    }

    #[test]
    fn singleton_poset_is_a_point() {
        let p = Poset::from_covers(vec![0], vec![vec![]]);
        assert_eq!(p.order_complex().f_vector(), vec![1]);
    }

    #[test]
    fn order_complex_from_predicate() {
        // divisibility on {1,2,3,6}
        let vals = [1, 2, 3, 6];
        let oc = order_complex_of(4, |i| [0, 1, 1, 2][i], |a, b| vals[b] % vals[a] == 0).unwrap();
        assert_eq!(oc.facets().len(), 2);
        assert_eq!(oc.f_vector(), vec![4, 5, 2]);
    }
}

//! Abstract simplicial complexes given by their facets.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex::{fmt_labels, VertexId};

/// A simplex as a sorted list of vertex indices into the owning complex.
pub type Simplex = Vec<usize>;

/// A finite abstract simplicial complex.
///
/// Vertices are kept in canonical (sorted) label order and simplices refer to
/// them by index. The complex is the downward closure of `facets`; faces are
/// enumerated lazily and cached.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertices: Vec<VertexId>,
    facets: Vec<Simplex>,
    faces: OnceLock<HashSet<Simplex>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds a complex from a list of facets given by labels.
    ///
    /// Facets contained in other facets are dropped.
    pub fn new<V: Into<VertexId> + Clone>(facets: &[Vec<V>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::invalid("facet list is empty"));
        }
        let labelled: Vec<Vec<VertexId>> = facets.iter().map(|f| f.iter().cloned().map(Into::into).collect()).collect();
        let mut all: BTreeSet<VertexId> = BTreeSet::new();
        for f in &labelled {
            if f.is_empty() {
                return Err(Error::invalid("empty facet"));
            }
            let set: BTreeSet<&VertexId> = f.iter().collect();
            if set.len() != f.len() {
                let s: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                return Err(Error::invalid(format!("duplicate vertex in facet {{{}}}", s.join(","))));
            }
            all.extend(f.iter().cloned());
        }
        let vertices: Vec<VertexId> = all.into_iter().collect();
        let index: BTreeMap<&VertexId, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let idx_facets: Vec<Simplex> = labelled.iter().map(|f| f.iter().map(|v| index[v]).collect()).collect();
        Ok(Self::from_indexed(vertices, idx_facets))
    }

    /// Builds a complex over an explicit vertex list. Facet entries index into
    /// `vertices`, which must be sorted and unique. Vertices not covered by any
    /// facet are kept as isolated points.
    pub fn from_indexed(vertices: Vec<VertexId>, facets: Vec<Simplex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let mut fs: Vec<Simplex> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        let mut covered = vec![false; vertices.len()];
        for f in &fs {
            for &v in f {
                covered[v] = true;
            }
        }
        for (v, c) in covered.iter().enumerate() {
            if !c {
                fs.push(vec![v]);
            }
        }
        fs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        fs.dedup();
        let mut kept: Vec<Simplex> = Vec::new();
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for f in fs {
            let pivot = *f.iter().min_by_key(|&&v| by_vertex[v].len()).unwrap();
            if !by_vertex[pivot].iter().any(|&g| is_subset(&f, &kept[g])) {
                for &v in &f {
                    by_vertex[v].push(kept.len());
                }
                kept.push(f);
            }
        }
        kept.sort();
        SimplicialComplex { vertices, facets: kept, faces: OnceLock::new() }
    }

    /// The empty complex (no vertices, no faces).
    pub fn empty() -> Self {
        SimplicialComplex { vertices: Vec::new(), facets: Vec::new(), faces: OnceLock::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Facets in lexicographic order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| f.len() as isize - 1 == d)
    }

    pub fn vertex_index(&self, v: &VertexId) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Resolves a list of labels to a sorted simplex, or fails if a label is unknown.
    pub fn simplex_of(&self, labels: &[VertexId]) -> Result<Simplex> {
        let mut s = Vec::with_capacity(labels.len());
        for l in labels {
            s.push(self.vertex_index(l).ok_or_else(|| Error::invalid(format!("unknown vertex {l}")))?);
        }
        s.sort_unstable();
        s.dedup();
        Ok(s)
    }

    pub fn labels(&self, s: &[usize]) -> Vec<VertexId> {
        s.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn fmt_simplex(&self, s: &[usize]) -> String {
        fmt_labels(&self.vertices, s)
    }

    fn face_set(&self) -> &HashSet<Simplex> {
        self.faces.get_or_init(|| {
            let mut set = HashSet::new();
            for f in &self.facets {
                for_each_nonempty_subset(f, |s| {
                    set.insert(s.to_vec());
                });
            }
            set
        })
    }

    /// True iff `s` (sorted) is a face. The empty simplex is not a face.
    pub fn contains(&self, s: &[usize]) -> bool {
        !s.is_empty() && self.face_set().contains(s)
    }

    /// All non-empty faces, sorted by dimension then lexicographically.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = self.face_set().iter().cloned().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// Faces of dimension `q`, lexicographically sorted.
    pub fn faces_of_dim(&self, q: usize) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = self.face_set().iter().filter(|s| s.len() == q + 1).cloned().collect();
        v.sort();
        v
    }

    /// Numbers of faces by dimension, starting at dimension 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.dim();
        if d < 0 {
            return Vec::new();
        }
        let mut f = vec![0; d as usize + 1];
        for s in self.face_set() {
            f[s.len() - 1] += 1;
        }
        f
    }

    /// The subcomplex of all faces of dimension `<= k`.
    pub fn skeleton(&self, k: usize) -> Result<Self> {
        if self.dim() < 0 || k as isize > self.dim() {
            return Err(Error::invalid(format!("skeleton dimension {k} out of range 0..={}", self.dim())));
        }
        let mut tops: BTreeSet<Simplex> = BTreeSet::new();
        for f in &self.facets {
            if f.len() <= k + 1 {
                tops.insert(f.clone());
            } else {
                for_each_k_subset(f, k + 1, |s| {
                    tops.insert(s.to_vec());
                });
            }
        }
        Ok(Self::from_indexed(self.vertices.clone(), tops.into_iter().collect()))
    }

    /// The vertex-edge graph.
    pub fn one_skeleton_graph(&self) -> Graph {
        let mut g = Graph::new(self.vertices.len());
        for f in &self.facets {
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    g.add_edge(f[i], f[j]);
                }
            }
        }
        g
    }

    /// True iff every clique of the 1-skeleton is a face.
    pub fn is_flag(&self) -> bool {
        self.one_skeleton_graph().maximal_cliques().iter().all(|c| self.contains(c))
    }

    /// The complex generated by a subset of the facets (indices into `facets()`),
    /// keeping the full vertex list.
    pub fn sub_by_facets(&self, which: &[usize]) -> Self {
        let fs: Vec<Simplex> = which.iter().map(|&i| self.facets[i].clone()).collect();
        let used: BTreeSet<usize> = fs.iter().flatten().copied().collect();
        let verts: Vec<usize> = used.into_iter().collect();
        let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels: Vec<VertexId> = verts.iter().map(|&v| self.vertices[v].clone()).collect();
        let fs = fs.into_iter().map(|f| f.into_iter().map(|v| pos[&v]).collect()).collect();
        Self::from_indexed(labels, fs)
    }

    /// The subcomplex induced on a vertex subset (all faces spanned by it).
    pub fn induced(&self, verts: &[usize]) -> Self {
        let keep: BTreeSet<usize> = verts.iter().copied().collect();
        let order: Vec<usize> = keep.iter().copied().collect();
        let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels: Vec<VertexId> = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let mut tops: BTreeSet<Simplex> = BTreeSet::new();
        for f in &self.facets {
            let part: Simplex = f.iter().filter(|v| keep.contains(v)).map(|v| pos[v]).collect();
            if !part.is_empty() {
                tops.insert(part);
            }
        }
        Self::from_indexed(labels, tops.into_iter().collect())
    }

    /// Relabels every vertex through `f`. The relabelling must be injective.
    pub fn relabel(&self, f: impl Fn(&VertexId) -> VertexId) -> Result<Self> {
        let facets: Vec<Vec<VertexId>> = self.facets.iter().map(|s| s.iter().map(|&v| f(&self.vertices[v])).collect()).collect();
        let out = if facets.is_empty() { Self::empty() } else { Self::new(&facets)? };
        if out.num_vertices() != self.num_vertices() {
            return Err(Error::invalid("relabelling is not injective"));
        }
        Ok(out)
    }

    /// Pushout of `self` and `other` along a partial vertex bijection
    /// `identification` (pairs of a label of `self` and a label of `other`).
    ///
    /// Vertices of `other` that are not identified keep their label unless it
    /// collides with a label of `self`, in which case a `'` is appended until unique.
    pub fn glue(&self, other: &Self, identification: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut fwd: BTreeMap<usize, usize> = BTreeMap::new();
        let mut back: BTreeMap<usize, usize> = BTreeMap::new();
        for (a, b) in identification {
            let ia = self.vertex_index(a).ok_or_else(|| Error::invalid(format!("unknown vertex {a} in first complex")))?;
            let ib = other.vertex_index(b).ok_or_else(|| Error::invalid(format!("unknown vertex {b} in second complex")))?;
            if fwd.insert(ia, ib).is_some_and(|prev| prev != ib) || back.insert(ib, ia).is_some_and(|prev| prev != ia) {
                return Err(Error::invalid("identification is not injective"));
            }
        }
        // The identified parts must be isomorphic induced subcomplexes.
        let dom: Vec<usize> = fwd.keys().copied().collect();
        let img: Vec<usize> = back.keys().copied().collect();
        let faces1: BTreeSet<Simplex> = self
            .induced(&dom)
            .all_faces()
            .iter()
            .map(|s| {
                let mut t: Simplex = s.iter().map(|&p| fwd[&dom[p]]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        let faces2: BTreeSet<Simplex> = other.induced(&img).all_faces().iter().map(|s| s.iter().map(|&p| img[p]).collect()).collect();
        if faces1 != faces2 {
            return Err(Error::invalid("identified parts are not isomorphic subcomplexes"));
        }

        let mut used: BTreeSet<VertexId> = self.vertices.iter().cloned().collect();
        let mut rename: Vec<VertexId> = Vec::with_capacity(other.num_vertices());
        for (i, l) in other.vertices.iter().enumerate() {
            if let Some(&a) = back.get(&i) {
                rename.push(self.vertices[a].clone());
            } else {
                let mut cand = l.clone();
                while used.contains(&cand) {
                    cand = VertexId::Name(format!("{cand}'"));
                }
                used.insert(cand.clone());
                rename.push(cand);
            }
        }
        let mut facets: Vec<Vec<VertexId>> = self.facets.iter().map(|f| self.labels(f)).collect();
        facets.extend(other.facets.iter().map(|f| f.iter().map(|&v| rename[v].clone()).collect()));
        if facets.is_empty() {
            return Ok(Self::empty());
        }
        Self::new(&facets)
    }
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Calls `f` on every non-empty subset of `s` (preserving order).
pub(crate) fn for_each_nonempty_subset(s: &[usize], mut f: impl FnMut(&[usize])) {
    let n = s.len();
    assert!(n < 31, "simplex too large for face enumeration");
    let mut buf = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        buf.clear();
        for (i, &v) in s.iter().enumerate() {
            if mask & (1 << i) != 0 {
                buf.push(v);
            }
        }
        f(&buf);
    }
}

/// Calls `f` on every `k`-element subset of `s` in lexicographic order.
pub(crate) fn for_each_k_subset(s: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(s: &[usize], k: usize, start: usize, buf: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for i in start..s.len() {
            if s.len() - i < k - buf.len() {
                break;
            }
            buf.push(s[i]);
            rec(s, k, i + 1, buf, f);
            buf.pop();
        }
    }
    if k <= s.len() {
        rec(s, k, 0, &mut Vec::with_capacity(k), &mut f);
    }
}

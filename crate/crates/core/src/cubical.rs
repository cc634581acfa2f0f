//! Pure cubical complexes with vertex-determined cells.
//!
//! A cube of dimension `k` is stored as an array of `2^k` corners where
//! position `i` holds the corner at binary coordinate `(b_0, …, b_{k-1})` with
//! `i = Σ b_j 2^j`. The stored order is the cube's frame: it fixes a
//! coordinate system used by the signed-permutation representation of
//! holonomy.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::vertex::{fmt_labels, VertexId};

/// A coordinatized cube over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    corners: Vec<usize>,
}

impl Cube {
    /// Panics unless the corner count is a power of two.
    pub fn new(corners: Vec<usize>) -> Self {
        assert!(corners.len().is_power_of_two(), "cube corner count must be a power of two");
        Cube { corners }
    }

    pub fn dim(&self) -> usize {
        self.corners.len().trailing_zeros() as usize
    }

    pub fn corners(&self) -> &[usize] {
        &self.corners
    }

    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v = self.corners.clone();
        v.sort_unstable();
        v
    }

    /// Position of vertex `v` among the corners.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.corners.iter().position(|&c| c == v)
    }

    /// The face with free axes `free` (ascending) and the remaining axes fixed
    /// to the bits of `base` (free-axis bits of `base` must be zero).
    pub fn face(&self, free: &[usize], base: usize) -> Cube {
        let mut corners = Vec::with_capacity(1 << free.len());
        for s in 0..(1usize << free.len()) {
            let mut idx = base;
            for (t, &ax) in free.iter().enumerate() {
                if s & (1 << t) != 0 {
                    idx |= 1 << ax;
                }
            }
            corners.push(self.corners[idx]);
        }
        Cube { corners }
    }

    /// All faces of dimension `j` together with their (free-axis mask, base).
    pub fn faces_with_coords(&self, j: usize) -> Vec<(Cube, usize, usize)> {
        let k = self.dim();
        let mut out = Vec::new();
        for free_mask in 0..(1usize << k) {
            if free_mask.count_ones() as usize != j {
                continue;
            }
            let free: Vec<usize> = (0..k).filter(|a| free_mask & (1 << a) != 0).collect();
            for base in 0..(1usize << k) {
                if base & free_mask != 0 {
                    continue;
                }
                out.push((self.face(&free, base), free_mask, base));
            }
        }
        out
    }

    /// Edges as sorted vertex pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.dim();
        let mut out = Vec::new();
        for i in 0..self.corners.len() {
            for j in 0..k {
                if i & (1 << j) == 0 {
                    let (a, b) = (self.corners[i], self.corners[i | (1 << j)]);
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A pure cubical complex given by its top cubes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalComplex {
    vertices: Vec<VertexId>,
    dim: usize,
    cubes: Vec<Cube>,
    /// Distinct faces per dimension, sorted by vertex set.
    faces: Vec<Vec<Cube>>,
    index: HashMap<Vec<usize>, (usize, usize)>,
}

impl CubicalComplex {
    /// Builds and validates a pure cubical complex from corner arrays.
    ///
    /// Rejects non-power-of-two arrays, mixed dimensions, repeated corners,
    /// faces sharing a vertex set with different cube structure, and
    /// violations of the semilattice axiom (a bounded pair of faces without a
    /// least upper bound).
    pub fn new<V: Into<VertexId> + Clone>(cubes: &[Vec<V>]) -> Result<Self> {
        if cubes.is_empty() {
            return Err(Error::invalid("cube list is empty"));
        }
        let labelled: Vec<Vec<VertexId>> = cubes.iter().map(|c| c.iter().cloned().map(Into::into).collect()).collect();
        let show = |c: &[VertexId]| -> String {
            let s: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            format!("[{}]", s.join(","))
        };
        let len = labelled[0].len();
        for c in &labelled {
            if !c.len().is_power_of_two() {
                return Err(Error::invalid(format!("cube {} has {} corners, not a power of two", show(c), c.len())));
            }
            if c.len() != len {
                return Err(Error::invalid(format!("cube {} has dimension different from the first cube", show(c))));
            }
            let set: BTreeSet<&VertexId> = c.iter().collect();
            if set.len() != c.len() {
                return Err(Error::invalid(format!("cube {} repeats a corner", show(c))));
            }
        }
        let vertices: Vec<VertexId> = labelled.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: BTreeMap<&VertexId, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let tops: Vec<Cube> = labelled.iter().map(|c| Cube::new(c.iter().map(|v| pos[v]).collect())).collect();
        Self::from_cubes(vertices, tops)
    }

    /// Builds from index-based cubes over a sorted vertex list and validates.
    pub fn from_cubes(vertices: Vec<VertexId>, tops: Vec<Cube>) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::invalid("cube list is empty"));
        }
        let dim = tops[0].dim();
        if tops.iter().any(|c| c.dim() != dim) {
            return Err(Error::invalid("cubes of mixed dimension"));
        }
        let show = |c: &Cube| fmt_labels(&vertices, c.corners());

        // Face id -> representative, with structure check.
        let mut index: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        let mut reps: Vec<Vec<Cube>> = vec![Vec::new(); dim + 1];
        let mut edge_sets: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); dim + 1];
        let mut cube_faces: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(tops.len());
        let mut unique_tops: Vec<Cube> = Vec::new();
        for top in &tops {
            let mut local = Vec::new();
            let mut duplicate = false;
            for j in 0..=dim {
                for (f, free_mask, base) in top.faces_with_coords(j) {
                    let vs = f.vertex_set();
                    let edges = f.edges();
                    let id = match index.get(&vs) {
                        Some(&(d, i)) => {
                            if d != j || edge_sets[d][i] != edges {
                                return Err(Error::invalid(format!(
                                    "face {} of cube {} conflicts with an existing face on the same vertices",
                                    show(&f),
                                    show(top)
                                )));
                            }
                            if j == dim {
                                duplicate = true;
                            }
                            i
                        }
                        None => {
                            let i = reps[j].len();
                            index.insert(vs, (j, i));
                            reps[j].push(f);
                            edge_sets[j].push(edges);
                            i
                        }
                    };
                    local.push((flat_id(j, id), free_mask, base));
                }
            }
            if !duplicate {
                unique_tops.push(top.clone());
                cube_faces.push(local);
            }
        }

        // Semilattice axiom: for every pair of faces lying in a common top cube,
        // the joins computed inside each such cube must have a least element.
        let mut flat_sets: HashMap<usize, Vec<usize>> = HashMap::new();
        for (j, rs) in reps.iter().enumerate() {
            for (i, r) in rs.iter().enumerate() {
                flat_sets.insert(flat_id(j, i), r.vertex_set());
            }
        }
        let mut joins: HashMap<(usize, usize), BTreeSet<usize>> = HashMap::new();
        for local in &cube_faces {
            let by_coords: HashMap<(usize, usize), usize> = local.iter().map(|&(id, m, b)| ((m, b), id)).collect();
            for a in 0..local.len() {
                for b in a + 1..local.len() {
                    let (ia, ma, ba) = local[a];
                    let (ib, mb, bb) = local[b];
                    // join: free axes = union of free axes plus axes where the fixed values differ
                    let full = (1usize << dim) - 1;
                    let fixed = full & !ma & !mb;
                    let agree = fixed & !(ba ^ bb);
                    let jm = full & !agree;
                    let jb = ba & agree;
                    let jid = by_coords[&(jm, jb)];
                    joins.entry((ia.min(ib), ia.max(ib))).or_default().insert(jid);
                }
            }
        }
        for ((a, b), js) in &joins {
            if js.len() < 2 {
                continue;
            }
            let least = js.iter().find(|&&c| js.iter().all(|&d| crate::simplicial::is_subset(&flat_sets[&c], &flat_sets[&d])));
            if least.is_none() {
                return Err(Error::invalid(format!(
                    "semilattice violation: faces {} and {} have no least upper bound",
                    fmt_labels(&vertices, &flat_sets[a]),
                    fmt_labels(&vertices, &flat_sets[b])
                )));
            }
        }

        let mut cubes = unique_tops;
        cubes.sort_by_key(|c| c.vertex_set());
        // Re-sort face lists by vertex set and rebuild the index.
        let mut faces = reps;
        let mut index = HashMap::new();
        for (j, fs) in faces.iter_mut().enumerate() {
            fs.sort_by_key(|c| c.vertex_set());
            for (i, f) in fs.iter().enumerate() {
                index.insert(f.vertex_set(), (j, i));
            }
        }
        // Top-dimensional faces keep the frames of the given cubes.
        faces[dim] = cubes.clone();
        Ok(CubicalComplex { vertices, dim, cubes, faces, index })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Top cubes, sorted by vertex set, each with its stored frame.
    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    /// Distinct faces of dimension `j`.
    pub fn faces_of_dim(&self, j: usize) -> &[Cube] {
        &self.faces[j]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Looks up a face by its (sorted) vertex set, returning `(dim, index)`.
    pub fn face_id(&self, vertex_set: &[usize]) -> Option<(usize, usize)> {
        self.index.get(vertex_set).copied()
    }

    pub fn vertex_index(&self, v: &VertexId) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn labels(&self, s: &[usize]) -> Vec<VertexId> {
        s.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn fmt_cube(&self, c: &Cube) -> String {
        fmt_labels(&self.vertices, c.corners())
    }

    /// The `k`-skeleton as a pure cubical complex whose top cells are the `k`-faces.
    pub fn skeleton(&self, k: usize) -> Result<Self> {
        if k > self.dim {
            return Err(Error::invalid(format!("skeleton dimension {k} out of range 0..={}", self.dim)));
        }
        if k == self.dim {
            return Ok(self.clone());
        }
        Self::from_cubes(self.vertices.clone(), self.faces[k].clone())
    }

    /// The subcomplex generated by the given top cubes (indices into `cubes()`).
    pub fn sub_by_cubes(&self, which: &[usize]) -> Result<Self> {
        let used: BTreeSet<usize> = which.iter().flat_map(|&i| self.cubes[i].corners().iter().copied()).collect();
        let order: Vec<usize> = used.into_iter().collect();
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let labels = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let cubes = which.iter().map(|&i| Cube::new(self.cubes[i].corners().iter().map(|v| pos[v]).collect())).collect();
        Self::from_cubes(labels, cubes)
    }

    /// Replaces the frame of top cube `i` by `corners` (a re-coordinatization of
    /// the same cube). Fails if the structure changes.
    pub fn with_frame(&self, i: usize, corners: Vec<usize>) -> Result<Self> {
        let c = Cube::new(corners);
        if c.vertex_set() != self.cubes[i].vertex_set() || c.edges() != self.cubes[i].edges() {
            return Err(Error::invalid("new frame is not a re-coordinatization of the cube"));
        }
        let mut cubes = self.cubes.clone();
        cubes[i] = c;
        let mut out = self.clone();
        out.faces[self.dim] = cubes.clone();
        out.cubes = cubes;
        Ok(out)
    }
}

fn flat_id(j: usize, i: usize) -> usize {
    (j << 40) | i
}

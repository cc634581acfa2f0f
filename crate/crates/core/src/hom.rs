//! `Hom(K, L)`: the cell complex of multivalued vertex maps.
//!
//! A cell is a function `η: V(K) → 2^{V(L)} ∖ {∅}` stored as one bitmask per
//! vertex of `K`. It must satisfy
//!
//! 1. `η(u) ∩ η(v) = ∅` for every edge `{u, v}` of `K`, and
//! 2. for every simplex `σ` of `K`, every choice of one vertex from each
//!    block `η(v)`, `v ∈ σ`, spans a simplex of `L` (the join of the blocks
//!    lies in `L`).
//!
//! The cell `η` is the product of simplices `Π_v Δ^{η(v)}`, of dimension
//! `Σ_v (|η(v)| − 1)`; its faces shrink blocks.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::groupoid::{compose_path, FacetComplex, Projectivity};
use crate::maps::VertexMap;
use crate::poset::Poset;
use crate::simplicial::SimplicialComplex;
use crate::vertex::VertexId;

/// Default cap on the number of cells enumerated.
pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_MAX_CELLS`].
pub const MAX_CELLS_ENV: &str = "HOLONOMY_MAX_CELLS";

/// The cell cap in force: `HOLONOMY_MAX_CELLS` if set to a number, else the default.
pub fn max_cells_from_env() -> usize {
    std::env::var(MAX_CELLS_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_CELLS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomOptions {
    /// Skip cells above this dimension.
    pub max_dim: Option<usize>,
    pub max_cells: usize,
}

impl Default for HomOptions {
    fn default() -> Self {
        HomOptions { max_dim: None, max_cells: max_cells_from_env() }
    }
}

#[derive(Debug)]
pub struct HomComplex {
    source: Vec<VertexId>,
    target: Vec<VertexId>,
    /// Cells in enumeration order, `stride` masks each.
    data: Vec<u64>,
    stride: usize,
    index: OnceLock<HashMap<Vec<u64>, usize>>,
}

impl Clone for HomComplex {
    fn clone(&self) -> Self {
        HomComplex {
            source: self.source.clone(),
            target: self.target.clone(),
            data: self.data.clone(),
            stride: self.stride,
            index: OnceLock::new(),
        }
    }
}

impl PartialEq for HomComplex {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.data == other.data
    }
}

fn mask_elems(m: u64) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let b = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(b)
    })
}

struct Enumerator<'a> {
    /// For vertex `v` of K: facets containing `v`, each as the list of their
    /// vertices smaller than `v`.
    earlier: Vec<Vec<Vec<usize>>>,
    /// Whether `v` has a neighbour later in the order.
    has_later: Vec<bool>,
    l_facets: Vec<u64>,
    nbr: Vec<u64>,
    all: u64,
    face_memo: HashMap<u64, bool>,
    ext_memo: HashMap<u64, u64>,
    opts: HomOptions,
    out: &'a mut Vec<u64>,
    count: usize,
}

impl Enumerator<'_> {
    fn is_face(&mut self, m: u64) -> bool {
        if let Some(&b) = self.face_memo.get(&m) {
            return b;
        }
        let b = self.l_facets.iter().any(|&f| f & m == m);
        self.face_memo.insert(m, b);
        b
    }

    /// Vertices `x ∉ t` with `t ∪ {x}` a face of `L`.
    fn extensions(&mut self, t: u64) -> u64 {
        if let Some(&e) = self.ext_memo.get(&t) {
            return e;
        }
        let mut e = 0;
        for x in mask_elems(self.all & !t) {
            if self.is_face(t | (1 << x)) {
                e |= 1 << x;
            }
        }
        self.ext_memo.insert(t, e);
        e
    }

    fn allowed(&mut self, v: usize, eta: &[u64]) -> u64 {
        let mut a = self.all;
        for f in 0..self.earlier[v].len() {
            let blocks: Vec<u64> = self.earlier[v][f].iter().map(|&u| eta[u]).collect();
            // every transversal of the earlier blocks
            let mut stack: Vec<(usize, u64)> = vec![(0, 0)];
            while let Some((i, t)) = stack.pop() {
                if a == 0 {
                    return 0;
                }
                if i == blocks.len() {
                    a &= self.extensions(t);
                    continue;
                }
                for x in mask_elems(blocks[i]) {
                    stack.push((i + 1, t | (1 << x)));
                }
            }
        }
        a
    }

    fn candidates(&self, v: usize, a: u64, budget: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let elems: Vec<usize> = mask_elems(a).collect();
        // DFS over subsets, pruning when later neighbours would have no room
        let mut stack: Vec<(usize, u64, u64)> = vec![(0, 0, self.all)];
        while let Some((i, s, common)) = stack.pop() {
            if s != 0 {
                out.push(s);
            }
            if s.count_ones() as usize > budget {
                continue;
            }
            for j in (i..elems.len()).rev() {
                let x = elems[j];
                let c = common & self.nbr[x];
                if self.has_later[v] && c == 0 {
                    continue;
                }
                stack.push((j + 1, s | (1 << x), c));
            }
        }
        out.sort_by_key(|&s| (s.count_ones(), mask_elems(s).collect::<Vec<_>>()));
        out
    }

    fn run(&mut self, v: usize, eta: &mut Vec<u64>, dim: usize) -> Result<()> {
        if v == eta.len() {
            self.count += 1;
            if self.count > self.opts.max_cells {
                return Err(Error::SizeLimit(format!(
                    "Hom complex has more than {} cells (raise {MAX_CELLS_ENV} to allow more)",
                    self.opts.max_cells
                )));
            }
            self.out.extend_from_slice(eta);
            return Ok(());
        }
        let a = self.allowed(v, eta);
        if a == 0 {
            return Ok(());
        }
        let budget = self.opts.max_dim.map_or(usize::MAX, |m| m - dim);
        for s in self.candidates(v, a, budget) {
            let extra = s.count_ones() as usize - 1;
            if self.opts.max_dim.is_some_and(|m| dim + extra > m) {
                continue;
            }
            eta[v] = s;
            self.run(v + 1, eta, dim + extra)?;
        }
        eta[v] = 0;
        Ok(())
    }
}

impl HomComplex {
    pub fn new(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Self> {
        Self::with_options(k, l, HomOptions::default())
    }

    pub fn with_options(k: &SimplicialComplex, l: &SimplicialComplex, opts: HomOptions) -> Result<Self> {
        let nl = l.num_vertices();
        if nl > 64 {
            return Err(Error::SizeLimit(format!("target has {nl} vertices; at most 64 are supported")));
        }
        let nk = k.num_vertices();
        let mut earlier = vec![Vec::new(); nk];
        let mut has_later = vec![false; nk];
        for f in k.facets() {
            for (i, &v) in f.iter().enumerate() {
                let before: Vec<usize> = f[..i].to_vec();
                if !before.is_empty() {
                    earlier[v].push(before);
                }
                if i + 1 < f.len() {
                    has_later[v] = true;
                }
            }
        }
        let l_facets: Vec<u64> = l.facets().iter().map(|f| f.iter().fold(0u64, |m, &x| m | (1 << x))).collect();
        let mut nbr = vec![0u64; nl];
        for &f in &l_facets {
            for x in mask_elems(f) {
                nbr[x] |= f & !(1 << x);
            }
        }
        let all = if nl == 64 { u64::MAX } else { (1u64 << nl) - 1 };
        let mut data = Vec::new();
        if nk > 0 && nl > 0 {
            let mut en = Enumerator {
                earlier,
                has_later,
                l_facets,
                nbr,
                all,
                face_memo: HashMap::new(),
                ext_memo: HashMap::new(),
                opts,
                out: &mut data,
                count: 0,
            };
            let mut eta = vec![0u64; nk];
            en.run(0, &mut eta, 0)?;
        }
        Ok(HomComplex { source: k.vertices().to_vec(), target: l.vertices().to_vec(), data, stride: nk.max(1), index: OnceLock::new() })
    }

    pub fn source_vertices(&self) -> &[VertexId] {
        &self.source
    }

    pub fn target_vertices(&self) -> &[VertexId] {
        &self.target
    }

    pub fn len(&self) -> usize {
        if self.source.is_empty() {
            0
        } else {
            self.data.len() / self.stride
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Blocks of cell `i`, one bitmask over `V(L)` per vertex of `K`.
    pub fn cell(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn cell_dim(&self, i: usize) -> usize {
        self.cell(i).iter().map(|m| m.count_ones() as usize - 1).sum()
    }

    /// Top cell dimension, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        (0..self.len()).map(|i| self.cell_dim(i)).max()
    }

    /// Number of cells in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for i in 0..self.len() {
            f[self.cell_dim(i)] += 1;
        }
        f
    }

    pub fn index_of(&self, eta: &[u64]) -> Option<usize> {
        self.index.get_or_init(|| (0..self.len()).map(|i| (self.cell(i).to_vec(), i)).collect()).get(eta).copied()
    }

    /// The cell as a label map `v ↦ η(v)`.
    pub fn eta_labels(&self, i: usize) -> BTreeMap<VertexId, Vec<VertexId>> {
        self.cell(i)
            .iter()
            .enumerate()
            .map(|(v, &m)| (self.source[v].clone(), mask_elems(m).map(|x| self.target[x].clone()).collect()))
            .collect()
    }

    /// The 0-cells as vertex maps `K → L`.
    pub fn vertex_maps(&self) -> Vec<VertexMap> {
        (0..self.len())
            .filter(|&i| self.cell_dim(i) == 0)
            .map(|i| VertexMap::new(self.cell(i).iter().map(|m| m.trailing_zeros() as usize).collect()))
            .collect()
    }

    /// Codimension-one faces of cell `i` with their cellular boundary signs.
    pub fn boundary(&self, i: usize) -> Vec<(usize, i64)> {
        let eta = self.cell(i);
        let mut out = Vec::new();
        let mut before = 0usize;
        let mut face = eta.to_vec();
        for (v, &m) in eta.iter().enumerate() {
            let size = m.count_ones() as usize;
            if size >= 2 {
                for (j, x) in mask_elems(m).enumerate() {
                    face[v] = m & !(1 << x);
                    let id = self.index_of(&face).expect("Hom complexes are closed under shrinking blocks");
                    let sign = if (before + j).is_multiple_of(2) { 1 } else { -1 };
                    out.push((id, sign));
                }
                face[v] = m;
            }
            before += size - 1;
        }
        out
    }

    /// Cell poset ordered by blockwise containment.
    pub fn poset(&self) -> Poset {
        let n = self.len();
        let mut up = vec![Vec::new(); n];
        for i in 0..n {
            for (f, _) in self.boundary(i) {
                up[f].push(i);
            }
        }
        Poset::from_covers((0..n).map(|i| self.cell_dim(i)).collect(), up)
    }

    /// Order complex of the cell poset (a barycentric subdivision); vertex
    /// `i` is cell `i`.
    pub fn order_complex(&self) -> SimplicialComplex {
        self.poset().order_complex()
    }
}

/// The non-degenerate maps `K → L` in canonical order.
pub fn hom0(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Vec<VertexMap>> {
    let h = HomComplex::with_options(k, l, HomOptions { max_dim: Some(0), ..HomOptions::default() })?;
    Ok(h.vertex_maps())
}

/// A map of Hom cells: `image[i]` is the image of cell `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    pub image: Vec<usize>,
}

impl CellMap {
    pub fn then(&self, next: &CellMap) -> CellMap {
        CellMap { image: self.image.iter().map(|&c| next.image[c]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// The induced simplicial map of order complexes.
    pub fn as_vertex_map(&self) -> VertexMap {
        VertexMap::new(self.image.clone())
    }

    /// Whether `x ≤ y` implies `image[x] ≤ image[y]`, checked on covers.
    pub fn is_order_preserving(&self, from: &HomComplex, to: &HomComplex) -> bool {
        (0..from.len()).all(|i| {
            from.boundary(i).iter().all(|&(f, _)| {
                let (a, b) = (to.cell(self.image[f]), to.cell(self.image[i]));
                a.iter().zip(b).all(|(x, y)| x & y == *x)
            })
        })
    }
}

fn map_cells(from: &HomComplex, to: &HomComplex, f: impl Fn(&[u64]) -> Vec<u64>) -> Result<CellMap> {
    let mut image = Vec::with_capacity(from.len());
    for i in 0..from.len() {
        let eta = f(from.cell(i));
        let j = to.index_of(&eta).ok_or_else(|| Error::invalid("image of a cell is not a cell of the target Hom complex"))?;
        image.push(j);
    }
    Ok(CellMap { image })
}

/// `f̂: Hom(K′, L) → Hom(K, L)`, `η ↦ η ∘ f`, for a non-degenerate `f: K → K′`.
pub fn induced_precompose(
    f: &VertexMap,
    k: &SimplicialComplex,
    k2: &SimplicialComplex,
    hom_k2: &HomComplex,
    hom_k: &HomComplex,
) -> Result<CellMap> {
    if !f.is_nondegenerate(k, k2) {
        return Err(Error::Degenerate("precomposition needs a non-degenerate map".into()));
    }
    map_cells(hom_k2, hom_k, |eta| f.image.iter().map(|&w| eta[w]).collect())
}

/// `ĝ: Hom(K, L) → Hom(K, L′)`, `η ↦ g ∘ η`, for a non-degenerate `g: L → L′`.
pub fn induced_postcompose(
    g: &VertexMap,
    l: &SimplicialComplex,
    l2: &SimplicialComplex,
    hom_l: &HomComplex,
    hom_l2: &HomComplex,
) -> Result<CellMap> {
    if !g.is_nondegenerate(l, l2) {
        return Err(Error::Degenerate("postcomposition needs a non-degenerate map".into()));
    }
    map_cells(hom_l, hom_l2, |eta| eta.iter().map(|&m| mask_elems(m).fold(0u64, |acc, x| acc | (1 << g.image[x]))).collect())
}

/// Parallel transport along a facet path: the fibre is `Hom(Δ^d, L)` in
/// facet-position coordinates, and the path's projectivity `p: σ_first →
/// σ_last` acts by `η ↦ η ∘ p`, carrying the fibre over `σ_last` to the
/// fibre over `σ_first`.
#[derive(Debug, Clone)]
pub struct Transport {
    pub projectivity: Projectivity,
    pub fiber: HomComplex,
    pub map: CellMap,
}

pub fn transport(k: &SimplicialComplex, l: &SimplicialComplex, path: &[usize]) -> Result<Transport> {
    let d = k.pure_dim()?;
    let p = compose_path(k, path)?;
    let fiber = HomComplex::new(&crate::generate::simplex(d), l)?;
    let map = transport_on(&fiber, &p.perm)?;
    Ok(Transport { projectivity: p, fiber, map })
}

/// The cell map `η ↦ η ∘ p` on a fibre `Hom(Δ^d, L)`.
pub fn transport_on(fiber: &HomComplex, p: &[usize]) -> Result<CellMap> {
    map_cells(fiber, fiber, |eta| p.iter().map(|&j| eta[j]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete_graph, cycle, simplex, simplex_on};

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn hexagon() {
        let h = HomComplex::new(&complete_graph(2).unwrap(), &complete_graph(3).unwrap()).unwrap();
        assert_eq!(h.len(), 12);
        assert_eq!(h.f_vector(), vec![6, 6]);
    }

    #[test]
    fn hom_k2_kn_counts() {
        for n in 3..=5 {
            let want: usize = (1..n).map(|a| (1..=n - a).map(|b| binom(n, a) * binom(n - a, b)).sum::<usize>()).sum();
            let h = HomComplex::new(&complete_graph(2).unwrap(), &complete_graph(n).unwrap()).unwrap();
            assert_eq!(h.len(), want, "n={n}");
        }
    }

    #[test]
    fn edge_into_edge() {
        let h = HomComplex::new(&simplex(1), &simplex(1)).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.dim(), Some(0));
    }

    #[test]
    fn hom0_examples() {
        assert_eq!(hom0(&complete_graph(2).unwrap(), &complete_graph(3).unwrap()).unwrap().len(), 6);
        assert!(hom0(&cycle(5).unwrap(), &complete_graph(2).unwrap()).unwrap().is_empty());
        // injections of d+1 points into m
        for (d, m) in [(1, 3), (2, 4), (2, 5)] {
            let want = (m - d..=m).product::<usize>();
            assert_eq!(hom0(&simplex(d), &simplex_on(m).unwrap()).unwrap().len(), want);
        }
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let h = HomComplex::new(&complete_graph(2).unwrap(), &complete_graph(3).unwrap()).unwrap();
        let first: Vec<Vec<u64>> = (0..3).map(|i| h.cell(i).to_vec()).collect();
        assert_eq!(first, vec![vec![0b001, 0b010], vec![0b001, 0b100], vec![0b001, 0b110]]);
    }

    #[test]
    fn downward_closed_and_boundary_squares_to_zero() {
        let h = HomComplex::new(&complete_graph(2).unwrap(), &complete_graph(4).unwrap()).unwrap();
        for i in 0..h.len() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (f, s) in h.boundary(i) {
                for (g, t) in h.boundary(f) {
                    *acc.entry(g).or_default() += s * t;
                }
            }
            assert!(acc.values().all(|&v| v == 0));
        }
    }

    #[test]
    fn size_guard() {
        let opts = HomOptions { max_dim: None, max_cells: 10 };
        let r = HomComplex::with_options(&complete_graph(2).unwrap(), &complete_graph(4).unwrap(), opts);
        assert!(matches!(r, Err(Error::SizeLimit(_))));
    }

    #[test]
    fn max_dim_truncates() {
        let opts = HomOptions { max_dim: Some(1), max_cells: 1000 };
        let h = HomComplex::with_options(&complete_graph(2).unwrap(), &complete_graph(4).unwrap(), opts).unwrap();
        assert_eq!(h.f_vector(), vec![12, 24]);
    }

    #[test]
    fn swap_of_k2_is_an_involution() {
        let k2 = complete_graph(2).unwrap();
        let h = HomComplex::new(&k2, &complete_graph(4).unwrap()).unwrap();
        let beta = induced_precompose(&VertexMap::new(vec![1, 0]), &k2, &k2, &h, &h).unwrap();
        assert!(beta.then(&beta).is_identity());
        assert!(!beta.is_identity());
        assert!(beta.is_order_preserving(&h, &h));
    }

    #[test]
    fn c5_loop_transport_is_the_swap() {
        let c5 = cycle(5).unwrap();
        let k4 = complete_graph(4).unwrap();
        // facets sorted: {0,1},{0,4},{1,2},{2,3},{3,4}; walk 01-12-23-34-40-01
        let t = transport(&c5, &k4, &[0, 2, 3, 4, 1, 0]).unwrap();
        assert_eq!(t.projectivity.perm, vec![1, 0]);
        let k2 = complete_graph(2).unwrap();
        let beta = induced_precompose(&VertexMap::new(vec![1, 0]), &k2, &k2, &t.fiber, &t.fiber).unwrap();
        assert_eq!(t.map, beta);
    }

    #[test]
    fn postcompose_embeds_hexagon() {
        let k2 = complete_graph(2).unwrap();
        let (k3, k4) = (complete_graph(3).unwrap(), complete_graph(4).unwrap());
        let h3 = HomComplex::new(&k2, &k3).unwrap();
        let h4 = HomComplex::new(&k2, &k4).unwrap();
        let g = induced_postcompose(&VertexMap::new(vec![0, 1, 2]), &k3, &k4, &h3, &h4).unwrap();
        let mut img = g.image.clone();
        img.sort_unstable();
        img.dedup();
        assert_eq!(img.len(), 12);
        assert!(induced_postcompose(&VertexMap::new(vec![0, 0, 1]), &k3, &k4, &h3, &h4).is_err());
    }
}

//! The groupoid of flips between adjacent facets and its vertex groups.
//!
//! A projectivity between facets `σ` and `σ'` is stored as a position map:
//! `perm[i]` is the position in `σ'` of the image of the vertex at position
//! `i` of `σ`. Positions are indices into the sorted vertex list for
//! simplicial facets and corner positions of the stored frame for cubes.
//! Composition follows `(x)(f∗g) = g(f(x))`, so a facet path is composed
//! left to right.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::maps::VertexMap;
use crate::perm::{self, IsoClass, Perm};
use crate::simplicial::SimplicialComplex;
use crate::vertex::{fmt_labels, VertexId};

/// Largest holonomy group we are willing to enumerate.
pub const GROUP_LIMIT: usize = 1 << 20;

/// A pure complex seen through its facets.
pub trait FacetComplex {
    fn vertex_labels(&self) -> &[VertexId];
    fn num_facets(&self) -> usize;
    /// Vertices of facet `i` in position order.
    fn facet(&self, i: usize) -> &[usize];
    /// Facet with the given sorted vertex set.
    fn facet_by_set(&self, set: &[usize]) -> Option<usize>;
    /// Common dimension of all facets, or an error for non-pure complexes.
    fn pure_dim(&self) -> Result<usize>;
    /// The flip between two distinct facets sharing a ridge, as a position map.
    fn flip_perm(&self, a: usize, b: usize) -> Result<Perm>;
    /// Vertex sets of the ridges of facet `i`.
    fn ridges_of(&self, i: usize) -> Vec<Vec<usize>>;
    fn is_cubical(&self) -> bool;

    fn fmt_facet(&self, i: usize) -> String {
        fmt_labels(self.vertex_labels(), self.facet(i))
    }

    fn facet_labels(&self, i: usize) -> Vec<VertexId> {
        self.facet(i).iter().map(|&v| self.vertex_labels()[v].clone()).collect()
    }

    /// Finds a facet from labels given in any order.
    fn facet_by_labels(&self, labels: &[VertexId]) -> Result<usize> {
        let mut set = Vec::with_capacity(labels.len());
        for l in labels {
            let i = crate::io::resolve_label(self.vertex_labels(), l).ok_or_else(|| Error::NotAFacet(format!("unknown vertex {l}")))?;
            set.push(i);
        }
        set.sort_unstable();
        set.dedup();
        let shown: Vec<String> = labels.iter().map(ToString::to_string).collect();
        self.facet_by_set(&set).ok_or_else(|| Error::NotAFacet(format!("{{{}}}", shown.join(","))))
    }
}

fn not_adjacent<C: FacetComplex + ?Sized>(k: &C, a: usize, b: usize) -> Error {
    Error::NotAdjacent(k.fmt_facet(a), k.fmt_facet(b))
}

impl FacetComplex for SimplicialComplex {
    fn vertex_labels(&self) -> &[VertexId] {
        self.vertices()
    }

    fn num_facets(&self) -> usize {
        self.facets().len()
    }

    fn facet(&self, i: usize) -> &[usize] {
        &self.facets()[i]
    }

    fn facet_by_set(&self, set: &[usize]) -> Option<usize> {
        self.facets().binary_search_by(|f| f.as_slice().cmp(set)).ok().or_else(|| self.facets().iter().position(|f| f == set))
    }

    fn pure_dim(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::invalid("complex is empty"));
        }
        if !self.is_pure() {
            return Err(Error::invalid("complex is not pure"));
        }
        Ok(self.dim() as usize)
    }

    fn flip_perm(&self, a: usize, b: usize) -> Result<Perm> {
        let (fa, fb) = (&self.facets()[a], &self.facets()[b]);
        if a == b || fa.len() != fb.len() {
            return Err(not_adjacent(self, a, b));
        }
        let shared = fa.iter().filter(|v| fb.binary_search(v).is_ok()).count();
        if shared + 1 != fa.len() {
            return Err(not_adjacent(self, a, b));
        }
        let lone_b = fb.iter().position(|v| fa.binary_search(v).is_err()).expect("one vertex is not shared");
        Ok(fa.iter().map(|v| fb.binary_search(v).unwrap_or(lone_b)).collect())
    }

    fn ridges_of(&self, i: usize) -> Vec<Vec<usize>> {
        let f = &self.facets()[i];
        if f.len() < 2 {
            return Vec::new();
        }
        (0..f.len()).map(|drop| f.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &v)| v).collect()).collect()
    }

    fn is_cubical(&self) -> bool {
        false
    }
}

/// If the corner positions `pos` of a cube of dimension `k` form a facet of it,
/// returns `(axis, bit)` with the facet being `{bit axis = bit}`.
fn facet_coords(pos: &[usize], k: usize) -> Option<(usize, usize)> {
    if k == 0 || pos.len() != 1 << (k - 1) {
        return None;
    }
    let and = pos.iter().fold(usize::MAX, |acc, &p| acc & p);
    let or = pos.iter().fold(0, |acc, &p| acc | p);
    let fixed = !(and ^ or) & ((1 << k) - 1);
    if fixed.count_ones() != 1 {
        return None;
    }
    let j = fixed.trailing_zeros() as usize;
    Some((j, (and >> j) & 1))
}

impl FacetComplex for CubicalComplex {
    fn vertex_labels(&self) -> &[VertexId] {
        self.vertices()
    }

    fn num_facets(&self) -> usize {
        self.cubes().len()
    }

    fn facet(&self, i: usize) -> &[usize] {
        self.cubes()[i].corners()
    }

    fn facet_by_set(&self, set: &[usize]) -> Option<usize> {
        match self.face_id(set) {
            Some((d, i)) if d == self.dim() => Some(i),
            _ => None,
        }
    }

    fn pure_dim(&self) -> Result<usize> {
        Ok(self.dim())
    }

    fn flip_perm(&self, a: usize, b: usize) -> Result<Perm> {
        let k = self.dim();
        let (ca, cb) = (&self.cubes()[a], &self.cubes()[b]);
        if a == b {
            return Err(not_adjacent(self, a, b));
        }
        let shared: Vec<usize> = ca.corners().iter().copied().filter(|&v| cb.position(v).is_some()).collect();
        let pa: Vec<usize> = shared.iter().map(|&v| ca.position(v).unwrap()).collect();
        let pb: Vec<usize> = shared.iter().map(|&v| cb.position(v).unwrap()).collect();
        let (Some((ja, ba)), Some((jb, _))) = (facet_coords(&pa, k), facet_coords(&pb, k)) else {
            return Err(not_adjacent(self, a, b));
        };
        let mut perm = vec![0; 1 << k];
        for (c, slot) in perm.iter_mut().enumerate() {
            if (c >> ja) & 1 == ba {
                *slot = cb.position(ca.corners()[c]).unwrap();
            } else {
                let across = ca.corners()[c ^ (1 << ja)];
                *slot = cb.position(across).unwrap() ^ (1 << jb);
            }
        }
        Ok(perm)
    }

    fn ridges_of(&self, i: usize) -> Vec<Vec<usize>> {
        let k = self.dim();
        if k == 0 {
            return Vec::new();
        }
        self.cubes()[i].faces_with_coords(k - 1).into_iter().map(|(f, _, _)| f.vertex_set()).collect()
    }

    fn is_cubical(&self) -> bool {
        true
    }
}

/// Facet adjacency through shared ridges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RidgeGraph {
    /// Sorted neighbour lists with the shared ridge (as a sorted vertex set).
    pub adj: Vec<Vec<(usize, Vec<usize>)>>,
}

impl RidgeGraph {
    pub fn build<C: FacetComplex + ?Sized>(k: &C) -> Result<Self> {
        let d = k.pure_dim()?;
        if d == 0 {
            return Err(Error::invalid("ridge graph needs dimension at least 1"));
        }
        let mut by_ridge: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for i in 0..k.num_facets() {
            for r in k.ridges_of(i) {
                by_ridge.entry(r).or_default().push(i);
            }
        }
        let mut adj: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); k.num_facets()];
        for (r, fs) in by_ridge {
            for &a in &fs {
                for &b in &fs {
                    if a != b {
                        adj[a].push((b, r.clone()));
                    }
                }
            }
        }
        for l in &mut adj {
            l.sort();
        }
        Ok(RidgeGraph { adj })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[a].iter().map(|(b, _)| *b)
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search_by(|(x, _)| x.cmp(&b)).is_ok()
    }

    /// Unordered edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, l) in self.adj.iter().enumerate() {
            for (b, _) in l {
                if a < *b {
                    out.push((a, *b));
                }
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let a = members[i];
                for b in self.neighbors(a) {
                    if comp[b] == usize::MAX {
                        comp[b] = id;
                        members.push(b);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// A morphism of the groupoid: a position map between two facets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Projectivity {
    pub source: usize,
    pub target: usize,
    pub perm: Perm,
}

impl Projectivity {
    pub fn identity<C: FacetComplex + ?Sized>(k: &C, facet: usize) -> Self {
        Projectivity { source: facet, target: facet, perm: perm::identity(k.facet(facet).len()) }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Projectivity) -> Result<Projectivity> {
        if self.target != next.source {
            return Err(Error::invalid("projectivities are not composable"));
        }
        Ok(Projectivity { source: self.source, target: next.target, perm: perm::then(&self.perm, &next.perm) })
    }

    pub fn inverse(&self) -> Projectivity {
        Projectivity { source: self.target, target: self.source, perm: perm::inverse(&self.perm) }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && perm::is_identity(&self.perm)
    }

    /// The vertex bijection, in vertex indices of the complex.
    pub fn vertex_pairs<C: FacetComplex + ?Sized>(&self, k: &C) -> Vec<(usize, usize)> {
        let (s, t) = (k.facet(self.source), k.facet(self.target));
        self.perm.iter().enumerate().map(|(i, &j)| (s[i], t[j])).collect()
    }

    pub fn label_map<C: FacetComplex + ?Sized>(&self, k: &C) -> BTreeMap<VertexId, VertexId> {
        let l = k.vertex_labels();
        self.vertex_pairs(k).into_iter().map(|(a, b)| (l[a].clone(), l[b].clone())).collect()
    }
}

/// The flip between adjacent facets `a` and `b`.
pub fn flip<C: FacetComplex + ?Sized>(k: &C, a: usize, b: usize) -> Result<Projectivity> {
    Ok(Projectivity { source: a, target: b, perm: k.flip_perm(a, b)? })
}

/// The projectivity along a facet path, composed left to right.
pub fn compose_path<C: FacetComplex + ?Sized>(k: &C, path: &[usize]) -> Result<Projectivity> {
    let (&first, rest) = path.split_first().ok_or_else(|| Error::invalid("path is empty"))?;
    if first >= k.num_facets() {
        return Err(Error::NotAFacet(format!("facet index {first}")));
    }
    let mut acc = Projectivity::identity(k, first);
    let mut prev = first;
    for &next in rest {
        if next >= k.num_facets() {
            return Err(Error::NotAFacet(format!("facet index {next}")));
        }
        acc = acc.then(&flip(k, prev, next)?)?;
        prev = next;
    }
    Ok(acc)
}

/// Breadth-first spanning tree of the component of `root`, with neighbours
/// visited in facet order. `parent[root] = root`; unreached facets have `None`.
pub fn bfs_tree(g: &RidgeGraph, root: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; g.len()];
    parent[root] = Some(root);
    let mut queue = VecDeque::from([root]);
    while let Some(a) = queue.pop_front() {
        for b in g.neighbors(a) {
            if parent[b].is_none() {
                parent[b] = Some(a);
                queue.push_back(b);
            }
        }
    }
    parent
}

/// The tree path from the root to `x` (inclusive at both ends).
pub fn tree_path(parent: &[Option<usize>], x: usize) -> Vec<usize> {
    let mut path = vec![x];
    let mut cur = x;
    while let Some(p) = parent[cur] {
        if p == cur {
            break;
        }
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

/// The vertex group `Π(K, σ)` with its generating loops and all elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyGroup {
    pub base: usize,
    /// Closed facet paths at the base, one per non-tree edge of the BFS tree.
    pub generator_paths: Vec<Vec<usize>>,
    /// The loop projectivities of `generator_paths`, as position maps of the base.
    pub generators: Vec<Perm>,
    /// All elements, sorted.
    pub elements: Vec<Perm>,
}

impl HolonomyGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(p)).is_ok()
    }

    pub fn iso_class(&self) -> IsoClass {
        perm::iso_class(&self.elements)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Computes `Π(K, σ)` from the fundamental cycles of a BFS spanning tree.
pub fn holonomy_group<C: FacetComplex + ?Sized>(k: &C, base: usize) -> Result<HolonomyGroup> {
    if base >= k.num_facets() {
        return Err(Error::NotAFacet(format!("facet index {base}")));
    }
    let g = RidgeGraph::build(k)?;
    holonomy_group_in(k, &g, base)
}

/// As [`holonomy_group`] with a prebuilt ridge graph.
pub fn holonomy_group_in<C: FacetComplex + ?Sized>(k: &C, g: &RidgeGraph, base: usize) -> Result<HolonomyGroup> {
    let parent = bfs_tree(g, base);
    // Projectivities from the base to each reached facet along the tree.
    let mut to: HashMap<usize, Perm> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([base]);
    to.insert(base, perm::identity(k.facet(base).len()));
    while let Some(a) = queue.pop_front() {
        order.push(a);
        for b in g.neighbors(a) {
            if parent[b] == Some(a) && b != base && !to.contains_key(&b) {
                let p = perm::then(&to[&a], &k.flip_perm(a, b)?);
                to.insert(b, p);
                queue.push_back(b);
            }
        }
    }
    order.sort_unstable();
    let mut generator_paths = Vec::new();
    let mut generators = Vec::new();
    for &a in &order {
        for b in g.neighbors(a) {
            if a >= b || parent[b] == Some(a) || parent[a] == Some(b) {
                continue;
            }
            let loop_perm = perm::then(&perm::then(&to[&a], &k.flip_perm(a, b)?), &perm::inverse(&to[&b]));
            let mut path = tree_path(&parent, a);
            let mut back = tree_path(&parent, b);
            back.reverse();
            path.extend(back);
            generator_paths.push(path);
            generators.push(loop_perm);
        }
    }
    let elements = perm::closure(k.facet(base).len(), &generators, GROUP_LIMIT)?;
    Ok(HolonomyGroup { base, generator_paths, generators, elements })
}

/// Image of the holonomy of `K` at `σ` under a non-degenerate map `f: K → L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedHolonomy {
    /// The facet `f(σ)` of `L`.
    pub image_facet: usize,
    /// Each generator of `Π(K, σ)` transported to a position map of `f(σ)`.
    pub images: Vec<Perm>,
    pub source_order: usize,
    pub target_order: usize,
    /// Whether every image lies in `Π(L, f(σ))`.
    pub contained: bool,
    /// Whether distinct elements of `Π(K, σ)` have distinct images.
    pub injective: bool,
}

/// Checks that `f` carries `Π(K, σ)` into `Π(L, f(σ))`. The map must be
/// non-degenerate (checked by the caller-specific predicate `nondegenerate`)
/// and `f(σ)` must be a facet of `L`.
pub fn induced_holonomy_map<C: FacetComplex + ?Sized>(
    k: &C,
    l: &C,
    f: &VertexMap,
    nondegenerate: bool,
    sigma: usize,
) -> Result<InducedHolonomy> {
    if !nondegenerate {
        return Err(Error::Degenerate("the vertex map collapses a facet".into()));
    }
    let src = k.facet(sigma);
    let mut img_set = f.apply_set(src);
    img_set.sort_unstable();
    let image_facet = l
        .facet_by_set(&img_set)
        .ok_or_else(|| Error::NotAFacet(format!("image of {} is not a facet of the target", k.fmt_facet(sigma))))?;
    let tgt = l.facet(image_facet);
    // position in σ -> position in f(σ)
    let to_img: Vec<usize> = src.iter().map(|&v| tgt.iter().position(|&w| w == f.apply(v)).unwrap()).collect();
    let conj = |g: &[usize]| -> Perm {
        let mut out = vec![0; g.len()];
        for i in 0..g.len() {
            out[to_img[i]] = to_img[g[i]];
        }
        out
    };
    let hk = holonomy_group(k, sigma)?;
    let hl = holonomy_group(l, image_facet)?;
    let images: Vec<Perm> = hk.generators.iter().map(|g| conj(g)).collect();
    let contained = hk.elements.iter().all(|e| hl.contains(&conj(e)));
    let mut imgs: Vec<Perm> = hk.elements.iter().map(|e| conj(e)).collect();
    imgs.sort();
    imgs.dedup();
    Ok(InducedHolonomy {
        image_facet,
        images,
        source_order: hk.order(),
        target_order: hl.order(),
        contained,
        injective: imgs.len() == hk.order(),
    })
}

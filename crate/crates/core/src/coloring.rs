//! Chromatic numbers, `(F, φ)`-chromatic numbers, `Φ_d`-complex detection
//! and vertex collapsibility.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::simplex_on;
use crate::graph::Graph;
use crate::groupoid::{compose_path, holonomy_group_in, FacetComplex, RidgeGraph};
use crate::maps::VertexMap;
use crate::perm::{self, Perm};
use crate::simplicial::{Simplex, SimplicialComplex};

/// An exact chromatic number with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringCertificate {
    pub value: usize,
    /// `witness[v]` is the colour `0..value` of vertex `v`, a non-degenerate
    /// map onto the vertices of `Δ^{[value]}`.
    pub witness: Vec<usize>,
    /// A maximum clique of the 1-skeleton.
    pub clique: Vec<usize>,
    /// Whether the clique size equals the chromatic number.
    pub tight: bool,
}

impl ColoringCertificate {
    /// The witness as a vertex map into `simplex_on(value)`.
    pub fn as_map(&self) -> VertexMap {
        VertexMap::new(self.witness.clone())
    }
}

/// Colours `g` with at most `k` colours, choosing the most saturated vertex
/// first and opening colours in order.
fn k_colour(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut colour = vec![usize::MAX; n];
    fn rec(g: &Graph, k: usize, colour: &mut Vec<usize>, used: usize, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        // saturation = distinct neighbour colours; ties by degree then index
        let v = (0..g.n())
            .filter(|&v| colour[v] == usize::MAX)
            .max_by_key(|&v| {
                let mut seen: Vec<usize> = g.neighbors(v).iter().map(|&w| colour[w]).filter(|&c| c != usize::MAX).collect();
                seen.sort_unstable();
                seen.dedup();
                (seen.len(), g.degree(v), std::cmp::Reverse(v))
            })
            .expect("a vertex is left");
        let limit = (used + 1).min(k);
        for c in 0..limit {
            if g.neighbors(v).iter().any(|&w| colour[w] == c) {
                continue;
            }
            colour[v] = c;
            if rec(g, k, colour, used.max(c + 1), left - 1) {
                return true;
            }
        }
        colour[v] = usize::MAX;
        false
    }
    rec(g, k, &mut colour, 0, n).then_some(colour)
}

/// Exact chromatic number of a graph.
pub fn graph_chi(g: &Graph) -> ColoringCertificate {
    let clique = g.maximum_clique();
    let lower = clique.len();
    let mut k = lower;
    loop {
        if let Some(witness) = k_colour(g, k) {
            return ColoringCertificate { value: k, witness, tight: k == lower, clique };
        }
        k += 1;
    }
}

/// `χ(K)`, the least `m` with a non-degenerate map `K → Δ^{[m]}`, computed
/// on the 1-skeleton.
pub fn chi(k: &SimplicialComplex) -> ColoringCertificate {
    graph_chi(&k.one_skeleton_graph())
}

fn facet_masks(l: &SimplicialComplex) -> Vec<u64> {
    l.facets().iter().map(|f| f.iter().fold(0u64, |m, &x| m | (1 << x))).collect()
}

/// The first non-degenerate map `K → L` in lexicographic order of images,
/// found by backtracking.
pub fn find_nondegenerate_map(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Option<VertexMap>> {
    if l.num_vertices() > 64 {
        return Err(Error::SizeLimit("target has more than 64 vertices".into()));
    }
    let nk = k.num_vertices();
    if nk == 0 {
        return Ok(Some(VertexMap::new(Vec::new())));
    }
    let lf = facet_masks(l);
    // facets checked once their last vertex is assigned, partial ones earlier
    let mut through: Vec<Vec<&Simplex>> = vec![Vec::new(); nk];
    for f in k.facets() {
        for &v in f {
            through[v].push(f);
        }
    }
    let mut image = vec![usize::MAX; nk];
    fn rec(v: usize, image: &mut Vec<usize>, through: &[Vec<&Simplex>], lf: &[u64], nl: usize) -> bool {
        if v == image.len() {
            return true;
        }
        'cand: for x in 0..nl {
            image[v] = x;
            for f in &through[v] {
                let mut mask = 0u64;
                for &u in f.iter().filter(|&&u| u <= v) {
                    let bit = 1u64 << image[u];
                    if mask & bit != 0 {
                        continue 'cand;
                    }
                    mask |= bit;
                }
                if !lf.iter().any(|&m| m & mask == mask) {
                    continue 'cand;
                }
            }
            if rec(v + 1, image, through, lf, nl) {
                return true;
            }
        }
        image[v] = usize::MAX;
        false
    }
    Ok(rec(0, &mut image, &through, &lf, l.num_vertices()).then(|| VertexMap::new(image)))
}

/// `χ(K)` computed directly from the definition, trying `Δ^{[m]}` for
/// `m = 1, 2, …`; independent of the graph solver.
pub fn chi_by_definition(k: &SimplicialComplex) -> Result<usize> {
    if k.num_vertices() == 0 {
        return Ok(0);
    }
    for m in 1..=k.num_vertices() {
        if find_nondegenerate_map(k, &simplex_on(m)?)?.is_some() {
            return Ok(m);
        }
    }
    unreachable!("the identity colouring always exists")
}

/// The `(F, φ)`-chromatic number: the least weight of a test complex that
/// receives a non-degenerate map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyValue {
    /// `None` stands for `∞`.
    pub value: Option<f64>,
    pub index: Option<usize>,
    pub witness: Option<VertexMap>,
}

pub fn chi_family(k: &SimplicialComplex, tests: &[(SimplicialComplex, f64)]) -> Result<FamilyValue> {
    let mut best = FamilyValue { value: None, index: None, witness: None };
    for (i, (t, w)) in tests.iter().enumerate() {
        if best.value.is_some_and(|b| b <= *w) {
            continue;
        }
        if let Some(m) = find_nondegenerate_map(k, t)? {
            best = FamilyValue { value: Some(*w), index: Some(i), witness: Some(m) };
        }
    }
    Ok(best)
}

/// Outcome of a `Φ_d` membership check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiVerdict {
    pub is_phi: bool,
    pub sigma: Simplex,
    /// `ω|_σ` as a position map of `σ`.
    pub tau: Perm,
    /// Why the answer is negative, when it is.
    pub reason: Option<String>,
    /// A closed facet path at `σ` whose projectivity is `τ`.
    pub evidence: Option<Vec<usize>>,
}

/// Whether `(Γ, ω)` with the invariant simplex `σ` is a `Φ_d`-complex:
/// `ω(σ) = σ` and the restriction `τ` is a non-trivial element of `Π(Γ, σ)`.
pub fn is_phi_complex(gamma: &SimplicialComplex, omega: &VertexMap, sigma: &[usize]) -> Result<PhiVerdict> {
    let n = gamma.num_vertices();
    if omega.len() != n || !omega.is_bijection() {
        return Err(Error::invalid("ω is not a bijection of the vertices"));
    }
    if !omega.is_involution() {
        return Err(Error::invalid("ω is not an involution"));
    }
    if !omega.is_simplicial(gamma, gamma) {
        return Err(Error::invalid("ω is not simplicial"));
    }
    gamma.pure_dim()?;
    let mut s = sigma.to_vec();
    s.sort_unstable();
    let base = gamma.facet_by_set(&s).ok_or_else(|| Error::NotAFacet(gamma.fmt_simplex(&s)))?;
    let mut verdict = PhiVerdict { is_phi: false, sigma: s.clone(), tau: Vec::new(), reason: None, evidence: None };
    let image = omega.apply_set(&s);
    if image != s {
        verdict.reason = Some("ω does not fix σ".into());
        return Ok(verdict);
    }
    let tau: Perm = s.iter().map(|&v| s.binary_search(&omega.apply(v)).expect("ω(σ) = σ")).collect();
    verdict.tau = tau.clone();
    if perm::is_identity(&tau) {
        verdict.reason = Some("ω restricts to the identity on σ".into());
        return Ok(verdict);
    }
    let g = RidgeGraph::build(gamma)?;
    let group = holonomy_group_in(gamma, &g, base)?;
    if !group.contains(&tau) {
        verdict.reason = Some(format!("τ is not in the holonomy group (order {})", group.order()));
        return Ok(verdict);
    }
    let path = loop_realizing(gamma, &g, base, &tau)?.expect("members of the group are realized by loops");
    debug_assert_eq!(compose_path(gamma, &path)?.perm, tau);
    verdict.is_phi = true;
    verdict.evidence = Some(path);
    Ok(verdict)
}

/// A shortest closed facet path at `base` with projectivity `target`, by
/// breadth-first search over (facet, accumulated map) states.
pub fn loop_realizing<C: FacetComplex + ?Sized>(k: &C, g: &RidgeGraph, base: usize, target: &[usize]) -> Result<Option<Vec<usize>>> {
    let start = (base, perm::identity(k.facet(base).len()));
    let mut prev: HashMap<(usize, Perm), (usize, Perm)> = HashMap::new();
    let mut seen: HashSet<(usize, Perm)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let goal = (base, target.to_vec());
    if start == goal {
        return Ok(Some(vec![base]));
    }
    while let Some((a, p)) = queue.pop_front() {
        for b in g.neighbors(a) {
            let next = (b, perm::then(&p, &k.flip_perm(a, b)?));
            if seen.insert(next.clone()) {
                prev.insert(next.clone(), (a, p.clone()));
                if next == goal {
                    let mut path = vec![base];
                    let mut cur = next;
                    while let Some(q) = prev.get(&cur) {
                        path.push(q.0);
                        cur = q.clone();
                    }
                    path.reverse();
                    return Ok(Some(path));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// One elementary vertex collapse: `facet` is removed, meeting the rest in
/// `ridge`; `apex` is the vertex that disappears with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collapse {
    pub facet: usize,
    pub ridge: Simplex,
    pub apex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Collapsibility {
    /// Collapses to the single remaining facet through `steps`.
    Collapsible {
        steps: Vec<Collapse>,
        remaining: usize,
    },
    NotCollapsible,
    /// The search budget ran out first.
    Unknown,
}

impl Collapsibility {
    pub fn is_collapsible(&self) -> bool {
        matches!(self, Collapsibility::Collapsible { .. })
    }
}

/// Search budget for [`vertex_collapsible`], in visited facet subsets.
pub const COLLAPSE_BUDGET: usize = 200_000;

/// Whether `facet` can be collapsed away from the facets in `alive`.
fn free_collapse(k: &SimplicialComplex, alive: &[bool], facet: usize) -> Option<Collapse> {
    let f = &k.facets()[facet];
    let others: Vec<&Simplex> = (0..alive.len()).filter(|&j| alive[j] && j != facet).map(|j| &k.facets()[j]).collect();
    let outside: Vec<usize> = f.iter().copied().filter(|v| !others.iter().any(|o| o.contains(v))).collect();
    if outside.len() != 1 {
        return None;
    }
    let apex = outside[0];
    let ridge: Simplex = f.iter().copied().filter(|&v| v != apex).collect();
    // the ridge must lie in, and be a proper face of, a remaining facet
    others.iter().any(|o| crate::simplicial::is_subset(&ridge, o)).then_some(Collapse { facet, ridge, apex })
}

/// Recognizes tree-like complexes: collapses facets one at a time, each
/// meeting the rest in a single ridge, until one facet is left.
pub fn vertex_collapsible(k: &SimplicialComplex) -> Result<Collapsibility> {
    k.pure_dim()?;
    let n = k.facets().len();
    if n == 0 {
        return Ok(Collapsibility::NotCollapsible);
    }
    let mut alive = vec![true; n];
    let mut steps = Vec::new();
    let mut failed: HashSet<Vec<bool>> = HashSet::new();
    let mut budget = COLLAPSE_BUDGET;
    fn rec(
        k: &SimplicialComplex,
        alive: &mut Vec<bool>,
        left: usize,
        steps: &mut Vec<Collapse>,
        failed: &mut HashSet<Vec<bool>>,
        budget: &mut usize,
    ) -> Option<bool> {
        if left == 1 {
            return Some(true);
        }
        if failed.contains(alive.as_slice()) {
            return Some(false);
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let mut exhausted = true;
        for f in 0..alive.len() {
            if !alive[f] {
                continue;
            }
            if let Some(c) = free_collapse(k, alive, f) {
                alive[f] = false;
                steps.push(c);
                match rec(k, alive, left - 1, steps, failed, budget) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => exhausted = false,
                }
                steps.pop();
                alive[f] = true;
            }
        }
        if exhausted {
            failed.insert(alive.clone());
            Some(false)
        } else {
            None
        }
    }
    Ok(match rec(k, &mut alive, n, &mut steps, &mut failed, &mut budget) {
        Some(true) => Collapsibility::Collapsible { remaining: alive.iter().position(|&a| a).expect("one facet left"), steps },
        Some(false) => Collapsibility::NotCollapsible,
        None => Collapsibility::Unknown,
    })
}

/// Re-checks a collapse sequence against the complex.
pub fn verify_collapse_sequence(k: &SimplicialComplex, steps: &[Collapse]) -> bool {
    let mut alive = vec![true; k.facets().len()];
    for s in steps {
        if !alive.get(s.facet).copied().unwrap_or(false) || free_collapse(k, &alive, s.facet).as_ref() != Some(s) {
            return false;
        }
        alive[s.facet] = false;
    }
    alive.iter().filter(|&&a| a).count() == 1
}

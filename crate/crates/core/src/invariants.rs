//! Parity invariants of pure cubical complexes.
//!
//! Every flip between stored frames is a signed permutation matrix, and the
//! parity of a loop's holonomy is the sum of the parities of its flips.
//! `BC_k^even` is the kernel of parity, so `Π(K,σ) ⊂ BC_k^even` holds exactly
//! when every loop has even parity. Re-framing a cube multiplies the parities
//! of all flips at that cube by the same sign, which cancels on loops.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::groupoid::{FacetComplex, Projectivity, RidgeGraph};
use crate::signed::SignedPermMatrix;

/// The signed matrix of a projectivity between two stored frames.
pub fn signed_matrix(p: &Projectivity) -> Result<SignedPermMatrix> {
    SignedPermMatrix::from_corner_perm(&p.perm)
}

/// The ridge graph with each edge labelled by the parity of its flip.
#[derive(Debug, Clone)]
pub struct ParityGraph {
    pub graph: RidgeGraph,
    /// `parity[a]` runs parallel to `graph.adj[a]`.
    pub parity: Vec<Vec<u8>>,
}

impl ParityGraph {
    pub fn build(k: &CubicalComplex) -> Result<Self> {
        let graph = RidgeGraph::build(k)?;
        let mut parity = Vec::with_capacity(graph.len());
        for (a, l) in graph.adj.iter().enumerate() {
            let mut row = Vec::with_capacity(l.len());
            for (b, _) in l {
                row.push(SignedPermMatrix::from_corner_perm(&k.flip_perm(a, *b)?)?.parity());
            }
            parity.push(row);
        }
        Ok(ParityGraph { graph, parity })
    }

    fn edges_of(&self, a: usize) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.graph.adj[a].iter().zip(&self.parity[a]).map(|((b, _), &p)| (*b, p))
    }

    /// Whether the parity labelling is a coboundary on the facets in `mask`
    /// (the induced subgraph), i.e. every loop inside is even.
    fn is_even_on(&self, members: &[usize], inside: &dyn Fn(usize) -> bool) -> bool {
        let mut colour: Vec<Option<u8>> = vec![None; self.graph.len()];
        for &s in members {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                let ca = colour[a].unwrap();
                for (b, p) in self.edges_of(a) {
                    if !inside(b) {
                        continue;
                    }
                    match colour[b] {
                        None => {
                            colour[b] = Some(ca ^ p);
                            queue.push_back(b);
                        }
                        Some(cb) if cb != ca ^ p => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Shortest closed facet walk at `s` with odd parity, as a facet path
    /// starting and ending at `s`.
    pub fn shortest_odd_loop(&self, s: usize) -> Option<Vec<usize>> {
        let n = self.graph.len();
        let mut prev: Vec<[Option<(usize, u8)>; 2]> = vec![[None, None]; n];
        let mut seen = vec![[false; 2]; n];
        seen[s][0] = true;
        let mut queue = VecDeque::from([(s, 0u8)]);
        while let Some((a, pa)) = queue.pop_front() {
            for (b, p) in self.edges_of(a) {
                let pb = pa ^ p;
                if seen[b][pb as usize] {
                    continue;
                }
                seen[b][pb as usize] = true;
                prev[b][pb as usize] = Some((a, pa));
                if b == s && pb == 1 {
                    let mut path = vec![s];
                    let mut cur = (s, 1u8);
                    while let Some(q) = prev[cur.0][cur.1 as usize] {
                        path.push(q.0);
                        cur = q;
                        if cur == (s, 0) {
                            break;
                        }
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back((b, pb));
            }
        }
        None
    }
}

/// `I(K)`: 1 iff some loop has odd parity.
pub fn invariant_i(k: &CubicalComplex) -> Result<u8> {
    let pg = ParityGraph::build(k)?;
    let all: Vec<usize> = (0..pg.graph.len()).collect();
    Ok(if pg.is_even_on(&all, &|_| true) { 0 } else { 1 })
}

/// A length that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(m) => Some(m),
            Length::Infinite => None,
        }
    }
}

impl std::fmt::Display for Length {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Length::Finite(m) => write!(f, "{m}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

/// Number of flips in the shortest odd closed chain at facet `s`.
pub fn local_z(k: &CubicalComplex, s: usize) -> Result<Length> {
    if s >= k.num_facets() {
        return Err(Error::NotAFacet(format!("cube index {s}")));
    }
    let pg = ParityGraph::build(k)?;
    Ok(pg.shortest_odd_loop(s).map_or(Length::Infinite, |p| Length::Finite(p.len() - 1)))
}

/// Chain-based curvature report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Curvature {
    #[serde(rename = "I")]
    pub i: u8,
    /// Minimum over top cubes of the local odd-chain length.
    pub z_chain: Option<usize>,
    /// The witness chain, as top-cube indices from and back to its base.
    pub witness: Vec<usize>,
    /// Distinct cubes on the witness chain.
    pub witness_cubes: usize,
}

impl Curvature {
    /// `CC = 1/Z_chain`, written as `"1/m"` or `"0"`.
    pub fn cc(&self) -> String {
        match self.z_chain {
            Some(m) => format!("1/{m}"),
            None => "0".into(),
        }
    }

    pub fn z_length(&self) -> Length {
        self.z_chain.map_or(Length::Infinite, Length::Finite)
    }
}

/// `CC(K) = max_σ 1/local_Z(K,σ)` together with `Z_chain` and a witness.
/// Ties are broken by the lowest cube index.
pub fn curvature_cc(k: &CubicalComplex) -> Result<Curvature> {
    let pg = ParityGraph::build(k)?;
    let mut best: Option<Vec<usize>> = None;
    for s in 0..pg.graph.len() {
        if let Some(p) = pg.shortest_odd_loop(s) {
            if best.as_ref().is_none_or(|b| p.len() < b.len()) {
                best = Some(p);
            }
        }
    }
    let all: Vec<usize> = (0..pg.graph.len()).collect();
    let i = if pg.is_even_on(&all, &|_| true) { 0 } else { 1 };
    let witness = best.unwrap_or_default();
    let witness_cubes = witness.iter().collect::<HashSet<_>>().len();
    Ok(Curvature { i, z_chain: (!witness.is_empty()).then(|| witness.len() - 1), witness, witness_cubes })
}

/// Hard limit on the number of top cubes for [`subcomplex_z`].
pub const SUBCOMPLEX_Z_LIMIT: usize = 20;

/// Exact `Z(K)`: the fewest top cubes in a connected subcomplex `W` with
/// `I(W) = 1`, with one minimizing cube set.
pub fn subcomplex_z(k: &CubicalComplex) -> Result<(Length, Vec<usize>)> {
    let n = k.num_facets();
    if n > SUBCOMPLEX_Z_LIMIT {
        return Err(Error::SizeLimit(format!("subcomplex Z needs at most {SUBCOMPLEX_Z_LIMIT} top cubes, got {n}")));
    }
    let pg = ParityGraph::build(k)?;
    let nbr_mask: Vec<u32> = (0..n).map(|a| pg.graph.neighbors(a).fold(0u32, |m, b| m | (1 << b))).collect();
    let mut level: Vec<u32> = (0..n).map(|a| 1u32 << a).collect();
    let mut seen: HashSet<u32> = level.iter().copied().collect();
    for size in 1..=n {
        level.sort_unstable();
        for &m in &level {
            let members: Vec<usize> = (0..n).filter(|&a| m & (1 << a) != 0).collect();
            if !pg.is_even_on(&members, &|b| m & (1 << b) != 0) {
                return Ok((Length::Finite(size), members));
            }
        }
        let mut next = Vec::new();
        for &m in &level {
            let frontier = members_frontier(m, &nbr_mask);
            let mut f = frontier;
            while f != 0 {
                let b = f.trailing_zeros();
                f &= f - 1;
                let grown = m | (1 << b);
                if seen.insert(grown) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    Ok((Length::Infinite, Vec::new()))
}

fn members_frontier(m: u32, nbr_mask: &[u32]) -> u32 {
    let mut f = 0;
    let mut rest = m;
    while rest != 0 {
        let a = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        f |= nbr_mask[a];
    }
    f & !m
}

/// Verdict of the curvature obstruction to cubical maps `K → L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedReport {
    pub verdict: Verdict,
    pub source: Curvature,
    pub target: Curvature,
}

/// A non-degenerate cubical map carries odd chains to odd chains of the same
/// length, so `Z_chain(K) < Z_chain(L)` rules out any such map.
pub fn embed_obstruction(k: &CubicalComplex, l: &CubicalComplex) -> Result<EmbedReport> {
    if k.dim() != l.dim() {
        return Err(Error::invalid(format!("dimension mismatch: {} vs {}", k.dim(), l.dim())));
    }
    let source = curvature_cc(k)?;
    let target = curvature_cc(l)?;
    let verdict = if source.z_length() < target.z_length() { Verdict::Obstructed } else { Verdict::Inconclusive };
    Ok(EmbedReport { verdict, source, target })
}

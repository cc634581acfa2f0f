//! Integer homology: augmented chain complexes, Smith normal form and
//! induced maps.
//!
//! Chain complexes here are augmented (`∂_0` is the 1×n₀ row of ones when
//! there are vertices), so every rank computed is a reduced one.
//!
//! Elimination runs over `i64` with checked arithmetic and restarts over
//! `BigInt` on overflow, so results are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::hom::HomComplex;
use crate::maps::VertexMap;
use crate::simplicial::{Simplex, SimplicialComplex};

/// Column-sparse integer matrix; each column is sorted by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn from_columns(rows: usize, mut columns: Vec<Vec<(usize, i64)>>) -> Self {
        for c in &mut columns {
            c.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(c.len());
            for &(r, v) in c.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *c = merged;
        }
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for &(i, v) in c {
                m[i][j] = v;
            }
        }
        m
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let columns = other
            .columns
            .iter()
            .map(|c| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(k, b) in c {
                    for &(i, a) in &self.columns[k] {
                        *acc.entry(i).or_default() += a * b;
                    }
                }
                acc.into_iter().filter(|e| e.1 != 0).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: other.cols, columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

/// `ranks[q]` is the number of q-cells; `boundaries[q]` maps `C_q → C_{q−1}`,
/// with `boundaries[0]` the augmentation `C_0 → Z` (zero rows when empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

fn augmentation(n0: usize) -> SparseMatrix {
    if n0 == 0 {
        SparseMatrix::zero(0, 0)
    } else {
        SparseMatrix { rows: 1, cols: n0, columns: vec![vec![(0, 1)]; n0] }
    }
}

impl ChainComplex {
    /// Validates shapes and `∂∂ = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if ranks.len() != boundaries.len() {
            return Err(Error::invalid("one boundary matrix per dimension is required"));
        }
        for (q, b) in boundaries.iter().enumerate() {
            let below = if q == 0 { usize::from(ranks[0] > 0) } else { ranks[q - 1] };
            if b.cols != ranks[q] || b.rows != below {
                return Err(Error::invalid(format!("boundary matrix in dimension {q} has the wrong shape")));
            }
            if b.columns.iter().flatten().any(|&(r, _)| r >= b.rows) {
                return Err(Error::invalid(format!("boundary matrix in dimension {q} has an out-of-range row")));
            }
        }
        let c = ChainComplex { ranks, boundaries };
        if !c.squares_to_zero() {
            return Err(Error::invalid("boundary does not square to zero"));
        }
        Ok(c)
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.first().is_none_or(|&n| n == 0)
    }

    pub fn squares_to_zero(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }

    /// Euler characteristic `Σ (−1)^q #q-cells`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(q, &n)| if q % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Cellular chain complex of a Hom complex: cells are products of
    /// simplices, oriented by vertex order in each block and block order.
    pub fn of_hom(h: &HomComplex) -> Self {
        let top = match h.dim() {
            Some(d) => d,
            None => return ChainComplex { ranks: Vec::new(), boundaries: Vec::new() },
        };
        let mut pos = vec![0usize; h.len()];
        let mut ranks = vec![0usize; top + 1];
        for i in 0..h.len() {
            let d = h.cell_dim(i);
            pos[i] = ranks[d];
            ranks[d] += 1;
        }
        let mut cols: Vec<Vec<Vec<(usize, i64)>>> = ranks.iter().map(|&n| Vec::with_capacity(n)).collect();
        for i in 0..h.len() {
            let d = h.cell_dim(i);
            let col = if d == 0 { vec![(0, 1)] } else { h.boundary(i).into_iter().map(|(f, s)| (pos[f], s)).collect() };
            cols[d].push(col);
        }
        let boundaries =
            cols.into_iter().enumerate().map(|(q, c)| SparseMatrix::from_columns(if q == 0 { 1 } else { ranks[q - 1] }, c)).collect();
        ChainComplex { ranks, boundaries }
    }
}

/// Simplices of each dimension in canonical (lexicographic) order.
pub fn simplex_basis(k: &SimplicialComplex) -> Vec<Vec<Simplex>> {
    let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
    for s in k.all_faces() {
        let q = s.len() - 1;
        if by_dim.len() <= q {
            by_dim.resize(q + 1, BTreeSet::new());
        }
        by_dim[q].insert(s);
    }
    by_dim.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Augmented simplicial chain complex with the basis from [`simplex_basis`].
pub fn chain_complex_of(k: &SimplicialComplex) -> ChainComplex {
    chain_complex_with_basis(&simplex_basis(k))
}

fn chain_complex_with_basis(basis: &[Vec<Simplex>]) -> ChainComplex {
    let ranks: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut boundaries = Vec::with_capacity(basis.len());
    for (q, simplices) in basis.iter().enumerate() {
        if q == 0 {
            boundaries.push(augmentation(simplices.len()));
            continue;
        }
        let index: BTreeMap<&[usize], usize> = basis[q - 1].iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let cols = simplices
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        (index[f.as_slice()], if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(ranks[q - 1], cols));
    }
    ChainComplex { ranks, boundaries }
}

/// Reduced integral homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiProfile {
    /// `b̃_0 ..= b̃_top`; empty for the empty complex.
    pub reduced_betti: Vec<usize>,
    /// Invariant factors greater than one in each dimension.
    pub torsion: Vec<Vec<BigInt>>,
    /// The empty complex has `H̃_{−1} = Z` and nothing else.
    pub empty: bool,
}

impl BettiProfile {
    pub fn betti(&self, q: usize) -> usize {
        self.reduced_betti.get(q).copied().unwrap_or(0)
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }

    /// Dimensions with non-zero reduced homology (free or torsion).
    pub fn support(&self) -> Vec<usize> {
        (0..self.reduced_betti.len()).filter(|&q| self.reduced_betti[q] > 0 || !self.torsion[q].is_empty()).collect()
    }

    /// Whether the homology is that of `S^d` (`d = −1` meaning empty).
    pub fn is_sphere(&self, d: isize) -> bool {
        if d < 0 {
            return self.empty;
        }
        !self.empty && !self.has_torsion() && self.support() == vec![d as usize] && self.betti(d as usize) == 1
    }

    /// Dropping trailing zero dimensions gives a shape-independent form.
    pub fn trimmed(&self) -> (Vec<usize>, Vec<Vec<BigInt>>, bool) {
        let mut n = self.reduced_betti.len();
        while n > 0 && self.reduced_betti[n - 1] == 0 && self.torsion[n - 1].is_empty() {
            n -= 1;
        }
        (self.reduced_betti[..n].to_vec(), self.torsion[..n].to_vec(), self.empty)
    }
}

struct TorsionJson<'a>(&'a [Vec<BigInt>]);

impl Serialize for TorsionJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<serde_json::Value>> = self
            .0
            .iter()
            .map(|t| {
                t.iter().map(|x| x.to_u64().map_or_else(|| serde_json::Value::String(x.to_string()), serde_json::Value::from)).collect()
            })
            .collect();
        v.serialize(s)
    }
}

impl Serialize for BettiProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BettiProfile", if self.empty { 3 } else { 2 })?;
        st.serialize_field("reduced_betti", &self.reduced_betti)?;
        st.serialize_field("torsion", &TorsionJson(&self.torsion))?;
        if self.empty {
            st.serialize_field("empty", &true)?;
        }
        st.end()
    }
}

#[derive(Debug, Clone, Copy)]
struct Overflow;

type Res<T> = std::result::Result<T, Overflow>;

trait Ring: Clone + Debug + PartialEq + Zero + One + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul + From<i64> {
    fn to_big(&self) -> BigInt;
}

impl Ring for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn sub_mul<T: Ring>(a: &T, f: &T, b: &T) -> Res<T> {
    a.checked_sub(&f.checked_mul(b).ok_or(Overflow)?).ok_or(Overflow)
}

/// Rank and torsion invariant factors of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Eliminates unit pivots sparsely, then runs dense Smith normal form on
/// what is left.
fn invariants_in<T: Ring>(m: &SparseMatrix) -> Res<Invariants> {
    let mut cols: Vec<Vec<(usize, T)>> = m.columns.iter().map(|c| c.iter().map(|&(r, v)| (r, T::from(v))).collect()).collect();
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.rows];
    for (j, c) in cols.iter().enumerate() {
        for (r, _) in c {
            row_cols[*r].insert(j);
        }
    }
    let mut rank = 0;
    loop {
        let mut progress = false;
        for c in 0..cols.len() {
            let Some((r, a)) = cols[c].iter().filter(|(_, v)| v.abs().is_one()).min_by_key(|(r, _)| row_cols[*r].len()).cloned() else {
                continue;
            };
            let others: Vec<usize> = row_cols[r].iter().copied().filter(|&o| o != c).collect();
            let pivot = cols[c].clone();
            for o in others {
                let f = cols[o].iter().find(|e| e.0 == r).expect("row index is consistent").1.clone() * a.clone();
                let old = std::mem::take(&mut cols[o]);
                let mut merged = Vec::with_capacity(old.len() + pivot.len());
                let (mut i, mut j) = (0, 0);
                while i < old.len() || j < pivot.len() {
                    if j == pivot.len() || (i < old.len() && old[i].0 < pivot[j].0) {
                        merged.push(old[i].clone());
                        i += 1;
                    } else if i == old.len() || pivot[j].0 < old[i].0 {
                        let v = sub_mul(&T::zero(), &f, &pivot[j].1)?;
                        row_cols[pivot[j].0].insert(o);
                        merged.push((pivot[j].0, v));
                        j += 1;
                    } else {
                        let v = sub_mul(&old[i].1, &f, &pivot[j].1)?;
                        if v.is_zero() {
                            row_cols[old[i].0].remove(&o);
                        } else {
                            merged.push((old[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                cols[o] = merged;
            }
            for (rr, _) in &pivot {
                row_cols[*rr].remove(&c);
            }
            cols[c].clear();
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_cols: Vec<usize> = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
    if live_cols.is_empty() {
        return Ok(Invariants { rank, torsion: Vec::new() });
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !row_cols[r].is_empty()).collect();
    let row_pos: BTreeMap<usize, usize> = live_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut a = vec![vec![T::zero(); live_cols.len()]; live_rows.len()];
    for (j, &c) in live_cols.iter().enumerate() {
        for (r, v) in &cols[c] {
            a[row_pos[r]][j] = v.clone();
        }
    }
    let snf = Snf::compute(a, false, false)?;
    rank += snf.diag.len();
    let torsion = snf.diag.iter().filter(|d| !d.is_one()).map(Ring::to_big).collect();
    Ok(Invariants { rank, torsion })
}

/// Exact rank and torsion factors of an integer matrix.
pub fn invariants(m: &SparseMatrix) -> Invariants {
    invariants_in::<i64>(m).or_else(|_| invariants_in::<BigInt>(m)).expect("BigInt arithmetic cannot overflow")
}

/// Rank over `F_2`, computed independently of the integer path.
pub fn rank_mod2(m: &SparseMatrix) -> usize {
    let mut pivots: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in &m.columns {
        let mut col: Vec<usize> = c.iter().filter(|e| e.1 % 2 != 0).map(|e| e.0).collect();
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(p) => {
                    let set: BTreeSet<usize> = col.iter().copied().collect();
                    let other: BTreeSet<usize> = p.iter().copied().collect();
                    col = set.symmetric_difference(&other).copied().collect();
                }
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Reduced Betti numbers and torsion of an augmented chain complex.
pub fn betti(c: &ChainComplex) -> BettiProfile {
    if c.is_empty() {
        return BettiProfile { reduced_betti: Vec::new(), torsion: Vec::new(), empty: true };
    }
    let inv: Vec<Invariants> = c.boundaries.iter().map(invariants).collect();
    let top = c.ranks.len();
    let mut reduced_betti = Vec::with_capacity(top);
    let mut torsion = Vec::with_capacity(top);
    for q in 0..top {
        let above = inv.get(q + 1);
        reduced_betti.push(c.ranks[q] - inv[q].rank - above.map_or(0, |i| i.rank));
        torsion.push(above.map_or_else(Vec::new, |i| i.torsion.clone()));
    }
    BettiProfile { reduced_betti, torsion, empty: false }
}

/// Reduced Betti numbers over `F_2`.
pub fn betti_mod2(c: &ChainComplex) -> Vec<usize> {
    let ranks: Vec<usize> = c.boundaries.iter().map(rank_mod2).collect();
    (0..c.ranks.len()).map(|q| c.ranks[q] - ranks[q] - ranks.get(q + 1).copied().unwrap_or(0)).collect()
}

/// Homology of a simplicial complex.
pub fn simplicial_betti(k: &SimplicialComplex) -> BettiProfile {
    betti(&chain_complex_of(k))
}

/// Homology of a Hom complex from its cellular chains.
pub fn hom_betti(h: &HomComplex) -> BettiProfile {
    betti(&ChainComplex::of_hom(h))
}

/// Necessary condition for `k`-connectivity: non-empty, and `H̃_q = 0` for
/// `q ≤ k`. The fundamental group is not examined.
pub fn homology_connectivity(p: &BettiProfile, k: isize) -> bool {
    if p.empty {
        return false;
    }
    (0..=k).all(|q| p.betti(q as usize) == 0 && p.torsion.get(q as usize).is_none_or(Vec::is_empty))
}

/// A transform matrix and its inverse.
type Transform<T> = Option<(Vec<Vec<T>>, Vec<Vec<T>>)>;

/// Dense Smith normal form `P·A·Q = D` with optional transforms and their
/// inverses.
struct Snf<T> {
    diag: Vec<T>,
    p: Transform<T>,
    q: Transform<T>,
}

fn identity<T: Ring>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

impl<T: Ring> Snf<T> {
    fn compute(mut a: Vec<Vec<T>>, want_p: bool, want_q: bool) -> Res<Self> {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut p = want_p.then(|| (identity::<T>(m), identity::<T>(m)));
        let mut q = want_q.then(|| (identity::<T>(n), identity::<T>(n)));

        // row_i += f·row_j
        fn row_add<T: Ring>(a: &mut [Vec<T>], p: &mut Transform<T>, i: usize, j: usize, f: &T) -> Res<()> {
            if f.is_zero() {
                return Ok(());
            }
            let neg = T::zero() - f.clone();
            for k in 0..a[i].len() {
                a[i][k] = sub_mul(&a[i][k], &neg, &a[j][k])?;
            }
            if let Some((pm, pinv)) = p {
                for k in 0..pm[i].len() {
                    pm[i][k] = sub_mul(&pm[i][k], &neg, &pm[j][k])?;
                }
                for row in pinv.iter_mut() {
                    row[j] = sub_mul(&row[j], f, &row[i])?;
                }
            }
            Ok(())
        }
        // col_i += f·col_j
        fn col_add<T: Ring>(a: &mut [Vec<T>], q: &mut Transform<T>, i: usize, j: usize, f: &T) -> Res<()> {
            if f.is_zero() {
                return Ok(());
            }
            let neg = T::zero() - f.clone();
            for row in a.iter_mut() {
                row[i] = sub_mul(&row[i], &neg, &row[j])?;
            }
            if let Some((qm, qinv)) = q {
                for row in qm.iter_mut() {
                    row[i] = sub_mul(&row[i], &neg, &row[j])?;
                }
                for k in 0..qinv[j].len() {
                    qinv[j][k] = sub_mul(&qinv[j][k], f, &qinv[i][k])?;
                }
            }
            Ok(())
        }
        fn row_swap<T: Ring>(a: &mut [Vec<T>], p: &mut Transform<T>, i: usize, j: usize) {
            if i == j {
                return;
            }
            a.swap(i, j);
            if let Some((pm, pinv)) = p {
                pm.swap(i, j);
                for row in pinv.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
        fn col_swap<T: Ring>(a: &mut [Vec<T>], q: &mut Transform<T>, i: usize, j: usize) {
            if i == j {
                return;
            }
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            if let Some((qm, qinv)) = q {
                for row in qm.iter_mut() {
                    row.swap(i, j);
                }
                qinv.swap(i, j);
            }
        }

        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // smallest non-zero entry of the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            row_swap(&mut a, &mut p, t, bi);
            col_swap(&mut a, &mut q, t, bj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if !a[i][t].is_zero() {
                        let f = T::zero() - a[i][t].div_floor(&a[t][t]);
                        row_add(&mut a, &mut p, i, t, &f)?;
                        if !a[i][t].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..n {
                    if !a[t][j].is_zero() {
                        let f = T::zero() - a[t][j].div_floor(&a[t][t]);
                        col_add(&mut a, &mut q, j, t, &f)?;
                        if !a[t][j].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    // bring the smallest leftover in row or column t to the pivot
                    let mut bi = t;
                    let mut bj = t;
                    for i in t + 1..m {
                        if !a[i][t].is_zero() && a[i][t].abs() < a[bi][bj].abs() {
                            (bi, bj) = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        if !a[t][j].is_zero() && a[t][j].abs() < a[bi][bj].abs() {
                            (bi, bj) = (t, j);
                        }
                    }
                    row_swap(&mut a, &mut p, t, bi);
                    col_swap(&mut a, &mut q, t, bj);
                    continue;
                }
                // divisibility of the rest by the pivot
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
                match bad {
                    Some(i) => row_add(&mut a, &mut p, t, i, &T::one())?,
                    None => break,
                }
            }
            if a[t][t].is_negative() {
                for k in 0..n {
                    a[t][k] = T::zero() - a[t][k].clone();
                }
                if let Some((pm, pinv)) = &mut p {
                    for x in pm[t].iter_mut() {
                        *x = T::zero() - x.clone();
                    }
                    for row in pinv.iter_mut() {
                        row[t] = T::zero() - row[t].clone();
                    }
                }
            }
            diag.push(a[t][t].clone());
            t += 1;
        }
        Ok(Snf { diag, p, q })
    }
}

fn dense<T: Ring>(m: &SparseMatrix) -> Vec<Vec<T>> {
    let mut a = vec![vec![T::zero(); m.cols]; m.rows];
    for (j, c) in m.columns.iter().enumerate() {
        for &(i, v) in c {
            a[i][j] = T::from(v);
        }
    }
    a
}

fn mat_vec<T: Ring>(a: &[Vec<T>], x: &[T]) -> Res<Vec<T>> {
    a.iter().map(|row| row.iter().zip(x).try_fold(T::zero(), |acc, (r, v)| sub_mul(&acc, &(T::zero() - r.clone()), v))).collect()
}

/// Free-part coordinates of `H_q` for one chain complex.
struct FreeBasis<T> {
    /// rank of `∂_q`
    r: usize,
    /// rank of the boundary lattice inside the cycles
    s: usize,
    q: Vec<Vec<T>>,
    q_inv: Vec<Vec<T>>,
    p2: Vec<Vec<T>>,
    p2_inv: Vec<Vec<T>>,
}

impl<T: Ring> FreeBasis<T> {
    fn new(c: &ChainComplex, q: usize) -> Res<Self> {
        let n = c.ranks.get(q).copied().unwrap_or(0);
        let dq = Snf::compute(dense::<T>(&c.boundaries[q]), false, true)?;
        let r = dq.diag.len();
        let (qm, q_inv) = dq.q.expect("requested");
        let m = n - r;
        // boundaries in cycle coordinates
        let upper: Vec<Vec<T>> = match c.boundaries.get(q + 1) {
            Some(b) => {
                let b = dense::<T>(b);
                let cols = b.first().map_or(0, Vec::len);
                let mut out = vec![vec![T::zero(); cols]; m];
                for j in 0..cols {
                    let col: Vec<T> = b.iter().map(|row| row[j].clone()).collect();
                    let y = mat_vec(&q_inv, &col)?;
                    for i in 0..m {
                        out[i][j] = y[r + i].clone();
                    }
                }
                out
            }
            None => vec![Vec::new(); m],
        };
        let s2 = Snf::compute(upper, true, false)?;
        let s = s2.diag.len();
        let (p2, p2_inv) = s2.p.expect("requested");
        Ok(FreeBasis { r, s, q: qm, q_inv, p2, p2_inv })
    }

    fn rank(&self) -> usize {
        self.p2.len() - self.s
    }

    /// A cycle representing free generator `j`.
    fn representative(&self, j: usize) -> Res<Vec<T>> {
        let y: Vec<T> = self.p2_inv.iter().map(|row| row[self.s + j].clone()).collect();
        let n = self.q.len();
        let mut x = vec![T::zero(); n];
        for (i, row) in self.q.iter().enumerate() {
            for (k, yk) in y.iter().enumerate() {
                x[i] = sub_mul(&x[i], &(T::zero() - row[self.r + k].clone()), yk)?;
            }
        }
        Ok(x)
    }

    fn coordinates(&self, x: &[T]) -> Res<Vec<T>> {
        let u = mat_vec(&self.q_inv, x)?;
        let z = mat_vec(&self.p2, &u[self.r..])?;
        Ok(z[self.s..].to_vec())
    }
}

fn induced_in<T: Ring>(x: &ChainComplex, y: &ChainComplex, chain_map: &SparseMatrix, q: usize) -> Res<Vec<Vec<BigInt>>> {
    let bx = FreeBasis::<T>::new(x, q)?;
    let by = FreeBasis::<T>::new(y, q)?;
    let mut out = vec![vec![BigInt::zero(); bx.rank()]; by.rank()];
    for j in 0..bx.rank() {
        let rep = bx.representative(j)?;
        let mut img = vec![T::zero(); chain_map.rows];
        for (c, v) in rep.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for &(r, a) in &chain_map.columns[c] {
                img[r] = sub_mul(&img[r], &(T::zero() - T::from(a)), v)?;
            }
        }
        for (i, z) in by.coordinates(&img)?.into_iter().enumerate() {
            out[i][j] = z.to_big();
        }
    }
    Ok(out)
}

/// The matrix of `H_q(φ)` for a chain map given in degree `q`, in the
/// computed free-part bases (rows index `H_q(Y)`).
pub fn induced_map_of_chains(x: &ChainComplex, y: &ChainComplex, chain_map: &SparseMatrix, q: usize) -> Result<Vec<Vec<BigInt>>> {
    if q >= x.ranks.len() || q >= y.ranks.len() {
        let cols = if q < x.ranks.len() { FreeBasis::<BigInt>::new(x, q).map(|b| b.rank()).unwrap_or(0) } else { 0 };
        let rows = if q < y.ranks.len() { FreeBasis::<BigInt>::new(y, q).map(|b| b.rank()).unwrap_or(0) } else { 0 };
        return Ok(vec![vec![BigInt::zero(); cols]; rows]);
    }
    if chain_map.rows != y.ranks[q] || chain_map.cols != x.ranks[q] {
        return Err(Error::invalid("chain map has the wrong shape"));
    }
    Ok(induced_in::<i64>(x, y, chain_map, q)
        .or_else(|_| induced_in::<BigInt>(x, y, chain_map, q))
        .expect("BigInt arithmetic cannot overflow"))
}

/// Chain map of a simplicial map in degree `q`: `φ(σ)` with the sign of the
/// sorting permutation, or zero when `φ` collapses `σ`.
pub fn simplicial_chain_map(phi: &VertexMap, bx: &[Vec<Simplex>], by: &[Vec<Simplex>], q: usize) -> Result<SparseMatrix> {
    let empty = Vec::new();
    let src = bx.get(q).unwrap_or(&empty);
    let dst = by.get(q).unwrap_or(&empty);
    let index: BTreeMap<&[usize], usize> = dst.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut cols = Vec::with_capacity(src.len());
    for s in src {
        let img: Vec<usize> = s.iter().map(|&v| phi.apply(v)).collect();
        let mut sorted = img.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() < img.len() {
            cols.push(Vec::new());
            continue;
        }
        let row = *index.get(sorted.as_slice()).ok_or_else(|| Error::invalid("map is not simplicial"))?;
        let inversions = (0..img.len()).flat_map(|i| (i + 1..img.len()).map(move |j| (i, j))).filter(|&(i, j)| img[i] > img[j]).count();
        cols.push(vec![(row, if inversions % 2 == 0 { 1 } else { -1 })]);
    }
    Ok(SparseMatrix::from_columns(dst.len(), cols))
}

/// `H_q(φ)` for a simplicial map `φ: X → Y`.
pub fn induced_homology_map(phi: &VertexMap, x: &SimplicialComplex, y: &SimplicialComplex, q: usize) -> Result<Vec<Vec<BigInt>>> {
    if phi.len() != x.num_vertices() || phi.image.iter().any(|&v| v >= y.num_vertices()) {
        return Err(Error::invalid("map does not match the complexes"));
    }
    if !phi.is_simplicial(x, y) {
        return Err(Error::invalid("map is not simplicial"));
    }
    let (bx, by) = (simplex_basis(x), simplex_basis(y));
    let cx = chain_complex_with_basis(&bx);
    let cy = chain_complex_with_basis(&by);
    let f = simplicial_chain_map(phi, &bx, &by, q)?;
    induced_map_of_chains(&cx, &cy, &f, q)
}

/// The degree of a map between homology `q`-spheres, the single entry of
/// its induced matrix.
pub fn degree(phi: &VertexMap, x: &SimplicialComplex, y: &SimplicialComplex, q: usize) -> Result<BigInt> {
    let m = induced_homology_map(phi, x, y, q)?;
    if m.len() != 1 || m[0].len() != 1 {
        return Err(Error::invalid(format!("H_{q} is not of rank one on both sides")));
    }
    Ok(m[0][0].clone())
}

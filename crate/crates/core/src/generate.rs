//! Standard families of complexes. All vertices are labelled by integers.

use crate::cubical::{Cube, CubicalComplex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::simplicial::SimplicialComplex;
use crate::vertex::VertexId;

/// Either kind of complex, as returned by [`generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Complex {
    Simplicial(SimplicialComplex),
    Cubical(CubicalComplex),
}

fn int_labels(n: usize) -> Vec<VertexId> {
    (0..n).map(VertexId::from).collect()
}

fn out_of_range(what: &str) -> Error {
    Error::invalid(format!("parameter out of range: {what}"))
}

/// The complete graph `K_n` as a 1-complex (a single point when `n = 1`).
pub fn complete_graph(n: usize) -> Result<SimplicialComplex> {
    if n == 0 {
        return Err(out_of_range("complete_graph needs n >= 1"));
    }
    if n == 1 {
        return Ok(SimplicialComplex::from_indexed(int_labels(1), vec![vec![0]]));
    }
    let mut facets = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            facets.push(vec![a, b]);
        }
    }
    Ok(SimplicialComplex::from_indexed(int_labels(n), facets))
}

/// The cycle `C_n` on vertices `0..n`.
pub fn cycle(n: usize) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(out_of_range("cycle needs n >= 3"));
    }
    let facets = (0..n).map(|i| {
        let j = (i + 1) % n;
        vec![i.min(j), i.max(j)]
    });
    Ok(SimplicialComplex::from_indexed(int_labels(n), facets.collect()))
}

/// The path with `m` vertices and `m - 1` edges.
pub fn path(m: usize) -> Result<SimplicialComplex> {
    if m < 2 {
        return Err(out_of_range("path needs m >= 2"));
    }
    Ok(SimplicialComplex::from_indexed(int_labels(m), (0..m - 1).map(|i| vec![i, i + 1]).collect()))
}

/// The full `d`-simplex on vertices `0..=d`.
pub fn simplex(d: usize) -> SimplicialComplex {
    SimplicialComplex::from_indexed(int_labels(d + 1), vec![(0..=d).collect()])
}

/// `Δ^{[m]}`: the full simplex on the vertex set `{1, …, m}`.
pub fn simplex_on(m: usize) -> Result<SimplicialComplex> {
    if m == 0 {
        return Err(out_of_range("simplex_on needs m >= 1"));
    }
    let labels = (1..=m).map(VertexId::from).collect();
    Ok(SimplicialComplex::from_indexed(labels, vec![(0..m).collect()]))
}

/// The `k`-skeleton of the standard cube `I^d`. Vertex `v` is the corner whose
/// binary digits are its coordinates; each `k`-face lists its corners with
/// the free axes in ascending order.
pub fn cube_skeleton(d: usize, k: usize) -> Result<CubicalComplex> {
    if d == 0 || k > d || d > 12 {
        return Err(out_of_range("cube_skeleton needs 1 <= d <= 12 and 0 <= k <= d"));
    }
    let whole = Cube::new((0..1usize << d).collect());
    let tops = whole.faces_with_coords(k).into_iter().map(|(c, _, _)| c).collect();
    CubicalComplex::from_cubes(int_labels(1 << d), tops)
}

/// `m` squares glued edge to edge in a cycle. Square `i` has corners
/// `[a_i, a_{i+1}, b_i, b_{i+1}]` with `a_i = i` and `b_i = m + i`; with
/// `twist` the last square closes up with `a_m = b_0`, `b_m = a_0`, giving a
/// cubulated Möbius band.
pub fn square_ring(m: usize, twist: bool) -> Result<CubicalComplex> {
    if m < 3 {
        return Err(out_of_range("square_ring needs m >= 3"));
    }
    let a = |i: usize| i % m;
    let b = |i: usize| m + i % m;
    let mut tops = Vec::with_capacity(m);
    for i in 0..m {
        let (an, bn) = if twist && i == m - 1 { (b(0), a(0)) } else { (a(i + 1), b(i + 1)) };
        tops.push(Cube::new(vec![a(i), an, b(i), bn]));
    }
    CubicalComplex::from_cubes(int_labels(2 * m), tops)
}

/// `Clique(G)`: the flag complex of a graph.
pub fn clique_complex(g: &Graph) -> SimplicialComplex {
    SimplicialComplex::from_indexed(int_labels(g.n()), g.maximal_cliques())
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut g = Graph::new(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    g
}

/// Triangulated strip of `n` quads closed into a ring. Vertices `a_i = i`,
/// `b_i = n + i`; quad `i` is split into `{a_i, a_{i+1}, b_i}` and
/// `{a_{i+1}, b_i, b_{i+1}}`. With `twist` the last quad closes with
/// `a_n = b_0`, `b_n = a_0` (a Möbius strip).
pub fn triangulated_band(n: usize, twist: bool) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(out_of_range("triangulated band needs n >= 3"));
    }
    let mut facets = Vec::new();
    for i in 0..n {
        let (an, bn) = if twist && i == n - 1 { (n, 0) } else { ((i + 1) % n, n + (i + 1) % n) };
        let (ai, bi) = (i, n + i);
        let mut t1 = vec![ai, an, bi];
        let mut t2 = vec![an, bi, bn];
        t1.sort_unstable();
        t2.sort_unstable();
        facets.push(t1);
        facets.push(t2);
    }
    Ok(SimplicialComplex::from_indexed(int_labels(2 * n), facets))
}

/// An annulus between an inner `p`-cycle `a_0..a_{p-1}` (labels `0..p`) and an
/// outer `q`-cycle `b_0..b_{q-1}` (labels `p..p+q`), in `p + q` triangles. The
/// first triangle is `{a_0, a_1, b_0}`.
pub fn annulus(p: usize, q: usize) -> Result<SimplicialComplex> {
    if p < 3 || q < 3 {
        return Err(out_of_range("annulus needs both cycles of length >= 3"));
    }
    let mut facets = Vec::with_capacity(p + q);
    let (mut i, mut j) = (0, 0);
    while i < p || j < q {
        // advance along the inner cycle while it lags behind the outer one
        let inner = j == q || (i < p && (i == 0 || i * q <= j * p));
        let mut t = if inner {
            i += 1;
            vec![i - 1, i % p, p + j % q]
        } else {
            j += 1;
            vec![i % p, p + j - 1, p + j % q]
        };
        t.sort_unstable();
        facets.push(t);
    }
    Ok(SimplicialComplex::from_indexed(int_labels(p + q), facets))
}

fn glue_on_triangle(
    first: &SimplicialComplex,
    second: &SimplicialComplex,
    tri: [[usize; 3]; 2],
    perm: [usize; 3],
) -> Result<SimplicialComplex> {
    let ident: Vec<(VertexId, VertexId)> = (0..3).map(|i| (VertexId::from(tri[0][i]), VertexId::from(tri[1][perm[i]]))).collect();
    first.glue(second, &ident)
}

/// Two copies of a triangulated band glued along the triangle `{a_0, a_1, b_0}`
/// of each; `perm` says which vertex of the second copy's triangle goes to
/// `a_0`, `a_1`, `b_0` of the first.
pub fn glued_bands(n: usize, twist: bool, perm: [usize; 3]) -> Result<SimplicialComplex> {
    let band = triangulated_band(n, twist)?;
    glue_on_triangle(&band, &band, [[0, 1, n]; 2], perm)
}

/// Two annuli `annulus(p, q)` glued along `{a_0, a_1, b_0}` as in [`glued_bands`].
pub fn glued_annuli(first: (usize, usize), second: (usize, usize), perm: [usize; 3]) -> Result<SimplicialComplex> {
    let a = annulus(first.0, first.1)?;
    let b = annulus(second.0, second.1)?;
    glue_on_triangle(&a, &b, [[0, 1, first.0], [0, 1, second.0]], perm)
}

/// A "caterpillar": `m` triangles `{i, i+1, i+2}`, each sharing an edge with the next.
pub fn caterpillar(m: usize) -> Result<SimplicialComplex> {
    if m == 0 {
        return Err(out_of_range("caterpillar needs m >= 1"));
    }
    Ok(SimplicialComplex::from_indexed(int_labels(m + 2), (0..m).map(|i| vec![i, i + 1, i + 2]).collect()))
}

/// A tree-like pure `d`-complex grown from `Δ^d`: each choice `(f, r)` picks
/// facet `f mod #facets` and its ridge `r mod (d+1)` (the ridge omitting that
/// position) and cones it off to a fresh vertex.
pub fn tree_like(d: usize, choices: &[(usize, usize)]) -> SimplicialComplex {
    let mut facets: Vec<Vec<usize>> = vec![(0..=d).collect()];
    let mut next = d + 1;
    for &(f, r) in choices {
        let base = &facets[f % facets.len()];
        let mut new: Vec<usize> = base.iter().enumerate().filter(|&(i, _)| i != r % (d + 1)).map(|(_, &v)| v).collect();
        new.push(next);
        next += 1;
        facets.push(new);
    }
    SimplicialComplex::from_indexed(int_labels(next), facets)
}

/// Named-family dispatcher used by the command line and tests.
pub fn generate(family: &str, params: &[usize]) -> Result<Complex> {
    let p = |i: usize| params.get(i).copied().ok_or_else(|| out_of_range(&format!("{family} needs {} parameters", i + 1)));
    Ok(match family {
        "complete_graph" => Complex::Simplicial(complete_graph(p(0)?)?),
        "cycle" => Complex::Simplicial(cycle(p(0)?)?),
        "path" => Complex::Simplicial(path(p(0)?)?),
        "simplex" => Complex::Simplicial(simplex(p(0)?)),
        "simplex_on" => Complex::Simplicial(simplex_on(p(0)?)?),
        "cube_skeleton" => Complex::Cubical(cube_skeleton(p(0)?, p(1)?)?),
        "square_ring" => Complex::Cubical(square_ring(p(0)?, p(1)? != 0)?),
        "annulus" => Complex::Simplicial(annulus(p(0)?, p(1)?)?),
        "petersen_clique" => Complex::Simplicial(clique_complex(&petersen())),
        _ => return Err(Error::invalid(format!("unknown family {family}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn k4_counts() {
        let k4 = complete_graph(4).unwrap();
        assert_eq!(k4.f_vector(), vec![4, 6]);
    }

    #[test]
    fn cube_skeleton_counts() {
        for d in 1..=5 {
            for k in 0..=d {
                let c = cube_skeleton(d, k).unwrap();
                assert_eq!(c.cubes().len(), binom(d, k) << (d - k), "d={d} k={k}");
            }
        }
        assert_eq!(cube_skeleton(3, 2).unwrap().f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn cube_skeleton_from_corner_lists_matches() {
        let facets: Vec<Vec<i64>> =
            cube_skeleton(3, 2).unwrap().cubes().iter().map(|c| c.corners().iter().map(|&v| v as i64).collect()).collect();
        let built = CubicalComplex::new(&facets).unwrap();
        assert_eq!(built.f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn square_ring_counts() {
        // each square contributes 2 new vertices and 3 new edges around the ring
        for m in 3..=8 {
            for twist in [false, true] {
                let r = square_ring(m, twist).unwrap();
                assert_eq!(r.f_vector(), vec![2 * m, 3 * m, m], "m={m} twist={twist}");
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(cycle(2).is_err());
        assert!(square_ring(2, false).is_err());
        assert!(cube_skeleton(3, 4).is_err());
        assert!(path(1).is_err());
        assert!(generate("nope", &[]).is_err());
    }

    #[test]
    fn petersen_clique_is_flag() {
        let k = clique_complex(&petersen());
        assert!(k.is_flag());
        assert_eq!(k.f_vector(), vec![10, 15]);
    }

    #[test]
    fn bands() {
        for twist in [false, true] {
            let b = triangulated_band(4, twist).unwrap();
            assert_eq!(b.f_vector(), vec![8, 16, 8]);
        }
        let g = glued_bands(4, false, [0, 1, 2]).unwrap();
        assert_eq!(g.f_vector()[2], 15);
    }

    #[test]
    fn annulus_counts() {
        for (p, q) in [(3, 3), (3, 4), (4, 5), (6, 4)] {
            let a = annulus(p, q).unwrap();
            // Euler characteristic of an annulus is zero
            assert_eq!(a.f_vector(), vec![p + q, 2 * (p + q), p + q], "p={p} q={q}");
            assert_eq!(a.facets()[0], vec![0, 1, p]);
        }
        assert!(annulus(2, 5).is_err());
    }

    #[test]
    fn tree_like_grows() {
        let t = tree_like(2, &[(0, 0), (1, 2), (0, 1)]);
        assert_eq!(t.facets().len(), 4);
        assert_eq!(t.num_vertices(), 6);
    }
}

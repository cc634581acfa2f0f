//! Property tests for the structural invariants of each module.

use std::collections::BTreeSet;

use holonomy::bubble::{bubble_move, find_embeddings};
use holonomy::coloring::{chi, find_nondegenerate_map, graph_chi};
use holonomy::generate::{clique_complex, complete_graph, cube_skeleton, simplex, square_ring};
use holonomy::groupoid::{compose_path, holonomy_group, induced_holonomy_map, FacetComplex, RidgeGraph};
use holonomy::hom::{induced_postcompose, induced_precompose, HomComplex};
use holonomy::homology::{betti, betti_mod2, chain_complex_of, induced_homology_map, simplicial_betti};
use holonomy::invariants::{curvature_cc, invariant_i, local_z, signed_matrix, subcomplex_z, Length};
use holonomy::signed::SignedPermMatrix;
use holonomy::{CubicalComplex, Graph, SimplicialComplex, VertexMap};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_complex(max_vertices: usize, max_size: usize) -> impl Strategy<Value = SimplicialComplex> {
    (2..=max_vertices)
        .prop_flat_map(move |n| {
            proptest::collection::vec(proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=max_size.min(n)), 1..8)
        })
        .prop_map(|facets| SimplicialComplex::new(&facets).unwrap())
}

/// Pure complexes of dimension `size - 1` on at most `max_vertices` vertices.
fn arb_pure_complex(max_vertices: usize, size: usize) -> impl Strategy<Value = SimplicialComplex> {
    (size..=max_vertices)
        .prop_flat_map(move |n| proptest::collection::vec(proptest::sample::subsequence((0..n).collect::<Vec<_>>(), size), 1..8))
        .prop_map(|facets| SimplicialComplex::new(&facets).unwrap())
}

fn arb_graph(max_vertices: usize) -> impl Strategy<Value = Graph> {
    (1..=max_vertices).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m)
            .prop_map(move |keep| Graph::from_edges(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)))
    })
}

fn graph_complex(g: &Graph) -> SimplicialComplex {
    let mut facets: Vec<Vec<usize>> = (0..g.n()).map(|v| vec![v]).collect();
    facets.extend(g.edges().into_iter().map(|(a, b)| vec![a, b]));
    SimplicialComplex::new(&facets).unwrap()
}

/// A connected subcomplex of a cube skeleton grown from a seed.
fn random_cube_subcomplex(seed: u64) -> CubicalComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(2..=4);
    let k = rng.gen_range(1..=(d - 1).min(3));
    let full = cube_skeleton(d, k).unwrap();
    let g = RidgeGraph::build(&full).unwrap();
    let target = rng.gen_range(1..=full.cubes().len().min(16));
    let mut chosen = vec![rng.gen_range(0..full.cubes().len())];
    while chosen.len() < target {
        let frontier: Vec<usize> =
            chosen.iter().flat_map(|&a| g.neighbors(a).collect::<Vec<_>>()).filter(|b| !chosen.contains(b)).collect();
        let Some(&b) = frontier.choose(&mut rng) else { break };
        chosen.push(b);
    }
    full.sub_by_cubes(&chosen).unwrap()
}

fn random_walk<C: FacetComplex>(k: &C, start: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let g = RidgeGraph::build(k).unwrap();
    let mut w = vec![start];
    for _ in 0..len {
        let nb: Vec<usize> = g.neighbors(*w.last().unwrap()).collect();
        match nb.choose(rng) {
            Some(&b) => w.push(b),
            None => break,
        }
    }
    w
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|t| &row[t] * &b[t][j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn path_and_its_reverse_compose_to_identity(seed in any::<u64>(), len in 0usize..12) {
        let k = random_cube_subcomplex(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut w = random_walk(&k, 0, len, &mut rng);
        let back: Vec<usize> = w.iter().rev().skip(1).copied().collect();
        w.extend(back);
        prop_assert!(compose_path(&k, &w).unwrap().is_identity());
    }

    #[test]
    fn compose_path_respects_concatenation(k in (2usize..=4).prop_flat_map(|s| arb_pure_complex(7, s)), seed in any::<u64>(), a in 0usize..6, b in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = rng.gen_range(0..k.num_facets());
        let first = random_walk(&k, start, a, &mut rng);
        let second = random_walk(&k, *first.last().unwrap(), b, &mut rng);
        let whole: Vec<usize> = first.iter().chain(&second[1..]).copied().collect();
        let split = compose_path(&k, &first).unwrap().then(&compose_path(&k, &second).unwrap()).unwrap();
        prop_assert_eq!(compose_path(&k, &whole).unwrap(), split);
    }

    #[test]
    fn holonomy_order_is_base_independent(seed in any::<u64>()) {
        let k = random_cube_subcomplex(seed);
        let g = RidgeGraph::build(&k).unwrap();
        let order = holonomy_group(&k, 0).unwrap().order();
        for comp in g.components() {
            if comp.contains(&0) {
                for &s in &comp {
                    prop_assert_eq!(holonomy_group(&k, s).unwrap().order(), order);
                }
            }
        }
    }

    #[test]
    fn random_loops_lie_in_the_holonomy_group(seed in any::<u64>(), len in 1usize..12) {
        let k = random_cube_subcomplex(seed);
        let group = holonomy_group(&k, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let mut w = random_walk(&k, 0, len, &mut rng);
        // close the walk through the reversed prefix
        let back: Vec<usize> = w.iter().rev().skip(1).copied().collect();
        let detour = random_walk(&k, *w.last().unwrap(), len / 2, &mut rng);
        w.extend(detour.iter().skip(1));
        w.extend(detour.iter().rev().skip(1));
        w.extend(back);
        prop_assert!(group.contains(&compose_path(&k, &w).unwrap().perm));
    }

    #[test]
    fn parity_is_a_homomorphism(k in 1usize..5, a in any::<u64>(), b in any::<u64>()) {
        let random = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut axes: Vec<usize> = (0..k).collect();
            axes.shuffle(&mut rng);
            let dense: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| if axes[i] == j { if rng.gen_bool(0.5) { 1 } else { -1 } } else { 0 }).collect())
                .collect();
            SignedPermMatrix::from_dense(&dense).unwrap()
        };
        let (x, y) = (random(a), random(b));
        prop_assert_eq!(x.mul(&y).parity(), x.parity() ^ y.parity());
    }

    #[test]
    fn loop_parity_ignores_frames(seed in any::<u64>()) {
        let k = random_cube_subcomplex(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let i = rng.gen_range(0..k.cubes().len());
        let dim = k.dim();
        let mut axes: Vec<usize> = (0..dim).collect();
        axes.shuffle(&mut rng);
        let flip: usize = rng.gen_range(0..1 << dim);
        let old = k.cubes()[i].corners().to_vec();
        let corners: Vec<usize> = (0..1usize << dim)
            .map(|c| {
                let moved = (0..dim).fold(0, |m, j| m | (((c >> j) & 1) << axes[j]));
                old[moved ^ flip]
            })
            .collect();
        let k2 = k.with_frame(i, corners).unwrap();
        let group = holonomy_group(&k, 0).unwrap();
        for path in &group.generator_paths {
            let p1 = signed_matrix(&compose_path(&k, path).unwrap()).unwrap().parity();
            let p2 = signed_matrix(&compose_path(&k2, path).unwrap()).unwrap().parity();
            prop_assert_eq!(p1, p2);
        }
        prop_assert_eq!(invariant_i(&k).unwrap(), invariant_i(&k2).unwrap());
    }

    #[test]
    fn cube_subcomplexes_have_vanishing_i(seed in any::<u64>()) {
        let k = random_cube_subcomplex(seed);
        prop_assert_eq!(invariant_i(&k).unwrap(), 0);
        let cc = curvature_cc(&k).unwrap();
        prop_assert_eq!(cc.z_chain, None);
    }

    #[test]
    fn i_agrees_with_local_and_subcomplex_z(m in 3usize..7, twist in any::<bool>(), bubble in any::<bool>(), seed in any::<u64>()) {
        let mut k = square_ring(m, twist).unwrap();
        if bubble {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if let Some(e) = find_embeddings(&k, &[0], 8).choose(&mut rng) {
                k = bubble_move(&k, &[0], e).unwrap();
            }
        }
        let i = invariant_i(&k).unwrap();
        let all_inf = (0..k.cubes().len()).all(|s| local_z(&k, s).unwrap() == Length::Infinite);
        let (z, _) = subcomplex_z(&k).unwrap();
        prop_assert_eq!(i == 0, all_inf);
        prop_assert_eq!(i == 0, z == Length::Infinite);
        if let (Length::Finite(z), Some(chain)) = (z, curvature_cc(&k).unwrap().z_chain) {
            prop_assert!(z <= chain);
        }
    }

    #[test]
    fn bubble_moves_preserve_i(m in 3usize..8, twist in any::<bool>(), seed in any::<u64>()) {
        let k = square_ring(m, twist).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = rng.gen_range(0..m);
        if let Some(e) = find_embeddings(&k, &[b], 16).choose(&mut rng) {
            let after = bubble_move(&k, &[b], e).unwrap();
            prop_assert_eq!(invariant_i(&after).unwrap(), invariant_i(&k).unwrap());
        }
    }

    #[test]
    fn holonomy_pushes_forward_along_nondegenerate_maps(k in (2usize..=3).prop_flat_map(|s| arb_pure_complex(6, s)), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = rng.gen_range(0..k.num_facets());
        // an isomorphism onto a relabelled copy
        let mut perm: Vec<usize> = (0..k.num_vertices()).collect();
        perm.shuffle(&mut rng);
        let f = VertexMap::new(perm);
        let facets: Vec<Vec<usize>> = k.facets().iter().map(|s| f.apply_set(s)).collect();
        let l = SimplicialComplex::new(&facets).unwrap();
        let h = induced_holonomy_map(&k, &l, &f, f.is_nondegenerate(&k, &l), sigma).unwrap();
        prop_assert!(h.contained && h.injective && h.source_order == h.target_order);
        // a proper colouring is a map onto one simplex, whose holonomy is trivial
        let top = simplex(k.dim() as usize);
        if let Some(c) = find_nondegenerate_map(&k, &top).unwrap() {
            let h = induced_holonomy_map(&k, &top, &c, true, sigma).unwrap();
            prop_assert!(h.contained);
            prop_assert_eq!(h.source_order, 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hom_cells_are_downward_closed(k in arb_complex(4, 3), l in arb_complex(5, 3)) {
        let h = HomComplex::new(&k, &l).unwrap();
        for i in 0..h.len() {
            let eta = h.cell(i).to_vec();
            for v in 0..eta.len() {
                if eta[v].count_ones() < 2 {
                    continue;
                }
                let mut bits = eta[v];
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    bits &= bits - 1;
                    let mut smaller = eta.clone();
                    smaller[v] &= !b;
                    prop_assert!(h.index_of(&smaller).is_some());
                }
            }
        }
    }

    #[test]
    fn graph_hom_matches_clique_complex_hom(g in arb_graph(4), hgraph in arb_graph(5)) {
        let a = HomComplex::new(&graph_complex(&g), &graph_complex(&hgraph)).unwrap();
        let b = HomComplex::new(&clique_complex(&g), &clique_complex(&hgraph)).unwrap();
        let cells = |h: &HomComplex| (0..h.len()).map(|i| h.cell(i).to_vec()).collect::<BTreeSet<_>>();
        prop_assert_eq!(cells(&a), cells(&b));
    }

    #[test]
    fn precompose_and_postcompose_are_functorial(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inj = |n: usize, m: usize, rng: &mut ChaCha8Rng| {
            let mut t: Vec<usize> = (0..m).collect();
            t.shuffle(rng);
            VertexMap::new(t[..n].to_vec())
        };
        let l = complete_graph(4).unwrap();
        let (x, y, z) = (complete_graph(2).unwrap(), complete_graph(3).unwrap(), complete_graph(3).unwrap());
        let (f, g) = (inj(2, 3, &mut rng), inj(3, 3, &mut rng));
        let (hx, hy, hz) = (HomComplex::new(&x, &l).unwrap(), HomComplex::new(&y, &l).unwrap(), HomComplex::new(&z, &l).unwrap());
        let whole = induced_precompose(&f.then(&g), &x, &z, &hz, &hx).unwrap();
        let parts = induced_precompose(&g, &y, &z, &hz, &hy).unwrap().then(&induced_precompose(&f, &x, &y, &hy, &hx).unwrap());
        prop_assert_eq!(whole, parts);

        let src = complete_graph(2).unwrap();
        let (a, b, c) = (complete_graph(3).unwrap(), complete_graph(4).unwrap(), complete_graph(5).unwrap());
        let (p, q) = (inj(3, 4, &mut rng), inj(4, 5, &mut rng));
        let (ha, hb, hc) = (HomComplex::new(&src, &a).unwrap(), HomComplex::new(&src, &b).unwrap(), HomComplex::new(&src, &c).unwrap());
        let whole = induced_postcompose(&p.then(&q), &a, &c, &ha, &hc).unwrap();
        let parts = induced_postcompose(&p, &a, &b, &ha, &hb).unwrap().then(&induced_postcompose(&q, &b, &c, &hb, &hc).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn postcomposition_commutes_with_the_swap(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k2 = complete_graph(2).unwrap();
        let kn = complete_graph(n).unwrap();
        let h = HomComplex::new(&k2, &kn).unwrap();
        let swap = VertexMap::new(vec![1, 0]);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let g = VertexMap::new(perm);
        let alpha = induced_precompose(&swap, &k2, &k2, &h, &h).unwrap();
        let post = induced_postcompose(&g, &kn, &kn, &h, &h).unwrap();
        prop_assert_eq!(alpha.then(&post), post.then(&alpha));
    }

    #[test]
    fn boundary_squares_to_zero(k in arb_complex(7, 4)) {
        prop_assert!(chain_complex_of(&k).squares_to_zero());
    }

    #[test]
    fn hom_boundary_squares_to_zero(k in arb_complex(4, 3), l in arb_complex(5, 3)) {
        let h = HomComplex::new(&k, &l).unwrap();
        prop_assert!(holonomy::ChainComplex::of_hom(&h).squares_to_zero());
    }

    #[test]
    fn integer_and_mod2_betti_agree_without_torsion(k in arb_complex(7, 4)) {
        let c = chain_complex_of(&k);
        let p = betti(&c);
        if !p.has_torsion() {
            prop_assert_eq!(p.reduced_betti, betti_mod2(&c));
        }
    }

    #[test]
    fn euler_characteristic_matches_betti(k in arb_complex(7, 4)) {
        let c = chain_complex_of(&k);
        let p = simplicial_betti(&k);
        let alt: i64 = p.reduced_betti.iter().enumerate().map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(alt, c.euler_characteristic() - 1);
    }

    #[test]
    fn induced_homology_is_functorial(k in arb_complex(6, 3), a in proptest::collection::vec(0usize..4, 6), b in proptest::collection::vec(0usize..4, 4)) {
        // every vertex map into the boundary of a tetrahedron is simplicial from a 2-complex
        let y = simplex(3).skeleton(2).unwrap();
        let phi = VertexMap::new(a[..k.num_vertices()].to_vec());
        let psi = VertexMap::new(b);
        for q in 0..=2 {
            let hphi = induced_homology_map(&phi, &k, &y, q).unwrap();
            let hpsi = induced_homology_map(&psi, &y, &y, q).unwrap();
            let whole = induced_homology_map(&phi.then(&psi), &k, &y, q).unwrap();
            if hphi.is_empty() || hphi[0].is_empty() {
                continue;
            }
            prop_assert_eq!(whole, matmul(&hpsi, &hphi));
        }
    }

    #[test]
    fn chi_equals_chi_of_the_one_skeleton(k in arb_complex(8, 4)) {
        prop_assert_eq!(chi(&k).value, graph_chi(&k.one_skeleton_graph()).value);
    }

    #[test]
    fn clique_complexes_are_flag(g in arb_graph(7)) {
        prop_assert!(clique_complex(&g).is_flag());
    }
}

#[test]
fn cube_skeleton_face_counts() {
    let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    for d in 1..=5 {
        for k in 0..=d {
            let c = cube_skeleton(d, k).unwrap();
            for j in 0..=k {
                assert_eq!(c.faces_of_dim(j).len(), binom(d, j) << (d - j), "d={d} k={k} j={j}");
            }
        }
    }
}

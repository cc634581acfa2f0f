//! Bubble moves: exchange a ball of top cubes for the complementary ball in
//! the boundary of a `(k+1)`-cube.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::cubical::{Cube, CubicalComplex};
use crate::error::{Error, Result};
use crate::generate::cube_skeleton;
use crate::vertex::VertexId;

/// Vertex index of `K` mapped to a corner `0..2^{k+1}` of the big cube.
pub type Embedding = BTreeMap<usize, usize>;

struct Checked {
    boundary: CubicalComplex,
    /// Facet indices of `∂I^{k+1}` hit by `B`.
    image: BTreeSet<usize>,
}

fn check(k: &CubicalComplex, b: &[usize], embed: &Embedding) -> Result<Checked> {
    let dim = k.dim();
    if dim == 0 {
        return Err(Error::invalid("bubble moves need dimension at least 1"));
    }
    let boundary = cube_skeleton(dim + 1, dim)?;
    let bset: BTreeSet<usize> = b.iter().copied().collect();
    if bset.is_empty() || bset.iter().any(|&i| i >= k.cubes().len()) {
        return Err(Error::invalid("bubble needs a nonempty list of top cubes of the complex"));
    }
    let mut used = HashSet::new();
    for (&v, &c) in embed {
        if v >= k.vertices().len() || c >= 1 << (dim + 1) {
            return Err(Error::invalid("embedding mentions an unknown vertex or corner"));
        }
        if !used.insert(c) {
            return Err(Error::invalid("embedding is not injective"));
        }
    }
    let b_vertices: BTreeSet<usize> = bset.iter().flat_map(|&i| k.cubes()[i].corners().iter().copied()).collect();
    if let Some(v) = embed.keys().find(|v| !b_vertices.contains(v)) {
        return Err(Error::invalid(format!("embedding maps vertex {} outside the bubble", k.vertices()[*v])));
    }
    let mut image = BTreeSet::new();
    for &i in &bset {
        let cube = &k.cubes()[i];
        let mut img = Vec::with_capacity(cube.corners().len());
        for v in cube.corners() {
            let c = embed.get(v).ok_or_else(|| Error::invalid(format!("vertex {} of the bubble has no image", k.vertices()[*v])))?;
            img.push(*c);
        }
        let mapped = Cube::new(img);
        match boundary.face_id(&mapped.vertex_set()) {
            Some((d, f)) if d == dim && boundary.cubes()[f].edges() == mapped.edges() => {
                image.insert(f);
            }
            _ => return Err(Error::invalid(format!("cube {} does not map onto a facet of the {}-cube", k.fmt_cube(cube), dim + 1))),
        }
    }
    if image.len() == boundary.cubes().len() {
        return Err(Error::invalid("bubble covers the whole boundary of the cube"));
    }

    // Ridges of B lying in exactly one cube of B form its boundary.
    let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for &i in &bset {
        for (r, _, _) in k.cubes()[i].faces_with_coords(dim - 1) {
            *ridge_count.entry(r.vertex_set()).or_default() += 1;
        }
    }
    let rim: Vec<Vec<usize>> = ridge_count.into_iter().filter(|&(_, n)| n == 1).map(|(r, _)| r).collect();
    let in_rim = |face: &[usize]| rim.iter().any(|r| crate::simplicial::is_subset(face, r));
    for (j, c) in k.cubes().iter().enumerate() {
        if bset.contains(&j) {
            continue;
        }
        let shared: Vec<usize> = c.vertex_set().into_iter().filter(|v| b_vertices.contains(v)).collect();
        if shared.is_empty() {
            continue;
        }
        // Every vertex shared with the rest must lie on the rim, and so must
        // every shared face (faces are vertex-determined, so checking the
        // faces of `c` contained in B's vertex set suffices).
        for v in &shared {
            if !in_rim(&[*v]) {
                return Err(Error::invalid(format!(
                    "cube {} meets the bubble at vertex {} inside the bubble",
                    k.fmt_cube(c),
                    k.vertices()[*v]
                )));
            }
        }
        for d in 1..dim {
            for (f, _, _) in c.faces_with_coords(d) {
                let vs = f.vertex_set();
                if vs.iter().all(|v| b_vertices.contains(v))
                    && bset.iter().any(|&i| crate::simplicial::is_subset(&vs, &k.cubes()[i].vertex_set()))
                    && !in_rim(&vs)
                {
                    return Err(Error::invalid(format!(
                        "cube {} shares the face {} with the bubble off its boundary",
                        k.fmt_cube(c),
                        crate::vertex::fmt_labels(k.vertices(), &vs)
                    )));
                }
            }
        }
    }
    Ok(Checked { boundary, image })
}

/// Replaces the cubes `b` of `k` by the facets of `∂I^{k+1}` not hit by
/// `embed`. Corners of new cubes outside the image get fresh vertices.
pub fn bubble_move(k: &CubicalComplex, b: &[usize], embed: &Embedding) -> Result<CubicalComplex> {
    let Checked { boundary, image } = check(k, b, embed)?;
    let back: BTreeMap<usize, usize> = embed.iter().map(|(&v, &c)| (c, v)).collect();
    let bset: BTreeSet<usize> = b.iter().copied().collect();

    let mut labels: Vec<VertexId> = k.vertices().to_vec();
    let taken: BTreeSet<VertexId> = labels.iter().cloned().collect();
    let all_int = labels.iter().all(|l| matches!(l, VertexId::Int(_)));
    let mut next_int = labels.iter().filter_map(|l| if let VertexId::Int(i) = l { Some(*i) } else { None }).max().unwrap_or(-1) + 1;
    let mut fresh: BTreeMap<usize, usize> = BTreeMap::new();
    let mut tops: Vec<Vec<usize>> = Vec::new();
    for (j, c) in k.cubes().iter().enumerate() {
        if !bset.contains(&j) {
            tops.push(c.corners().to_vec());
        }
    }
    for (f, face) in boundary.cubes().iter().enumerate() {
        if image.contains(&f) {
            continue;
        }
        let mut corners = Vec::with_capacity(face.corners().len());
        for &corner in face.corners() {
            let v = match back.get(&corner) {
                Some(&v) => v,
                None => *fresh.entry(corner).or_insert_with(|| {
                    let label = if all_int {
                        next_int += 1;
                        VertexId::Int(next_int - 1)
                    } else {
                        let mut l = VertexId::Name(format!("q{corner}"));
                        while taken.contains(&l) {
                            l = VertexId::Name(format!("{l}'"));
                        }
                        l
                    };
                    labels.push(label);
                    labels.len() - 1
                }),
            };
            corners.push(v);
        }
        tops.push(corners);
    }
    let labelled: Vec<Vec<VertexId>> = tops.iter().map(|c| c.iter().map(|&v| labels[v].clone()).collect()).collect();
    CubicalComplex::new(&labelled)
}

/// All signed permutations of `k` axes, as corner position maps of a `k`-cube.
fn cube_automorphisms(k: usize) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in &perms {
            for a in 0..k {
                if !p.contains(&a) {
                    let mut q = p.clone();
                    q.push(a);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    for p in &perms {
        for flips in 0..(1usize << k) {
            out.push((0..1usize << k).map(|c| (0..k).filter(|&i| (c >> i) & 1 == 1).fold(flips, |acc, i| acc ^ (1 << p[i]))).collect());
        }
    }
    out
}

/// Valid embeddings of the cubes `b` into `∂I^{k+1}`, at most `limit`, found
/// by extending cube by cube in index order of a BFS over shared vertices.
pub fn find_embeddings(k: &CubicalComplex, b: &[usize], limit: usize) -> Vec<Embedding> {
    let dim = k.dim();
    let Ok(boundary) = cube_skeleton(dim + 1, dim) else { return Vec::new() };
    let autos = cube_automorphisms(dim);
    let mut order: Vec<usize> = Vec::new();
    let mut rest: Vec<usize> = b.to_vec();
    rest.sort_unstable();
    rest.dedup();
    if rest.is_empty() {
        return Vec::new();
    }
    order.push(rest.remove(0));
    while !rest.is_empty() {
        let pos =
            rest.iter().position(|&c| order.iter().any(|&o| k.cubes()[o].corners().iter().any(|v| k.cubes()[c].position(*v).is_some())));
        match pos {
            Some(p) => order.push(rest.remove(p)),
            None => order.push(rest.remove(0)),
        }
    }
    let mut out = Vec::new();
    let mut embed = Embedding::new();
    extend(k, &boundary, &autos, &order, 0, &mut embed, &mut out, limit, b);
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    k: &CubicalComplex,
    boundary: &CubicalComplex,
    autos: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    embed: &mut Embedding,
    out: &mut Vec<Embedding>,
    limit: usize,
    b: &[usize],
) {
    if out.len() >= limit {
        return;
    }
    if depth == order.len() {
        if check(k, b, embed).is_ok() {
            out.push(embed.clone());
        }
        return;
    }
    let cube = &k.cubes()[order[depth]];
    for face in boundary.cubes() {
        for a in autos {
            let mut added = Vec::new();
            let mut ok = true;
            for (p, &v) in cube.corners().iter().enumerate() {
                let c = face.corners()[a[p]];
                match embed.get(&v) {
                    Some(&e) if e != c => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        if embed.values().any(|&e| e == c) {
                            ok = false;
                            break;
                        }
                        embed.insert(v, c);
                        added.push(v);
                    }
                }
            }
            if ok {
                extend(k, boundary, autos, order, depth + 1, embed, out, limit, b);
            }
            for v in added {
                embed.remove(&v);
            }
            if out.len() >= limit {
                return;
            }
        }
    }
}

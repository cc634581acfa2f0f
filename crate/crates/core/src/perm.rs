//! Permutations of `0..n` as position arrays, and finite group closure.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};

/// `p[i]` is the image of `i`.
pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &v)| i == v)
}

/// `p` first, then `q`.
pub fn then(p: &[usize], q: &[usize]) -> Perm {
    p.iter().map(|&i| q[i]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

pub fn order(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut lcm = 1usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        lcm = num_integer::lcm(lcm, len);
    }
    lcm
}

/// All elements of the group generated by `gens` acting on `0..n`, sorted.
/// Fails if the group grows beyond `limit` elements.
pub fn closure(n: usize, gens: &[Perm], limit: usize) -> Result<Vec<Perm>> {
    let id = identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = then(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return Err(Error::SizeLimit(format!("group closure exceeds {limit} elements")));
                }
                queue.push_back(y);
            }
        }
    }
    let sorted: BTreeSet<Perm> = seen.into_iter().collect();
    Ok(sorted.into_iter().collect())
}

/// Order, sorted multiset of element orders, and commutativity of a finite group
/// given by its full element list.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IsoClass {
    pub order: usize,
    pub element_orders: Vec<usize>,
    pub abelian: bool,
}

pub fn iso_class(elements: &[Perm]) -> IsoClass {
    let mut element_orders: Vec<usize> = elements.iter().map(|p| order(p)).collect();
    element_orders.sort_unstable();
    let abelian = elements.iter().all(|a| elements.iter().all(|b| then(a, b) == then(b, a)));
    IsoClass { order: elements.len(), element_orders, abelian }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_s3() {
        let g = closure(3, &[vec![1, 0, 2], vec![1, 2, 0]], 100).unwrap();
        assert_eq!(g.len(), 6);
        let c = iso_class(&g);
        assert!(!c.abelian);
        assert_eq!(c.element_orders, vec![1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn klein_four() {
        let g = closure(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 100).unwrap();
        let c = iso_class(&g);
        assert_eq!(c, IsoClass { order: 4, element_orders: vec![1, 2, 2, 2], abelian: true });
    }

    #[test]
    fn limit_binds() {
        assert!(matches!(closure(5, &[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 10), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn inverse_and_order() {
        let p = vec![2, 0, 1, 4, 3];
        assert!(is_identity(&then(&p, &inverse(&p))));
        assert_eq!(order(&p), 6);
    }
}

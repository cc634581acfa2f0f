//! Signed permutation matrices (the hyperoctahedral group `BC_k`) and the
//! parity homomorphism `BC_k → Z₂`.

use crate::error::{Error, Result};

/// A cube frame is the corner order of a stored cube.
pub type CubeFrame = crate::cubical::Cube;

/// `M[perm[i]][i] = sign[i]`, all other entries zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermMatrix {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPermMatrix {
    pub fn identity(k: usize) -> Self {
        SignedPermMatrix { perm: (0..k).collect(), sign: vec![1; k] }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    /// Reads a dense matrix with exactly one `±1` per row and column.
    pub fn from_dense(m: &[Vec<i64>]) -> Result<Self> {
        let k = m.len();
        let mut perm = vec![usize::MAX; k];
        let mut sign = vec![0; k];
        let mut row_used = vec![false; k];
        for i in 0..k {
            for (j, row) in m.iter().enumerate() {
                if row.len() != k {
                    return Err(Error::invalid("matrix is not square"));
                }
                match row[i] {
                    0 => {}
                    1 | -1 if perm[i] == usize::MAX && !row_used[j] => {
                        perm[i] = j;
                        sign[i] = row[i] as i8;
                        row_used[j] = true;
                    }
                    _ => return Err(Error::invalid("not a signed permutation matrix")),
                }
            }
            if perm[i] == usize::MAX {
                return Err(Error::invalid("not a signed permutation matrix"));
            }
        }
        Ok(SignedPermMatrix { perm, sign })
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let k = self.size();
        let mut m = vec![vec![0; k]; k];
        for i in 0..k {
            m[self.perm[i]][i] = self.sign[i] as i64;
        }
        m
    }

    /// The matrix of a cube isomorphism given as a corner position map
    /// (`corner_perm[c]` is the target position of source corner `c`).
    pub fn from_corner_perm(corner_perm: &[usize]) -> Result<Self> {
        let n = corner_perm.len();
        if !n.is_power_of_two() {
            return Err(Error::invalid("corner map length is not a power of two"));
        }
        let k = n.trailing_zeros() as usize;
        let b = corner_perm[0];
        let mut perm = Vec::with_capacity(k);
        let mut sign = Vec::with_capacity(k);
        for i in 0..k {
            let d = corner_perm[1 << i] ^ b;
            if !d.is_power_of_two() {
                return Err(Error::invalid("corner map is not a cube isomorphism"));
            }
            let j = d.trailing_zeros() as usize;
            perm.push(j);
            sign.push(if (b >> j) & 1 == 0 { 1 } else { -1 });
        }
        let m = SignedPermMatrix { perm, sign };
        if (0..n).any(|c| m.corner_image(c, b) != corner_perm[c]) || !m.is_valid() {
            return Err(Error::invalid("corner map is not a cube isomorphism"));
        }
        Ok(m)
    }

    fn corner_image(&self, c: usize, base: usize) -> usize {
        (0..self.size()).filter(|&i| (c >> i) & 1 == 1).fold(base, |acc, i| acc ^ (1 << self.perm[i]))
    }

    fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.size()];
        self.perm.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }

    /// The matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size());
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let sign = (0..other.size()).map(|i| self.sign[other.perm[i]] * other.sign[i]).collect();
        SignedPermMatrix { perm, sign }
    }

    /// Number of `−1` entries mod 2; zero exactly on `BC_k^even`.
    pub fn parity(&self) -> u8 {
        (self.sign.iter().filter(|&&s| s < 0).count() % 2) as u8
    }
}

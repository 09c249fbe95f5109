//! The hyperoctahedral group Bₙ of signed permutations: the isometries of
//! ℓ1ⁿ that fix the origin.

use std::fmt;

use crate::error::{Error, Result};

/// Acts by `(g·x)_i = ε_i · x_{σ(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPerm {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!("signs must be ±1, got {signs:?}")));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn dimension(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// `self ∘ other`, i.e. `x ↦ self·(other·x)`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.dimension();
        let perm = (0..n).map(|i| other.perm[self.perm[i]]).collect();
        let signs = (0..n)
            .map(|i| self.signs[i] * other.signs[self.perm[i]])
            .collect();
        SignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.dimension();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        SignedPerm { perm, signs }
    }

    /// Image of a point.
    pub fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Clone + std::ops::Neg<Output = T>,
    {
        (0..self.dimension())
            .map(|i| {
                let v = x[self.perm[i]].clone();
                if self.signs[i] > 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }

    /// Image of the unit lattice cube with corner `h`, as the corner of the
    /// image cube.
    pub fn apply_cell(&self, h: &[i64]) -> Vec<i64> {
        (0..self.dimension())
            .map(|i| {
                let v = h[self.perm[i]];
                if self.signs[i] > 0 {
                    v
                } else {
                    -v - 1
                }
            })
            .collect()
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dimension())
            .map(|i| {
                let s = if self.signs[i] > 0 { "+" } else { "-" };
                format!("{s}x{}", self.perm[i] + 1)
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `2ⁿ·n!` elements: permutations in lexicographic order, and for each
/// permutation the sign vectors in binary order (bit `i` set ⇒ `ε_i = −1`).
pub fn enumerate_hyperoctahedral(n: usize) -> Vec<SignedPerm> {
    let perms = permutations(n);
    let mut out = Vec::with_capacity(perms.len() << n);
    for perm in perms {
        for mask in 0u64..(1u64 << n) {
            let signs = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push(SignedPerm {
                perm: perm.clone(),
                signs,
            });
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    go(n, &mut cur, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_hyperoctahedral(0).len(), 1);
        assert_eq!(enumerate_hyperoctahedral(1).len(), 2);
        assert_eq!(enumerate_hyperoctahedral(2).len(), 8);
        let b3 = enumerate_hyperoctahedral(3);
        assert_eq!(b3.len(), 48);
        let distinct: HashSet<_> = b3.iter().collect();
        assert_eq!(distinct.len(), 48);
        assert!(b3[0].is_identity());
    }

    #[test]
    fn closed_under_composition_and_inverse() {
        let b3 = enumerate_hyperoctahedral(3);
        let members: HashSet<_> = b3.iter().cloned().collect();
        for a in &b3 {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in b3.iter().step_by(5) {
                assert!(members.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn composition_matches_action() {
        let b2 = enumerate_hyperoctahedral(2);
        let x = vec![3i64, -7];
        for a in &b2 {
            for b in &b2 {
                assert_eq!(a.compose(b).apply(&x), a.apply(&b.apply(&x)));
                let h = vec![2i64, -1];
                assert_eq!(a.compose(b).apply_cell(&h), a.apply_cell(&b.apply_cell(&h)));
            }
        }
    }

    #[test]
    fn swap_with_reflection_moves_cell() {
        let g = SignedPerm::new(vec![1, 0], vec![-1, 1]).unwrap();
        assert_eq!(g.apply_cell(&[0, 0]), vec![-1, 0]);
        assert!(SignedPerm::new(vec![0, 0], vec![1, 1]).is_err());
    }
}

//! Permutations of `{0, …, k-1}`, used both for the `Σₙ` action on index
//! values and for rearranging tensor legs.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection on `{0, …, len-1}` stored as its image vector: `self[i]` is
/// where `i` is sent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::domain(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation from 1-based images, as written in the CLI.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero_based = images
            .iter()
            .map(|&x| {
                x.checked_sub(1)
                    .ok_or_else(|| Error::domain("permutation images are 1-based"))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(zero_based)
    }

    pub fn identity(len: usize) -> Self {
        Permutation((0..len).collect())
    }

    /// The transposition of `0` and `1` (identity when `len < 2`).
    pub fn swap01(len: usize) -> Self {
        let mut p = Self::identity(len);
        if len >= 2 {
            p.0.swap(0, 1);
        }
        p
    }

    /// The cycle `0 → 1 → … → len-1 → 0`.
    pub fn cycle(len: usize) -> Self {
        Permutation((0..len).map(|i| (i + 1) % len.max(1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::domain(format!(
                "cannot compose permutations of {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation(other.0.iter().map(|&i| self.0[i]).collect()))
    }

    /// All permutations of `len` points in lexicographic order of images.
    pub fn all(len: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(len);
        let mut used = vec![false; len];
        fn rec(len: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if current.len() == len {
                out.push(Permutation(current.clone()));
                return;
            }
            for x in 0..len {
                if !used[x] {
                    used[x] = true;
                    current.push(x);
                    rec(len, current, used, out);
                    current.pop();
                    used[x] = false;
                }
            }
        }
        rec(len, &mut current, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

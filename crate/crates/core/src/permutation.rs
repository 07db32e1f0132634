//! Permutations of party labels and their action on basis indices.
//!
//! A [`Permutation`] stores the image of every label: `images[i] = σ(i)`.
//! Acting on a state, σ moves the local state of party `i` into slot `σ(i)`,
//! so a basis state `|p_0 … p_{n-1}⟩` is sent to `|q⟩` with `q_{σ(i)} = p_i`.
//! The cyclic translation `i → i+1 (mod n)` therefore maps `|001⟩` to `|100⟩`.

use itertools::Itertools;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// Build from the list of images, checking that it is a bijection on `0..n`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Transposition of labels `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(vec![a, b]));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Self { images })
    }

    /// Periodic translation `i → i + shift (mod n)`.
    pub fn cyclic_shift(n: usize, shift: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + shift) % n.max(1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Self { images }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i32 {
        let n = self.images.len();
        let mut visited = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !visited[j] {
                visited[j] = true;
                j = self.images[j];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Every permutation of `0..n` in lexicographic order of the image list.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n)
            .permutations(n)
            .map(|images| Permutation { images })
    }

    /// For a homogeneous register of `n` parties with local dimension `d`,
    /// `map[q]` is the flat index `p` such that `(σψ)[q] = ψ[p]`.
    pub fn source_index_map(&self, d: usize) -> Vec<usize> {
        let n = self.images.len();
        let total = d.pow(n as u32);
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            // p_i = q_{σ(i)}
            let p = (0..n).fold(0usize, |acc, i| acc * d + digits[self.images[i]]);
            map.push(p);
            increment_digits(&mut digits, d);
        }
        map
    }
}

/// Advance a row-major (first digit slowest) mixed-radix counter.
pub(crate) fn increment_digits(digits: &mut [usize], d: usize) {
    for digit in digits.iter_mut().rev() {
        *digit += 1;
        if *digit < d {
            return;
        }
        *digit = 0;
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

//! Permutations of `{1..n}` in one-line notation.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// `σ` stored as `images[i-1] = σ(i)`. Products compose right to left:
/// `(στ)(i) = σ(τ(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// The transposition `(i j)`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::OutOfRange { what: "transposition point", value: i.max(j) });
        }
        let mut p = Permutation::identity(n);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    /// The adjacent transposition `s_r = (r r+1)`.
    pub fn simple(n: usize, r: usize) -> Result<Self> {
        Permutation::transposition(n, r, r + 1)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (1..=n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&i| self.apply(i)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn inversions(&self) -> usize {
        let n = self.degree();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count()
    }

    pub fn is_even(&self) -> bool {
        self.inversions() % 2 == 0
    }

    /// A word `[a_1, …, a_k]` with `σ = s_{a_1} ⋯ s_{a_k}`, found by bubble sort.
    pub fn simple_word(&self) -> Vec<usize> {
        let mut w = self.images.clone();
        let mut sorted_by = Vec::new();
        let n = w.len();
        loop {
            let mut swapped = false;
            for a in 1..n {
                if w[a - 1] > w[a] {
                    w.swap(a - 1, a);
                    sorted_by.push(a);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        // w·s_{b_1}⋯s_{b_k} = id, so w = s_{b_k}⋯s_{b_1}.
        sorted_by.reverse();
        sorted_by
    }
}

/// All transpositions `(i j)`, `i < j`, in lexicographic order, adjacent ones first.
pub fn transpositions(n: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
    for i in 1..=n {
        for j in i + 2..=n {
            out.push((i, j));
        }
    }
    out
}

/// A random word of even length `≤ max_len` in the letters `1..n` with signs
/// (negative letters are inverses).
pub fn random_even_word<R: Rng + ?Sized>(n: usize, max_len: usize, rng: &mut R) -> Vec<i64> {
    let half = rng.gen_range(1..=(max_len / 2).max(1));
    (0..2 * half)
        .map(|_| {
            let a = rng.gen_range(1..n) as i64;
            if rng.gen_bool(0.5) {
                a
            } else {
                -a
            }
        })
        .collect()
}

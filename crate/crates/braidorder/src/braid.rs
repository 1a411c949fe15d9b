//! Braid words, their Artin action on the free group, and underlying
//! permutations.
//!
//! A braid on `n` strands acts on the free group of rank `n` on the right:
//! composing braid words left to right composes the actions left to right.
//! Permutations act the same way, so `underlying_permutation` is a
//! homomorphism for that convention.

use std::fmt;

use thiserror::Error;

use crate::words::{
    parse_index_exponent, tokenize, Endomorphism, FreeGroup, Gen, ParseError, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("braid letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: u32 },
    #[error("strand counts differ: {left} vs {right}")]
    StrandMismatch { left: u32, right: u32 },
    #[error("need at least {required} strands, got {actual}")]
    TooFewStrands { required: u32, actual: u32 },
    #[error("pure braid generator needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")]
    BadAxisPair { i: u32, j: u32, n: u32 },
    #[error("images do not define a permutation of 1..={degree}")]
    NotAPermutation { degree: u32 },
}

/// A word in the braid generators of `B_n`, written as signed letters:
/// `k` is `σ_k` and `-k` is `σ_k^-1`, with `1 <= k <= n-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands { required: 2, actual: strands });
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() > strands - 1 {
                return Err(BraidError::LetterOutOfRange { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: u32) -> Self {
        BraidWord::new(strands, Vec::new()).expect("at least two strands")
    }

    /// The one-letter braid `σ_k` (`k > 0`) or `σ_{-k}^-1` (`k < 0`).
    pub fn generator(strands: u32, letter: i32) -> Result<Self, BraidError> {
        BraidWord::new(strands, vec![letter])
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation: `self` first, then `other`.
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn power(&self, e: i64) -> BraidWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// The same word viewed in a larger braid group.
    pub fn embed(&self, strands: u32) -> Result<BraidWord, BraidError> {
        if strands < self.strands {
            return Err(BraidError::StrandMismatch { left: self.strands, right: strands });
        }
        Ok(BraidWord { strands, letters: self.letters.clone() })
    }

    /// The right action on the rank-`n` free group, letters composed left
    /// to right.
    pub fn artin_action(&self) -> Endomorphism {
        let group = FreeGroup::new(self.strands);
        let mut endo = Endomorphism::identity(group);
        for &letter in &self.letters {
            endo = endo.then(&generator_action(self.strands, letter));
        }
        endo
    }

    /// Image under the homomorphism `B_n → S_n`, `σ_k ↦ (k k+1)`.
    pub fn underlying_permutation(&self) -> Permutation {
        let mut perm = Permutation::identity(self.strands);
        for &letter in &self.letters {
            let k = letter.unsigned_abs();
            perm = perm.compose(&Permutation::transposition(self.strands, k, k + 1));
        }
        perm
    }

    /// Parses `s<k>` / `s<k>^<e>` tokens, or a bare signed-letter list like
    /// `1 1 -2`. The empty string (or `1` in the `s`-grammar sense) is not
    /// special-cased: an empty input is the identity braid.
    pub fn parse(strands: u32, input: &str) -> Result<Self, ParseError> {
        if strands < 2 {
            return Err(ParseError::new(1, 1, format!("need at least 2 strands, got {strands}")));
        }
        let mut letters = Vec::new();
        for (col, token) in tokenize(input) {
            if let Some(rest) = token.strip_prefix('s') {
                let (k, e) = parse_index_exponent(rest, 1, col, token)?;
                if k == 0 || k > strands - 1 {
                    return Err(ParseError::new(
                        1,
                        col,
                        format!("generator s{k} out of range for {strands} strands"),
                    ));
                }
                let letter = if e > 0 { k as i32 } else { -(k as i32) };
                for _ in 0..e.unsigned_abs() {
                    letters.push(letter);
                }
            } else {
                let l: i32 = token.parse().map_err(|_| {
                    ParseError::new(1, col, format!("expected `s<k>` or a signed letter, found `{token}`"))
                })?;
                if l == 0 || l.unsigned_abs() > strands - 1 {
                    return Err(ParseError::new(
                        1,
                        col,
                        format!("letter {l} out of range for {strands} strands"),
                    ));
                }
                letters.push(l);
            }
        }
        BraidWord::new(strands, letters).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }
}

impl fmt::Display for BraidWord {
    /// `s<k>^<e>` tokens with adjacent equal letters merged; empty word
    /// prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            let e = if l > 0 { run as i64 } else { -(run as i64) };
            if !first {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "s{}", l.unsigned_abs())?;
            } else {
                write!(f, "s{}^{}", l.unsigned_abs(), e)?;
            }
            first = false;
            i += run;
        }
        Ok(())
    }
}

/// Images of the generators under one braid letter.
pub fn generator_action(strands: u32, letter: i32) -> Endomorphism {
    let group = FreeGroup::new(strands);
    let k = letter.unsigned_abs();
    assert!(k >= 1 && k < strands, "braid letter out of range");
    let xi = Gen::new(k);
    let xj = Gen::new(k + 1);
    let images = group
        .gens()
        .map(|g| {
            if letter > 0 {
                if g == xi {
                    // x_k ↦ x_k x_{k+1} x_k^-1
                    Word::from_runs([(xi, 1), (xj, 1), (xi, -1)])
                } else if g == xj {
                    Word::generator(xi)
                } else {
                    Word::generator(g)
                }
            } else if g == xi {
                Word::generator(xj)
            } else if g == xj {
                // x_{k+1} ↦ x_{k+1}^-1 x_k x_{k+1}
                Word::from_runs([(xj, -1), (xi, 1), (xj, 1)])
            } else {
                Word::generator(g)
            }
        })
        .collect();
    Endomorphism::new(group, images).expect("images are in range")
}

/// The pure braid generator `A_{i,j} = σ_{j-1} ... σ_{i+1} σ_i^2 σ_{i+1}^-1
/// ... σ_{j-1}^-1`, which wraps strand `j` around strand `i`.
pub fn pure_braid_generator(i: u32, j: u32, n: u32) -> Result<BraidWord, BraidError> {
    if !(1 <= i && i < j && j <= n) {
        return Err(BraidError::BadAxisPair { i, j, n });
    }
    let mut letters = Vec::new();
    for k in (i + 1..j).rev() {
        letters.push(k as i32);
    }
    letters.push(i as i32);
    letters.push(i as i32);
    for k in i + 1..j {
        letters.push(-(k as i32));
    }
    BraidWord::new(n, letters)
}

/// Closed-form images of the generators under the action of `A_{i,j}`:
/// `x_i ↦ (x_i x_j) x_i (x_i x_j)^-1`, `x_k ↦ [x_i, x_j] x_k [x_i, x_j]^-1`
/// for `i < k < j`, `x_j ↦ x_i x_j x_i^-1`, and everything else fixed.
pub fn aij_images(i: u32, j: u32, n: u32) -> Result<Endomorphism, BraidError> {
    if !(1 <= i && i < j && j <= n) {
        return Err(BraidError::BadAxisPair { i, j, n });
    }
    let group = FreeGroup::new(n);
    let xi = Gen::new(i);
    let xj = Gen::new(j);
    let commutator = Word::from_runs([(xi, 1), (xj, 1), (xi, -1), (xj, -1)]);
    let images = group
        .gens()
        .map(|g| {
            let k = g.index();
            if k == i {
                Word::generator(g).conjugated_by(&Word::from_runs([(xi, 1), (xj, 1)]))
            } else if k == j {
                Word::generator(g).conjugated_by(&Word::generator(xi))
            } else if i < k && k < j {
                Word::generator(g).conjugated_by(&commutator)
            } else {
                Word::generator(g)
            }
        })
        .collect();
    Ok(Endomorphism::new(group, images).expect("images are in range"))
}

/// A permutation of `{1, ..., n}`, acting on the right like braids do:
/// `(στ)(i) = τ(σ(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// Builds from the image list `images[k-1] = σ(k)`, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, BraidError> {
        let n = images.len() as u32;
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v < 1 || v > n || seen[(v - 1) as usize] {
                return Err(BraidError::NotAPermutation { degree: n });
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: u32, a: u32, b: u32) -> Self {
        assert!(a >= 1 && b >= 1 && a <= n && b <= n && a != b);
        let mut images: Vec<u32> = (1..=n).collect();
        images.swap((a - 1) as usize, (b - 1) as usize);
        Permutation { images }
    }

    /// A single cycle `(c_1 c_2 ... c_r)` inside `S_n`.
    pub fn from_cycle(n: u32, cycle: &[u32]) -> Result<Self, BraidError> {
        let mut images: Vec<u32> = (1..=n).collect();
        for (idx, &c) in cycle.iter().enumerate() {
            if c < 1 || c > n {
                return Err(BraidError::NotAPermutation { degree: n });
            }
            let next = cycle[(idx + 1) % cycle.len()];
            images[(c - 1) as usize] = next;
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[(i - 1) as usize]
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "permutation degrees differ");
        Permutation { images: self.images.iter().map(|&v| other.apply(v)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            images[(v - 1) as usize] = k as u32 + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k as u32 + 1)
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        (1..=self.degree()).filter(|&i| self.apply(i) == i).collect()
    }

    /// Orbits sorted by least element, each listed from its least element
    /// following the permutation.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n as usize];
        let mut orbits = Vec::new();
        for start in 1..=n {
            if seen[(start - 1) as usize] {
                continue;
            }
            let mut orbit = vec![start];
            seen[(start - 1) as usize] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[(cur - 1) as usize] = true;
                orbit.push(cur);
                cur = self.apply(cur);
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// A positive braid word with this underlying permutation, found by
    /// sorting the one-line notation with adjacent swaps (so its length is
    /// the inversion count). A permutation fixing `n` lifts inside `B_{n-1}`.
    pub fn positive_braid_lift(&self) -> BraidWord {
        let mut arr = self.images.clone();
        let mut letters = Vec::new();
        let n = arr.len();
        loop {
            let mut swapped = false;
            for k in 0..n.saturating_sub(1) {
                if arr[k] > arr[k + 1] {
                    arr.swap(k, k + 1);
                    letters.push(k as i32 + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        BraidWord { strands: self.degree().max(2), letters }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, omitting fixed points; identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for orbit in self.orbits() {
            if orbit.len() == 1 {
                continue;
            }
            write!(f, "(")?;
            for (i, v) in orbit.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "id")?;
        }
        Ok(())
    }
}

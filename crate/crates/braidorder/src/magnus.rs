//! Fox calculus and truncated Magnus expansions, exactly over the integers.
//!
//! The Magnus expansion sends `x ↦ 1 + X` and `x^-1 ↦ 1 - X + X^2 - ...`,
//! truncated above a degree cap. The least degree with a nonzero term
//! detects lower-central-series depth, and the homogeneous part at that
//! degree is the leading tensor used by the ordering comparator.
//!
//! Letters of an `NcPolynomial` are abstract `u32` ids, so the same engine
//! expands free-group words (ids = generator indices) and words over the
//! Schreier basis of a kernel subgroup (ids assigned by the caller).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::words::{Gen, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagnusError {
    #[error("word has no nonzero term of degree <= {cap}; raise the cap")]
    DepthExceedsCap { cap: usize },
    #[error("the identity has no lower-central-series depth")]
    IdentityWord,
}

fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow")
}

fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// Exact binomial coefficient for `n >= 0`, `k <= n` small.
fn binomial(n: i64, k: usize) -> i64 {
    let mut acc: i64 = 1;
    for t in 0..k as i64 {
        acc = cmul(acc, n - t);
        acc /= t + 1;
    }
    acc
}

/// An integer combination of group elements; the coefficient ring for Fox
/// derivatives. Kept separate from `NcPolynomial`: the ordering pipeline
/// never touches this type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn one() -> Self {
        GroupRingElement::from_term(Word::identity(), 1)
    }

    pub fn from_term(w: Word, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(w, c);
        }
        GroupRingElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = cadd(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GroupRingElement::zero();
        for (w1, c1) in self.terms() {
            for (w2, c2) in other.terms() {
                out.add_term(w1.mul(w2), cmul(c1, c2));
            }
        }
        out
    }

    /// Left multiplication by a single group element.
    pub fn left_mul_word(&self, w: &Word) -> Self {
        let mut out = GroupRingElement::zero();
        for (t, c) in self.terms() {
            out.add_term(w.mul(t), c);
        }
        out
    }

    /// The augmentation: sum of coefficients.
    pub fn epsilon(&self) -> i64 {
        self.terms.values().fold(0, |acc, &c| cadd(acc, c))
    }
}

/// The Fox derivative `D_j`, characterized by `D_j(x_i) = δ_ij`,
/// `D_j(x_i^-1) = -δ_ij x_i^-1`, and `D_j(uv) = D_j(u) + u D_j(v)`.
pub fn fox_derivative(w: &Word, j: Gen) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for (g, s) in w.letters() {
        if s > 0 {
            if g == j {
                out.add_term(prefix.clone(), 1);
            }
            prefix = prefix.mul(&Word::generator(g));
        } else {
            prefix = prefix.mul(&Word::generator_pow(g, -1));
            if g == j {
                out.add_term(prefix.clone(), -1);
            }
        }
    }
    out
}

/// The augmentation of the Fox derivative, which must agree with the
/// exponent sum.
pub fn fox_eval0(w: &Word, j: Gen) -> i64 {
    fox_derivative(w, j).epsilon()
}

/// A noncommutative polynomial over abstract letters, truncated above
/// `cap`. Monomials are letter sequences of length at most `cap`, stored
/// sorted for deterministic iteration; coefficients are nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPolynomial {
    cap: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl NcPolynomial {
    pub fn zero(cap: usize) -> Self {
        assert!(cap >= 1, "degree cap must be at least 1");
        NcPolynomial { cap, terms: BTreeMap::new() }
    }

    pub fn one(cap: usize) -> Self {
        let mut p = NcPolynomial::zero(cap);
        p.terms.insert(Vec::new(), 1);
        p
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, monomial: &[u32]) -> i64 {
        self.terms.get(monomial).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    fn add_term(&mut self, monomial: Vec<u32>, c: i64) {
        if c == 0 || monomial.len() > self.cap {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = cadd(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.cap, other.cap, "degree caps differ");
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.to_vec(), c);
        }
        out
    }

    /// Truncated product: cross terms above the cap are dropped.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cap, other.cap, "degree caps differ");
        let mut out = NcPolynomial::zero(self.cap);
        for (m1, c1) in self.terms() {
            if m1.len() > self.cap {
                continue;
            }
            for (m2, c2) in other.terms() {
                if m1.len() + m2.len() > self.cap {
                    continue;
                }
                let mut key = Vec::with_capacity(m1.len() + m2.len());
                key.extend_from_slice(m1);
                key.extend_from_slice(m2);
                out.add_term(key, cmul(c1, c2));
            }
        }
        out
    }

    /// Least degree `>= 1` carrying a nonzero term.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .filter(|m| !m.is_empty())
            .map(|m| m.len())
            .min()
    }

    /// The homogeneous part of degree `k`.
    pub fn homogeneous(&self, k: usize) -> BTreeMap<Vec<u32>, i64> {
        self.terms
            .iter()
            .filter(|(m, _)| m.len() == k)
            .map(|(m, &c)| (m.clone(), c))
            .collect()
    }
}

/// The truncated expansion of a single letter power: `(1 + X)^e`, using
/// `(1 + X)^-1 = 1 - X + X^2 - ...`.
pub fn letter_series(id: u32, exponent: i64, cap: usize) -> NcPolynomial {
    let mut p = NcPolynomial::one(cap);
    for m in 1..=cap {
        let coeff = if exponent >= 0 {
            if (m as i64) > exponent {
                0
            } else {
                binomial(exponent, m)
            }
        } else {
            let c = binomial(-exponent + m as i64 - 1, m);
            if m % 2 == 0 {
                c
            } else {
                -c
            }
        };
        p.add_term(vec![id; m], coeff);
    }
    p
}

/// Expands a run-length word over abstract letter ids.
pub fn expand_runs<I>(runs: I, cap: usize) -> NcPolynomial
where
    I: IntoIterator<Item = (u32, i64)>,
{
    let mut out = NcPolynomial::one(cap);
    for (id, e) in runs {
        out = out.mul(&letter_series(id, e, cap));
    }
    out
}

/// The Magnus expansion of a free-group word; letter ids are the generator
/// indices.
pub fn magnus_expansion(w: &Word, cap: usize) -> NcPolynomial {
    expand_runs(w.runs().iter().map(|&(g, e)| (g.index(), e)), cap)
}

/// Finds the least positive degree with a nonzero term and returns that
/// homogeneous part, deepening the truncation one degree at a time so the
/// common shallow cases never build large polynomials.
pub(crate) fn leading_of_runs(
    runs: &[(u32, i64)],
    cap: usize,
) -> Result<(usize, BTreeMap<Vec<u32>, i64>), MagnusError> {
    for k in 1..=cap {
        let p = expand_runs(runs.iter().copied(), k);
        if let Some(d) = p.min_positive_degree() {
            return Ok((d, p.homogeneous(d)));
        }
    }
    Err(MagnusError::DepthExceedsCap { cap })
}

/// Lower-central-series depth: the largest `k` with `w` in the `k`-th term,
/// read off as the least degree of a nonzero Magnus term.
pub fn lcs_depth(w: &Word, cap: usize) -> Result<usize, MagnusError> {
    if w.is_identity() {
        return Err(MagnusError::IdentityWord);
    }
    let runs: Vec<(u32, i64)> = w.runs().iter().map(|&(g, e)| (g.index(), e)).collect();
    leading_of_runs(&runs, cap).map(|(d, _)| d)
}

/// The degree-`k` homogeneous Magnus part of a depth-`k` word, i.e. its
/// image in the free abelian group on degree-`k` monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTensor {
    degree: usize,
    coords: BTreeMap<Vec<u32>, i64>,
}

impl LeadingTensor {
    pub fn new(degree: usize, coords: BTreeMap<Vec<u32>, i64>) -> Self {
        assert!(!coords.is_empty(), "leading tensor must be nonzero");
        assert!(coords.keys().all(|m| m.len() == degree));
        LeadingTensor { degree, coords }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> &BTreeMap<Vec<u32>, i64> {
        &self.coords
    }

    /// Replaces each letter by a linear form and expands multilinearly.
    /// The result can be zero (empty map) for degenerate substitutions.
    pub fn substitute_linear(
        &self,
        image_of: impl Fn(u32) -> Vec<(u32, i64)>,
    ) -> BTreeMap<Vec<u32>, i64> {
        let mut out: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (mono, &c) in &self.coords {
            let mut partial: Vec<(Vec<u32>, i64)> = vec![(Vec::new(), c)];
            for &idx in mono {
                let image = image_of(idx);
                let mut next = Vec::with_capacity(partial.len() * image.len());
                for (prefix, pc) in &partial {
                    for &(target, tc) in &image {
                        let mut key = prefix.clone();
                        key.push(target);
                        next.push((key, cmul(*pc, tc)));
                    }
                }
                partial = next;
            }
            for (key, v) in partial {
                let entry = out.entry(key).or_insert(0);
                *entry = cadd(*entry, v);
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

/// Depth and leading tensor together.
pub fn leading_tensor(w: &Word, cap: usize) -> Result<LeadingTensor, MagnusError> {
    if w.is_identity() {
        return Err(MagnusError::IdentityWord);
    }
    let runs: Vec<(u32, i64)> = w.runs().iter().map(|&(g, e)| (g.index(), e)).collect();
    let (degree, coords) = leading_of_runs(&runs, cap)?;
    Ok(LeadingTensor::new(degree, coords))
}

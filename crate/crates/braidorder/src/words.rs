//! Reduced words in a finitely generated free group.
//!
//! A [`Word`] is stored run-length encoded and is freely reduced at all
//! times: adjacent runs use distinct generators and no run has exponent
//! zero. All arithmetic is exact over `i64` exponents.

use std::fmt;

use thiserror::Error;

/// 1-based index of a free group generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(u32);

impl Gen {
    /// Wraps a 1-based generator index. Panics on 0.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        Gen(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator x{index} out of range for rank {rank}")]
    RankMismatch { index: u32, rank: u32 },
    #[error("no image provided for generator x{index}")]
    MissingImage { index: u32 },
}

/// Position-tagged failure while reading a word, braid word or image file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

/// Appends one run to a reduced run list, keeping it reduced.
///
/// Shared with the Schreier-basis words in `order`, which reduce over a
/// different letter alphabet but by the same stack discipline.
pub(crate) fn push_run<T: Copy + Eq>(runs: &mut Vec<(T, i64)>, letter: T, exp: i64) {
    if exp == 0 {
        return;
    }
    if let Some(last) = runs.last_mut() {
        if last.0 == letter {
            last.1 += exp;
            if last.1 == 0 {
                runs.pop();
            }
            return;
        }
    }
    runs.push((letter, exp));
}

/// A freely reduced word in the generators `x1, x2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    runs: Vec<(Gen, i64)>,
}

impl Word {
    /// The empty word.
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    /// The single-letter word `x_g`.
    pub fn generator(g: Gen) -> Self {
        Word { runs: vec![(g, 1)] }
    }

    /// The word `x_g^e` (identity when `e == 0`).
    pub fn generator_pow(g: Gen, e: i64) -> Self {
        if e == 0 {
            Word::identity()
        } else {
            Word { runs: vec![(g, e)] }
        }
    }

    /// Builds a word from arbitrary runs, freely reducing as it goes.
    pub fn from_runs(runs: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut out = Vec::new();
        for (g, e) in runs {
            push_run(&mut out, g, e);
        }
        Word { runs: out }
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// The reduced runs `(generator, exponent)`, exponents nonzero.
    pub fn runs(&self) -> &[(Gen, i64)] {
        &self.runs
    }

    /// Expands into single letters `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (Gen, i64)> + '_ {
        self.runs
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    /// Word length after reduction (number of single letters).
    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut runs = self.runs.clone();
        for &(g, e) in &other.runs {
            push_run(&mut runs, g, e);
        }
        Word { runs }
    }

    pub fn inverse(&self) -> Word {
        Word { runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// `self^e` by repeated multiplication.
    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `by * self * by^-1`.
    pub fn conjugated_by(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inverse())
    }

    /// Net exponent of `g`, i.e. the image under the `g`-th coordinate of
    /// the abelianization.
    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.runs.iter().filter(|&&(h, _)| h == g).map(|&(_, e)| e).sum()
    }

    /// Largest generator index appearing, if any.
    pub fn max_generator(&self) -> Option<Gen> {
        self.runs.iter().map(|&(g, _)| g).max()
    }

    /// Parses the `x<k>` / `x<k>^<e>` grammar; `1` is the identity.
    /// Tokens are separated by whitespace or `*`.
    pub fn parse(input: &str) -> Result<Word, ParseError> {
        Word::parse_at_line(input, 1)
    }

    pub(crate) fn parse_at_line(input: &str, line: usize) -> Result<Word, ParseError> {
        let mut runs = Vec::new();
        for (col, token) in tokenize(input) {
            if token == "1" {
                continue;
            }
            let rest = token.strip_prefix('x').ok_or_else(|| {
                ParseError::new(line, col, format!("expected a generator like `x2`, found `{token}`"))
            })?;
            let (g, e) = parse_index_exponent(rest, line, col, token)?;
            if g == 0 {
                return Err(ParseError::new(line, col, "generator indices start at 1"));
            }
            push_run(&mut runs, Gen::new(g), e);
        }
        Ok(Word { runs })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

/// Splits on whitespace and `*`, yielding `(1-based column, token)`.
pub(crate) fn tokenize(input: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = input;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let skip = rest.find(|c: char| !c.is_whitespace() && c != '*')?;
        offset += skip;
        rest = &rest[skip..];
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '*')
            .unwrap_or(rest.len());
        let token = &rest[..end];
        let col = offset + 1;
        offset += end;
        rest = &rest[end..];
        Some((col, token))
    })
}

/// Parses `<k>` or `<k>^<e>` after a generator sigil; rejects `e == 0`.
pub(crate) fn parse_index_exponent(
    rest: &str,
    line: usize,
    col: usize,
    token: &str,
) -> Result<(u32, i64), ParseError> {
    let (index_part, exp_part) = match rest.split_once('^') {
        Some((i, e)) => (i, Some(e)),
        None => (rest, None),
    };
    let index: u32 = index_part.parse().map_err(|_| {
        ParseError::new(line, col, format!("bad generator index in `{token}`"))
    })?;
    let exp = match exp_part {
        None => 1,
        Some(e) => e
            .parse::<i64>()
            .map_err(|_| ParseError::new(line, col, format!("bad exponent in `{token}`")))?,
    };
    if exp == 0 {
        return Err(ParseError::new(line, col, format!("zero exponent in `{token}`")));
    }
    Ok((index, exp))
}

/// The ambient free group: carries the rank so rank mismatches fail loudly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    rank: u32,
}

impl FreeGroup {
    pub fn new(rank: u32) -> Self {
        assert!(rank >= 1, "free group rank must be at least 1");
        FreeGroup { rank }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> {
        (1..=self.rank).map(Gen::new)
    }

    /// Checks every generator of `w` lies in `1..=rank`.
    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.max_generator() {
            Some(g) if g.index() > self.rank => {
                Err(WordError::RankMismatch { index: g.index(), rank: self.rank })
            }
            _ => Ok(()),
        }
    }

    /// Freely reduces a raw letter sequence, checking indices against the rank.
    pub fn reduce(
        &self,
        letters: impl IntoIterator<Item = (u32, i64)>,
    ) -> Result<Word, WordError> {
        let mut runs = Vec::new();
        for (index, e) in letters {
            if index < 1 || index > self.rank {
                return Err(WordError::RankMismatch { index, rank: self.rank });
            }
            push_run(&mut runs, Gen::new(index), e);
        }
        Ok(Word { runs })
    }

    /// Parses a word and checks it against the rank, reporting the offending
    /// token position on failure.
    pub fn parse_word(&self, input: &str) -> Result<Word, ParseError> {
        self.parse_word_at_line(input, 1)
    }

    pub(crate) fn parse_word_at_line(&self, input: &str, line: usize) -> Result<Word, ParseError> {
        let w = Word::parse_at_line(input, line)?;
        if let Some(g) = w.max_generator() {
            if g.index() > self.rank {
                // Re-scan for the offending token so the column is right.
                for (col, token) in tokenize(input) {
                    if let Some(rest) = token.strip_prefix('x') {
                        if let Ok((k, _)) = parse_index_exponent(rest, line, col, token) {
                            if k > self.rank {
                                return Err(ParseError::new(
                                    line,
                                    col,
                                    format!("generator x{k} out of range for rank {}", self.rank),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(w)
    }
}

/// An endomorphism of the free group, given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    group: FreeGroup,
    images: Vec<Word>,
}

impl Endomorphism {
    /// Requires one in-range image per generator.
    pub fn new(group: FreeGroup, images: Vec<Word>) -> Result<Self, WordError> {
        if images.len() != group.rank() as usize {
            return Err(WordError::MissingImage { index: images.len() as u32 + 1 });
        }
        for w in &images {
            group.check(w)?;
        }
        Ok(Endomorphism { group, images })
    }

    pub fn identity(group: FreeGroup) -> Self {
        Endomorphism { group, images: group.gens().map(Word::generator).collect() }
    }

    pub fn group(&self) -> FreeGroup {
        self.group
    }

    pub fn image(&self, g: Gen) -> &Word {
        &self.images[(g.index() - 1) as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Substitutes generator images through `w`.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::identity();
        for &(g, e) in w.runs() {
            out = out.mul(&self.image(g).pow(e));
        }
        out
    }

    /// The composite `x ↦ next(self(x))`.
    pub fn then(&self, next: &Endomorphism) -> Endomorphism {
        assert_eq!(self.group, next.group, "endomorphism ranks differ");
        Endomorphism {
            group: self.group,
            images: self.images.iter().map(|w| next.apply(w)).collect(),
        }
    }

    /// Exponent-sum matrix row for `g`: the abelianized image of `x_g`.
    pub fn abelianized_row(&self, g: Gen) -> Vec<i64> {
        self.group.gens().map(|h| self.image(g).exponent_sum(h)).collect()
    }
}

/// The homomorphism `F → ℤ` counting the net exponent of one distinguished
/// generator and killing all others.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentHom {
    i0: Gen,
}

impl ExponentHom {
    pub fn new(i0: Gen) -> Self {
        ExponentHom { i0 }
    }

    pub fn distinguished(&self) -> Gen {
        self.i0
    }

    pub fn eval(&self, w: &Word) -> i64 {
        w.exponent_sum(self.i0)
    }
}

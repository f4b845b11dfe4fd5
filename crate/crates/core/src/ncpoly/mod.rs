//! Polynomials in the free associative algebra over weighted generators.
//!
//! Words are ordered by weighted degree first and then letter by letter using
//! the generators' order indices. Text form: `"6*a.a.a - 3*a.u.u + v"`.

mod groebner;
mod reduce;
pub mod systems;

pub use groebner::{
    membership_report, overlap_compositions, truncated_buchberger, truncated_buchberger_with, Composition, GbError,
    GbOptions, GbResult, Membership,
};
pub use reduce::{normal_form, normal_form_traced, Cofactor, Reducer};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Display;

use thiserror::Error;

use crate::exactnum::{format_rat, parse_rat, Rat};
use crate::matrix::{Mat, MatError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("cannot parse term {0:?}")]
    BadTerm(String),
    #[error("invalid generator table: {0}")]
    BadAlphabet(String),
    #[error("no value supplied for generator {0:?}")]
    Unassigned(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

/// Ordered generator table; a generator's order index is its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
}

impl Alphabet {
    pub fn new(gens: Vec<Generator>) -> Result<Self, PolyError> {
        if gens.len() > u8::MAX as usize {
            return Err(PolyError::BadAlphabet("too many generators".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(PolyError::BadAlphabet(format!("{} has weight 0", g.name)));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
                return Err(PolyError::BadAlphabet(format!("bad name {:?}", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(PolyError::BadAlphabet(format!("duplicate name {}", g.name)));
            }
        }
        Ok(Alphabet { gens })
    }

    /// Unit-weight generators in the given order.
    pub fn from_names(names: &[&str]) -> Result<Self, PolyError> {
        Self::new(names.iter().map(|n| Generator { name: n.to_string(), weight: 1 }).collect())
    }

    /// `a < b < c < u < v < t`, all of weight 1.
    pub fn standard() -> Self {
        Self::from_names(&["a", "b", "c", "u", "v", "t"]).expect("valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<u8> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as u8)
    }

    pub fn word(&self, letters: &[u8]) -> Word {
        let degree = letters.iter().map(|&l| self.gens[l as usize].weight).sum();
        Word { degree, letters: letters.to_vec() }
    }

    /// Parses a dot-joined word such as `a.b.a`; `1` is the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word, PolyError> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let letters = s
            .split('.')
            .map(|n| self.index_of(n.trim()).ok_or_else(|| PolyError::UnknownGenerator(n.trim().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.word(&letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters.iter().map(|&l| self.gens[l as usize].name.as_str()).collect::<Vec<_>>().join(".")
    }

    pub fn gen(&self, name: &str) -> Result<NcPoly<Rat>, PolyError> {
        let i = self.index_of(name).ok_or_else(|| PolyError::UnknownGenerator(name.into()))?;
        Ok(NcPoly::monomial(self.word(&[i]), Rat::from_integer(1.into())))
    }

    /// Weighted deglex comparison of two words.
    pub fn compare(&self, w1: &Word, w2: &Word) -> Ordering {
        w1.cmp(w2)
    }

    /// Parses the text format, e.g. `"2*a.b - 1/2*b.a + u.u"`.
    pub fn parse(&self, text: &str) -> Result<NcPoly<Rat>, PolyError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return Ok(NcPoly::zero());
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (i, &ch) in bytes.iter().enumerate() {
            if (ch == b'+' || ch == b'-') && i > start && !matches!(bytes[i - 1], b'*' | b'/') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        let mut poly = NcPoly::zero();
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'-' => (true, &piece[1..]),
                b'+' => (false, &piece[1..]),
                _ => (false, piece),
            };
            let bad = || PolyError::BadTerm(piece.to_string());
            let (coeff, word) = match body.split_once('*') {
                Some((c, w)) => (parse_rat(c).map_err(|_| bad())?, self.parse_word(w)?),
                None => match parse_rat(body) {
                    Ok(c) => (c, Word::empty()),
                    Err(_) => (Rat::from_integer(1.into()), self.parse_word(body)?),
                },
            };
            let coeff = if neg { -coeff } else { coeff };
            poly.add_term(word, coeff);
        }
        Ok(poly)
    }

    pub fn format<F: Scalar + Display>(&self, p: &NcPoly<F>) -> String {
        self.format_with(p, |c| c.to_string())
    }

    pub fn format_rat(&self, p: &NcPoly<Rat>) -> String {
        self.format_with(p, format_rat)
    }

    fn format_with<F: Scalar>(&self, p: &NcPoly<F>, coeff: impl Fn(&F) -> String) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in p.terms.iter().rev().enumerate() {
            let mut cs = coeff(c);
            let neg = cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            if w.is_empty() {
                out.push_str(&cs);
            } else if cs == "1" {
                out.push_str(&self.format_word(w));
            } else {
                out.push_str(&format!("{cs}*{}", self.format_word(w)));
            }
        }
        out
    }
}

/// A word in the generators, with its cached weighted degree.
///
/// The derived order (degree, then letters) is the weighted deglex order
/// because letters are stored as order indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    degree: u32,
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word { degree: 0, letters: Vec::new() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { degree: self.degree + other.degree, letters }
    }

    /// `left * self * right`.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Word {
        left.concat(self).concat(right)
    }

    /// Splits into `(prefix, suffix)` at letter position `pos`, with weights taken from `alpha`.
    pub fn split_at(&self, pos: usize, alpha: &Alphabet) -> (Word, Word) {
        (alpha.word(&self.letters[..pos]), alpha.word(&self.letters[pos..]))
    }

    /// Leftmost position where `factor` occurs.
    pub fn find(&self, factor: &Word) -> Option<usize> {
        if factor.len() > self.len() {
            return None;
        }
        (0..=self.len() - factor.len()).find(|&i| self.letters[i..i + factor.len()] == factor.letters[..])
    }
}

/// Noncommutative polynomial: map from words to nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NcPoly<F> {
    terms: BTreeMap<Word, F>,
}

impl<F: Scalar> NcPoly<F> {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn monomial(w: Word, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Option<&F> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * w`, dropping the term if it cancels.
    pub fn add_term(&mut self, w: Word, c: F) {
        if c.is_negligible() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_negligible() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(Word, F)> {
        self.terms.pop_last()
    }

    pub fn leading(&self) -> Option<(&Word, &F)> {
        self.terms.last_key_value()
    }

    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    /// Maximum weighted degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.leading_word().map(Word::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Word::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) => self.scale(&c.try_recip().expect("leading coefficient is nonzero")),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `c * left * self * right`.
    pub fn sandwich(&self, c: &F, left: &Word, right: &Word) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.sandwich(left, right), c.clone() * x.clone());
        }
        out
    }
}

impl NcPoly<Rat> {
    /// Evaluates at square matrices; `values[i]` is the matrix for generator `i`.
    /// The empty word evaluates to the identity.
    pub fn eval_matrices<F: Scalar>(&self, alpha: &Alphabet, values: &[Option<&Mat<F>>]) -> Result<Mat<F>, PolyError> {
        let n = values.iter().flatten().map(|m| m.nrows()).next().ok_or_else(|| PolyError::Unassigned("any".into()))?;
        let mut cache: std::collections::HashMap<Vec<u8>, Mat<F>> = std::collections::HashMap::new();
        let mut acc = Mat::zeros(n, n);
        for (w, c) in &self.terms {
            let prod = word_product(w.letters(), alpha, values, &mut cache, n)?;
            acc = acc.try_add(&prod.scale(&F::from_rat(c)))?;
        }
        Ok(acc)
    }
}

fn word_product<F: Scalar>(
    letters: &[u8],
    alpha: &Alphabet,
    values: &[Option<&Mat<F>>],
    cache: &mut std::collections::HashMap<Vec<u8>, Mat<F>>,
    n: usize,
) -> Result<Mat<F>, PolyError> {
    if letters.is_empty() {
        return Ok(Mat::identity(n));
    }
    if let Some(m) = cache.get(letters) {
        return Ok(m.clone());
    }
    let last = letters[letters.len() - 1] as usize;
    let m = values.get(last).copied().flatten().ok_or_else(|| PolyError::Unassigned(alpha.gens[last].name.clone()))?;
    let prefix = word_product(&letters[..letters.len() - 1], alpha, values, cache, n)?;
    let prod = prefix.try_mul(m)?;
    cache.insert(letters.to_vec(), prod.clone());
    Ok(prod)
}

/// All words of length `len` over the first `k` generators, ascending.
pub fn all_words(alpha: &Alphabet, k: u8, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u8>| {
                (0..k).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    let mut words: Vec<Word> = out.iter().map(|l| alpha.word(l)).collect();
    words.sort();
    words
}

use std::collections::{BTreeSet, HashMap};

use crate::scalar::Scalar;

use super::{Alphabet, NcPoly, Word};

/// One reduction step: the input was reduced by `coeff * left * basis[index] * right`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cofactor<F> {
    pub coeff: F,
    pub left: Word,
    pub index: usize,
    pub right: Word,
}

/// Leading-word lookup over a growing list of reducers.
///
/// Divisors are chosen leftmost position first; among leading words that fit at
/// that position, the lowest basis index wins.
#[derive(Debug, Clone, Default)]
pub struct Reducer {
    leads: HashMap<Vec<u8>, usize>,
    lengths: BTreeSet<usize>,
}

impl Reducer {
    pub fn new<F: Scalar>(basis: &[NcPoly<F>]) -> Self {
        let mut r = Reducer::default();
        for (i, g) in basis.iter().enumerate() {
            r.push(g, i);
        }
        r
    }

    /// Registers `g` as basis element `index`. Earlier indices keep priority.
    pub fn push<F: Scalar>(&mut self, g: &NcPoly<F>, index: usize) {
        if let Some(w) = g.leading_word() {
            self.leads.entry(w.letters().to_vec()).or_insert(index);
            self.lengths.insert(w.len());
        }
    }

    /// Returns `(position, basis index, leading length)` of the chosen divisor of `w`.
    pub fn find_divisor(&self, w: &Word) -> Option<(usize, usize, usize)> {
        let letters = w.letters();
        for pos in 0..=letters.len() {
            let mut best: Option<(usize, usize)> = None;
            for &len in &self.lengths {
                if pos + len > letters.len() {
                    break;
                }
                if let Some(&idx) = self.leads.get(&letters[pos..pos + len]) {
                    if best.is_none_or(|(b, _)| idx < b) {
                        best = Some((idx, len));
                    }
                }
            }
            if let Some((idx, len)) = best {
                return Some((pos, idx, len));
            }
        }
        None
    }

    pub fn is_reducible(&self, w: &Word) -> bool {
        self.find_divisor(w).is_some()
    }
}

fn reduce_impl<F: Scalar>(
    alpha: &Alphabet,
    p: &NcPoly<F>,
    basis: &[NcPoly<F>],
    reducer: &Reducer,
    mut trace: Option<&mut Vec<Cofactor<F>>>,
) -> NcPoly<F> {
    let mut rem = p.clone();
    let mut out = NcPoly::zero();
    while let Some((w, c)) = rem.pop_leading() {
        match reducer.find_divisor(&w) {
            None => {
                out.add_term(w, c);
            }
            Some((pos, idx, len)) => {
                let g = &basis[idx];
                let (_, lc) = g.leading().expect("reducers are nonzero");
                let q = c.try_div(lc).expect("leading coefficient is nonzero");
                let letters = w.letters();
                let left = alpha.word(&letters[..pos]);
                let right = alpha.word(&letters[pos + len..]);
                let mut tail = g.terms().rev();
                tail.next();
                for (tw, tc) in tail {
                    rem.add_term(tw.sandwich(&left, &right), -(q.clone() * tc.clone()));
                }
                if let Some(t) = trace.as_deref_mut() {
                    t.push(Cofactor { coeff: q, left, index: idx, right });
                }
            }
        }
    }
    out
}

/// Normal form of `p` modulo `basis`, reducing the largest reducible term first.
pub fn normal_form<F: Scalar>(alpha: &Alphabet, p: &NcPoly<F>, basis: &[NcPoly<F>]) -> NcPoly<F> {
    reduce_impl(alpha, p, basis, &Reducer::new(basis), None)
}

/// Normal form together with the reduction steps taken, so that
/// `p = remainder + sum coeff * left * basis[index] * right`.
pub fn normal_form_traced<F: Scalar>(
    alpha: &Alphabet,
    p: &NcPoly<F>,
    basis: &[NcPoly<F>],
) -> (NcPoly<F>, Vec<Cofactor<F>>) {
    let mut trace = Vec::new();
    let r = reduce_impl(alpha, p, basis, &Reducer::new(basis), Some(&mut trace));
    (r, trace)
}

pub(crate) fn normal_form_with<F: Scalar>(
    alpha: &Alphabet,
    p: &NcPoly<F>,
    basis: &[NcPoly<F>],
    reducer: &Reducer,
) -> NcPoly<F> {
    reduce_impl(alpha, p, basis, reducer, None)
}

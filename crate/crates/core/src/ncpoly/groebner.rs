use std::collections::BTreeMap;
use std::fmt::Display;

use thiserror::Error;

use crate::scalar::Scalar;

use super::reduce::{normal_form_with, Reducer};
use super::{Alphabet, NcPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GbError {
    #[error("generator is not homogeneous: {poly}")]
    NonHomogeneous { poly: String },
    #[error("degree bound {bound} is below generator degree {degree}: {poly}")]
    BoundTooSmall { bound: u32, degree: u32, poly: String },
    #[error("target is not homogeneous of degree at most {bound}: {poly}")]
    BadTarget { bound: u32, poly: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbOptions {
    pub degree_bound: u32,
    /// Stop early once the basis exceeds this many elements.
    pub max_elements: Option<usize>,
}

impl GbOptions {
    pub fn new(degree_bound: u32) -> Self {
        GbOptions { degree_bound, max_elements: None }
    }
}

#[derive(Debug, Clone)]
pub struct GbResult<F> {
    pub basis: Vec<NcPoly<F>>,
    pub degree_bound: u32,
    /// True when every composition of degree at most the bound was processed.
    pub complete_below_bound: bool,
    pub element_count_by_degree: BTreeMap<u32, usize>,
    reducer: Reducer,
}

impl<F: Scalar> GbResult<F> {
    pub fn reduce(&self, alpha: &Alphabet, p: &NcPoly<F>) -> NcPoly<F> {
        normal_form_with(alpha, p, &self.basis, &self.reducer)
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// An overlap `lead(f) = A X`, `lead(g) = X B` and its S-polynomial `f B - A g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition<F> {
    pub left_index: usize,
    pub right_index: usize,
    pub overlap_len: usize,
    pub degree: u32,
    pub poly: NcPoly<F>,
}

// Overlap lengths k with a proper suffix of lead(f) equal to a proper prefix of lead(g).
fn overlaps<F: Scalar>(f: &NcPoly<F>, g: &NcPoly<F>) -> Vec<usize> {
    let (Some(lf), Some(lg)) = (f.leading_word(), g.leading_word()) else {
        return Vec::new();
    };
    let (a, b) = (lf.letters(), lg.letters());
    (1..a.len().min(b.len())).filter(|&k| a[a.len() - k..] == b[..k]).collect()
}

fn composition<F: Scalar>(alpha: &Alphabet, f: &NcPoly<F>, g: &NcPoly<F>, k: usize) -> (u32, NcPoly<F>) {
    let lf = f.leading_word().expect("nonzero");
    let lg = g.leading_word().expect("nonzero");
    let a = alpha.word(&lf.letters()[..lf.len() - k]);
    let b = alpha.word(&lg.letters()[k..]);
    let empty = super::Word::empty();
    let fb = f.sandwich(&f.leading().unwrap().1.try_recip().expect("nonzero"), &empty, &b);
    let ag = g.sandwich(&g.leading().unwrap().1.try_recip().expect("nonzero"), &a, &empty);
    (lf.degree() + b.degree(), fb.sub(&ag))
}

/// All overlap compositions among `basis` of degree at most `degree_bound`.
pub fn overlap_compositions<F: Scalar>(
    alpha: &Alphabet,
    basis: &[NcPoly<F>],
    degree_bound: u32,
) -> Vec<Composition<F>> {
    let mut out = Vec::new();
    for (i, f) in basis.iter().enumerate() {
        for (j, g) in basis.iter().enumerate() {
            for k in overlaps(f, g) {
                let (degree, poly) = composition(alpha, f, g, k);
                if degree <= degree_bound {
                    out.push(Composition { left_index: i, right_index: j, overlap_len: k, degree, poly });
                }
            }
        }
    }
    out
}

/// Degree-by-degree completion of a homogeneous ideal up to `degree_bound`.
pub fn truncated_buchberger<F: Scalar + Display>(
    alpha: &Alphabet,
    gens: &[NcPoly<F>],
    degree_bound: u32,
) -> Result<GbResult<F>, GbError> {
    truncated_buchberger_with(alpha, gens, GbOptions::new(degree_bound))
}

pub fn truncated_buchberger_with<F: Scalar + Display>(
    alpha: &Alphabet,
    gens: &[NcPoly<F>],
    opts: GbOptions,
) -> Result<GbResult<F>, GbError> {
    let bound = opts.degree_bound;
    let mut by_degree: BTreeMap<u32, Vec<&NcPoly<F>>> = BTreeMap::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if !g.is_homogeneous() {
            return Err(GbError::NonHomogeneous { poly: alpha.format(g) });
        }
        let d = g.degree().expect("nonzero");
        if d > bound {
            return Err(GbError::BoundTooSmall { bound, degree: d, poly: alpha.format(g) });
        }
        by_degree.entry(d).or_default().push(g);
    }

    let mut basis: Vec<NcPoly<F>> = Vec::new();
    let mut reducer = Reducer::default();
    // degree -> queued (left, right, overlap length) in insertion order
    let mut pending: BTreeMap<u32, Vec<(usize, usize, usize)>> = BTreeMap::new();
    let mut complete = true;

    for d in 0..=bound {
        let start = basis.len();
        let mut candidates: Vec<NcPoly<F>> = by_degree.remove(&d).unwrap_or_default().into_iter().cloned().collect();
        for (i, j, k) in pending.remove(&d).unwrap_or_default() {
            candidates.push(composition(alpha, &basis[i], &basis[j], k).1);
        }
        for cand in candidates {
            let nf = normal_form_with(alpha, &cand, &basis, &reducer);
            if nf.is_zero() {
                continue;
            }
            let h = nf.monic();
            let lead = h.leading_word().expect("nonzero").clone();
            for e in basis[start..].iter_mut() {
                if let Some(c) = e.coeff(&lead).cloned() {
                    *e = e.sub(&h.scale(&c));
                }
            }
            reducer.push(&h, basis.len());
            basis.push(h);
            if opts.max_elements.is_some_and(|m| basis.len() > m) {
                complete = false;
                break;
            }
        }
        if !complete {
            break;
        }
        // every ordered pair involving at least one new element, once
        for i in start..basis.len() {
            for j in 0..basis.len() {
                let pairs: &[(usize, usize)] = if j < start { &[(i, j), (j, i)] } else { &[(i, j)] };
                for &(l, r) in pairs {
                    for k in overlaps(&basis[l], &basis[r]) {
                        let tail = &basis[r].leading_word().expect("nonzero").letters()[k..];
                        let deg = basis[l].degree().expect("nonzero") + alpha.word(tail).degree();
                        if deg <= bound {
                            pending.entry(deg).or_default().push((l, r, k));
                        }
                    }
                }
            }
        }
    }

    let mut counts = BTreeMap::new();
    for g in &basis {
        *counts.entry(g.degree().expect("nonzero")).or_insert(0usize) += 1;
    }
    Ok(GbResult {
        basis,
        degree_bound: bound,
        complete_below_bound: complete,
        element_count_by_degree: counts,
        reducer,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership<F> {
    pub target: NcPoly<F>,
    pub reduces_to_zero: bool,
    pub residual: NcPoly<F>,
}

/// Completes `gens` to `degree_bound` and reduces every target against the result.
pub fn membership_report<F: Scalar + Display>(
    alpha: &Alphabet,
    targets: &[NcPoly<F>],
    gens: &[NcPoly<F>],
    degree_bound: u32,
) -> Result<(GbResult<F>, Vec<Membership<F>>), GbError> {
    for t in targets {
        if !t.is_homogeneous() || t.degree().unwrap_or(0) > degree_bound {
            return Err(GbError::BadTarget { bound: degree_bound, poly: alpha.format(t) });
        }
    }
    let gb = truncated_buchberger(alpha, gens, degree_bound)?;
    let report = targets
        .iter()
        .map(|t| {
            let residual = gb.reduce(alpha, t);
            Membership { target: t.clone(), reduces_to_zero: residual.is_zero(), residual }
        })
        .collect();
    Ok((gb, report))
}

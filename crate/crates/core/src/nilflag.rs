//! Structure of solutions with all right-hand sides zero: the flag cut out
//! by the semigroup generated by `a, b, c`, the algebra it spans, and its
//! center.

use thiserror::Error;

use crate::construct::SolutionTriple;
use crate::exactnum::rat;
use crate::matrix::{Mat, MatError};
use crate::scalar::Scalar;
use crate::verify::check_system;

/// Products of this length vanish for every solution with zero right-hand sides.
pub const MAX_CLASS: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlagError {
    #[error("not a solution with all right-hand sides zero")]
    NotASolution,
    #[error("products of length {0} do not vanish")]
    NotNilpotent(usize),
    #[error("a is not diag(J5, J3, 0)")]
    NotCanonical,
    #[error("identity {0} fails")]
    IdentityFailed(&'static str),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Column span of `vectors` in `F^n`, as an `n x r` matrix whose columns are
/// the reduced echelon basis.
pub fn span_of<F: Scalar>(n: usize, vectors: &[Vec<F>]) -> Mat<F> {
    if vectors.is_empty() {
        return Mat::zeros(n, 0);
    }
    let rows = Mat::from_rows(vectors.to_vec()).expect("equal lengths");
    let (r, pivots) = rows.rref().expect("rref over a field");
    Mat::from_fn(n, pivots.len(), |i, j| r.get(j, i).clone())
}

fn columns<F: Scalar>(m: &Mat<F>) -> Vec<Vec<F>> {
    (0..m.ncols()).map(|j| m.column(j)).collect()
}

fn image<F: Scalar>(gens: &[&Mat<F>], space: &Mat<F>) -> Result<Mat<F>, MatError> {
    let mut vs = Vec::new();
    for g in gens {
        vs.extend(columns(&g.try_mul(space)?));
    }
    Ok(span_of(space.nrows(), &vs))
}

/// `{0} = V_0 ⊂ V_1 ⊂ ... ⊂ V_l = F^n`, each stored as a basis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag<F> {
    pub subspaces: Vec<Mat<F>>,
}

impl<F: Scalar> Flag<F> {
    pub fn len(&self) -> usize {
        self.subspaces.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(Mat::ncols).collect()
    }

    /// Successive quotient dimensions.
    pub fn signature(&self) -> Vec<usize> {
        self.dims().windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// For each subspace whose basis consists of standard vectors, their
    /// 0-based indices.
    pub fn standard_indices(&self) -> Vec<Option<Vec<usize>>> {
        self.subspaces.iter().map(|s| standard_indices(&columns(s))).collect()
    }
}

/// Indices `k` when every vector is some `e_k`.
pub fn standard_indices<F: Scalar>(vectors: &[Vec<F>]) -> Option<Vec<usize>> {
    vectors
        .iter()
        .map(|v| {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            (nz.len() == 1 && v[nz[0]].is_one()).then(|| nz[0])
        })
        .collect()
}

fn require_zero_system<F: Scalar>(t: &SolutionTriple<F>) -> Result<(), FlagError> {
    let p = &t.params;
    let zero = p.alpha.is_negligible() && p.beta.is_negligible() && p.gamma.is_negligible();
    let ok = check_system(t).map(|r| r.passed()).unwrap_or(false);
    if zero && ok {
        Ok(())
    } else {
        Err(FlagError::NotASolution)
    }
}

/// The flag `V_i = S^{l−i}(F^n)`, where `S^k(F^n)` is spanned by the images
/// of all length-`k` products of `a, b, c`.
pub fn semigroup_flag<F: Scalar>(t: &SolutionTriple<F>) -> Result<Flag<F>, FlagError> {
    require_zero_system(t)?;
    let n = t.n();
    let gens = t.matrices();
    let mut layers = vec![Mat::identity(n)];
    loop {
        let next = image(&gens, layers.last().expect("nonempty"))?;
        if next.ncols() == 0 {
            break;
        }
        if layers.len() == MAX_CLASS {
            return Err(FlagError::NotNilpotent(MAX_CLASS));
        }
        if next.ncols() < layers.last().expect("nonempty").ncols() {
            layers.push(next);
        } else {
            return Err(FlagError::NotNilpotent(layers.len()));
        }
    }
    layers.push(Mat::zeros(n, 0));
    layers.reverse();
    Ok(Flag { subspaces: layers })
}

pub fn signature<F: Scalar>(f: &Flag<F>) -> Vec<usize> {
    f.signature()
}

/// Basis adapted to the flag: a basis of `V_1`, then vectors completing it to
/// `V_2`, and so on, taking echelon basis vectors in order of their pivots.
pub fn flag_adapted_basis<F: Scalar>(f: &Flag<F>) -> Vec<Vec<F>> {
    let mut chosen: Vec<Vec<F>> = Vec::new();
    for s in &f.subspaces[1..] {
        for v in columns(s) {
            let mut trial = chosen.clone();
            trial.push(v);
            if Mat::from_rows(trial.clone()).expect("equal lengths").rank() == trial.len() {
                chosen = trial;
            }
        }
    }
    chosen
}

/// Ordered basis in which `a, b, c` are strictly upper triangular, returned
/// as the matrix with these vectors as columns.
pub fn triangularizing_basis<F: Scalar>(t: &SolutionTriple<F>) -> Result<Mat<F>, FlagError> {
    let f = semigroup_flag(t)?;
    let p = Mat::from_columns(&flag_adapted_basis(&f))?;
    let pinv = p.inverse()?;
    for m in t.matrices() {
        if !pinv.try_mul(m)?.try_mul(&p)?.is_strictly_upper() {
            return Err(FlagError::IdentityFailed("strictly upper triangular after change of basis"));
        }
    }
    Ok(p)
}

/// Candidate spanning words of the algebra generated by `a, b, c`.
pub const ALGEBRA_WORDS: [&str; 10] = ["a", "b", "ab", "ba", "a^2", "aba", "ab^2", "bab", "a^2b", "a^4"];

/// Words tried first when naming central elements.
pub const CENTER_WORDS: [&str; 11] = ["a", "b", "ab", "ba", "a^2", "b^2", "aba", "ab^2", "bab", "a^2b", "a^4"];

/// Evaluates a word such as `ab^2` or `a^2b` in `a`, `b`.
pub fn eval_word<F: Scalar>(word: &str, a: &Mat<F>, b: &Mat<F>) -> Result<Mat<F>, MatError> {
    let mut out = Mat::identity(a.nrows());
    let bytes = word.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let m = match bytes[i] {
            b'a' => a,
            b'b' => b,
            other => return Err(MatError::Shape(format!("unexpected letter {}", other as char))),
        };
        i += 1;
        let mut e = 1u32;
        if i < bytes.len() && bytes[i] == b'^' {
            let start = i + 1;
            i = start;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            e = word[start..i].parse().map_err(|_| MatError::Shape(format!("bad exponent in {word}")))?;
        }
        out = out.try_mul(&m.pow(e)?)?;
    }
    Ok(out)
}

/// A named element of the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<F> {
    pub label: String,
    pub matrix: Mat<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraBasis<F> {
    pub elements: Vec<Element<F>>,
}

impl<F: Scalar> AlgebraBasis<F> {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.label.as_str()).collect()
    }
}

fn flatten<F: Scalar>(m: &Mat<F>) -> Vec<F> {
    m.entries().to_vec()
}

/// Greedy selection of elements whose matrices stay linearly independent.
fn independent<F: Scalar>(candidates: Vec<Element<F>>, start: &[Vec<F>]) -> Vec<Element<F>> {
    let mut rows: Vec<Vec<F>> = start.to_vec();
    let mut out = Vec::new();
    for e in candidates {
        let v = flatten(&e.matrix);
        if v.iter().all(Scalar::is_negligible) {
            continue;
        }
        rows.push(v);
        if Mat::from_rows(rows.clone()).expect("equal lengths").rank() == rows.len() {
            out.push(e);
        } else {
            rows.pop();
        }
    }
    out
}

fn word_elements<F: Scalar>(words: &[&str], a: &Mat<F>, b: &Mat<F>) -> Result<Vec<Element<F>>, MatError> {
    words.iter().map(|w| Ok(Element { label: (*w).to_string(), matrix: eval_word(w, a, b)? })).collect()
}

/// Maximal independent subset of [`ALGEBRA_WORDS`], earlier words preferred.
pub fn algebra_basis<F: Scalar>(t: &SolutionTriple<F>) -> Result<AlgebraBasis<F>, FlagError> {
    require_zero_system(t)?;
    let elements = independent(word_elements(&ALGEBRA_WORDS, &t.a, &t.b)?, &[]);
    Ok(AlgebraBasis { elements })
}

/// Basis of the center of the algebra spanned by `ab`. Central words from
/// [`CENTER_WORDS`] are used where possible; any remaining directions are
/// given as linear combinations of the algebra basis.
pub fn center_basis<F: Scalar + std::fmt::Display>(
    t: &SolutionTriple<F>,
    ab: &AlgebraBasis<F>,
) -> Result<AlgebraBasis<F>, FlagError> {
    let k = ab.dimension();
    // columns: flattened [x, a] and [x, b] for each basis element x
    let mut cols = Vec::with_capacity(k);
    for e in &ab.elements {
        let mut v = flatten(&e.matrix.commutator(&t.a)?);
        v.extend(flatten(&e.matrix.commutator(&t.b)?));
        cols.push(v);
    }
    let kernel = if k == 0 { Vec::new() } else { Mat::from_columns(&cols)?.kernel_basis() };
    let dim = kernel.len();
    let central =
        |m: &Mat<F>| -> Result<bool, MatError> { Ok(m.commutator(&t.a)?.is_zero() && m.commutator(&t.b)?.is_zero()) };
    let mut candidates = Vec::new();
    for e in word_elements(&CENTER_WORDS, &t.a, &t.b)? {
        if central(&e.matrix)? {
            candidates.push(e);
        }
    }
    let mut elements = independent(candidates, &[]);
    elements.truncate(dim);
    if elements.len() < dim {
        let mut combos = Vec::new();
        for coeffs in &kernel {
            let mut m = Mat::zeros(t.n(), t.n());
            let mut terms = Vec::new();
            for (c, e) in coeffs.iter().zip(&ab.elements) {
                if !c.is_zero() {
                    m = m.try_add(&e.matrix.scale(c))?;
                    terms.push(format!("({c})*{}", e.label));
                }
            }
            combos.push(Element { label: terms.join(" + "), matrix: m });
        }
        let start: Vec<Vec<F>> = elements.iter().map(|e| flatten(&e.matrix)).collect();
        elements.extend(independent(combos, &start));
    }
    Ok(AlgebraBasis { elements })
}

/// The invariant `ϖ = 3 b₆₈ − b₂₄` (1-based) of a 9×9 solution with
/// `a = diag(J₅, J₃, 0)`, after confirming
/// `bab = −aba − 4ab² + ϖa⁴` and `a²b = ab² − ϖa⁴/2`.
pub fn varpi<F: Scalar>(t: &SolutionTriple<F>) -> Result<F, FlagError> {
    let j5 = Mat::<F>::jordan_block(5);
    let j3 = Mat::<F>::jordan_block(3);
    let canonical = Mat::block_diag(&[&j5, &j3, &Mat::zeros(1, 1)]);
    if t.a != canonical {
        return Err(FlagError::NotCanonical);
    }
    require_zero_system(t)?;
    let (a, b) = (&t.a, &t.b);
    let w = F::from_i64(3) * t.b.get(5, 7).clone() - t.b.get(1, 3).clone();
    let e = |s: &str| eval_word(s, a, b);
    let a4 = e("a^4")?;
    let lhs = e("bab")?;
    let rhs = e("aba")?.scale(&-F::one()).try_sub(&e("ab^2")?.scale(&F::from_i64(4)))?.try_add(&a4.scale(&w))?;
    if !lhs.try_sub(&rhs)?.is_zero() {
        return Err(FlagError::IdentityFailed("bab = -aba - 4ab^2 + w a^4"));
    }
    let half = F::from_rat(&rat(1, 2));
    let rhs = e("ab^2")?.try_sub(&a4.scale(&(w.clone() * half)))?;
    if !e("a^2b")?.try_sub(&rhs)?.is_zero() {
        return Err(FlagError::IdentityFailed("a^2b = ab^2 - w a^4 / 2"));
    }
    Ok(w)
}

//! Residual checks for candidate solutions: the defining equations, derived
//! relation families, and the degree-4/5 monomial identities of the
//! nilpotent case.

use std::fmt;

use thiserror::Error;

use crate::construct::{tsys_residuals, SolutionQuad, SolutionTriple, USolution};
use crate::exactnum::{int, rat, Rat};
use crate::matrix::{Mat, MatError};
use crate::ncpoly::{all_words, Alphabet, NcPoly, PolyError};
use crate::scalar::{Scalar, NUMERIC_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("matrices have mismatched sizes")]
    SizeMismatch,
    #[error("relation set needs context value {0}")]
    MissingContext(&'static str),
    #[error("relation set {set} does not apply to a {kind}")]
    WrongKind { set: &'static str, kind: &'static str },
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status<F> {
    ExactZero,
    Residual(Mat<F>),
    /// Max-entry norm of a floating residual.
    Numeric(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check<F> {
    pub name: String,
    pub status: Status<F>,
}

impl<F: Scalar> Check<F> {
    pub fn from_residual(name: impl Into<String>, r: Mat<F>) -> Self {
        let status = if F::EXACT {
            if r.is_zero() {
                Status::ExactZero
            } else {
                Status::Residual(r)
            }
        } else {
            Status::Numeric(r.max_abs())
        };
        Check { name: name.into(), status }
    }

    pub fn passed(&self) -> bool {
        match &self.status {
            Status::ExactZero => true,
            Status::Residual(_) => false,
            Status::Numeric(norm) => *norm <= NUMERIC_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report<F> {
    pub checks: Vec<Check<F>>,
}

impl<F: Scalar> Report<F> {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check<F>> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn push(&mut self, name: impl Into<String>, residual: Mat<F>) {
        self.checks.push(Check::from_residual(name, residual));
    }

    pub fn extend(&mut self, other: Report<F>) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&Check<F>> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl<F: Scalar> Default for Report<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for Report<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.status {
                Status::ExactZero => writeln!(f, "ok    {}", c.name)?,
                Status::Numeric(norm) => {
                    let word = if c.passed() { "ok" } else { "FAIL" };
                    writeln!(f, "{word:<5} {} (residual {norm:.3e})", c.name)?
                }
                Status::Residual(m) => {
                    writeln!(f, "FAIL  {}", c.name)?;
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            if !m.get(i, j).is_negligible() {
                                writeln!(f, "        entry ({}, {}) = {}", i + 1, j + 1, m.get(i, j))?;
                            }
                        }
                    }
                }
            }
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Named relation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationSet {
    /// The three defining equations.
    System,
    /// Consequences with right-hand sides `u²`, `v³` (needs context).
    UvRelations,
    /// Consequences of sum zero, squares `u²`, cubes zero, `u` central.
    CentralSquareRelations,
    /// Consequences of all right-hand sides zero, up to degree 5.
    ZeroSumRelations,
    /// Degree-4 words in `a, b` against multiples of `a⁴`.
    DegreeFourMonomials,
    /// All degree-5 words in `a, b` vanish.
    DegreeFiveMonomials,
    /// Four matrices with power sums `α_k I`, `k = 1..4`.
    FourMatrix,
    /// `ab + ba = I`, `ba²b = 0`.
    TwoMatrix,
    /// Four matrices with squares `I, jI, j²I, 0` and `a + jb + j²c = 0`.
    UnityPattern,
}

impl RelationSet {
    pub const ALL: [RelationSet; 9] = [
        RelationSet::System,
        RelationSet::UvRelations,
        RelationSet::CentralSquareRelations,
        RelationSet::ZeroSumRelations,
        RelationSet::DegreeFourMonomials,
        RelationSet::DegreeFiveMonomials,
        RelationSet::FourMatrix,
        RelationSet::TwoMatrix,
        RelationSet::UnityPattern,
    ];

    /// Short identifier used on the command line.
    pub fn code(self) -> &'static str {
        match self {
            RelationSet::System => "SYS",
            RelationSet::UvRelations => "R21",
            RelationSet::CentralSquareRelations => "R41",
            RelationSet::ZeroSumRelations => "R51",
            RelationSet::DegreeFourMonomials => "THM4_DEG4",
            RelationSet::DegreeFiveMonomials => "THM4_DEG5",
            RelationSet::FourMatrix => "SIGMA",
            RelationSet::TwoMatrix => "TSYS",
            RelationSet::UnityPattern => "PATTERN_721",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.code().eq_ignore_ascii_case(s))
    }
}

/// Extra matrices and scalars some relation families refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct Context<F> {
    pub u_squared: Option<Mat<F>>,
    pub v_cubed: Option<Mat<F>>,
    /// `u` itself, when known; used for the commutation hypothesis.
    pub u: Option<Mat<F>>,
    /// Selects the relations valid when `v` is invertible and `a, b, c`
    /// commute with `u²` and `v³`; otherwise those valid when they only
    /// commute with `v³`.
    pub first_case: bool,
    /// A primitive cube root of unity in the scalar field.
    pub unity: Option<F>,
}

impl<F: Scalar> Context<F> {
    pub fn empty() -> Self {
        Context { u_squared: None, v_cubed: None, u: None, first_case: false, unity: None }
    }

    pub fn from_uv(u: Option<Mat<F>>, v: Option<Mat<F>>) -> Result<Self, MatError> {
        let u_squared = u.as_ref().map(|m| m.try_mul(m)).transpose()?;
        let v_cubed = v.as_ref().map(|m| m.pow(3)).transpose()?;
        Ok(Context { u_squared, v_cubed, u, first_case: false, unity: None })
    }

    pub fn with_u_squared(u2: Mat<F>) -> Self {
        Context { u_squared: Some(u2), ..Self::empty() }
    }
}

fn relation_alphabet() -> Alphabet {
    Alphabet::from_names(&["a", "b", "c", "d", "uu", "vvv"]).expect("valid names")
}

fn rel(text: &str) -> NcPoly<Rat> {
    relation_alphabet().parse(text).expect("relation parses")
}

struct Evaluator<'a, F> {
    alpha: Alphabet,
    values: [Option<&'a Mat<F>>; 6],
}

impl<'a, F: Scalar> Evaluator<'a, F> {
    fn eval(&self, p: &NcPoly<Rat>) -> Result<Mat<F>, VerifyError> {
        Ok(p.eval_matrices(&self.alpha, &self.values)?)
    }

    fn check(&self, report: &mut Report<F>, text: &str) -> Result<(), VerifyError> {
        let p = rel(text);
        report.push(format!("{} = 0", self.alpha.format_rat(&p)), self.eval(&p)?);
        Ok(())
    }
}

fn same_size<F: Scalar>(ms: &[&Mat<F>]) -> Result<usize, VerifyError> {
    let n = ms[0].nrows();
    if ms.iter().any(|m| m.shape() != (n, n)) {
        return Err(VerifyError::SizeMismatch);
    }
    Ok(n)
}

/// Residuals of `a+b+c = αI`, `a²+b²+c² = βI`, `a³+b³+c³ = γI`.
pub fn check_system<F: Scalar>(t: &SolutionTriple<F>) -> Result<Report<F>, VerifyError> {
    let n = same_size(&t.matrices())?;
    let mut report = Report::new();
    let rhs = [&t.params.alpha, &t.params.beta, &t.params.gamma];
    for k in 1..=3u32 {
        let mut sum = Mat::scalar(n, -rhs[k as usize - 1].clone());
        for m in t.matrices() {
            sum = sum.try_add(&m.pow(k)?)?;
        }
        let name = match k {
            1 => "a + b + c = alpha I",
            2 => "a^2 + b^2 + c^2 = beta I",
            _ => "a^3 + b^3 + c^3 = gamma I",
        };
        report.push(name, sum);
    }
    Ok(report)
}

fn commutes_with<F: Scalar>(
    report: &mut Report<F>,
    t: &SolutionTriple<F>,
    m: &Mat<F>,
    label: &str,
) -> Result<(), VerifyError> {
    for (name, x) in ["a", "b", "c"].iter().zip(t.matrices()) {
        report.push(format!("{name}.{label} - {label}.{name} = 0"), x.commutator(m)?);
    }
    Ok(())
}

/// Evaluates one relation family on a triple.
pub fn check_relations<F: Scalar>(
    t: &SolutionTriple<F>,
    rs: RelationSet,
    ctx: &Context<F>,
) -> Result<Report<F>, VerifyError> {
    let n = same_size(&t.matrices())?;
    let u2 = ctx.u_squared.as_ref();
    let v3 = ctx.v_cubed.as_ref();
    for m in [u2, v3].into_iter().flatten() {
        if m.shape() != (n, n) {
            return Err(VerifyError::SizeMismatch);
        }
    }
    let ev = Evaluator { alpha: relation_alphabet(), values: [Some(&t.a), Some(&t.b), Some(&t.c), None, u2, v3] };
    let mut report = Report::new();
    match rs {
        RelationSet::System => return check_system(t),
        RelationSet::UvRelations => {
            let u2 = u2.ok_or(VerifyError::MissingContext("u^2"))?;
            let v3 = v3.ok_or(VerifyError::MissingContext("v^3"))?;
            ev.check(&mut report, "a + b + c")?;
            ev.check(&mut report, "a.a + b.b + c.c - uu")?;
            ev.check(&mut report, "a.a.a + b.b.b + c.c.c - vvv")?;
            commutes_with(&mut report, t, v3, "vvv")?;
            if ctx.first_case {
                commutes_with(&mut report, t, u2, "uu")?;
                let rank = v3.rank();
                let singular = if rank == n { Mat::zeros(1, 1) } else { Mat::identity(1) };
                report.push("v invertible", singular);
                ev.check(&mut report, "2*b.b + 2*a.b + 2*a.a - uu")?;
                ev.check(&mut report, "a.b - b.a")?;
                ev.check(&mut report, "6*a.a.a - 3*a.uu - 2*vvv")?;
            } else {
                ev.check(&mut report, "2*a.a + 2*b.b + a.b + b.a - uu")?;
                ev.check(&mut report, "b.b.b.a - a.b.b.b - b.a.a.a + a.a.a.b")?;
                ev.check(&mut report, "b.a.a.a - a.a.a.b - a.a.b.b - a.b.a.b + b.b.a.a + b.a.b.a")?;
            }
        }
        RelationSet::CentralSquareRelations => {
            let u2m = u2.ok_or(VerifyError::MissingContext("u^2"))?;
            ev.check(&mut report, "a + b + c")?;
            ev.check(&mut report, "a.a + b.b + c.c - uu")?;
            ev.check(&mut report, "a.a.a + b.b.b + c.c.c")?;
            match &ctx.u {
                Some(u) => commutes_with(&mut report, t, u, "u")?,
                None => commutes_with(&mut report, t, u2m, "uu")?,
            }
            ev.check(&mut report, "a.a.b - b.a.a")?;
            ev.check(&mut report, "-b.a.b - a.a.b + 2*a.a.a - uu.a")?;
            ev.check(&mut report, "6*a.a.a.a.a - 5*uu.a.a.a + uu.uu.a")?;
        }
        RelationSet::ZeroSumRelations => {
            for text in [
                "a + b + c",
                "a.b + b.a + 2*a.a + 2*b.b",
                "a.a.b - b.a.a",
                "2*a.a.a - a.a.b - b.a.b",
                "a.a.b.a + 1/2*a.a.a.a",
                "a.a.a.b + 1/2*a.a.a.a",
                "a.a.a.a.a",
            ] {
                ev.check(&mut report, text)?;
            }
        }
        RelationSet::DegreeFourMonomials => {
            for p in degree_four_targets() {
                report.push(format!("{} = 0", ev.alpha.format_rat(&p)), ev.eval(&p)?);
            }
        }
        RelationSet::DegreeFiveMonomials => {
            let al = relation_alphabet();
            for w in all_words(&al, 2, 5) {
                let p = NcPoly::monomial(w, int(1));
                report.push(format!("{} = 0", al.format_rat(&p)), ev.eval(&p)?);
            }
        }
        RelationSet::FourMatrix | RelationSet::UnityPattern => {
            return Err(VerifyError::WrongKind { set: rs.code(), kind: "triple" })
        }
        RelationSet::TwoMatrix => return check_tsys(&t.a, &t.b),
    }
    Ok(report)
}

// a^4 - b^4, abab and baba at 5/2 a^4, the other twelve words at -1/2 a^4
fn degree_four_targets() -> Vec<NcPoly<Rat>> {
    let al = relation_alphabet();
    let a4 = al.parse_word("a.a.a.a").expect("word");
    let mut out = vec![rel("a.a.a.a - b.b.b.b")];
    for w in all_words(&al, 2, 4) {
        let coeff = match al.format_word(&w).as_str() {
            "a.a.a.a" | "b.b.b.b" => continue,
            "a.b.a.b" | "b.a.b.a" => rat(-5, 2),
            _ => rat(1, 2),
        };
        out.push(NcPoly::monomial(w, int(1)).add(&NcPoly::monomial(a4.clone(), coeff)));
    }
    out
}

/// `a⁴ = b⁴`, the degree-4 word values and all degree-5 words vanishing.
pub fn check_thm4_monomials<F: Scalar>(t: &SolutionTriple<F>) -> Result<Report<F>, VerifyError> {
    let ctx = Context::empty();
    let mut r = check_relations(t, RelationSet::DegreeFourMonomials, &ctx)?;
    r.extend(check_relations(t, RelationSet::DegreeFiveMonomials, &ctx)?);
    Ok(r)
}

/// Four-matrix relation families.
pub fn check_quad<F: Scalar>(q: &SolutionQuad<F>, rs: RelationSet, ctx: &Context<F>) -> Result<Report<F>, VerifyError> {
    let n = same_size(&q.matrices())?;
    let mut report = Report::new();
    match rs {
        RelationSet::FourMatrix => {
            for k in 1..=4u32 {
                let mut sum = Mat::scalar(n, -q.alphas[k as usize - 1].clone());
                for m in q.matrices() {
                    sum = sum.try_add(&m.pow(k)?)?;
                }
                report.push(format!("a^{k} + b^{k} + c^{k} + d^{k} = alpha_{k} I"), sum);
            }
        }
        RelationSet::UnityPattern => {
            let j = ctx.unity.clone().ok_or(VerifyError::MissingContext("j"))?;
            let j2 = j.clone() * j.clone();
            let sq = |m: &Mat<F>| m.try_mul(m);
            let id = Mat::<F>::identity(n);
            let sum = q.a.try_add(&q.b)?.try_add(&q.c)?.try_add(&q.d)?;
            report.push("a + b + c + d = 0", sum);
            report.push("a^2 = I", sq(&q.a)?.try_sub(&id)?);
            report.push("b^2 = j I", sq(&q.b)?.try_sub(&id.scale(&j))?);
            report.push("c^2 = j^2 I", sq(&q.c)?.try_sub(&id.scale(&j2))?);
            report.push("d^2 = 0", sq(&q.d)?);
            report.push("a + j b + j^2 c = 0", q.a.try_add(&q.b.scale(&j))?.try_add(&q.c.scale(&j2))?);
        }
        other => return Err(VerifyError::WrongKind { set: other.code(), kind: "quad" }),
    }
    Ok(report)
}

/// `ab + ba = I` and `ba²b = 0`.
pub fn check_tsys<F: Scalar>(a: &Mat<F>, b: &Mat<F>) -> Result<Report<F>, VerifyError> {
    same_size(&[a, b])?;
    let (r1, r2) = tsys_residuals(a, b)?;
    let mut report = Report::new();
    report.push("a.b + b.a = I", r1);
    report.push("b.a.a.b = 0", r2);
    Ok(report)
}

/// The system with right-hand sides in `U` instead of scalars.
pub fn check_u_system(s: &USolution) -> Result<Report<f64>, VerifyError> {
    let ms = [&s.a, &s.b, &s.c];
    same_size(&[ms[0], ms[1], ms[2], &s.rhs[0], &s.rhs[1], &s.rhs[2]])?;
    let mut report = Report::new();
    for (k, name) in [(1u32, "a + b + c = u1"), (2, "a^2 + b^2 + c^2 = u2"), (3, "a^3 + b^3 + c^3 = u3")] {
        let mut sum = s.rhs[k as usize - 1].scale(&-1.0);
        for m in ms {
            sum = sum.try_add(&m.pow(k)?)?;
        }
        report.push(name, sum);
    }
    Ok(report)
}

/// `a², b², c²` are projectors summing to `I`.
pub fn check_projector_squares<F: Scalar>(t: &SolutionTriple<F>) -> Result<Report<F>, VerifyError> {
    let n = same_size(&t.matrices())?;
    let mut report = Report::new();
    let mut sum = Mat::scalar(n, -F::one());
    for (name, m) in ["a", "b", "c"].iter().zip(t.matrices()) {
        let sq = m.try_mul(m)?;
        report.push(format!("({name}^2)^2 = {name}^2"), sq.try_mul(&sq)?.try_sub(&sq)?);
        sum = sum.try_add(&sq)?;
    }
    report.push("a^2 + b^2 + c^2 = I", sum);
    Ok(report)
}

/// Outcome of testing `[a, b]` for nilpotency.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorCheck<F> {
    /// `false` refutes simultaneous triangularizability; `true` is inconclusive.
    pub is_nilpotent: bool,
    pub commutator: Mat<F>,
    pub square: Mat<F>,
}

pub fn commutator_nilpotency<F: Scalar>(t: &SolutionTriple<F>) -> Result<CommutatorCheck<F>, VerifyError> {
    same_size(&t.matrices())?;
    let k = t.a.commutator(&t.b)?;
    let square = k.try_mul(&k)?;
    let is_nilpotent = if F::EXACT { k.is_nilpotent() } else { k.pow(k.nrows() as u32)?.max_abs() <= NUMERIC_TOL };
    Ok(CommutatorCheck { is_nilpotent, commutator: k, square })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct_theorem2, Theorem2Shape};

    #[test]
    fn codes_round_trip() {
        for r in RelationSet::ALL {
            assert_eq!(RelationSet::from_code(r.code()), Some(r));
        }
        assert_eq!(RelationSet::from_code("r51"), Some(RelationSet::ZeroSumRelations));
    }

    #[test]
    fn perturbation_is_localized() {
        let mut t = construct_theorem2(&Theorem2Shape::<Rat>::zero_blocks(1, 1, 1)).unwrap();
        assert!(check_system(&t).unwrap().passed());
        let old = t.a.get(0, 1).clone();
        t.a.set(0, 1, old + int(1));
        let r = check_system(&t).unwrap();
        assert!(!r.passed());
        match &r.checks[0].status {
            Status::Residual(m) => {
                let nonzero: Vec<_> = (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .filter(|&(i, j)| !m.get(i, j).is_negligible())
                    .collect();
                assert_eq!(nonzero, vec![(0, 1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degree_four_target_count() {
        assert_eq!(degree_four_targets().len(), 15);
    }
}

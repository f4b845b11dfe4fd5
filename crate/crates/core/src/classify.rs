//! Parameter analysis for the power-sum system: the annihilating cubic, its
//! invariants, the four-way case split, and the rescaling to the model system.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{sort_roots, ArithError, MinPoly, NfElem, Rat, UPoly};
use crate::matrix::{Mat, MatError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("expected case {expected}, parameters are {found}")]
    WrongCase { expected: CaseTag, found: CaseTag },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// Right-hand sides of `a+b+c = αI`, `a²+b²+c² = βI`, `a³+b³+c³ = γI`.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<F> {
    pub alpha: F,
    pub beta: F,
    pub gamma: F,
}

impl<F: Scalar> Params<F> {
    pub fn new(alpha: F, beta: F, gamma: F) -> Self {
        Params { alpha, beta, gamma }
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Params<G> {
        Params { alpha: f(&self.alpha), beta: f(&self.beta), gamma: f(&self.gamma) }
    }
}

impl Params<Rat> {
    pub fn from_ints(alpha: i64, beta: i64, gamma: i64) -> Self {
        Params::new(Rat::from_integer(alpha.into()), Rat::from_integer(beta.into()), Rat::from_integer(gamma.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Generic,
    MultipleRoot,
    HalfSum,
    Nilpotent,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Generic => "Generic",
            CaseTag::MultipleRoot => "MultipleRoot",
            CaseTag::HalfSum => "HalfSum",
            CaseTag::Nilpotent => "Nilpotent",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `r(x) = 6x³ − 6αx² + (3α² − 3β)x + 3αβ − 2γ − α³`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cubic<F> {
    poly: UPoly<F>,
}

impl<F: Scalar> Cubic<F> {
    pub fn from_params(p: &Params<F>) -> Self {
        let (a, b, g) = (p.alpha.clone(), p.beta.clone(), p.gamma.clone());
        let k = F::from_i64;
        let a2 = a.clone() * a.clone();
        let c0 = k(3) * a.clone() * b.clone() - k(2) * g - a2.clone() * a.clone();
        let c1 = k(3) * a2 - k(3) * b;
        let c2 = -(k(6) * a);
        Cubic { poly: UPoly::new(vec![c0, c1, c2, k(6)]) }
    }

    pub fn poly(&self) -> &UPoly<F> {
        &self.poly
    }

    /// Coefficients low degree first, always four of them.
    pub fn coeffs(&self) -> [F; 4] {
        [self.poly.coeff(0), self.poly.coeff(1), self.poly.coeff(2), self.poly.coeff(3)]
    }

    pub fn eval(&self, x: &F) -> F {
        self.poly.eval(x)
    }

    /// Whether `gcd(r, r')` is nonconstant.
    pub fn has_multiple_root(&self) -> bool {
        let g = self.poly.gcd(&self.poly.derivative()).expect("field arithmetic");
        g.degree().unwrap_or(0) >= 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedParams<F> {
    /// `β − α²/3`
    pub sigma: F,
    /// `δ/9`
    pub tau: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis<F> {
    pub params: Params<F>,
    pub cubic: Cubic<F>,
    pub delta: F,
    pub dis: F,
    pub normalized: NormalizedParams<F>,
    pub tag: CaseTag,
}

/// `δ = 2α³ − 9αβ + 9γ`.
pub fn delta<F: Scalar>(p: &Params<F>) -> F {
    let k = F::from_i64;
    let a = p.alpha.clone();
    k(2) * a.clone() * a.clone() * a.clone() - k(9) * a * p.beta.clone() + k(9) * p.gamma.clone()
}

/// The sextic `9α⁴β − 8α³γ − 21α²β² + 36αβγ − 18γ² − α⁶ + 3β³`.
pub fn dis_sextic<F: Scalar>(p: &Params<F>) -> F {
    let k = F::from_i64;
    let (a, b, g) = (p.alpha.clone(), p.beta.clone(), p.gamma.clone());
    let a2 = a.clone() * a.clone();
    let a3 = a2.clone() * a.clone();
    let a4 = a2.clone() * a2.clone();
    k(9) * a4 * b.clone() - k(8) * a3.clone() * g.clone() - k(21) * a2 * b.clone() * b.clone()
        + k(36) * a * b.clone() * g.clone()
        - k(18) * g.clone() * g
        - a3.clone() * a3
        + k(3) * b.clone() * b.clone() * b
}

/// `3(σ³ − 6τ²)`, equal to [`dis_sextic`].
pub fn dis_normalized<F: Scalar>(n: &NormalizedParams<F>) -> F {
    let k = F::from_i64;
    let s = n.sigma.clone();
    k(3) * (s.clone() * s.clone() * s - k(6) * n.tau.clone() * n.tau.clone())
}

pub fn normalize<F: Scalar>(p: &Params<F>) -> NormalizedParams<F> {
    let third = F::from_rat(&Rat::new(1.into(), 3.into()));
    let ninth = F::from_rat(&Rat::new(1.into(), 9.into()));
    let sigma = p.beta.clone() - p.alpha.clone() * p.alpha.clone() * third;
    NormalizedParams { sigma, tau: delta(p) * ninth }
}

/// Computes the cubic, `δ`, `dis`, `(σ, τ)` and the case tag.
///
/// For exact scalars the two expressions for `dis` are asserted equal.
pub fn analyze<F: Scalar>(p: &Params<F>) -> Analysis<F> {
    let cubic = Cubic::from_params(p);
    let d = delta(p);
    let dis = dis_sextic(p);
    let normalized = normalize(p);
    if F::EXACT {
        assert_eq!(dis, dis_normalized(&normalized), "dis identity violated");
    }
    let tag = match (d.is_negligible(), dis.is_negligible()) {
        (false, false) => CaseTag::Generic,
        (false, true) => CaseTag::MultipleRoot,
        (true, false) => CaseTag::HalfSum,
        (true, true) => CaseTag::Nilpotent,
    };
    Analysis { params: p.clone(), cubic, delta: d, dis, normalized, tag }
}

/// Monic `x³ − e1x² + e2x − e3` from the power sums via Newton's identities.
pub fn power_sums_to_cubic<F: Scalar>(p1: &F, p2: &F, p3: &F) -> UPoly<F> {
    let half = F::from_rat(&Rat::new(1.into(), 2.into()));
    let sixth = F::from_rat(&Rat::new(1.into(), 6.into()));
    let k = F::from_i64;
    let e1 = p1.clone();
    let e2 = (p1.clone() * p1.clone() - p2.clone()) * half;
    let e3 = (p1.clone() * p1.clone() * p1.clone() - k(3) * p1.clone() * p2.clone() + k(2) * p3.clone()) * sixth;
    UPoly::new(vec![-e3, e2, -e1, F::one()])
}

/// Numeric roots and whatever rational roots the rational-root test finds.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicRoots {
    pub numeric: [Complex64; 3],
    /// Rational roots with multiplicity, ascending; all three when `r` splits over Q.
    pub exact: Vec<Rat>,
}

impl CubicRoots {
    pub fn fully_exact(&self) -> bool {
        self.exact.len() == 3
    }
}

fn to_c(r: &Rat) -> Complex64 {
    Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
}

/// Roots of a rational cubic: exact rational ones, the rest numerically.
pub fn cubic_roots(c: &Cubic<Rat>) -> CubicRoots {
    let exact = c.poly.rational_roots();
    if exact.is_empty() {
        let cs = c.coeffs();
        return CubicRoots { numeric: cardano([to_c(&cs[0]), to_c(&cs[1]), to_c(&cs[2]), to_c(&cs[3])]), exact };
    }
    let mut rest = c.poly.clone();
    for r in &exact {
        rest = rest.div_rem(&UPoly::new(vec![-r.clone(), Rat::from_integer(1.into())])).expect("monic").0;
    }
    let mut numeric: Vec<Complex64> = exact.iter().map(to_c).collect();
    if rest.degree() == Some(2) {
        let (a, b, cc) = (to_c(&rest.coeff(2)), to_c(&rest.coeff(1)), to_c(&rest.coeff(0)));
        numeric.extend(quadratic_roots(a, b, cc));
    }
    sort_roots(&mut numeric);
    CubicRoots { numeric: [numeric[0], numeric[1], numeric[2]], exact }
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let d = (b * b - 4.0 * a * c).sqrt();
    // choose the sign avoiding cancellation
    let q = if (b.conj() * d).re >= 0.0 { -(b + d) / 2.0 } else { -(b - d) / 2.0 };
    if q.norm() == 0.0 {
        return [Complex64::zero(), Complex64::zero()];
    }
    [q / a, c / q]
}

/// Cardano's formula with principal cube roots, polished by Newton steps.
/// Coefficients are low degree first; the leading one must be nonzero.
pub fn cardano(coeffs: [Complex64; 4]) -> [Complex64; 3] {
    let lead = coeffs[3];
    let (a, b, c) = (coeffs[2] / lead, coeffs[1] / lead, coeffs[0] / lead);
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut big_c = (-q / 2.0 + s).cbrt();
    if big_c.norm() < 1e-300 {
        big_c = (-q / 2.0 - s).cbrt();
    }
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = [Complex64::zero(); 3];
    let mut w = Complex64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let ck = big_c * w;
        let y = if ck.norm() < 1e-300 { Complex64::zero() } else { ck - p / (3.0 * ck) };
        *r = y - a / 3.0;
        w *= omega;
    }
    let f = |x: Complex64| ((x + a) * x + b) * x + c;
    let df = |x: Complex64| (3.0 * x + 2.0 * a) * x + b;
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let d = df(*r);
            if d.norm() < 1e-12 {
                break;
            }
            let next = *r - f(*r) / d;
            if f(next).norm() < f(*r).norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    if coeffs.iter().all(|x| x.im == 0.0) {
        for r in roots.iter_mut() {
            if r.im.abs() <= 1e-9 * (1.0 + r.re.abs()) {
                r.im = 0.0;
            }
        }
    }
    sort_roots(&mut roots);
    roots
}

/// Whether one of three numbers is the mean of the other two, within `tol`.
pub fn has_half_sum_root(roots: &[Complex64; 3], tol: f64) -> bool {
    (0..3).any(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        (roots[i] - (roots[j] + roots[k]) / 2.0).norm() <= tol
    })
}

/// Factor `λ = 3τ/σ` carrying solutions of the model system `α = β = γ = 1`
/// to solutions for `p` via `a = (α/3)I + λ(a* − I/3)`.
pub fn model_scaling<F: Scalar>(p: &Params<F>) -> Result<F, ClassifyError> {
    let an = analyze(p);
    if an.tag != CaseTag::MultipleRoot {
        return Err(ClassifyError::WrongCase { expected: CaseTag::MultipleRoot, found: an.tag });
    }
    Ok(F::from_i64(3) * an.normalized.tau.try_div(&an.normalized.sigma)?)
}

/// Rescaling `x ↦ h·j^k·(x − α/3)` to the normalized system `σ = ∛6, τ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub shift: NfElem,
    pub scale: NfElem,
    pub twist: u8,
    /// `h·j^k`
    pub factor: NfElem,
}

impl Normalization {
    pub fn apply(&self, x: &NfElem) -> NfElem {
        self.factor.clone() * (x.clone() - self.shift.clone())
    }

    pub fn invert(&self, y: &NfElem) -> NfElem {
        y.checked_div(&self.factor).expect("factor is nonzero") + self.shift.clone()
    }

    pub fn apply_matrix(&self, m: &Mat<NfElem>) -> Mat<NfElem> {
        let n = m.nrows();
        m.try_sub(&Mat::scalar(n, self.shift.clone())).expect("square").scale(&self.factor)
    }

    pub fn invert_matrix(&self, m: &Mat<NfElem>) -> Mat<NfElem> {
        let n = m.nrows();
        let inv = self.factor.inverse().expect("factor is nonzero");
        m.scale(&inv).try_add(&Mat::scalar(n, self.shift.clone())).expect("square")
    }
}

/// Finds `h`, `k` with `(h·j^k)³ = 1/τ` and `(h·j^k)²σ = ∛6`.
///
/// `cbrt6` must lie in the parameters' field; `unity` (a primitive cube root
/// of one) is only needed when the twist is nontrivial. The twist is chosen
/// so that `h` is closest to the positive real axis in the embedding where
/// `cbrt6` is real and positive.
pub fn normalize_multiple_root(
    p: &Params<NfElem>,
    cbrt6: &NfElem,
    unity: Option<&NfElem>,
) -> Result<Normalization, ClassifyError> {
    let an = analyze(p);
    if an.tag != CaseTag::MultipleRoot {
        return Err(ClassifyError::WrongCase { expected: CaseTag::MultipleRoot, found: an.tag });
    }
    let (sigma, tau) = (&an.normalized.sigma, &an.normalized.tau);
    let factor = sigma.checked_div(&tau.checked_mul(cbrt6)?)?;
    let shift = p.alpha.checked_div(&NfElem::rational(Rat::from_integer(3.into())))?;
    let (scale, twist) = match unity {
        None => (factor.clone(), 0),
        Some(j) => {
            let root = principal_root(cbrt6, Some(j));
            let jinv = j.inverse()?;
            (0u8..3)
                .map(|k| {
                    let h = factor.clone() * jinv.pow(k as u32);
                    let arg = h.embed_at(root).arg().abs();
                    (arg, h, k)
                })
                .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal))
                .map(|(_, h, k)| (h, k))
                .expect("three candidates")
        }
    };
    Ok(Normalization { shift, scale, twist, factor })
}

// Root of the ambient minimal polynomial at which `cbrt6` is the real cube root
// of 6 and `unity` has positive imaginary part.
fn principal_root(cbrt6: &NfElem, unity: Option<&NfElem>) -> Complex64 {
    let Some(field) = cbrt6.field().or_else(|| unity.and_then(|j| j.field())) else {
        return Complex64::zero();
    };
    let real = 6f64.cbrt();
    field
        .complex_roots()
        .into_iter()
        .find(|&r| (cbrt6.embed_at(r) - real).norm() < 1e-6 && unity.is_none_or(|j| j.embed_at(r).im > 0.0))
        .unwrap_or_else(|| field.complex_roots()[0])
}

/// A simple extension containing both `∛6` and a primitive cube root of unity.
#[derive(Debug, Clone)]
pub struct CubeRootField {
    pub field: Arc<MinPoly>,
    pub cbrt6: NfElem,
    pub unity: NfElem,
}

/// Builds `Q(∛6, j)` as `Q(θ)` for a primitive element `θ`.
pub fn cube_root_field() -> CubeRootField {
    let (field, cbrt6, unity) =
        primitive_element(&MinPoly::cube_root_six(), &MinPoly::cyclotomic3()).expect("irreducible inputs");
    CubeRootField { field, cbrt6, unity }
}

/// Finds `θ = x + k·y` generating `Q(x, y)` for roots `x` of `m1` and `y` of
/// `m2` with coprime-degree or linearly disjoint fields, returning its minimal
/// polynomial and `x`, `y` written in powers of `θ`.
pub fn primitive_element(
    m1: &Arc<MinPoly>,
    m2: &Arc<MinPoly>,
) -> Result<(Arc<MinPoly>, NfElem, NfElem), ClassifyError> {
    let (d1, d2) = (m1.degree(), m2.degree());
    let n = d1 * d2;
    // elements as coefficient vectors on x^i y^k, index i*d2 + k
    let mul_gen = |v: &[Rat], m: &MinPoly, stride_outer: bool| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); n];
        let md = m.degree();
        let mc = m.coeffs();
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, k) = (idx / d2, idx % d2);
            let (e, other) = if stride_outer { (i, k) } else { (k, i) };
            let place = |e: usize, o: usize| if stride_outer { e * d2 + o } else { o * d2 + e };
            if e + 1 < md {
                out[place(e + 1, other)] += c;
            } else {
                // x^md = -sum mc[l] x^l
                for (l, ml) in mc.iter().take(md).enumerate() {
                    out[place(l, other)] -= c * ml;
                }
            }
        }
        out
    };
    for k in 1i64..20 {
        let kr = Rat::from_integer(k.into());
        let times_theta = |v: &[Rat]| -> Vec<Rat> {
            let a = mul_gen(v, m1, true);
            let b = mul_gen(v, m2, false);
            a.iter().zip(&b).map(|(x, y)| x + y * &kr).collect()
        };
        let mut powers = vec![{
            let mut one = vec![Rat::zero(); n];
            one[0] = Rat::from_integer(1.into());
            one
        }];
        for _ in 0..n {
            let next = times_theta(powers.last().expect("nonempty"));
            powers.push(next);
        }
        let basis = Mat::from_columns(&powers[..n])?;
        if basis.rank() < n {
            continue;
        }
        // theta^n = sum c_l theta^l
        let c = basis.solve(&powers[n])?;
        let mut mp: Vec<Rat> = c.iter().map(|x| -x.clone()).collect();
        mp.push(Rat::from_integer(1.into()));
        let field = MinPoly::new(mp)?;
        let unit = |idx: usize| {
            let mut v = vec![Rat::zero(); n];
            v[idx] = Rat::from_integer(1.into());
            v
        };
        let x = NfElem::new(&field, basis.solve(&unit(d2))?);
        let y = NfElem::new(&field, basis.solve(&unit(1))?);
        return Ok((field, x, y));
    }
    Err(ClassifyError::Arith(ArithError::InvalidMinPoly("no primitive element found".into())))
}

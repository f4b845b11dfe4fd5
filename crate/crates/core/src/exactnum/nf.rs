use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::{format_rat, parse_rat, poly_roots, ArithError, Rat, UPoly};
use crate::scalar::Scalar;

/// Monic defining polynomial of a simple extension, degree 1 to 6.
///
/// Irreducibility is assumed; for degree at most 3 it is confirmed by the
/// rational-root test at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPoly {
    coeffs: Vec<Rat>,
}

impl MinPoly {
    pub fn new(coeffs: Vec<Rat>) -> Result<Arc<Self>, ArithError> {
        let d = coeffs.len().saturating_sub(1);
        if !(1..=6).contains(&d) {
            return Err(ArithError::InvalidMinPoly(format!("degree {d} outside 1..=6")));
        }
        if !coeffs[d].is_one() {
            return Err(ArithError::InvalidMinPoly("not monic".into()));
        }
        if (2..=3).contains(&d) {
            let poly = UPoly::new(coeffs.clone());
            if let Some(root) = poly.rational_roots().first() {
                return Err(ArithError::ReducibleModulus {
                    factor: format!("t - {}", format_rat(root)).replace("- -", "+ "),
                });
            }
        }
        Ok(Arc::new(MinPoly { coeffs }))
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Arc<Self>, ArithError> {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn parse(coeffs: &[&str]) -> Result<Arc<Self>, ArithError> {
        Self::new(coeffs.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?)
    }

    /// `t^2 + t + 1`, adjoining a primitive cube root of unity.
    pub fn cyclotomic3() -> Arc<Self> {
        Self::from_ints(&[1, 1, 1]).expect("irreducible")
    }

    /// `t^3 - 6`, adjoining the real cube root of 6.
    pub fn cube_root_six() -> Arc<Self> {
        Self::from_ints(&[-6, 0, 0, 1]).expect("irreducible")
    }

    /// `t^2 - k` for a non-square integer `k`.
    pub fn quadratic(k: i64) -> Result<Arc<Self>, ArithError> {
        Self::from_ints(&[-k, 0, 1])
    }

    /// `t^4 - 10 t^2 + 1`, the minimal polynomial of `sqrt(2) + sqrt(3)`.
    pub fn biquadratic_2_3() -> Arc<Self> {
        Self::from_ints(&[1, 0, -10, 0, 1]).expect("valid")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn as_upoly(&self) -> UPoly<Rat> {
        UPoly::new(self.coeffs.clone())
    }

    /// Complex roots sorted by (real, imag).
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let c: Vec<Complex64> =
            self.coeffs.iter().map(|r| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)).collect();
        poly_roots(&c)
    }
}

impl fmt::Display for MinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_upoly())
    }
}

/// Element of `Q[t]/(m(t))`, or a bare rational when no field is attached.
///
/// Bare rationals combine with elements of any field; two elements carrying
/// different fields cannot be combined.
#[derive(Debug, Clone)]
pub struct NfElem {
    field: Option<Arc<MinPoly>>,
    coeffs: Vec<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NfOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl NfElem {
    pub fn rational(r: Rat) -> Self {
        NfElem { field: None, coeffs: vec![r] }
    }

    /// Element with the given coefficients on `1, t, t^2, ...`, reduced mod `m`.
    pub fn new(field: &Arc<MinPoly>, coeffs: Vec<Rat>) -> Self {
        let reduced = UPoly::new(coeffs).div_rem(&field.as_upoly()).expect("monic modulus").1;
        Self::from_reduced(field, &reduced)
    }

    fn from_reduced(field: &Arc<MinPoly>, p: &UPoly<Rat>) -> Self {
        let d = field.degree();
        NfElem { field: Some(field.clone()), coeffs: (0..d).map(|i| p.coeff(i)).collect() }
    }

    pub fn from_ints(field: &Arc<MinPoly>, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// The class of `t`.
    pub fn generator(field: &Arc<MinPoly>) -> Self {
        Self::new(field, vec![Rat::zero(), Rat::one()])
    }

    pub fn field(&self) -> Option<&Arc<MinPoly>> {
        self.field.as_ref()
    }

    /// Coefficients on `1, t, ...`; length equals the field degree (1 for bare rationals).
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficients padded to `degree` entries.
    pub fn coeffs_padded(&self, degree: usize) -> Vec<Rat> {
        (0..degree).map(|i| self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)).collect()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    /// Attaches `field` to a bare rational; a no-op when the field already matches.
    pub fn in_field(&self, field: &Arc<MinPoly>) -> Result<Self, ArithError> {
        match &self.field {
            Some(f) if f == field => Ok(self.clone()),
            Some(_) => Err(ArithError::MismatchedFields),
            None => Ok(Self::new(field, self.coeffs.clone())),
        }
    }

    fn common_field(&self, other: &Self) -> Result<Option<Arc<MinPoly>>, ArithError> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) if a == b => Ok(Some(a.clone())),
            (Some(_), Some(_)) => Err(ArithError::MismatchedFields),
            (Some(a), None) | (None, Some(a)) => Ok(Some(a.clone())),
            (None, None) => Ok(None),
        }
    }

    fn as_upoly(&self) -> UPoly<Rat> {
        UPoly::new(self.coeffs.clone())
    }

    fn combine(&self, other: &Self, f: impl Fn(&UPoly<Rat>, &UPoly<Rat>) -> UPoly<Rat>) -> Result<Self, ArithError> {
        let field = self.common_field(other)?;
        let p = f(&self.as_upoly(), &other.as_upoly());
        Ok(match field {
            Some(m) => Self::new(&m, p.coeffs().to_vec()),
            None => Self::rational(p.coeff(0)),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, |a, b| a.add(b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, |a, b| a.sub(b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.combine(other, |a, b| a.mul(b))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on `(x(t), m(t))`.
    ///
    /// A nontrivial gcd means the modulus is reducible; the factor is reported.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let Some(m) = &self.field else {
            return Ok(Self::rational(self.coeffs[0].recip()));
        };
        let (g, s, _) = self.as_upoly().ext_gcd(&m.as_upoly())?;
        if g.degree() != Some(0) {
            return Err(ArithError::ReducibleModulus { factor: g.to_string() });
        }
        Ok(Self::new(m, s.coeffs().to_vec()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.common_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }

    /// Image under the field map sending `t` to `image` (which must satisfy `m`).
    pub fn substitute(&self, image: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc * image.clone() + Self::rational(c.clone()))
    }

    /// Numeric value at the `root_choice`-th complex root of `m` (roots sorted by (real, imag)).
    pub fn embed_complex(&self, root_choice: usize) -> Complex64 {
        let root = match &self.field {
            Some(m) => m.complex_roots()[root_choice % m.degree()],
            None => Complex64::zero(),
        };
        self.embed_at(root)
    }

    pub fn embed_at(&self, root: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * root + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
    }
}

/// Field operation on two elements of the same number field.
pub fn nf_arith(x: &NfElem, y: &NfElem, op: NfOp) -> Result<NfElem, ArithError> {
    match op {
        NfOp::Add => x.checked_add(y),
        NfOp::Sub => x.checked_sub(y),
        NfOp::Mul => x.checked_mul(y),
        NfOp::Div => x.checked_div(y),
    }
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => a == b && self.coeffs == other.coeffs,
            _ => match (self.as_rational(), other.as_rational()) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
        }
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", UPoly::new(self.coeffs.clone()))
    }
}

macro_rules! nf_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for NfElem {
            type Output = NfElem;
            /// Panics when the operands carry different fields.
            fn $method(self, rhs: NfElem) -> NfElem {
                self.$checked(&rhs).expect("number-field operands must share a field")
            }
        }
    };
}

nf_binop!(Add, add, checked_add);
nf_binop!(Sub, sub, checked_sub);
nf_binop!(Mul, mul, checked_mul);

impl Neg for NfElem {
    type Output = NfElem;
    fn neg(self) -> NfElem {
        NfElem { field: self.field, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Zero for NfElem {
    fn zero() -> Self {
        Self::rational(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for NfElem {
    fn one() -> Self {
        Self::rational(Rat::one())
    }
}

impl From<Rat> for NfElem {
    fn from(r: Rat) -> Self {
        Self::rational(r)
    }
}

impl Scalar for NfElem {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        Self::rational(r.clone())
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn try_recip(&self) -> Result<Self, ArithError> {
        self.inverse()
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

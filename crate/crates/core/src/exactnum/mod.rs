//! Exact scalars: big rationals and elements of simple extensions `Q[t]/(m(t))`.

mod nf;
mod roots;
mod upoly;

pub use nf::{nf_arith, MinPoly, NfElem, NfOp};
pub use roots::{poly_roots, sort_roots};
pub use upoly::UPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    MismatchedFields,
    #[error("minimal polynomial is reducible: found factor {factor}")]
    ReducibleModulus { factor: String },
    #[error("invalid minimal polynomial: {0}")]
    InvalidMinPoly(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Parses `"p/q"` or `"p"`, with optional sign and surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let t = s.trim();
    let err = || ArithError::Parse(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rat::new(num, den))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Exact square root of a rational, when it is a perfect square.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Writes a positive rational as `s^2 * k` with `k` a squarefree integer, when
/// trial division up to `limit` fully factors numerator and denominator.
pub fn squarefree_decomposition(r: &Rat, limit: u64) -> Option<(Rat, i64)> {
    if r.is_zero() {
        return Some((Rat::zero(), 1));
    }
    let sign = if r.is_negative() { -1 } else { 1 };
    // k = sqfree(num * den), s = sqrt(num/den / k)
    let prod = (r.numer() * r.denom()).abs();
    let mut rest = prod;
    let mut k: i64 = 1;
    let mut p: u64 = 2;
    while p <= limit {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e % 2 == 1 {
            k = k.checked_mul(p as i64)?;
        }
        p += 1;
    }
    let rest: i64 = i64::try_from(rest).ok()?;
    if rest > 1 {
        // leftover factor is prime only if it passed the sqrt bound check
        if (p as i128) * (p as i128) <= rest as i128 {
            return None;
        }
        k = k.checked_mul(rest)?;
    }
    let s2 = r.abs() / int(k);
    let s = rat_sqrt(&s2)?;
    Some((s, sign * k))
}

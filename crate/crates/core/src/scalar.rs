//! Scalar fields for the kernels.
//!
//! Every kernel in this crate is generic over [`Scalar`]. Two backends exist:
//! [`Surd`], exact arithmetic in the quadratic field Q(√t), and plain `f64`.
//! The deformation parameter `s` of the squashed metrics is stored as `√t`
//! with `t = s²` rational, so all metric quantities stay exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Field operations shared by the exact and floating-point backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends whose zero test is structural rather than tolerance based.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    /// `√t` for a positive rational `t`. Panics if `t <= 0`.
    fn sqrt_of(t: &BigRational) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn parse(text: &str) -> Result<Self, Error>;
    /// Square root, when it exists in the field.
    fn sqrt(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }

    fn frac(numer: i64, denom: i64) -> Self {
        Self::from_ratio(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Division; `None` when the divisor is zero.
    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|d| self.clone() * d)
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

/// Parses `"3"`, `"-7/2"` or a terminating decimal such as `"0.2"`.
pub fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    BigRational::from_str(text).map_err(|_| bad())
}

/// Rational square root when `r` is the square of a rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

/// Exact element `a + b·√t` of Q(√t).
///
/// The radicand is never a rational square: [`Surd::sqrt`] folds perfect
/// squares into the rational part, so the pair `(a, b)` is a canonical
/// representation and `(0, 0)` is the only zero. Values from different
/// fields Q(√t), Q(√u) may only be combined when one of them is rational.
#[derive(Clone)]
pub struct Surd {
    rational: BigRational,
    surd: BigRational,
    radicand: Option<Arc<BigRational>>,
}

impl Surd {
    pub fn rational(r: BigRational) -> Self {
        Surd {
            rational: r,
            surd: BigRational::zero(),
            radicand: None,
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `√t`, or an error when `t` is not positive.
    pub fn sqrt(t: &BigRational) -> Result<Self, Error> {
        if !t.is_positive() {
            return Err(Error::NonPositiveParameter(t.to_string()));
        }
        Ok(match rational_sqrt(t) {
            Some(root) => Self::rational(root),
            None => Surd {
                rational: BigRational::zero(),
                surd: BigRational::one(),
                radicand: Some(Arc::new(t.clone())),
            },
        })
    }

    /// `a + b·√t` built from its parts.
    pub fn from_parts(a: BigRational, b: BigRational, t: &BigRational) -> Result<Self, Error> {
        let root = Self::sqrt(t)?;
        Ok(Self::rational(a) + Self::rational(b) * root)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn radicand(&self) -> Option<&BigRational> {
        self.radicand.as_deref()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    fn shared_radicand(&self, other: &Self) -> Option<Arc<BigRational>> {
        match (&self.radicand, &other.radicand) {
            (Some(a), Some(b)) => {
                assert!(a == b, "cannot combine elements of Q(√{a}) and Q(√{b})");
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, b) => b.clone(),
        }
    }

    fn normalized(mut self) -> Self {
        if self.surd.is_zero() {
            self.radicand = None;
        }
        self
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(t) = &self.radicand else {
            return write!(f, "{}", self.rational);
        };
        let b = &self.surd;
        let coeff = |b: &BigRational| {
            if b.is_one() {
                String::new()
            } else {
                format!("{b}*")
            }
        };
        if self.rational.is_zero() {
            if b.is_negative() {
                write!(f, "-{}sqrt({t})", coeff(&-b))
            } else {
                write!(f, "{}sqrt({t})", coeff(b))
            }
        } else if b.is_negative() {
            write!(f, "{}-{}sqrt({t})", self.rational, coeff(&-b))
        } else {
            write!(f, "{}+{}sqrt({t})", self.rational, coeff(b))
        }
    }
}

impl FromStr for Surd {
    type Err = Error;

    /// Accepts the format produced by `Display`: `a`, `b*sqrt(t)`,
    /// `a+b*sqrt(t)`, `a-sqrt(t)` and so on.
    fn from_str(text: &str) -> Result<Self, Error> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(open) = text.find("sqrt(") else {
            return Ok(Surd::rational(parse_rational(&text)?));
        };
        let inner = text[open + 5..]
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in {text:?}")))?;
        let t = parse_rational(inner)?;
        let prefix = text[..open].strip_suffix('*').unwrap_or(&text[..open]);
        // split "a+b" / "a-b" at the last sign that is not leading
        let split = prefix
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => {
                let a = parse_rational(&prefix[..i])?;
                let magnitude = match &prefix[i + 1..] {
                    "" => BigRational::one(),
                    m => parse_rational(m)?,
                };
                let b = if &prefix[i..i + 1] == "-" {
                    -magnitude
                } else {
                    magnitude
                };
                (a, b)
            }
            None => {
                let b = match prefix {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    m => parse_rational(m)?,
                };
                (BigRational::zero(), b)
            }
        };
        Surd::from_parts(a, b, &t)
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational
            && self.surd == other.surd
            && (self.surd.is_zero() || self.radicand == other.radicand)
    }
}

impl Add for Surd {
    type Output = Surd;

    fn add(self, rhs: Surd) -> Surd {
        let radicand = self.shared_radicand(&rhs);
        Surd {
            rational: self.rational + rhs.rational,
            surd: self.surd + rhs.surd,
            radicand,
        }
        .normalized()
    }
}

impl Sub for Surd {
    type Output = Surd;

    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        Surd {
            rational: -self.rational,
            surd: -self.surd,
            radicand: self.radicand,
        }
    }
}

impl Mul for Surd {
    type Output = Surd;

    fn mul(self, rhs: Surd) -> Surd {
        let radicand = self.shared_radicand(&rhs);
        let mut rational = &self.rational * &rhs.rational;
        if let Some(t) = &radicand {
            if !self.surd.is_zero() && !rhs.surd.is_zero() {
                rational += &self.surd * &rhs.surd * t.as_ref();
            }
        }
        let surd = &self.rational * &rhs.surd + &self.surd * &rhs.rational;
        Surd {
            rational,
            surd,
            radicand,
        }
        .normalized()
    }
}

impl Scalar for Surd {
    const EXACT: bool = true;

    fn zero() -> Self {
        Surd::rational(BigRational::zero())
    }

    fn one() -> Self {
        Surd::rational(BigRational::one())
    }

    fn from_ratio(r: &BigRational) -> Self {
        Surd::rational(r.clone())
    }

    fn sqrt_of(t: &BigRational) -> Self {
        Surd::sqrt(t).expect("square root of a non-positive rational")
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let Some(t) = &self.radicand else {
            return Some(Surd::rational(self.rational.recip()));
        };
        // (a + b√t)⁻¹ = (a − b√t) / (a² − b²t); the norm is nonzero since t is not a square
        let norm = &self.rational * &self.rational - &self.surd * &self.surd * t.as_ref();
        Some(
            Surd {
                rational: &self.rational / &norm,
                surd: -&self.surd / &norm,
                radicand: Some(t.clone()),
            }
            .normalized(),
        )
    }

    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        match &self.radicand {
            None => a,
            Some(t) => a + self.surd.to_f64().unwrap_or(f64::NAN) * t.to_f64().unwrap_or(f64::NAN).sqrt(),
        }
    }

    fn parse(text: &str) -> Result<Self, Error> {
        text.parse()
    }

    /// Square roots of positive rationals; an irrational root opens Q(√r).
    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Surd::zero());
        }
        if !self.is_rational() {
            return None;
        }
        Surd::sqrt(&self.rational).ok()
    }
}

/// Entries smaller than this are treated as zero by the float backend when
/// pruning forms and choosing pivots.
pub const FLOAT_ZERO: f64 = 1e-12;

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn sqrt_of(t: &BigRational) -> Self {
        let t = Self::from_ratio(t);
        assert!(t > 0.0, "square root of a non-positive rational");
        t.sqrt()
    }

    fn inv(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| 1.0 / self)
    }

    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_ZERO
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse(text: &str) -> Result<Self, Error> {
        match text.trim().parse::<f64>() {
            Ok(x) => Ok(x),
            Err(_) => Ok(Surd::parse(text)?.to_f64()),
        }
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_of_square_is_rational() {
        let s = Surd::sqrt(&q(4, 9)).unwrap();
        assert!(s.is_rational());
        assert_eq!(s, Surd::frac(2, 3));
        assert!(Surd::sqrt(&q(-1, 1)).is_err());
        assert!(Surd::sqrt(&q(0, 1)).is_err());
    }

    #[test]
    fn field_arithmetic_in_q_sqrt5() {
        let s = Surd::sqrt(&q(1, 5)).unwrap();
        assert_eq!(s.clone() * s.clone(), Surd::frac(1, 5));
        let x = Surd::integer(3) + s.clone() * Surd::integer(2);
        let y = x.inv().unwrap();
        assert_eq!(x * y, Surd::one());
        let z = s.clone() - s;
        assert!(z.is_zero());
        assert_eq!(z.radicand(), None);
    }

    #[test]
    fn display_roundtrip() {
        let t = q(1, 5);
        for (a, b) in [(0, 1), (0, -1), (3, 0), (-1, 2), (2, -3), (0, 7)] {
            let x = Surd::from_parts(q(a, 2), q(b, 3), &t).unwrap();
            let back: Surd = x.to_string().parse().unwrap();
            assert_eq!(back, x, "{x}");
        }
        assert_eq!("12/5".parse::<Surd>().unwrap(), Surd::frac(12, 5));
        assert_eq!("sqrt(1/5)".parse::<Surd>().unwrap(), Surd::sqrt(&t).unwrap());
    }

    #[test]
    fn decimal_rationals() {
        assert_eq!(parse_rational("0.2").unwrap(), q(1, 5));
        assert_eq!(parse_rational("-1.25").unwrap(), q(-5, 4));
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    #[should_panic(expected = "cannot combine")]
    fn mixing_fields_panics() {
        let _ = Surd::sqrt(&q(2, 1)).unwrap() + Surd::sqrt(&q(3, 1)).unwrap();
    }

    #[test]
    fn float_backend_tolerance() {
        assert!(Scalar::is_zero(&1e-13_f64));
        assert!(!Scalar::is_zero(&1e-9_f64));
        assert_eq!(<f64 as Scalar>::parse("sqrt(4)").unwrap(), 2.0);
    }
}

//! Exact scalars over a prime field ℤ_p or over ℚ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar field of a phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// ℤ_p with `p` prime.
    Prime(u32),
    /// The rationals ℚ.
    Rationals,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::CompositeModulus(p))
        }
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            Field::Prime(p) => Some(p),
            Field::Rationals => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// `num / den` interpreted in this field.
    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        match self {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num.into(), den.into()))),
            Field::Prime(_) => {
                let d = self.from_i64(den);
                let inv = d
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("denominator {den} vanishes in {self}")))?;
                Ok(self.from_i64(num) * inv)
            }
        }
    }

    /// The residue with index `i` (i.e. `i mod p`).
    pub fn element(self, i: u32) -> Scalar {
        match self {
            Field::Prime(p) => Scalar::Residue {
                value: i % p,
                modulus: p,
            },
            Field::Rationals => self.from_i64(i as i64),
        }
    }

    /// All elements of a finite field in residue order.
    pub fn elements(self) -> Result<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Ok((0..p).map(|v| self.element(v)).collect()),
            Field::Rationals => Err(Error::NotEnumerable("field elements")),
        }
    }

    pub(crate) fn check(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "Z{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix('Z')
            .or_else(|| t.strip_prefix('z'))
            .map(|d| d.trim_start_matches('_'))
            .ok_or_else(|| Error::UnknownField(s.to_string()))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::UnknownField(s.to_string()))?;
        Field::prime(p)
    }
}

/// An exact field element. Residues are kept in `[0, p)`; fractions are kept
/// in lowest terms with a positive denominator.
///
/// Arithmetic between scalars of different fields is a logic error and
/// panics; matrices and vectors check field agreement up front.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Residue { value: u32, modulus: u32 },
    Rational(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
            Scalar::Rational(_) => Field::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Rational(r) => r.is_one(),
        }
    }

    /// Residue value for prime-field scalars.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Residue { value, modulus } => {
                let p = *modulus as u64;
                // Fermat: a^(p-2)
                let mut base = *value as u64;
                let mut exp = p - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Some(Scalar::Residue {
                    value: acc as u32,
                    modulus: *modulus,
                })
            }
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
        }
    }

    /// Literal form used by the JSON interchange: residues as integers,
    /// rationals as `"num/den"`.
    pub fn to_literal(&self) -> serde_json::Value {
        match self {
            Scalar::Residue { value, .. } => serde_json::Value::from(*value),
            Scalar::Rational(r) => serde_json::Value::from(format!("{}/{}", r.numer(), r.denom())),
        }
    }

    /// Parses a JSON literal in `field`.
    pub fn from_literal(field: Field, v: &serde_json::Value) -> Result<Scalar> {
        match v {
            serde_json::Value::Number(n) => {
                let i = n
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("non-integer literal {n}")))?;
                Ok(field.from_i64(i))
            }
            serde_json::Value::String(s) => Scalar::parse(field, s),
            other => Err(Error::Parse(format!("bad scalar literal {other}"))),
        }
    }

    /// Parses `"n"`, `"-n"` or `"n/d"` in `field`.
    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        match field {
            Field::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |x: &BigInt| -> Scalar {
                    let m = BigInt::from(p);
                    let r = ((x % &m) + &m) % &m;
                    field.from_i64(i64::try_from(r).expect("residue fits"))
                };
                let d = reduce(&den)
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes in {field}")))?;
                Ok(reduce(&num) * d)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Scalar {
    /// Renders a coefficient for a signed linear-form display: `(negative, magnitude)`.
    /// Residues equal to `p − 1` (for `p > 2`) render as `−1`.
    pub(crate) fn signed_parts(&self) -> (bool, String) {
        match self {
            Scalar::Residue { value, modulus } => {
                if *modulus > 2 && *value > modulus / 2 {
                    (true, (modulus - value).to_string())
                } else {
                    (false, value.to_string())
                }
            }
            Scalar::Rational(r) => {
                let a = r.abs();
                let s = if a.denom().is_one() {
                    a.numer().to_string()
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                };
                (r.is_negative(), s)
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    modulus: *p,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            Scalar::Rational(r) => Scalar::Rational(-r),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

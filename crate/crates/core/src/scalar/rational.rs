use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactDivision, Field, FromRational, ParseElem, Ring, ScalarError};

/// An arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(q: BigRational) -> Self {
        Rational(q)
    }

    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ScalarError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| err())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational(&a.0 + &b.0)
    }

    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        Rational(&a.0 - &b.0)
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational(&a.0 * &b.0)
    }

    fn neg(&self, a: &Rational) -> Rational {
        Rational(-&a.0)
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.0.is_zero()
    }

    fn add_assign(&self, acc: &mut Rational, b: &Rational) {
        acc.0 += &b.0;
    }

    fn mul_add_assign(&self, acc: &mut Rational, a: &Rational, b: &Rational) {
        if a.0.is_zero() || b.0.is_zero() {
            return;
        }
        // integer fast path: skips the gcd work BigRational does on every op
        if a.0.is_integer() && b.0.is_integer() && acc.0.is_integer() {
            let n = acc.0.numer() + a.0.numer() * b.0.numer();
            acc.0 = BigRational::from_integer(n);
            return;
        }
        acc.0 += &a.0 * &b.0;
    }

    fn render(&self, a: &Rational) -> String {
        a.to_string()
    }
}

impl ExactDivision for Rationals {
    fn div_exact(&self, a: &Rational, b: &Rational) -> Result<Rational, ScalarError> {
        self.div(a, b)
    }
}

impl Field for Rationals {
    fn inv(&self, a: &Rational) -> Result<Rational, ScalarError> {
        if a.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(a.0.recip()))
    }
}

impl ParseElem for Rationals {
    fn parse_elem(&self, s: &str) -> Result<Rational, ScalarError> {
        s.parse()
    }
}

impl FromRational for Rationals {
    fn from_rational(&self, q: &Rational) -> Result<Rational, ScalarError> {
        Ok(q.clone())
    }
}

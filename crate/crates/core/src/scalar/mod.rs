//! Exact coefficient rings.
//!
//! Every computation in this crate is generic over a [`Ring`] context object
//! that owns whatever state the arithmetic needs (the modulus of a prime
//! field, the gradient length of a jet ring, the variable names of a
//! parameter-polynomial ring). Elements are plain values; all arithmetic goes
//! through the context, so mixing contexts is a logic error rather than a
//! type error.
//!
//! Available rings:
//!
//! - [`Rationals`]: arbitrary-precision rationals, always in lowest terms.
//! - [`PrimeField`]: integers modulo a prime `p < 2^63`.
//! - [`JetRing`]: first-order jets (value plus dense gradient) over any base ring.
//! - [`ParamPolyRing`]: sparse multivariate polynomials over any base ring.

mod jet;
mod param_poly;
mod prime_field;
mod rational;

use std::fmt;

pub use jet::{Jet, JetRing};
pub use param_poly::{Monomial, ParamPoly, ParamPolyRing};
pub use prime_field::{is_prime_u64, FpElem, PrimeField};
pub use rational::{Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact")]
    NonExactDivision,
    #[error("parameter index {index} out of range for {len} parameters")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// A commutative ring with exact arithmetic.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// The image of an integer under the canonical map `Z -> R`.
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, b);
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let prod = self.mul(a, b);
        self.add_assign(acc, &prod);
    }

    fn scale_i64(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(k))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Coefficient text used inside polynomial renderings.
    fn render(&self, a: &Self::Elem) -> String;
}

/// Rings in which `a / b` can be computed whenever `b` divides `a`.
pub trait ExactDivision: Ring {
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ScalarError>;
}

pub trait Field: ExactDivision {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ScalarError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// Rings whose elements have a canonical text form that can be read back.
pub trait ParseElem: Ring {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, ScalarError>;
}

/// Rings that receive exact rationals, used when sampling points and when
/// reading parameter files.
pub trait FromRational: Ring {
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem, ScalarError>;
}

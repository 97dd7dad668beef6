use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{ExactDivision, Field, FromRational, ParseElem, Rational, Ring, ScalarError};

/// A residue in `[0, p)`; the modulus lives in the [`PrimeField`] context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElem(pub u64);

impl FpElem {
    pub fn residue(self) -> u64 {
        self.0
    }
}

/// The field `Z/pZ` for a prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if p >= 1 << 63 || !is_prime_u64(p) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> FpElem {
        FpElem(v % self.p)
    }

    /// Text form with the modulus attached, e.g. `5 mod 1000003`.
    pub fn render_qualified(&self, a: FpElem) -> String {
        format!("{} mod {}", a.0, self.p)
    }

    pub fn reduce_bigint(&self, v: &BigInt) -> FpElem {
        let r = v.mod_floor(&BigInt::from(self.p));
        FpElem(r.to_u64().expect("residue fits in u64"))
    }
}

impl Ring for PrimeField {
    type Elem = FpElem;

    fn zero(&self) -> FpElem {
        FpElem(0)
    }

    fn one(&self) -> FpElem {
        FpElem(1 % self.p)
    }

    fn from_i64(&self, v: i64) -> FpElem {
        FpElem((v as i128).rem_euclid(self.p as i128) as u64)
    }

    fn add(&self, a: &FpElem, b: &FpElem) -> FpElem {
        let s = a.0 + b.0;
        FpElem(if s >= self.p { s - self.p } else { s })
    }

    fn sub(&self, a: &FpElem, b: &FpElem) -> FpElem {
        FpElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    fn mul(&self, a: &FpElem, b: &FpElem) -> FpElem {
        FpElem(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64)
    }

    fn neg(&self, a: &FpElem) -> FpElem {
        FpElem(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    fn is_zero(&self, a: &FpElem) -> bool {
        a.0 == 0
    }

    fn render(&self, a: &FpElem) -> String {
        a.0.to_string()
    }
}

impl ExactDivision for PrimeField {
    fn div_exact(&self, a: &FpElem, b: &FpElem) -> Result<FpElem, ScalarError> {
        self.div(a, b)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &FpElem) -> Result<FpElem, ScalarError> {
        if a.0 == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(FpElem(pow_mod(a.0, self.p - 2, self.p)))
    }
}

impl ParseElem for PrimeField {
    fn parse_elem(&self, s: &str) -> Result<FpElem, ScalarError> {
        let s = s.trim();
        let body = match s.split_once(" mod ") {
            Some((v, m)) => {
                if m.trim().parse::<u64>().ok() != Some(self.p) {
                    return Err(ScalarError::Parse(s.to_string()));
                }
                v
            }
            None => s,
        };
        let v: BigInt = body.trim().parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
        Ok(self.reduce_bigint(&v))
    }
}

impl FromRational for PrimeField {
    fn from_rational(&self, q: &Rational) -> Result<FpElem, ScalarError> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        if den.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        self.div(&num, &den)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&FpElem(5), &FpElem(4)), FpElem(6));
        assert_eq!(f.from_i64(-1), FpElem(6));
        assert_eq!(f.inv(&FpElem(3)).unwrap(), FpElem(5));
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(1_000_001), Err(ScalarError::NotPrime(1_000_001)));
        assert!(PrimeField::new(1_000_003).is_ok());
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime_u64((1 << 61) - 1));
    }

    #[test]
    fn qualified_rendering_round_trips() {
        let f = PrimeField::new(1_000_003).unwrap();
        let s = f.render_qualified(FpElem(5));
        assert_eq!(s, "5 mod 1000003");
        assert_eq!(f.parse_elem(&s).unwrap(), FpElem(5));
        assert!(f.parse_elem("5 mod 7").is_err());
    }

    #[test]
    fn rational_reduction() {
        let f = PrimeField::new(7).unwrap();
        let half: Rational = "1/2".parse().unwrap();
        assert_eq!(f.from_rational(&half).unwrap(), FpElem(4));
        let bad: Rational = "1/14".parse().unwrap();
        assert_eq!(f.from_rational(&bad), Err(ScalarError::DivisionByZero));
    }
}

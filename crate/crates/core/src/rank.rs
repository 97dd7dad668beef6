//! Dense scalar matrices and exact rank.
//!
//! Over a prime field the rank comes from ordinary Gaussian elimination with
//! modular inverses. Over `Q` rows are first cleared of denominators, then a
//! fraction-free (Bareiss) elimination runs on big integers: every entry
//! after step `k` is a `(k+1)`-minor of the input, so the division by the
//! previous pivot is exact and entry growth stays polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::scalar::{Field, PrimeField, Rational, Rationals, Ring};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> ScalarMatrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ScalarMatrix { rows, cols, data }
    }

    /// Panics when rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        ScalarMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> ScalarMatrix<T> {
        ScalarMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Matrix-vector product.
    pub fn apply<R: Ring<Elem = E>>(&self, v: &[E], ring: &R) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = ring.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    ring.mul_add_assign(&mut acc, a, b);
                }
                acc
            })
            .collect()
    }
}

/// Fields with an exact rank routine.
pub trait ExactRank: Field {
    fn rank(&self, m: &ScalarMatrix<Self::Elem>) -> usize {
        gauss_rank(m, self)
    }
}

impl ExactRank for PrimeField {}

impl ExactRank for Rationals {
    fn rank(&self, m: &ScalarMatrix<Rational>) -> usize {
        rational_rank(m)
    }
}

pub fn exact_rank<F: ExactRank>(m: &ScalarMatrix<F::Elem>, field: &F) -> usize {
    field.rank(m)
}

/// Row echelon rank over any field.
pub fn gauss_rank<F: Field>(m: &ScalarMatrix<F::Elem>, field: &F) -> usize {
    let mut a = m.to_rows();
    let mut rank = 0;
    for c in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !field.is_zero(&a[r][c])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = field.inv(&a[rank][c]).expect("pivot is nonzero");
        let pivot_row: Vec<F::Elem> = a[rank].iter().map(|x| field.mul(x, &inv)).collect();
        for row in a.iter_mut().skip(rank + 1) {
            if field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for j in c..m.cols {
                let t = field.mul(&factor, &pivot_row[j]);
                row[j] = field.sub(&row[j], &t);
            }
        }
        a[rank] = pivot_row;
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

/// Fraction-free rank over `Q`.
pub fn rational_rank(m: &ScalarMatrix<Rational>) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..m.rows).map(|r| integer_row(m.row(r))).collect();
    bareiss_rank(rows, m.cols)
}

/// Scales a rational row to a primitive integer row with the same span.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Certified upper bound `(k/p)^trials` on a false identity pass, exact and
/// as a base-10 exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ErrorBound {
    /// Exact value as a reduced fraction.
    pub exact: String,
    /// Smallest integer `e` with `bound <= 10^e`.
    pub log10_at_most: i64,
    /// True when the bound is a convention rather than a theorem (rational sampling).
    pub heuristic: bool,
}

impl ErrorBound {
    pub fn zero() -> Self {
        ErrorBound { exact: "0".into(), log10_at_most: i64::MIN, heuristic: false }
    }

    pub fn heuristic_zero() -> Self {
        ErrorBound { exact: "0".into(), log10_at_most: i64::MIN, heuristic: true }
    }

    /// `prod_i (numer / p_i)^{trials_i}`
    pub fn schwartz_zippel(numer: u64, runs: &[(u64, usize)]) -> Self {
        let mut value = num_rational::BigRational::one();
        for &(p, trials) in runs {
            let per = num_rational::BigRational::new(BigInt::from(numer.min(p)), BigInt::from(p));
            for _ in 0..trials {
                value *= &per;
            }
        }
        Self::from_value(Rational::from_big(value))
    }

    pub fn product(bounds: &[&ErrorBound]) -> Result<Self, crate::scalar::ScalarError> {
        let mut value = Rational::one();
        for b in bounds {
            if b.heuristic {
                continue;
            }
            value = Rationals.mul(&value, &b.exact.parse()?);
        }
        Ok(Self::from_value(value))
    }

    fn from_value(value: Rational) -> Self {
        let exact = value.to_string();
        if value.is_zero() {
            return ErrorBound { exact, log10_at_most: i64::MIN, heuristic: false };
        }
        // smallest e with numer * 10^-e <= denom, searched from the digit-count estimate
        let (num, den) = (value.numer().clone(), value.denom().clone());
        let digits = |x: &BigInt| x.to_string().trim_start_matches('-').len() as i64;
        let mut e = digits(&num) - digits(&den) + 1;
        let fits = |e: i64| {
            let ten = BigInt::from(10);
            if e >= 0 {
                num <= &den * num_traits::pow(ten, e as usize)
            } else {
                &num * num_traits::pow(ten, (-e) as usize) <= den
            }
        };
        while fits(e - 1) {
            e -= 1;
        }
        while !fits(e) {
            e += 1;
        }
        ErrorBound { exact, log10_at_most: e, heuristic: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> ScalarMatrix<Rational> {
        ScalarMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect())
    }

    #[test]
    fn identity_and_zero() {
        let id = ScalarMatrix::from_fn(5, 5, |r, c| Rational::from((r == c) as i64));
        assert_eq!(exact_rank(&id, &Rationals), 5);
        let z = ScalarMatrix::from_fn(3, 4, |_, _| Rational::zero());
        assert_eq!(exact_rank(&z, &Rationals), 0);
        let fp = PrimeField::new(1_000_003).unwrap();
        let idp = ScalarMatrix::from_fn(4, 6, |r, c| fp.from_i64((r == c) as i64));
        assert_eq!(exact_rank(&idp, &fp), 4);
    }

    #[test]
    fn dependent_rows() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(exact_rank(&m, &Rationals), 2);
        assert_eq!(gauss_rank(&m, &Rationals), 2);
        assert_eq!(exact_rank(&m.transpose(), &Rationals), 2);
    }

    #[test]
    fn fractions_are_cleared() {
        let half = Rational::new(1, 2).unwrap();
        let third = Rational::new(1, 3).unwrap();
        let m = ScalarMatrix::from_rows(vec![
            vec![half.clone(), third.clone()],
            vec![Rational::from(3), Rational::from(2)],
        ]);
        assert_eq!(exact_rank(&m, &Rationals), 1);
    }

    #[test]
    fn rank_drops_mod_p_only_when_it_should() {
        // det = 7
        let m = qm(&[&[3, 1], &[1, 5]]).map(|q| q.clone());
        assert_eq!(exact_rank(&m, &Rationals), 2);
        let f7 = PrimeField::new(7).unwrap();
        let mp = ScalarMatrix::from_rows(vec![vec![f7.from_i64(3), f7.from_i64(1)], vec![f7.from_i64(1), f7.from_i64(5)]]);
        assert_eq!(exact_rank(&mp, &f7), 1);
    }

    #[test]
    fn bound_exponent() {
        let b = ErrorBound::schwartz_zippel(10, &[(1_000_003, 1)]);
        assert_eq!(b.exact, "10/1000003");
        assert_eq!(b.log10_at_most, -5);
        let b = ErrorBound::schwartz_zippel(1, &[(10, 3)]);
        assert_eq!((b.exact.as_str(), b.log10_at_most), ("1/1000", -3));
        let both = ErrorBound::product(&[&b, &ErrorBound::heuristic_zero()]).unwrap();
        assert_eq!(both.exact, "1/1000");
    }
}

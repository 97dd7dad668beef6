//! First-order jets: a value together with its dense gradient.
//!
//! Running a polynomial computation over `JetRing<R>` with every input lifted
//! by [`JetRing::lift`] yields the full Jacobian in one pass. The arithmetic is
//! the usual dual-number rules, exact over the base ring:
//!
//! - `(a, da) + (b, db) = (a + b, da + db)`
//! - `(a, da) * (b, db) = (a b, a db + b da)`

use super::{Ring, ScalarError};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<E> {
    pub value: E,
    pub grad: Vec<E>,
}

#[derive(Debug, Clone)]
pub struct JetRing<R> {
    base: R,
    n_params: usize,
}

impl<R: Ring> JetRing<R> {
    pub fn new(base: R, n_params: usize) -> Self {
        JetRing { base, n_params }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn constant(&self, x: R::Elem) -> Jet<R::Elem> {
        Jet { value: x, grad: vec![self.base.zero(); self.n_params] }
    }

    /// Seeds `x` as the active parameter `param_index`.
    pub fn lift(&self, x: R::Elem, param_index: usize) -> Result<Jet<R::Elem>, ScalarError> {
        if param_index >= self.n_params {
            return Err(ScalarError::IndexOutOfRange { index: param_index, len: self.n_params });
        }
        let mut j = self.constant(x);
        j.grad[param_index] = self.base.one();
        Ok(j)
    }
}

impl<R: Ring> Ring for JetRing<R> {
    type Elem = Jet<R::Elem>;

    fn zero(&self) -> Self::Elem {
        self.constant(self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.constant(self.base.from_i64(v))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.base;
        Jet {
            value: r.add(&a.value, &b.value),
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| r.add(x, y)).collect(),
        }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.base;
        Jet {
            value: r.sub(&a.value, &b.value),
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| r.sub(x, y)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut acc = self.zero();
        self.mul_add_assign(&mut acc, a, b);
        acc
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        let r = &self.base;
        Jet { value: r.neg(&a.value), grad: a.grad.iter().map(|x| r.neg(x)).collect() }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.value) && a.grad.iter().all(|x| self.base.is_zero(x))
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        let r = &self.base;
        r.add_assign(&mut acc.value, &b.value);
        for (x, y) in acc.grad.iter_mut().zip(&b.grad) {
            r.add_assign(x, y);
        }
    }

    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let r = &self.base;
        let a_zero = r.is_zero(&a.value);
        let b_zero = r.is_zero(&b.value);
        r.mul_add_assign(&mut acc.value, &a.value, &b.value);
        for ((x, da), db) in acc.grad.iter_mut().zip(&a.grad).zip(&b.grad) {
            if !b_zero {
                r.mul_add_assign(x, &b.value, da);
            }
            if !a_zero {
                r.mul_add_assign(x, &a.value, db);
            }
        }
    }

    fn render(&self, a: &Self::Elem) -> String {
        let grad: Vec<String> = a.grad.iter().map(|x| self.base.render(x)).collect();
        format!("{} + d[{}]", self.base.render(&a.value), grad.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rationals;

    fn q(v: i64) -> crate::scalar::Rational {
        v.into()
    }

    #[test]
    fn product_rule() {
        let ring = JetRing::new(Rationals, 2);
        let x = ring.lift(q(3), 0).unwrap();
        let y = ring.lift(q(3), 1).unwrap();
        let p = ring.mul(&x, &y);
        assert_eq!(p.value, q(9));
        assert_eq!(p.grad, vec![q(3), q(3)]);
    }

    #[test]
    fn lift_unit_vectors() {
        let ring = JetRing::new(Rationals, 3);
        assert_eq!(ring.lift(q(5), 0).unwrap().grad, vec![q(1), q(0), q(0)]);
        let z = ring.lift(q(0), 2).unwrap();
        assert_eq!((z.value, z.grad), (q(0), vec![q(0), q(0), q(1)]));
        assert_eq!(
            ring.lift(q(1), 3),
            Err(ScalarError::IndexOutOfRange { index: 3, len: 3 })
        );
    }

    #[test]
    fn linearity_of_lifted_sum() {
        let ring = JetRing::new(Rationals, 3);
        let s = ring.add(&ring.lift(q(2), 0).unwrap(), &ring.lift(q(3), 1).unwrap());
        assert_eq!(s.value, q(5));
        assert_eq!(s.grad, vec![q(1), q(1), q(0)]);
    }

    #[test]
    fn square_derivative() {
        let ring = JetRing::new(Rationals, 1);
        let x = ring.lift(q(3), 0).unwrap();
        assert_eq!(ring.mul(&x, &x).grad, vec![q(6)]);
    }
}

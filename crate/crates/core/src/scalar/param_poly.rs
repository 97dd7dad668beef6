//! Sparse multivariate polynomials over named parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use super::{ExactDivision, Ring, ScalarError};

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// the lowest-indexed variable where the two differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: u32) -> Self {
        Monomial(vec![(index, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.0.iter().find(|&&(v, _)| v == var).map_or(0, |&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            for (x, y) in a.iter().zip(b.iter()) {
                if x.0 != y.0 {
                    // a lower variable present only on one side wins
                    return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoly<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone> ParamPoly<E> {
    pub fn zero() -> Self {
        ParamPoly { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &E)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }
}

#[derive(Debug, Clone)]
pub struct ParamPolyRing<R> {
    base: R,
    names: Arc<Vec<String>>,
}

impl<R: Ring> ParamPolyRing<R> {
    pub fn new(base: R, names: Vec<String>) -> Self {
        ParamPolyRing { base, names: Arc::new(names) }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, index: usize) -> Result<ParamPoly<R::Elem>, ScalarError> {
        if index >= self.names.len() {
            return Err(ScalarError::IndexOutOfRange { index, len: self.names.len() });
        }
        Ok(self.monomial(Monomial::var(index as u32), self.base.one()))
    }

    pub fn constant(&self, c: R::Elem) -> ParamPoly<R::Elem> {
        self.monomial(Monomial::one(), c)
    }

    pub fn monomial(&self, m: Monomial, c: R::Elem) -> ParamPoly<R::Elem> {
        let mut terms = BTreeMap::new();
        if !self.base.is_zero(&c) {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    fn accumulate(&self, terms: &mut BTreeMap<Monomial, R::Elem>, m: Monomial, c: &R::Elem) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                self.base.add_assign(o.get_mut(), c);
                if self.base.is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    fn accumulate_product(
        &self,
        terms: &mut BTreeMap<Monomial, R::Elem>,
        m: Monomial,
        a: &R::Elem,
        b: &R::Elem,
    ) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(self.base.mul(a, b));
            }
            Entry::Occupied(mut o) => {
                self.base.mul_add_assign(o.get_mut(), a, b);
                if self.base.is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn partial(&self, a: &ParamPoly<R::Elem>, var: usize) -> ParamPoly<R::Elem> {
        let var = var as u32;
        let mut terms = BTreeMap::new();
        for (m, c) in &a.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let reduced: Vec<(u32, u32)> =
                m.0.iter().map(|&(v, x)| if v == var { (v, x - 1) } else { (v, x) }).collect();
            let coeff = self.base.scale_i64(c, e as i64);
            if !self.base.is_zero(&coeff) {
                self.accumulate(&mut terms, Monomial::from_pairs(reduced), &coeff);
            }
        }
        ParamPoly { terms }
    }

    /// Evaluates at a point given in variable order.
    pub fn eval(&self, a: &ParamPoly<R::Elem>, point: &[R::Elem]) -> R::Elem {
        let mut acc = self.base.zero();
        for (m, c) in &a.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                t = self.base.mul(&t, &self.base.pow(&point[v as usize], e));
            }
            self.base.add_assign(&mut acc, &t);
        }
        acc
    }

    /// Evaluates into another ring, mapping each variable to an element there.
    pub fn eval_in<S: Ring>(
        &self,
        a: &ParamPoly<R::Elem>,
        target: &S,
        coeff: impl Fn(&R::Elem) -> S::Elem,
        point: &[S::Elem],
    ) -> S::Elem {
        let mut acc = target.zero();
        for (m, c) in &a.terms {
            let mut t = coeff(c);
            for &(v, e) in &m.0 {
                t = target.mul(&t, &target.pow(&point[v as usize], e));
            }
            target.add_assign(&mut acc, &t);
        }
        acc
    }

    pub fn scale(&self, a: &ParamPoly<R::Elem>, c: &R::Elem) -> ParamPoly<R::Elem> {
        if self.base.is_zero(c) {
            return ParamPoly::zero();
        }
        let terms = a
            .terms
            .iter()
            .filter_map(|(m, x)| {
                let y = self.base.mul(x, c);
                (!self.base.is_zero(&y)).then(|| (m.clone(), y))
            })
            .collect();
        ParamPoly { terms }
    }

    fn mul_term(&self, a: &ParamPoly<R::Elem>, m: &Monomial, c: &R::Elem) -> ParamPoly<R::Elem> {
        let terms = a
            .terms
            .iter()
            .filter_map(|(am, ac)| {
                let y = self.base.mul(ac, c);
                (!self.base.is_zero(&y)).then(|| (am.mul(m), y))
            })
            .collect();
        ParamPoly { terms }
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        m.0.iter()
            .map(|&(v, e)| {
                let name = &self.names[v as usize];
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl<R: Ring> Ring for ParamPolyRing<R> {
    type Elem = ParamPoly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        ParamPoly::zero()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.constant(self.base.from_i64(v))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut terms = BTreeMap::new();
        for (am, ac) in &a.terms {
            for (bm, bc) in &b.terms {
                self.accumulate_product(&mut terms, am.mul(bm), ac, bc);
            }
        }
        ParamPoly { terms }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        ParamPoly { terms: a.terms.iter().map(|(m, c)| (m.clone(), self.base.neg(c))).collect() }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) {
        for (m, c) in &b.terms {
            self.accumulate(&mut acc.terms, m.clone(), c);
        }
    }

    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        for (am, ac) in &a.terms {
            for (bm, bc) in &b.terms {
                self.accumulate_product(&mut acc.terms, am.mul(bm), ac, bc);
            }
        }
    }

    fn render(&self, a: &Self::Elem) -> String {
        if a.terms.is_empty() {
            return "0".to_string();
        }
        let one = self.base.one();
        let minus_one = self.base.neg(&one);
        let mut out = String::new();
        for (i, (m, c)) in a.terms.iter().rev().enumerate() {
            let mono = self.render_monomial(m);
            let body = if mono.is_empty() {
                self.base.render(c)
            } else if *c == one {
                mono
            } else if *c == minus_one {
                format!("-{mono}")
            } else {
                format!("{}*{mono}", self.base.render(c))
            };
            if i == 0 {
                out.push_str(&body);
            } else if let Some(rest) = body.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        out
    }
}

impl<R: ExactDivision> ExactDivision for ParamPolyRing<R> {
    /// Multivariate division by leading terms; exact quotients never get stuck
    /// because `lt(b * c) = lt(b) * lt(c)` under a monomial order.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ScalarError> {
        let (lm, lc) = match b.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(ScalarError::DivisionByZero),
        };
        let mut quotient = ParamPoly::zero();
        let mut rem = a.clone();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(&lm).ok_or(ScalarError::NonExactDivision)?;
            let c = self.base.div_exact(rc, &lc).map_err(|_| ScalarError::NonExactDivision)?;
            let step = self.mul_term(b, &m, &c);
            self.accumulate(&mut quotient.terms, m, &c);
            rem = self.sub(&rem, &step);
        }
        Ok(quotient)
    }
}

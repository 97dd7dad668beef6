//! Homogeneous bivariate polynomials in `s`, `t`.
//!
//! A polynomial of degree `d` is stored as `d + 1` coefficients where entry
//! `j` multiplies `s^j t^(d-j)`. The zero polynomial still carries a degree,
//! so structural zeros in a matrix keep the degree of their row.

use crate::scalar::{ExactDivision, Field, ParseElem, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("polynomial is not divisible by {0}")]
    NotDivisible(Var),
    #[error("cannot differentiate a degree-zero polynomial")]
    DegreeZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NonExactDivision,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    S,
    T,
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Var::S => "s",
            Var::T => "t",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> HomogPoly<E> {
    /// Panics on an empty coefficient vector; every polynomial has at least one slot.
    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a homogeneous polynomial needs degree + 1 coefficients");
        HomogPoly { coeffs }
    }

    pub fn zero<R: Ring<Elem = E>>(ring: &R, degree: usize) -> Self {
        HomogPoly { coeffs: vec![ring.zero(); degree + 1] }
    }

    /// `c * s^j * t^(degree - j)`
    pub fn monomial<R: Ring<Elem = E>>(ring: &R, degree: usize, j: usize, c: E) -> Self {
        let mut p = Self::zero(ring, degree);
        p.coeffs[j] = c;
        p
    }

    pub fn s<R: Ring<Elem = E>>(ring: &R) -> Self {
        HomogPoly { coeffs: vec![ring.zero(), ring.one()] }
    }

    pub fn t<R: Ring<Elem = E>>(ring: &R) -> Self {
        HomogPoly { coeffs: vec![ring.one(), ring.zero()] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &E {
        &self.coeffs[j]
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn map<F, T: Clone>(&self, f: F) -> HomogPoly<T>
    where
        F: FnMut(&E) -> T,
    {
        HomogPoly { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    pub fn add<R: Ring<Elem = E>>(&self, rhs: &Self, ring: &R) -> Result<Self, PolyError> {
        self.check_degree(rhs)?;
        Ok(HomogPoly {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
        })
    }

    pub fn sub<R: Ring<Elem = E>>(&self, rhs: &Self, ring: &R) -> Result<Self, PolyError> {
        self.check_degree(rhs)?;
        Ok(HomogPoly {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| ring.sub(a, b)).collect(),
        })
    }

    pub fn add_assign<R: Ring<Elem = E>>(&mut self, rhs: &Self, ring: &R) -> Result<(), PolyError> {
        self.check_degree(rhs)?;
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            ring.add_assign(a, b);
        }
        Ok(())
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map(|c| ring.neg(c))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, c: &E, ring: &R) -> Self {
        self.map(|x| ring.mul(x, c))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, rhs: &Self, ring: &R) -> Self {
        let mut out = Self::zero(ring, self.degree() + rhs.degree());
        self.mul_acc_into(rhs, &mut out.coeffs, ring);
        out
    }

    /// `acc += self * rhs` on raw coefficient slots.
    pub(crate) fn mul_acc_into<R: Ring<Elem = E>>(&self, rhs: &Self, acc: &mut [E], ring: &R) {
        debug_assert_eq!(acc.len(), self.degree() + rhs.degree() + 1);
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                ring.mul_add_assign(&mut acc[i + j], a, b);
            }
        }
    }

    /// Multiplies by `s` or `t`.
    pub fn mul_var<R: Ring<Elem = E>>(&self, var: Var, ring: &R) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        match var {
            Var::S => {
                coeffs.push(ring.zero());
                coeffs.extend(self.coeffs.iter().cloned());
            }
            Var::T => {
                coeffs.extend(self.coeffs.iter().cloned());
                coeffs.push(ring.zero());
            }
        }
        HomogPoly { coeffs }
    }

    /// Exact division by `s` or `t`.
    pub fn div_linear<R: Ring<Elem = E>>(&self, var: Var, ring: &R) -> Result<Self, PolyError> {
        let d = self.degree();
        if d == 0 {
            return Err(PolyError::NotDivisible(var));
        }
        match var {
            // s | a  iff the t^d coefficient vanishes
            Var::S if ring.is_zero(&self.coeffs[0]) => {
                Ok(HomogPoly { coeffs: self.coeffs[1..].to_vec() })
            }
            Var::T if ring.is_zero(&self.coeffs[d]) => {
                Ok(HomogPoly { coeffs: self.coeffs[..d].to_vec() })
            }
            _ => Err(PolyError::NotDivisible(var)),
        }
    }

    /// Formal partial derivative; integer multiples go through the ring, so
    /// over `F_p` the factors are reduced mod `p`.
    pub fn partial<R: Ring<Elem = E>>(&self, var: Var, ring: &R) -> Result<Self, PolyError> {
        let d = self.degree();
        if d == 0 {
            return Err(PolyError::DegreeZero);
        }
        let coeffs = match var {
            Var::S => (1..=d).map(|j| ring.scale_i64(&self.coeffs[j], j as i64)).collect(),
            Var::T => (0..d).map(|j| ring.scale_i64(&self.coeffs[j], (d - j) as i64)).collect(),
        };
        Ok(HomogPoly { coeffs })
    }

    /// `sum_j c_j s0^j t0^(d-j)`
    pub fn eval<R: Ring<Elem = E>>(&self, s0: &E, t0: &E, ring: &R) -> E {
        let d = self.degree();
        let mut total = ring.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let mono = ring.mul(&ring.pow(s0, j as u32), &ring.pow(t0, (d - j) as u32));
            ring.mul_add_assign(&mut total, c, &mono);
        }
        total
    }

    fn check_degree(&self, rhs: &Self) -> Result<(), PolyError> {
        if self.degree() != rhs.degree() {
            return Err(PolyError::DegreeMismatch(self.degree(), rhs.degree()));
        }
        Ok(())
    }

    /// Canonical text form, ascending powers of `s`, zero terms omitted.
    pub fn render<R: Ring<Elem = E>>(&self, ring: &R) -> String {
        let d = self.degree();
        let one = ring.one();
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            let mono = monomial_text(j, d - j);
            let body = if mono.is_empty() {
                ring.render(c)
            } else if ring.is_zero(&ring.sub(c, &one)) {
                mono
            } else if ring.is_zero(&ring.add(c, &one)) {
                format!("-{mono}")
            } else {
                let coeff = ring.render(c);
                // compound coefficients (jets, parameter polynomials) get parentheses
                if coeff.contains(' ') {
                    format!("({coeff})*{mono}")
                } else {
                    format!("{coeff}*{mono}")
                }
            };
            if out.is_empty() {
                out = body;
            } else if let Some(rest) = body.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }
}

fn monomial_text(s_exp: usize, t_exp: usize) -> String {
    let factor = |name: &str, e: usize| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [factor("s", s_exp), factor("t", t_exp)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl<E: Clone> HomogPoly<E> {
    /// Reads the canonical text form back at a known degree.
    pub fn parse<R: ParseElem<Elem = E>>(text: &str, degree: usize, ring: &R) -> Result<Self, PolyError> {
        let err = |m: &str| PolyError::Parse(format!("{m} in `{text}`"));
        let mut p = Self::zero(ring, degree);
        let text = text.trim();
        if text == "0" {
            return Ok(p);
        }
        // split into signed terms at top-level + and - separators
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut negative = false;
        let mut cur = String::new();
        let mut depth = 0i32;
        let mut prev_nonspace: Option<char> = None;
        for ch in text.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let is_sep = depth == 0
                && (ch == '+' || ch == '-')
                && !matches!(prev_nonspace, None | Some('/') | Some('*') | Some('^') | Some('('));
            if is_sep {
                terms.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            } else if ch == '-' && depth == 0 && prev_nonspace.is_none() {
                negative = true;
            } else {
                cur.push(ch);
            }
            if !ch.is_whitespace() {
                prev_nonspace = Some(ch);
            }
        }
        terms.push((negative, cur));
        for (neg, term) in terms {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let mut s_exp = 0usize;
            let mut t_exp = 0usize;
            let mut coeff = ring.one();
            for factor in term.split('*') {
                let factor = factor.trim();
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                match base {
                    "s" => s_exp += exp,
                    "t" => t_exp += exp,
                    _ => {
                        let inner = base.trim_start_matches('(').trim_end_matches(')');
                        let c = ring.parse_elem(inner).map_err(|_| err("bad coefficient"))?;
                        coeff = ring.mul(&coeff, &c);
                    }
                }
            }
            if s_exp + t_exp != degree {
                return Err(err("term of wrong degree"));
            }
            if neg {
                coeff = ring.neg(&coeff);
            }
            ring.add_assign(&mut p.coeffs[s_exp], &coeff);
        }
        Ok(p)
    }
}

impl<E: Clone> HomogPoly<E> {
    /// Exact quotient `self / divisor`, solved from the lowest nonzero
    /// coefficient of the divisor and then verified.
    pub fn div_exact<R: ExactDivision<Elem = E>>(&self, divisor: &Self, ring: &R) -> Result<Self, PolyError> {
        let j0 = divisor
            .coeffs
            .iter()
            .position(|c| !ring.is_zero(c))
            .ok_or(PolyError::DivisionByZero)?;
        if divisor.degree() > self.degree() {
            return Err(PolyError::NonExactDivision);
        }
        let qdeg = self.degree() - divisor.degree();
        let pivot = &divisor.coeffs[j0];
        let mut q: Vec<E> = Vec::with_capacity(qdeg + 1);
        for k in 0..=qdeg {
            let mut num = self.coeffs[k + j0].clone();
            for i in (j0 + 1)..=divisor.degree() {
                if i - j0 > k {
                    break;
                }
                let prod = ring.mul(&divisor.coeffs[i], &q[k + j0 - i]);
                num = ring.sub(&num, &prod);
            }
            let c = ring.div_exact(&num, pivot).map_err(|_| PolyError::NonExactDivision)?;
            q.push(c);
        }
        let q = HomogPoly { coeffs: q };
        if !q.mul(divisor, ring).sub(self, ring)?.is_zero(ring) {
            return Err(PolyError::NonExactDivision);
        }
        Ok(q)
    }
}

impl<E: Clone> HomogPoly<E> {
    /// Greatest common divisor over a field, normalized so the highest-`s`
    /// coefficient is one. Diagnostic use only.
    pub fn gcd<R: Field<Elem = E>>(&self, rhs: &Self, ring: &R) -> Result<Self, PolyError> {
        let (a_zero, b_zero) = (self.is_zero(ring), rhs.is_zero(ring));
        if a_zero && b_zero {
            return Err(PolyError::BothZero);
        }
        if a_zero {
            return Ok(rhs.monic(ring));
        }
        if b_zero {
            return Ok(self.monic(ring));
        }
        // powers of t show up as vanishing top coefficients
        let t_mult = |p: &Self| p.coeffs.iter().rev().take_while(|c| ring.is_zero(c)).count();
        let tk = t_mult(self).min(t_mult(rhs));
        let dehom = |p: &Self| {
            let mut v = p.coeffs.clone();
            while v.len() > 1 && ring.is_zero(v.last().unwrap()) {
                v.pop();
            }
            v
        };
        let g = univariate_gcd(dehom(self), dehom(rhs), ring);
        // rehomogenize: g(s) t^tk
        let gdeg = g.len() - 1;
        let mut full = vec![ring.zero(); gdeg + tk + 1];
        for (j, c) in g.into_iter().enumerate() {
            full[j] = c;
        }
        Ok(HomogPoly { coeffs: full }.monic(ring))
    }

    fn monic<R: Field<Elem = E>>(&self, ring: &R) -> Self {
        match self.coeffs.iter().rev().find(|c| !ring.is_zero(c)) {
            Some(lead) => {
                let inv = ring.inv(lead).expect("nonzero leading coefficient");
                self.scale(&inv, ring)
            }
            None => self.clone(),
        }
    }
}

fn univariate_gcd<R: Field>(mut a: Vec<R::Elem>, mut b: Vec<R::Elem>, ring: &R) -> Vec<R::Elem> {
    let trim = |v: &mut Vec<R::Elem>| {
        while v.len() > 1 && ring.is_zero(v.last().unwrap()) {
            v.pop();
        }
    };
    let is_zero = |v: &Vec<R::Elem>| v.iter().all(|c| ring.is_zero(c));
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        // a mod b
        let lead_inv = ring.inv(b.last().unwrap()).expect("trimmed nonzero");
        while a.len() >= b.len() && !is_zero(&a) {
            let factor = ring.mul(a.last().unwrap(), &lead_inv);
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                let prod = ring.mul(&factor, c);
                a[i + shift] = ring.sub(&a[i + shift], &prod);
            }
            a.pop();
            trim(&mut a);
            if a.is_empty() {
                a.push(ring.zero());
            }
        }
        std::mem::swap(&mut a, &mut b);
        trim(&mut b);
    }
    a
}

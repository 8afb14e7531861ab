//! Sparse multivariate polynomials with dense exponent vectors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::field::{Elem, Embedding, Field};
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub SmallVec<[u16; 8]>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut m = Mono::one(n);
        m.0[i] = 1;
        m
    }

    pub fn pair(n: usize, i: usize, j: usize) -> Mono {
        let mut m = Mono::one(n);
        m.0[i] += 1;
        m.0[j] += 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct Poly {
    field: Field,
    n: usize,
    terms: BTreeMap<Mono, Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}
impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn zero(field: &Field, n: usize) -> Poly {
        Poly {
            field: field.clone(),
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, n: usize, c: Elem) -> Poly {
        Poly::term(field, c, Mono::one(n))
    }

    pub fn var(field: &Field, n: usize, i: usize) -> Poly {
        Poly::term(field, field.one(), Mono::var(n, i))
    }

    pub fn term(field: &Field, c: Elem, m: Mono) -> Poly {
        let n = m.0.len();
        let mut p = Poly::zero(field, n);
        if !field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    /// Σ coeffs[i]·x_i.
    pub fn linear(field: &Field, coeffs: &[Elem]) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            if !field.is_zero(c) {
                p.terms.insert(Mono::var(n, i), c.clone());
            }
        }
        p
    }

    pub fn from_terms(field: &Field, n: usize, terms: impl IntoIterator<Item = (Mono, Elem)>) -> Poly {
        let mut p = Poly::zero(field, n);
        for (m, c) in terms {
            assert_eq!(m.0.len(), n, "exponent vector length");
            p.add_term(m, &c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<(&Mono, &Elem)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn add_term(&mut self, m: Mono, c: &Elem) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.field.add(v, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        let f = &self.field;
        for (m, c) in &other.terms {
            r.add_term(m.clone(), &f.neg(c));
        }
        r
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        let f = &self.field;
        if f.is_zero(c) {
            return Poly::zero(f, self.n);
        }
        Poly {
            field: f.clone(),
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), f.mul(v, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let mut r = Poly::zero(f, self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), &f.mul(c1, c2));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::constant(&self.field, self.n, self.field.one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Exact quotient, `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Poly) -> Option<Poly> {
        let f = &self.field;
        let (lm, lc) = other.leading()?;
        let lc_inv = f.inv(lc).ok()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(f, self.n);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let t = Poly::term(f, f.mul(c, &lc_inv), m.div(lm));
            rem = rem.sub(&t.mul(other));
            q.add_assign(&t);
        }
        Some(q)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let f = &self.field;
        let mut r = Poly::zero(f, self.n);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            r.add_term(m2, &f.mul(c, &f.from_i64(e as i64)));
        }
        r
    }

    pub fn eval(&self, v: &[Elem]) -> Result<Elem> {
        if v.len() != self.n {
            return Err(Error::Dimension(format!(
                "point of length {} for {} variables",
                v.len(),
                self.n
            )));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &f.pow(&v[i], e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// p(g_1, …, g_n) for polynomials g_i, all in the same number of variables.
    pub fn substitute(&self, g: &[Poly]) -> Poly {
        assert_eq!(g.len(), self.n, "substitution arity");
        let f = &self.field;
        let target_n = g.first().map(|p| p.n).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = g
            .iter()
            .map(|gi| vec![Poly::constant(f, target_n, f.one()), gi.clone()])
            .collect();
        let mut r = Poly::zero(f, target_n);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(f, target_n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&g[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e]);
            }
            r.add_assign(&t);
        }
        r
    }

    /// p(Tx) where T is a row-major n×n array.
    pub fn compose_linear(&self, t: &[Vec<Elem>]) -> Poly {
        let f = &self.field;
        let forms: Vec<Poly> = t.iter().map(|row| Poly::linear(f, row)).collect();
        self.substitute(&forms)
    }

    /// Coefficients of x_1..x_n; the polynomial should be a linear form.
    pub fn linear_coeffs(&self) -> Vec<Elem> {
        (0..self.n).map(|i| self.coeff(&Mono::var(self.n, i))).collect()
    }

    pub fn is_linear_form(&self) -> bool {
        self.is_homogeneous(1)
    }

    pub fn map_field(&self, emb: &Embedding) -> Poly {
        Poly {
            field: emb.target.clone(),
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), emb.apply(c))).collect(),
        }
    }

    /// Monomials occurring, ascending.
    pub fn monomials(&self) -> impl Iterator<Item = &Mono> {
        self.terms.keys()
    }

    /// Whether x_i occurs in some term.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn eval_single_surviving_term() {
        let f2 = Field::prime(2).unwrap();
        let p = Poly::parse(&f2, 4, "x1*x3 + x2*x4").unwrap();
        let v: Vec<Elem> = [1, 0, 1, 0].iter().map(|&a| f2.from_i64(a)).collect();
        assert_eq!(p.eval(&v).unwrap(), f2.one());
        assert_eq!(Poly::zero(&f2, 4).eval(&v).unwrap(), f2.zero());
        assert!(p.eval(&v[..3]).is_err());
    }

    #[test]
    fn compose_difference_of_squares() {
        let f = q();
        let p = Poly::parse(&f, 2, "x1*x2").unwrap();
        let t = vec![vec![f.one(), f.one()], vec![f.one(), f.from_i64(-1)]];
        // expand (x1+x2)(x1-x2) term by term
        let a = Poly::parse(&f, 2, "x1 + x2").unwrap();
        let b = Poly::parse(&f, 2, "x1 - x2").unwrap();
        let mut naive = Poly::zero(&f, 2);
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                naive.add_term(m1.mul(m2), &f.mul(c1, c2));
            }
        }
        assert_eq!(p.compose_linear(&t), naive);
        assert_eq!(p.compose_linear(&t).to_string(), "x1^2 - x2^2");
        let swap = vec![vec![f.zero(), f.one()], vec![f.one(), f.zero()]];
        assert_eq!(Poly::parse(&f, 2, "x1^2").unwrap().compose_linear(&swap).to_string(), "x2^2");
    }

    #[test]
    fn exact_division() {
        let f = q();
        let a = Poly::parse(&f, 3, "x1^2 - x2^2").unwrap();
        let b = Poly::parse(&f, 3, "x1 + x2").unwrap();
        assert_eq!(a.exact_div(&b).unwrap().to_string(), "x1 - x2");
        assert!(a.exact_div(&Poly::parse(&f, 3, "x3").unwrap()).is_none());
    }

    #[test]
    fn derivative_in_char_two() {
        let f2 = Field::prime(2).unwrap();
        let p = Poly::parse(&f2, 2, "x1^2 + x1*x2").unwrap();
        assert_eq!(p.derivative(0).to_string(), "x2");
        assert_eq!(p.derivative(1).to_string(), "x1");
    }
}

//! Quadratic homogeneous maps stored as upper-triangular coefficient tables.

use std::fmt;

use rand::Rng;

use crate::algebra::{Elem, Embedding, Field, Mono, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::PolyMatrix;

/// Position of c_{ij} (i ≤ j, zero-based) in a component table.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

pub fn table_len(n: usize) -> usize {
    n * (n + 1) / 2
}

#[derive(Clone, PartialEq, Eq)]
pub struct QuadMap {
    field: Field,
    n: usize,
    comps: Vec<Vec<Elem>>,
}

impl fmt::Debug for QuadMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_polys().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl QuadMap {
    pub fn zero(field: &Field, n: usize, m: usize) -> QuadMap {
        QuadMap {
            field: field.clone(),
            n,
            comps: vec![vec![field.zero(); table_len(n)]; m],
        }
    }

    pub fn from_polys(field: &Field, n: usize, polys: &[Poly]) -> Result<QuadMap> {
        let mut h = QuadMap::zero(field, n, polys.len());
        for (k, p) in polys.iter().enumerate() {
            if p.nvars() != n {
                return Err(Error::Dimension(format!("component {} has {} variables", k + 1, p.nvars())));
            }
            if !p.is_homogeneous(2) {
                return Err(Error::Precondition(format!("component {} is not quadratic homogeneous", k + 1)));
            }
            for (mono, c) in p.terms() {
                let idx: Vec<usize> = mono
                    .0
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                    .collect();
                h.comps[k][pair_index(n, idx[0], idx[1])] = c.clone();
            }
        }
        Ok(h)
    }

    /// Components in the polynomial text form.
    pub fn parse(field: &Field, n: usize, comps: &[&str]) -> Result<QuadMap> {
        let polys = comps
            .iter()
            .map(|s| Poly::parse(field, n, s))
            .collect::<Result<Vec<_>>>()?;
        QuadMap::from_polys(field, n, &polys)
    }

    pub fn from_tables(field: &Field, n: usize, comps: Vec<Vec<Elem>>) -> Result<QuadMap> {
        if comps.iter().any(|c| c.len() != table_len(n)) {
            return Err(Error::Dimension("coefficient table length".into()));
        }
        Ok(QuadMap {
            field: field.clone(),
            n,
            comps,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn ncomps(&self) -> usize {
        self.comps.len()
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.comps
    }

    pub fn coeff(&self, k: usize, i: usize, j: usize) -> &Elem {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        &self.comps[k][pair_index(self.n, a, b)]
    }

    pub fn set_coeff(&mut self, k: usize, i: usize, j: usize, c: Elem) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.comps[k][pair_index(self.n, a, b)] = c;
    }

    pub fn component(&self, k: usize) -> Poly {
        let f = &self.field;
        let n = self.n;
        let mut p = Poly::zero(f, n);
        for i in 0..n {
            for j in i..n {
                let c = &self.comps[k][pair_index(n, i, j)];
                if !f.is_zero(c) {
                    p.add_term(Mono::pair(n, i, j), c);
                }
            }
        }
        p
    }

    pub fn to_polys(&self) -> Vec<Poly> {
        (0..self.ncomps()).map(|k| self.component(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(|c| self.field.is_zero(c))
    }

    pub fn component_is_zero(&self, k: usize) -> bool {
        self.comps[k].iter().all(|c| self.field.is_zero(c))
    }

    /// Rows ∂H_k/∂x_j, each a linear form.
    pub fn jacobian(&self) -> PolyMatrix {
        PolyMatrix::from_coefficient_matrices(&self.field, &self.jacobian_coefficients())
    }

    /// M^(t) with JH = Σ_t x_t·M^(t); entry (k,j) of M^(t) is ∂²H_k/∂x_t∂x_j.
    pub fn jacobian_coefficients(&self) -> Vec<Matrix> {
        let f = &self.field;
        let n = self.n;
        let m = self.ncomps();
        let two = f.from_i64(2);
        let mut out = vec![Matrix::zeros(f, m, n); n];
        for k in 0..m {
            for i in 0..n {
                for j in i..n {
                    let c = &self.comps[k][pair_index(n, i, j)];
                    if f.is_zero(c) {
                        continue;
                    }
                    if i == j {
                        out[i].set(k, i, f.mul(&two, c));
                    } else {
                        out[i].set(k, j, c.clone());
                        out[j].set(k, i, c.clone());
                    }
                }
            }
        }
        out
    }

    /// Constant matrix of second partials of component k.
    pub fn hessian(&self, k: usize) -> Matrix {
        let f = &self.field;
        let n = self.n;
        let mut h = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in i..n {
                let c = &self.comps[k][pair_index(n, i, j)];
                if i == j {
                    h.set(i, i, f.mul(&f.from_i64(2), c));
                } else {
                    h.set(i, j, c.clone());
                    h.set(j, i, c.clone());
                }
            }
        }
        h
    }

    /// S·H(Tx).
    pub fn compose(&self, s: &Matrix, t: &Matrix) -> Result<QuadMap> {
        if s.rows() != s.cols() || s.cols() != self.ncomps() || t.rows() != self.n || t.cols() != self.n {
            return Err(Error::Dimension("transform shapes do not match the map".into()));
        }
        if !s.is_invertible() || !t.is_invertible() {
            return Err(Error::Singular("S and T must be invertible".into()));
        }
        Ok(self.compose_unchecked(s, t))
    }

    pub fn compose_unchecked(&self, s: &Matrix, t: &Matrix) -> QuadMap {
        let rows = t.to_rows();
        let inner: Vec<Poly> = self.to_polys().iter().map(|p| p.compose_linear(&rows)).collect();
        let f = &self.field;
        let out: Vec<Poly> = (0..s.rows())
            .map(|i| {
                let mut acc = Poly::zero(f, self.n);
                for (k, p) in inner.iter().enumerate() {
                    let c = s.get(i, k);
                    if !f.is_zero(c) {
                        acc.add_assign(&p.scale(c));
                    }
                }
                acc
            })
            .collect();
        QuadMap::from_polys(f, self.n, &out).expect("linear change preserves degree")
    }

    /// T⁻¹·H(Tx).
    pub fn conjugate(&self, t: &Matrix) -> Result<QuadMap> {
        if self.ncomps() != self.n {
            return Err(Error::Dimension("conjugation needs m = n".into()));
        }
        let tinv = t.inverse()?;
        Ok(self.compose_unchecked(&tinv, t))
    }

    pub fn eval(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        self.to_polys().iter().map(|p| p.eval(v)).collect()
    }

    /// det J(x+H) is a nonzero constant.
    pub fn keller_check(&self) -> Result<bool> {
        if self.ncomps() != self.n {
            return Err(Error::Dimension("Keller check needs m = n".into()));
        }
        let d = self.keller_determinant();
        Ok(d.degree() == Some(0))
    }

    /// det(I + JH).
    pub fn keller_determinant(&self) -> Poly {
        let j = self.jacobian();
        PolyMatrix::identity(&self.field, self.n, self.n).add(&j).det()
    }

    /// Drops the c_ii in characteristic 2, which leaves JH unchanged.
    pub fn strip_squares(&self) -> QuadMap {
        let mut h = self.clone();
        if self.field.characteristic() == 2 {
            for k in 0..h.ncomps() {
                for i in 0..self.n {
                    h.comps[k][pair_index(self.n, i, i)] = self.field.zero();
                }
            }
        }
        h
    }

    /// The same polynomials viewed in n ≥ self.n variables with m ≥ self.m components.
    pub fn padded(&self, n: usize, m: usize) -> QuadMap {
        assert!(n >= self.n && m >= self.ncomps());
        let mut h = QuadMap::zero(&self.field, n, m);
        for k in 0..self.ncomps() {
            for i in 0..self.n {
                for j in i..self.n {
                    h.set_coeff(k, i, j, self.coeff(k, i, j).clone());
                }
            }
        }
        h
    }

    pub fn with_component(&self, k: usize, table: Vec<Elem>) -> QuadMap {
        let mut h = self.clone();
        h.comps[k] = table;
        h
    }

    pub fn map_field(&self, emb: &Embedding) -> QuadMap {
        QuadMap {
            field: emb.target.clone(),
            n: self.n,
            comps: self
                .comps
                .iter()
                .map(|c| c.iter().map(|x| emb.apply(x)).collect())
                .collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, m: usize, rng: &mut R) -> QuadMap {
        let mut h = QuadMap::zero(field, n, m);
        for comp in h.comps.iter_mut() {
            for c in comp.iter_mut() {
                *c = field.random(rng);
            }
        }
        h
    }

    /// S₀·H(T₀x) for random invertible S₀, T₀.
    pub fn scramble<R: Rng + ?Sized>(&self, rng: &mut R) -> (QuadMap, Matrix, Matrix) {
        let s = Matrix::random_invertible(&self.field, self.ncomps(), rng);
        let t = Matrix::random_invertible(&self.field, self.n, rng);
        (self.compose_unchecked(&s, &t), s, t)
    }
}

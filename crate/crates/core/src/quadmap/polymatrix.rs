//! Matrices with polynomial entries.

use std::fmt;

use crate::algebra::{Elem, Field, Mono, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PolyMatrix {
    pub fn zeros(field: &Field, nvars: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            field: field.clone(),
            nvars,
            rows,
            cols,
            data: vec![Poly::zero(field, nvars); rows * cols],
        }
    }

    pub fn identity(field: &Field, nvars: usize, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(field, nvars, n, n);
        for i in 0..n {
            m.set(i, i, Poly::constant(field, nvars, field.one()));
        }
        m
    }

    pub fn from_rows(field: &Field, nvars: usize, rows: Vec<Vec<Poly>>) -> PolyMatrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        PolyMatrix {
            field: field.clone(),
            nvars,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Rows given in the text form, e.g. `[["0", "x5"], ["x4", "0"]]`.
    pub fn parse(field: &Field, nvars: usize, rows: &[&[&str]]) -> Result<PolyMatrix> {
        let mut out = Vec::new();
        for r in rows {
            out.push(r.iter().map(|s| Poly::parse(field, nvars, s)).collect::<Result<Vec<_>>>()?);
        }
        Ok(PolyMatrix::from_rows(field, nvars, out))
    }

    pub fn from_const(m: &Matrix, nvars: usize) -> PolyMatrix {
        let f = m.field();
        let mut p = PolyMatrix::zeros(f, nvars, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                p.set(i, j, Poly::constant(f, nvars, m.get(i, j).clone()));
            }
        }
        p
    }

    /// Σ_t x_t·M^(t).
    pub fn from_coefficient_matrices(field: &Field, mats: &[Matrix]) -> PolyMatrix {
        let nvars = mats.len();
        let (rows, cols) = (mats[0].rows(), mats[0].cols());
        let mut p = PolyMatrix::zeros(field, nvars, rows, cols);
        for (t, m) in mats.iter().enumerate() {
            for i in 0..rows {
                for j in 0..cols {
                    let c = m.get(i, j);
                    if !field.is_zero(c) {
                        let mut e = p.get(i, j).clone();
                        e.add_term(Mono::var(nvars, t), c);
                        p.set(i, j, e);
                    }
                }
            }
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (0..self.cols).all(|j| self.get(i, j).is_zero())
    }

    pub fn col_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.field, self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.field, self.nvars, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut m = PolyMatrix::zeros(&self.field, self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * m.cols + j;
                    m.data[idx].add_assign(&a.mul(b));
                }
            }
        }
        m
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            a.add_assign(b);
        }
        m
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = a.sub(b);
        }
        m
    }

    pub fn mul_const_left(&self, s: &Matrix) -> PolyMatrix {
        self.mul_const(s, true)
    }

    pub fn mul_const_right(&self, t: &Matrix) -> PolyMatrix {
        self.mul_const(t, false)
    }

    fn mul_const(&self, c: &Matrix, left: bool) -> PolyMatrix {
        let f = &self.field;
        let (rows, cols) = if left { (c.rows(), self.cols) } else { (self.rows, c.cols()) };
        let inner = if left { c.cols() } else { self.cols };
        let mut m = PolyMatrix::zeros(f, self.nvars, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = Poly::zero(f, self.nvars);
                for k in 0..inner {
                    let (s, p) = if left { (c.get(i, k), self.get(k, j)) } else { (c.get(k, j), self.get(i, k)) };
                    if !f.is_zero(s) && !p.is_zero() {
                        acc.add_assign(&p.scale(s));
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    /// Entrywise substitution x ↦ Tx.
    pub fn compose_linear(&self, t: &Matrix) -> PolyMatrix {
        let rows = t.to_rows();
        let mut m = self.clone();
        for p in m.data.iter_mut() {
            *p = p.compose_linear(&rows);
        }
        m
    }

    pub fn eval(&self, v: &[Elem]) -> Result<Matrix> {
        let mut m = Matrix::zeros(&self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).eval(v)?);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(&self.field, self.nvars);
                for (j, x) in v.iter().enumerate() {
                    let e = self.get(i, j);
                    if !e.is_zero() && !x.is_zero() {
                        acc.add_assign(&e.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> PolyMatrix {
        assert!(self.is_square());
        let mut r = PolyMatrix::identity(&self.field, self.nvars, self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Coefficient matrices M^(t) of a matrix of linear forms.
    pub fn coefficient_matrices(&self) -> Result<Vec<Matrix>> {
        let f = &self.field;
        let mut out = vec![Matrix::zeros(f, self.rows, self.cols); self.nvars];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if !p.is_linear_form() {
                    return Err(Error::Precondition(format!("entry ({},{}) is not a linear form", i + 1, j + 1)));
                }
                for (t, c) in p.linear_coeffs().into_iter().enumerate() {
                    out[t].set(i, j, c);
                }
            }
        }
        Ok(out)
    }

    pub fn is_strictly_lower(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let f = &self.field;
        if n == 0 {
            return Poly::constant(f, self.nvars, f.one());
        }
        let mut a = self.data.clone();
        let mut sign = false;
        let mut prev = Poly::constant(f, self.nvars, f.one());
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
                return Poly::zero(f, self.nvars);
            };
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
                sign = !sign;
            }
            let piv = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = piv.mul(&a[i * n + j]).sub(&a[i * n + k].mul(&a[k * n + j]));
                    a[i * n + j] = v.exact_div(&prev).expect("Bareiss division is exact");
                }
                a[i * n + k] = Poly::zero(f, self.nvars);
            }
            prev = piv;
        }
        let d = a[n * n - 1].clone();
        if sign {
            d.neg()
        } else {
            d
        }
    }

    pub fn map_entries(&self, g: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        let mut m = self.clone();
        for p in m.data.iter_mut() {
            *p = g(p);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &PolyMatrix) -> Poly {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Poly::zero(m.field(), m.nvars());
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let t = m.get(0, j).mul(&cofactor_det(&m.submatrix(&rows, &cols)));
            acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let q = Field::rationals();
        let m = PolyMatrix::parse(
            &q,
            3,
            &[&["x1", "x2", "0"], &["x3", "x1 + x2", "x2"], &["1", "x3", "x1"]],
        )
        .unwrap();
        assert_eq!(m.det(), cofactor_det(&m));
        let z = PolyMatrix::parse(&q, 2, &[&["x1", "x2"], &["x1", "x2"]]).unwrap();
        assert!(z.det().is_zero());
    }
}

//! Dense matrices of field elements.

use std::fmt;

use rand::Rng;

use crate::algebra::{Elem, Embedding, Field};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}
impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.field.format(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(field: &Field, rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: &Field, len: usize, cols: &[Vec<Elem>]) -> Matrix {
        let mut m = Matrix::zeros(field, len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn diagonal(field: &Field, d: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(field, d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Matrix P with P e_i = e_{perm[i]}.
    pub fn permutation(field: &Field, perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(j, i, field.one());
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(m.get(i, j), &f.mul(a, b));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(self.get(i, j), x));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form with the transform: S·self = R.
    pub fn rref_with_transform(&self) -> (Matrix, Matrix, Vec<usize>) {
        let f = self.field.clone();
        let mut r = self.clone();
        let mut s = Matrix::identity(&f, self.rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !f.is_zero(r.get(i, col))) else {
                continue;
            };
            r.swap_rows(row, p);
            s.swap_rows(row, p);
            let inv = f.inv(r.get(row, col)).unwrap();
            for j in 0..self.cols {
                let v = f.mul(r.get(row, j), &inv);
                r.set(row, j, v);
            }
            for j in 0..self.rows {
                let v = f.mul(s.get(row, j), &inv);
                s.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let factor = r.get(i, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(r.get(i, j), &f.mul(&factor, r.get(row, j)));
                    r.set(i, j, v);
                }
                for j in 0..self.rows {
                    let v = f.sub(s.get(i, j), &f.mul(&factor, s.get(row, j)));
                    s.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (r, s, pivots)
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (r, _, p) = self.rref_with_transform();
        (r, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right kernel basis, one vector per free column in ascending order, with
    /// a 1 at its free column and zeros at the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            out.push(v);
        }
        out
    }

    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Elem>>) {
        (self.rank(), self.kernel())
    }

    /// Left kernel: vectors w with wᵗ·self = 0.
    pub fn left_kernel(&self) -> Vec<Vec<Elem>> {
        self.transpose().kernel()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let (r, s, pivots) = self.rref_with_transform();
        if pivots.len() != self.rows {
            return Err(Error::Singular(format!("rank {} < {}", pivots.len(), self.rows)));
        }
        debug_assert!(r.is_identity());
        Ok(s)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Elem {
        assert!(self.is_square());
        let f = self.field.clone();
        let mut a = self.clone();
        let n = self.rows;
        let mut det = f.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !f.is_zero(a.get(i, col))) else {
                return f.zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = f.neg(&det);
            }
            let piv = a.get(col, col).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).unwrap();
            for i in col + 1..n {
                let factor = f.mul(a.get(i, col), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(col, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Some x with self·x = b, if solvable.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        let f = &self.field;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Extends independent columns to an invertible matrix by appending
    /// standard basis vectors in ascending order.
    pub fn complete_basis(field: &Field, n: usize, vectors: &[Vec<Elem>]) -> Matrix {
        let mut cols: Vec<Vec<Elem>> = vectors.to_vec();
        for i in 0..n {
            if cols.len() == n {
                break;
            }
            let mut e = vec![field.zero(); n];
            e[i] = field.one();
            let mut trial = cols.clone();
            trial.push(e);
            if Matrix::from_cols(field, n, &trial).rank() == trial.len() {
                cols = trial;
            }
        }
        Matrix::from_cols(field, n, &cols)
    }

    /// Places `block` at rows/cols starting at `offset` inside an identity.
    pub fn embed(field: &Field, n: usize, offset: usize, block: &Matrix) -> Matrix {
        let mut m = Matrix::identity(field, n);
        for i in 0..block.rows {
            for j in 0..block.cols {
                m.set(offset + i, offset + j, block.get(i, j).clone());
            }
        }
        m
    }

    pub fn map_field(&self, emb: &Embedding) -> Matrix {
        Matrix {
            field: emb.target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| emb.apply(x)).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, field.random(rng));
            }
        }
        m
    }

    pub fn random_invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::random(field, n, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_alternating(&self) -> bool {
        let f = &self.field;
        self.is_square()
            && (0..self.rows).all(|i| f.is_zero(self.get(i, i)))
            && *self == self.transpose().scale(&f.from_i64(-1))
    }

    pub fn is_strictly_lower(&self) -> bool {
        let f = &self.field;
        (0..self.rows).all(|i| (i..self.cols).all(|j| f.is_zero(self.get(i, j))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_examples() {
        let q = Field::rationals();
        let (r, k) = Matrix::zeros(&q, 3, 3).rank_kernel();
        assert_eq!(r, 0);
        assert_eq!(k.len(), 3);
        assert_eq!(k[1], vec![q.zero(), q.one(), q.zero()]);
        let (r, k) = Matrix::identity(&q, 4).rank_kernel();
        assert_eq!((r, k.len()), (4, 0));
    }

    #[test]
    fn kernel_all_ones_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_i64(&f2, &[vec![1, 1], vec![1, 1]]);
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![f2.one(), f2.one()]]);
        // every vector of F2^2 killed by m lies in the span of k
        for a in 0..2 {
            for b in 0..2 {
                let v = vec![f2.from_i64(a), f2.from_i64(b)];
                let killed = m.mul_vec(&v).iter().all(|x| f2.is_zero(x));
                assert_eq!(killed, a == b);
            }
        }
    }

    #[test]
    fn inverse_and_det_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in [Field::rationals(), Field::prime(5).unwrap(), Field::of_order(4).unwrap()] {
            for _ in 0..50 {
                let m = Matrix::random(&f, 4, 4, &mut rng);
                match m.inverse() {
                    Ok(inv) => {
                        assert!(m.mul(&inv).is_identity());
                        assert!(!f.is_zero(&m.det()));
                    }
                    Err(_) => assert!(f.is_zero(&m.det())),
                }
            }
        }
    }

    #[test]
    fn rank_invariant_under_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [Field::rationals(), Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::of_order(9).unwrap()] {
            for _ in 0..500 {
                let rows = rng.gen_range(1..6);
                let cols = rng.gen_range(1..6);
                let m = Matrix::random(&f, rows, cols, &mut rng);
                let s = Matrix::random_invertible(&f, rows, &mut rng);
                let t = Matrix::random_invertible(&f, cols, &mut rng);
                assert_eq!(s.mul(&m).mul(&t).rank(), m.rank());
            }
        }
    }

    #[test]
    fn solve_and_complete_basis() {
        let q = Field::rationals();
        let m = Matrix::from_i64(&q, &[vec![1, 2], vec![2, 4]]);
        assert!(m.solve(&[q.one(), q.one()]).is_none());
        let x = m.solve(&[q.one(), q.from_i64(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q.one(), q.from_i64(2)]);
        let b = Matrix::complete_basis(&q, 3, &[vec![q.zero(), q.one(), q.one()]]);
        assert!(b.is_invertible());
        assert_eq!(b.col(0), vec![q.zero(), q.one(), q.one()]);
    }
}

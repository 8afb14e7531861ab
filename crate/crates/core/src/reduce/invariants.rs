//! K-linear invariants of the Jacobian used by the reducers.

use crate::algebra::{Elem, Field};
use crate::linalg::Matrix;
use crate::quadmap::{pair_index, table_len, QuadMap};

/// Row k holds the upper triangle of the Hessian of H_k, so row k vanishes
/// exactly when row k of JH does.
pub fn jacobian_table(h: &QuadMap) -> Matrix {
    let f = h.field();
    let n = h.nvars();
    let mut rows = Vec::with_capacity(h.ncomps());
    for k in 0..h.ncomps() {
        let hess = h.hessian(k);
        let mut row = vec![f.zero(); table_len(n)];
        for i in 0..n {
            for j in i..n {
                row[pair_index(n, i, j)] = hess.get(i, j).clone();
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Matrix::zeros(f, 0, table_len(n));
    }
    Matrix::from_rows(f, rows)
}

/// ρ: dimension of the K-span of the rows of JH.
pub fn row_rank(h: &QuadMap) -> usize {
    jacobian_table(h).rank()
}

/// S with only the first ρ rows of J(S·H) nonzero.
pub fn row_reduction(h: &QuadMap) -> (Matrix, usize) {
    let (_, s, pivots) = jacobian_table(h).rref_with_transform();
    (s, pivots.len())
}

/// Constant v with JH·v = 0.
pub fn column_kernel(h: &QuadMap) -> Vec<Vec<Elem>> {
    let f = h.field();
    let n = h.nvars();
    let mut rows = Vec::new();
    for k in 0..h.ncomps() {
        rows.extend(h.hessian(k).to_rows());
    }
    if rows.is_empty() {
        return Matrix::identity(f, n).to_rows();
    }
    Matrix::from_rows(f, rows).kernel()
}

/// κ: number of columns of JH that cannot be cleared by a change of variables.
pub fn essential_vars(h: &QuadMap) -> usize {
    h.nvars() - column_kernel(h).len()
}

/// T with only the first κ columns of J(H(Tx)) nonzero.
pub fn column_confinement(h: &QuadMap) -> (Matrix, usize) {
    let f = h.field();
    let n = h.nvars();
    let ker = column_kernel(h);
    let full = Matrix::complete_basis(f, n, &ker);
    let mut cols: Vec<Vec<Elem>> = (ker.len()..n).map(|j| full.col(j)).collect();
    cols.extend(ker.iter().cloned());
    (Matrix::from_cols(f, n, &cols), n - ker.len())
}

/// Some nonzero w with wᵗ·JH = 0.
pub fn rows_dependent_over_k(h: &QuadMap) -> Option<Vec<Elem>> {
    jacobian_table(h).left_kernel().into_iter().next()
}

/// Number of rows of JH before the trailing zero rows.
pub fn nonzero_row_extent(h: &QuadMap) -> usize {
    let t = jacobian_table(h);
    let f = h.field();
    (0..t.rows())
        .rev()
        .find(|&k| t.row(k).iter().any(|c| !f.is_zero(c)))
        .map_or(0, |k| k + 1)
}

/// Number of columns of JH before the trailing zero columns.
pub fn nonzero_col_extent(h: &QuadMap) -> usize {
    let f = h.field();
    let n = h.nvars();
    let used = |j: usize| (0..h.ncomps()).any(|k| (0..n).any(|i| !f.is_zero(h.hessian(k).get(i, j))));
    (0..n).rev().find(|&j| used(j)).map_or(0, |j| j + 1)
}

/// Vectors of Kᵈ with first nonzero entry 1, in index order.
pub fn projective_points(f: &Field, d: usize, limit: u64) -> Vec<Vec<Elem>> {
    let Some(q) = f.size() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let Some(total) = q.checked_pow(d as u32) else {
        return out;
    };
    for idx in 1..total {
        if out.len() as u64 >= limit {
            break;
        }
        let mut v = Vec::with_capacity(d);
        let mut t = idx;
        for _ in 0..d {
            v.push(f.element(t % q));
            t /= q;
        }
        v.reverse();
        if v.iter().find(|x| !f.is_zero(x)).map(|x| f.is_one(x)) == Some(true) {
            out.push(v);
        }
    }
    out
}

/// Coefficient vectors for a search inside a subspace: all projective points
/// over a finite field, basis vectors and {-1,0,1}-combinations over ℚ.
pub fn subspace_candidates(f: &Field, basis: &[Vec<Elem>], limit: u64) -> Vec<Vec<Elem>> {
    let d = basis.len();
    if d == 0 {
        return Vec::new();
    }
    let n = basis[0].len();
    let combine = |coef: &[Elem]| -> Vec<Elem> {
        let mut v = vec![f.zero(); n];
        for (c, b) in coef.iter().zip(basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        v
    };
    if f.size().is_some() {
        return projective_points(f, d, limit).iter().map(|c| combine(c)).collect();
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let total = 3u64.saturating_pow(d as u32);
    for idx in 1..total {
        if out.len() as u64 >= limit {
            break;
        }
        let mut t = idx;
        let mut coef = Vec::with_capacity(d);
        for _ in 0..d {
            coef.push(f.from_i64((t % 3) as i64 - 1));
            t /= 3;
        }
        coef.reverse();
        let first = coef.iter().find(|x| !f.is_zero(x));
        if first.map(|x| f.is_one(x)) != Some(true) {
            continue;
        }
        let v = combine(&coef);
        if seen.insert(format!("{v:?}")) {
            out.push(v);
        }
    }
    out.sort_by_key(|v| v.iter().filter(|x| !f.is_zero(x)).count());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_small_maps() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 3, &["x1^2", "x1^2 + x1*x2", "2*x1^2 + x1*x2"]).unwrap();
        assert_eq!(row_rank(&h), 2);
        assert_eq!(essential_vars(&h), 2);
        let (s, rho) = row_reduction(&h);
        let red = h.compose_unchecked(&s, &Matrix::identity(&q, 3));
        assert_eq!(nonzero_row_extent(&red), rho);
        let (t, k) = column_confinement(&h);
        let conf = h.compose_unchecked(&Matrix::identity(&q, 3), &t);
        assert_eq!(nonzero_col_extent(&conf), k);
        let w = rows_dependent_over_k(&h).unwrap();
        assert_eq!(w, vec![q.from_i64(-1), q.from_i64(-1), q.one()]);
        let none = QuadMap::parse(&q, 2, &["x1^2", "x1^2 + x2^2"]).unwrap();
        assert!(rows_dependent_over_k(&none).is_none());
    }

    #[test]
    fn zero_component_gives_last_unit_vector() {
        let f3 = Field::prime(3).unwrap();
        let h = QuadMap::parse(&f3, 2, &["x1*x2", "x2^2", "0"]).unwrap();
        assert_eq!(rows_dependent_over_k(&h).unwrap(), vec![f3.zero(), f3.zero(), f3.one()]);
    }

    #[test]
    fn squares_are_invisible_in_char_two() {
        let f2 = Field::prime(2).unwrap();
        let h = QuadMap::parse(&f2, 3, &["x1^2 + x2*x3", "x3^2"]).unwrap();
        assert_eq!(row_rank(&h), 1);
        assert_eq!(essential_vars(&h), 2);
    }
}

use std::collections::BTreeSet;

use crate::algebra::{Elem, Mono, Poly};
use crate::linalg::Matrix;
use crate::quadmap::PolyMatrix;

use super::elim::nullspace;

/// K-linear conditions on v ∈ K^m from polynomial vectors y with y·v = 0,
/// one row per (vector, monomial).
pub fn monomial_conditions(field: &crate::algebra::Field, m: usize, ys: &[Vec<Poly>]) -> Matrix {
    let mut rows = Vec::new();
    for y in ys {
        let monos: BTreeSet<Mono> = y.iter().flat_map(|p| p.monomials().cloned()).collect();
        for mono in monos {
            rows.push(y.iter().map(|p| p.coeff(&mono)).collect::<Vec<Elem>>());
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(field, 0, m);
    }
    Matrix::from_rows(field, rows)
}

/// K-basis of the constant vectors lying in the K(x)-column space of M.
pub fn constant_vectors_in_colspace(m: &PolyMatrix) -> Vec<Vec<Elem>> {
    let f = m.field();
    let left = nullspace(&m.transpose());
    let cond = monomial_conditions(f, m.rows(), &left);
    if cond.rows() == 0 {
        return Matrix::identity(f, m.rows()).to_rows();
    }
    cond.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::symbolic::poly_rank;

    fn in_colspace(m: &PolyMatrix, v: &[Elem]) -> bool {
        let f = m.field();
        let mut aug = PolyMatrix::zeros(f, m.nvars(), m.rows(), m.cols() + 1);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                aug.set(i, j, m.get(i, j).clone());
            }
            aug.set(i, m.cols(), Poly::constant(f, m.nvars(), v[i].clone()));
        }
        poly_rank(&aug) == poly_rank(m)
    }

    #[test]
    fn constant_column() {
        let q = Field::rationals();
        let m = PolyMatrix::parse(&q, 2, &[&["1", "x1"], &["0", "x2"], &["0", "x1"]]).unwrap();
        let b = constant_vectors_in_colspace(&m);
        assert_eq!(b.len(), 1);
        assert!(in_colspace(&m, &[q.one(), q.zero(), q.zero()]));
        let single = PolyMatrix::parse(&q, 2, &[&["x1"], &["x2"]]).unwrap();
        assert!(constant_vectors_in_colspace(&single).is_empty());
    }

    #[test]
    fn brute_force_over_f2() {
        let f2 = Field::prime(2).unwrap();
        // B-block of the plane [[x4, -x5], [*, *]] style instance
        let m = PolyMatrix::parse(
            &f2,
            5,
            &[&["x4", "x5", "x2"], &["0", "x1", "0"], &["x4", "x5 + x1", "x2"], &["x3", "0", "x3"]],
        )
        .unwrap();
        let basis = constant_vectors_in_colspace(&m);
        let span = Matrix::from_cols(&f2, 4, &basis);
        for idx in 0..16u64 {
            let v: Vec<Elem> = (0..4).map(|i| f2.from_i64(((idx >> i) & 1) as i64)).collect();
            let inside = basis.is_empty() && idx == 0 || span.solve(&v).is_some();
            assert_eq!(in_colspace(&m, &v), inside, "{v:?}");
        }
    }
}

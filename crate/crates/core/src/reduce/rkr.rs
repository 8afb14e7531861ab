//! Row/column support reductions for arbitrary rank and for rank ≤ 4.

use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::QuadMap;
use crate::symbolic::{constant_vectors_in_colspace, poly_rank};

use super::certificate::{Certificate, Theorem};
use super::invariants::{column_confinement, essential_vars, row_reduction, subspace_candidates};

/// Cap on hyperplane candidates tried over ℚ.
pub(crate) const HYPERPLANE_LIMIT: u64 = 20_000;

fn tri(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// S row-reducing and T column-confining H at once.
fn support_transforms(h: &QuadMap) -> (Matrix, usize, Matrix, usize) {
    let (s, rho) = row_reduction(h);
    let (t, kappa) = column_confinement(h);
    (s, rho, t, kappa)
}

pub fn reduce_rkr(h: &QuadMap) -> Result<Certificate> {
    let r = poly_rank(&h.jacobian());
    let odd = h.field().characteristic() != 2;
    let (s, rho, t, kappa) = support_transforms(h);
    let tag = if rho <= tri(r) + 1 {
        1
    } else if odd && kappa <= r {
        2
    } else if !odd && kappa <= r + 1 {
        3
    } else {
        return Err(Error::NoCase(format!("rank {r}: {rho} independent rows, {kappa} essential columns")));
    };
    Certificate::new(Theorem::Rkr, tag, s, t).verified(h)
}

/// The constant vectors u in the column space of JH, as candidates in search order.
pub(crate) fn colspace_candidates(h: &QuadMap) -> Vec<Vec<Elem>> {
    let basis = constant_vectors_in_colspace(&h.jacobian());
    subspace_candidates(h.field(), &basis, HYPERPLANE_LIMIT)
}

/// S_u with S_u·u = e₁; the last m−1 components of S_u·H then have rank r−1.
pub(crate) fn split_off(f: &Field, u: &[Elem]) -> Matrix {
    Matrix::complete_basis(f, u.len(), &[u.to_vec()])
        .inverse()
        .expect("completed basis is invertible")
}

/// Components k.. of H as a map of their own.
pub(crate) fn tail(h: &QuadMap, k: usize) -> QuadMap {
    let tables = h.tables()[k..].to_vec();
    QuadMap::from_tables(h.field(), h.nvars(), tables).expect("same table sizes")
}

/// diag(I_k, a)·s.
pub(crate) fn lift_rows(f: &Field, k: usize, a: &Matrix, s: &Matrix) -> Matrix {
    Matrix::embed(f, s.rows(), k, a).mul(s)
}

pub fn reduce_rk4(h: &QuadMap) -> Result<Certificate> {
    let f = h.field();
    let r = poly_rank(&h.jacobian());
    if r > 4 {
        return Err(Error::Precondition(format!("rank {r} exceeds 4")));
    }
    let odd = f.characteristic() != 2;
    let (s, rho, t, kappa) = support_transforms(h);
    if rho <= r + 1 {
        return Certificate::new(Theorem::Rk4, 1, s, t).verified(h);
    }
    if r == 4 {
        let limit = if odd { 3 } else { 4 };
        for u in colspace_candidates(h) {
            let su = split_off(f, &u);
            let g = tail(&h.compose_unchecked(&su, &Matrix::identity(f, h.nvars())), 1);
            if essential_vars(&g) > limit {
                continue;
            }
            let (sg, _) = row_reduction(&g);
            let (tg, _) = column_confinement(&g);
            let s = lift_rows(f, 1, &sg, &su);
            return Certificate::new(Theorem::Rk4, if odd { 2 } else { 3 }, s, tg).verified(h);
        }
    }
    if kappa <= r + 1 {
        return Certificate::new(Theorem::Rk4, 4, s, t).verified(h);
    }
    if r == 4 && !odd && rho <= 6 && kappa <= 6 {
        return Certificate::new(Theorem::Rk4, 5, s, t).verified(h);
    }
    Err(Error::NoCase(format!("rank {r}: {rho} independent rows, {kappa} essential columns")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::certificate_check;

    #[test]
    fn all_products_of_three_variables() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 3, &["x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"]).unwrap();
        let c = reduce_rkr(&h).unwrap();
        assert_eq!(c.case_tag, 2);
        assert!(certificate_check(&h, &c));
    }

    #[test]
    fn square_free_products_in_char_two() {
        let f2 = Field::prime(2).unwrap();
        let h = QuadMap::parse(&f2, 4, &["x1*x2", "x1*x3", "x1*x4", "x2*x3", "x2*x4", "x3*x4"]).unwrap();
        let c = reduce_rkr(&h).unwrap();
        assert_eq!(c.case_tag, 3);
    }

    #[test]
    fn hessian_of_two_triple_products() {
        let f2 = Field::prime(2).unwrap();
        let h = QuadMap::parse(
            &f2,
            6,
            &["x2*x3", "x1*x3", "x1*x2", "x5*x6", "x4*x6", "x4*x5"],
        )
        .unwrap();
        assert_eq!(poly_rank(&h.jacobian()), 4);
        let c = reduce_rk4(&h).unwrap();
        assert_eq!(c.case_tag, 5);
    }
}

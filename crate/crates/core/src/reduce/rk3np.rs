//! Nilpotent Jacobians of rank ≤ 3, up to conjugation.

use crate::algebra::{Elem, Field, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::{PolyMatrix, QuadMap};
use crate::symbolic::{flag_triangularize, is_nilpotent, poly_rank, FlagMode};

use super::certificate::{Certificate, Theorem};
use super::displays::{rk3np_pattern2, rk3np_pattern3};
use super::invariants::jacobian_table;
use super::pattern::{find_transform, Budget, SearchOutcome};

/// Default number of candidate transforms for the display search.
pub const SEARCH_BUDGET: u64 = 10_000_000;

pub fn reduce_rk3_nilpotent(h: &QuadMap) -> Result<Certificate> {
    reduce_rk3_nilpotent_with_budget(h, SEARCH_BUDGET)
}

fn conj_cert(tag: u32, t: Matrix) -> Result<Certificate> {
    let s = t.inverse()?;
    Ok(Certificate::new(Theorem::Rk3np, tag, s, t))
}

pub fn reduce_rk3_nilpotent_with_budget(h: &QuadMap, budget: u64) -> Result<Certificate> {
    let n = h.nvars();
    if h.ncomps() != n {
        return Err(Error::Precondition("the map must have as many components as variables".into()));
    }
    let j = h.jacobian();
    if !is_nilpotent(&j)? {
        return Err(Error::Precondition("Jacobian is not nilpotent".into()));
    }
    let r = poly_rank(&j);
    if r > 3 {
        return Err(Error::Precondition(format!("rank {r} exceeds 3")));
    }
    let f = h.field();
    if let Some(t) = flag_triangularize(&j, FlagMode::Greedy)?.transform(f) {
        return conj_cert(1, t)?.verified(h);
    }
    if r == 3 && n >= 5 {
        if let Some(t) = skew_block(h)? {
            return conj_cert(2, t)?.verified(h);
        }
    }
    let mut budget = Budget::new(budget);
    let mut candidates = Vec::new();
    if r == 3 && n >= 5 {
        candidates.push((2, rk3np_pattern2(f, n)?));
    }
    if r == 3 && n >= 6 && f.characteristic() == 2 {
        candidates.push((3, rk3np_pattern3(f, n)?));
    }
    let mut exhausted = true;
    for (tag, pat) in candidates {
        match find_transform(h, &pat, &mut budget)? {
            SearchOutcome::Found(t) => return conj_cert(tag, t)?.verified(h),
            SearchOutcome::Exhausted => {}
            SearchOutcome::OutOfBudget => exhausted = false,
        }
    }
    if exhausted {
        Err(Error::NoCase("no displayed form found".into()))
    } else {
        Err(Error::Budget(format!("display search spent {} candidates", budget.spent)))
    }
}

fn column_space(m: &Matrix) -> Vec<Vec<Elem>> {
    let (r, p) = m.transpose().rref();
    (0..p.len()).map(|i| r.row(i)).collect()
}

/// Columns of the coefficient matrices of a matrix of quadratic forms.
fn quadratic_column_span(f: &Field, m: &PolyMatrix) -> Vec<Vec<Elem>> {
    let mut cols = Vec::new();
    let mut monos = std::collections::BTreeSet::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            monos.extend(m.get(i, j).monomials().cloned());
        }
    }
    for mono in monos {
        let mut c = Matrix::zeros(f, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                c.set(i, j, m.get(i, j).coeff(&mono));
            }
        }
        cols.extend(c.transpose().to_rows());
    }
    if cols.is_empty() {
        return cols;
    }
    column_space(&Matrix::from_rows(f, cols).transpose())
}

/// Scalar λ with p = λ·q, if any.
fn ratio(f: &Field, p: &Poly, q: &Poly) -> Option<Elem> {
    let (m, c) = q.leading()?;
    let lambda = f.div(&p.coeff(m), c).ok()?;
    (p == &q.scale(&lambda)).then_some(lambda)
}

/// The second display, by putting the image space of H first and bringing
/// the 3×3 block to [[0,f,0],[b,0,f],[0,−b,0]].
fn skew_block(h: &QuadMap) -> Result<Option<Matrix>> {
    let f = h.field();
    let n = h.nvars();
    let v = column_space(&jacobian_table(h));
    if v.len() != 3 {
        return Ok(None);
    }
    let t0 = Matrix::complete_basis(f, n, &v);
    let h0 = h.conjugate(&t0)?;
    let j0 = h0.jacobian();
    let idx = [0, 1, 2];
    let nblk = j0.submatrix(&idx, &idx);
    let low = |p: &Poly| (0..3).all(|i| !p.involves(i));
    if (0..3).any(|i| (0..3).any(|k| !low(nblk.get(i, k)))) {
        return Ok(None);
    }
    let pi = quadratic_column_span(f, &nblk.mul(&nblk));
    if pi.len() != 2 {
        return Ok(None);
    }
    let mats = nblk.coefficient_matrices()?;
    let mut images = Vec::new();
    for m in &mats {
        for p in &pi {
            images.push(m.mul_vec(p));
        }
    }
    let img = column_space(&Matrix::from_cols(f, 3, &images));
    if img.len() != 1 {
        return Ok(None);
    }
    let (q1, q2, q3) = (pi[0].clone(), img[0].clone(), pi[1].clone());
    let q = Matrix::from_cols(f, 3, &[q1.clone(), q2.clone(), q3.clone()]);
    let Ok(qinv) = q.inverse() else {
        return Ok(None);
    };
    let m1 = nblk.mul_const_left(&qinv).mul_const_right(&q);
    let (b1, f1) = (m1.get(1, 0), m1.get(1, 2));
    let Some(lambda) = ratio(f, m1.get(0, 1), f1) else {
        return Ok(None);
    };
    if m1.get(2, 1) != &b1.scale(&lambda).neg() || f.is_zero(&lambda) {
        return Ok(None);
    }
    let q1 = q1.iter().map(|x| f.mul(x, &lambda)).collect::<Vec<_>>();
    let q3 = q3.iter().map(|x| f.neg(x)).collect::<Vec<_>>();
    let qq = Matrix::from_cols(f, 3, &[q1, q2, q3]);
    let t1 = t0.mul(&Matrix::embed(f, n, 0, &qq));
    let h1 = h.conjugate(&t1)?;
    let j1 = h1.jacobian();
    let coeffs = |p: &Poly| p.linear_coeffs()[3..].to_vec();
    let (bb, ff) = (coeffs(j1.get(1, 0)), coeffs(j1.get(0, 1)));
    if Matrix::from_rows(f, vec![bb.clone(), ff.clone()]).rank() != 2 {
        return Ok(None);
    }
    let y = Matrix::complete_basis(f, n - 3, &[bb, ff]);
    let r = y.transpose().inverse()?;
    Ok(Some(t1.mul(&Matrix::embed(f, n, 3, &r))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangular_input() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 3, &["0", "x1^2", "x1*x2"]).unwrap();
        assert_eq!(reduce_rk3_nilpotent(&h).unwrap().case_tag, 1);
    }

    #[test]
    fn second_display_survives_conjugation() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 5, &["x2*x5", "x1*x4 - x3*x5", "x2*x4", "0", "0"]).unwrap();
        assert_eq!(reduce_rk3_nilpotent(&h).unwrap().case_tag, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let t = Matrix::random_invertible(&q, 5, &mut rng);
            let g = h.conjugate(&t).unwrap();
            assert_eq!(reduce_rk3_nilpotent(&g).unwrap().case_tag, 2);
        }
    }

    #[test]
    fn third_display_in_char_two() {
        let f2 = Field::prime(2).unwrap();
        let pat = rk3np_pattern3(&f2, 6).unwrap();
        let h = pat.representative();
        assert_eq!(poly_rank(&h.jacobian()), 3);
        let cert = reduce_rk3_nilpotent(&h).unwrap();
        assert_eq!(cert.case_tag, 3);
    }
}

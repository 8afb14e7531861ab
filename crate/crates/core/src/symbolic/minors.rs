use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::quadmap::PolyMatrix;

/// Mⁿ = 0, by repeated squaring.
pub fn is_nilpotent(m: &PolyMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("nilpotency of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut p = m.clone();
    let mut e = 1;
    while e < n {
        if p.is_zero() {
            return Ok(true);
        }
        p = p.mul(&p);
        e *= 2;
    }
    Ok(p.is_zero())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Sum of the determinants of all k×k principal minor matrices.
pub fn principal_minor_sum(m: &PolyMatrix, k: usize) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::Dimension("principal minors of a non-square matrix".into()));
    }
    if k == 0 || k > m.rows() {
        return Err(Error::Precondition(format!("minor size {k} out of range 1..={}", m.rows())));
    }
    let mut acc = Poly::zero(m.field(), m.nvars());
    for s in subsets(m.rows(), k) {
        acc.add_assign(&m.submatrix(&s, &s).det());
    }
    Ok(acc)
}

pub fn all_principal_minors_zero(m: &PolyMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::Dimension("principal minors of a non-square matrix".into()));
    }
    for k in 1..=m.rows() {
        for s in subsets(m.rows(), k) {
            if !m.submatrix(&s, &s).det().is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::quadmap::QuadMap;

    #[test]
    fn nilpotency_examples() {
        let q = Field::rationals();
        let lower = PolyMatrix::parse(&q, 2, &[&["0", "0"], &["x1", "0"]]).unwrap();
        assert!(is_nilpotent(&lower).unwrap());
        assert!(!is_nilpotent(&PolyMatrix::identity(&q, 2, 2)).unwrap());
        assert!(is_nilpotent(&PolyMatrix::zeros(&q, 2, 2, 3)).is_err());
    }

    #[test]
    fn minor_sums() {
        let q = Field::rationals();
        let j = QuadMap::parse(&q, 2, &["x1^2", "0"]).unwrap().jacobian();
        assert_eq!(principal_minor_sum(&j, 1).unwrap().to_string(), "2*x1");
        assert!(principal_minor_sum(&j, 3).is_err());
        let h = QuadMap::parse(&q, 4, &["x1*x3 + x2*x4", "x2*x3 - x1*x4", "1/2*x3^2 + 1/2*x4^2", "1/2*x1^2 + 1/2*x2^2"]).unwrap();
        assert!(!all_principal_minors_zero(&h.jacobian()).unwrap());
    }
}

//! Normalization S·M·T = M̃^(1)L₁ + … + M̃^(n)L_n with M̃^(1) = diag(I_r, 0).

use crate::algebra::{Elem, Embedding, Field, FieldDescriptor, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::{PolyMatrix, QuadMap};
use crate::symbolic::poly_rank;

/// Upper bound on grid points tried before giving up.
pub const POINT_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionPolicy {
    /// Extend exactly when |K| < r.
    Auto,
    /// Search the base field only.
    Never,
}

#[derive(Clone, Debug)]
pub struct IrlemResult {
    /// The working field: K, or an extension of K.
    pub field: Field,
    pub s: Matrix,
    pub t: Matrix,
    pub rank: usize,
    /// v with rk JH(v) = r and L₁(v) = 1, L_i(v) = 0 for i ≥ 2.
    pub point: Vec<Elem>,
    pub coefficient_matrices: Vec<Matrix>,
    /// Coefficient vectors of L₁, …, L_n.
    pub forms: Vec<Vec<Elem>>,
    pub field_extension_used: Option<FieldDescriptor>,
}

impl IrlemResult {
    /// Recomputes S·JH·T and the decomposition over the working field.
    pub fn check(&self, h: &QuadMap) -> bool {
        let f = &self.field;
        let h = if h.field() == f {
            h.clone()
        } else {
            match Embedding::new(h.field(), f) {
                Ok(e) => h.map_field(&e),
                Err(_) => return false,
            }
        };
        let n = h.nvars();
        let m = h.ncomps();
        if self.coefficient_matrices.len() != n || self.forms.len() != n {
            return false;
        }
        if !self.s.is_invertible() || !self.t.is_invertible() {
            return false;
        }
        if Matrix::from_rows(f, self.forms.clone()).rank() != n {
            return false;
        }
        let mut lead = Matrix::zeros(f, m, n);
        for i in 0..self.rank {
            lead.set(i, i, f.one());
        }
        if self.coefficient_matrices[0] != lead {
            return false;
        }
        let lhs = h.jacobian().mul_const_left(&self.s).mul_const_right(&self.t);
        let mut rhs = PolyMatrix::zeros(f, n, m, n);
        for (mi, li) in self.coefficient_matrices.iter().zip(&self.forms) {
            let form = Poly::linear(f, li);
            rhs = rhs.add(&PolyMatrix::from_const(mi, n).map_entries(|p| p.mul(&form)));
        }
        lhs == rhs
    }
}

fn jacobian_at(mats: &[Matrix], v: &[Elem]) -> Matrix {
    let f = mats[0].field();
    let mut acc = Matrix::zeros(f, mats[0].rows(), mats[0].cols());
    for (m, c) in mats.iter().zip(v) {
        if !f.is_zero(c) {
            acc = acc.add(&m.scale(c));
        }
    }
    acc
}

/// First v in ascending lexicographic order with rk JH(v) = r: over all of Kⁿ
/// for finite K, over {0,…,r}ⁿ for ℚ.
pub fn find_point(h: &QuadMap, r: usize) -> Result<Option<Vec<Elem>>> {
    let f = h.field();
    let n = h.nvars();
    let mats = h.jacobian_coefficients();
    let base = match f.size() {
        Some(q) => q,
        None => r as u64 + 1,
    };
    let total = base.checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > POINT_BUDGET {
        return Err(Error::Budget(format!("point search needs {total} evaluations")));
    }
    for idx in 1..total {
        let mut v = vec![f.zero(); n];
        let mut t = idx;
        for slot in v.iter_mut().rev() {
            *slot = if f.size().is_some() {
                f.element(t % base)
            } else {
                f.from_i64((t % base) as i64)
            };
            t /= base;
        }
        if jacobian_at(&mats, &v).rank() == r {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Smallest extension degree k' (a multiple of [K:F_p]) with p^k' ≥ r.
fn extension_for(f: &Field, r: usize) -> Result<Field> {
    let p = f.characteristic();
    let d = f.degree();
    let mut k = 2 * d;
    while (p as f64).powi(k as i32) < r as f64 {
        k += d;
    }
    Field::extension(p, k)
}

pub fn irlem_normalize(h: &QuadMap) -> Result<IrlemResult> {
    irlem_normalize_with(h, ExtensionPolicy::Auto)
}

pub fn irlem_normalize_with(h: &QuadMap, policy: ExtensionPolicy) -> Result<IrlemResult> {
    let j = h.jacobian();
    let r = poly_rank(&j);
    if r == 0 {
        return Err(Error::Precondition("Jacobian is zero, no rank to normalize".into()));
    }
    let small = h.field().size().is_some_and(|q| q < r as u64);
    let (work, ext) = if small && policy == ExtensionPolicy::Auto {
        let big = extension_for(h.field(), r)?;
        let emb = Embedding::new(h.field(), &big)?;
        (h.map_field(&emb), Some(big.descriptor().clone()))
    } else {
        (h.clone(), None)
    };
    let Some(v) = find_point(&work, r)? else {
        return Err(Error::NoCase(format!(
            "no point v over {} with rk JH(v) = {r}",
            work.field().name()
        )));
    };
    let res = normalize_at(&work, r, v, ext);
    debug_assert!(res.check(h));
    Ok(res)
}

fn normalize_at(h: &QuadMap, r: usize, v: Vec<Elem>, ext: Option<FieldDescriptor>) -> IrlemResult {
    let f = h.field().clone();
    let n = h.nvars();
    let mats = h.jacobian_coefficients();
    let at = jacobian_at(&mats, &v);
    let (red, s, pivots) = at.rref_with_transform();
    let mut tcols = Vec::with_capacity(n);
    for &p in &pivots {
        let mut e = vec![f.zero(); n];
        e[p] = f.one();
        tcols.push(e);
    }
    for j in 0..n {
        if pivots.contains(&j) {
            continue;
        }
        let mut e = vec![f.zero(); n];
        e[j] = f.one();
        for (i, &p) in pivots.iter().enumerate() {
            e[p] = f.neg(red.get(i, j));
        }
        tcols.push(e);
    }
    let t = Matrix::from_cols(&f, n, &tcols);
    let w = Matrix::complete_basis(&f, n, std::slice::from_ref(&v));
    let winv = w.inverse().expect("completed basis is invertible");
    let forms = winv.to_rows();
    let coefficient_matrices = (0..n)
        .map(|i| {
            let mut acc = Matrix::zeros(&f, h.ncomps(), n);
            for (tt, m) in mats.iter().enumerate() {
                let c = w.get(tt, i);
                if !f.is_zero(c) {
                    acc = acc.add(&m.scale(c));
                }
            }
            s.mul(&acc).mul(&t)
        })
        .collect();
    IrlemResult {
        field: f,
        s,
        t,
        rank: r,
        point: v,
        coefficient_matrices,
        forms,
        field_extension_used: ext,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 2, &["x1^2", "0"]).unwrap();
        let res = irlem_normalize(&h).unwrap();
        assert_eq!(res.rank, 1);
        assert!(res.check(&h));
        assert!(res.field_extension_used.is_none());
    }

    #[test]
    fn rk3calc_map_over_q() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 4, &["x1*x3 + x2*x4", "x2*x3 - x1*x4", "1/2*x3^2 + 1/2*x4^2", "1/2*x1^2 + 1/2*x2^2"]).unwrap();
        let res = irlem_normalize(&h).unwrap();
        assert_eq!(res.rank, 3);
        assert!(res.check(&h));
    }

    #[test]
    fn small_field_extends() {
        let f2 = Field::prime(2).unwrap();
        let h = QuadMap::parse(&f2, 4, &["x1*x2", "x1*x3", "x1*x4", "x2*x3 + x3*x4"]).unwrap();
        let res = irlem_normalize(&h).unwrap();
        assert_eq!(res.rank, 3);
        assert_eq!(res.field.size(), Some(4));
        assert!(res.field_extension_used.is_some());
        assert!(res.check(&h));
    }

    #[test]
    fn zero_jacobian_is_an_error() {
        let f2 = Field::prime(2).unwrap();
        let h = QuadMap::parse(&f2, 2, &["x1^2", "x2^2"]).unwrap();
        assert!(irlem_normalize(&h).is_err());
    }
}

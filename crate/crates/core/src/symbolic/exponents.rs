//! Image and preimage exponents of vectors under nilpotent matrices.

use crate::algebra::{Elem, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::PolyMatrix;

use super::elim::solve;
use super::minors::is_nilpotent;

#[derive(Clone, Debug)]
pub struct ExponentReport {
    pub ie: Option<usize>,
    pub pe: Option<usize>,
    /// M^ie·v, which is nonzero.
    pub ie_witness: Option<Vec<Poly>>,
    /// w with M^pe·w = v, as numerators over a common denominator.
    pub pe_witness: Option<(Vec<Poly>, Poly)>,
}

fn check(m: &PolyMatrix, v: &[Poly]) -> Result<()> {
    if !is_nilpotent(m)? {
        return Err(Error::Precondition("matrix is not nilpotent".into()));
    }
    if v.len() != m.cols() {
        return Err(Error::Dimension("vector length".into()));
    }
    if v.iter().all(|p| p.is_zero()) {
        return Err(Error::Precondition("vector is zero".into()));
    }
    Ok(())
}

/// max { i : Mⁱv ≠ 0 }.
pub fn image_exponent(m: &PolyMatrix, v: &[Poly]) -> Result<usize> {
    Ok(image_exponent_witness(m, v)?.0)
}

fn image_exponent_witness(m: &PolyMatrix, v: &[Poly]) -> Result<(usize, Vec<Poly>)> {
    check(m, v)?;
    let mut cur = v.to_vec();
    let mut i = 0;
    loop {
        let next = m.mul_vec(&cur);
        if next.iter().all(|p| p.is_zero()) {
            return Ok((i, cur));
        }
        cur = next;
        i += 1;
    }
}

/// max { i : Mⁱw = v solvable over K(x) }.
pub fn preimage_exponent(m: &PolyMatrix, v: &[Poly]) -> Result<usize> {
    Ok(preimage_exponent_witness(m, v)?.0)
}

fn preimage_exponent_witness(m: &PolyMatrix, v: &[Poly]) -> Result<(usize, (Vec<Poly>, Poly))> {
    check(m, v)?;
    let f = m.field();
    let one = Poly::constant(f, m.nvars(), f.one());
    let mut best = (0, (v.to_vec(), one));
    let mut power = m.clone();
    let mut i = 1;
    while !power.is_zero() {
        match solve(&power, v) {
            Some(w) => best = (i, w),
            None => break,
        }
        power = power.mul(m);
        i += 1;
    }
    Ok(best)
}

pub fn exponent_report(m: &PolyMatrix, v: &[Poly]) -> Result<ExponentReport> {
    let (ie, iw) = image_exponent_witness(m, v)?;
    let (pe, pw) = preimage_exponent_witness(m, v)?;
    Ok(ExponentReport {
        ie: Some(ie),
        pe: Some(pe),
        ie_witness: Some(iw),
        pe_witness: Some(pw),
    })
}

/// x as a vector of polynomials.
pub fn generic_point(m: &PolyMatrix) -> Vec<Poly> {
    (0..m.cols()).map(|i| Poly::var(m.field(), m.nvars(), i)).collect()
}

fn lift(m: &Matrix, v: &[Elem]) -> (PolyMatrix, Vec<Poly>) {
    let pm = PolyMatrix::from_const(m, 0);
    let pv = v.iter().map(|c| Poly::constant(m.field(), 0, c.clone())).collect();
    (pm, pv)
}

pub fn image_exponent_const(m: &Matrix, v: &[Elem]) -> Result<usize> {
    let (pm, pv) = lift(m, v);
    image_exponent(&pm, &pv)
}

pub fn preimage_exponent_const(m: &Matrix, v: &[Elem]) -> Result<usize> {
    let (pm, pv) = lift(m, v);
    preimage_exponent(&pm, &pv)
}

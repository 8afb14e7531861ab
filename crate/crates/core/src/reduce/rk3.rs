//! Rank 3: the five normal forms.

use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_diagonalize, Matrix};
use crate::quadmap::{pair_index, QuadMap};
use crate::symbolic::poly_rank;

use super::certificate::{Certificate, Theorem};
use super::invariants::{column_confinement, essential_vars, row_rank, row_reduction};
use super::irlem::irlem_normalize;
use super::rkr::{colspace_candidates, lift_rows, split_off, tail};

pub fn reduce_rk3(h: &QuadMap) -> Result<Certificate> {
    let f = h.field();
    let r = poly_rank(&h.jacobian());
    if r != 3 {
        return Err(Error::Precondition(format!("rank is {r}, not 3")));
    }
    let odd = f.characteristic() != 2;
    let (s, rho) = row_reduction(h);
    let (t, kappa) = column_confinement(h);
    if rho <= 3 {
        return Certificate::new(Theorem::Rk3, 1, s, t).verified(h);
    }
    if let Some(c) = hyperplane_case(h)? {
        return c.verified(h);
    }
    if (odd && kappa <= 3) || (!odd && kappa <= 4) {
        return Certificate::new(Theorem::Rk3, 4, s, t).verified(h);
    }
    if odd && rho == 4 && kappa == 4 {
        let (s5, t5, c) = case_five(h, &s, &t)?;
        return Certificate::new(Theorem::Rk3, 5, s5, t5).with_parameter("c", c).verified(h);
    }
    Err(Error::NoCase(format!("rank 3: {rho} independent rows, {kappa} essential columns")))
}

/// Tags 2 and 3: a constant vector u in the column space splits off one
/// component, and the rest spans all quadratic forms in two variables
/// (or all square-free ones in three variables, in characteristic 2).
fn hyperplane_case(h: &QuadMap) -> Result<Option<Certificate>> {
    let f = h.field();
    let n = h.nvars();
    let odd = f.characteristic() != 2;
    let vars = if odd { 2 } else { 3 };
    if n < vars {
        return Ok(None);
    }
    for u in colspace_candidates(h) {
        let su = split_off(f, &u);
        let g = tail(&h.compose_unchecked(&su, &Matrix::identity(f, n)), 1);
        if row_rank(&g) != 3 || essential_vars(&g) > vars {
            continue;
        }
        let (sg, _) = row_reduction(&g);
        let (tg, _) = column_confinement(&g);
        let g2 = g.compose_unchecked(&sg, &tg);
        let monos: Vec<(usize, usize)> = if odd {
            vec![(0, 0), (0, 1), (1, 1)]
        } else {
            vec![(0, 1), (0, 2), (1, 2)]
        };
        let coeffs = Matrix::from_rows(
            f,
            (0..3)
                .map(|k| monos.iter().map(|&(a, b)| g2.tables()[k][pair_index(n, a, b)].clone()).collect())
                .collect(),
        );
        let Ok(cinv) = coeffs.inverse() else {
            continue;
        };
        let target = if odd {
            let half = f.half()?;
            Matrix::diagonal(f, &[half.clone(), f.one(), half])
        } else {
            Matrix::identity(f, 3)
        };
        let fix = target.mul(&cinv);
        let sg = lift_rows(f, 0, &fix, &sg);
        let s = lift_rows(f, 1, &sg, &su);
        let tag = if odd { 2 } else { 3 };
        return Ok(Some(Certificate::new(Theorem::Rk3, tag, s, tg)));
    }
    Ok(None)
}

/// Running product S, T with current map S·H(Tx); steps act on the leading 4×4 block.
struct Chain<'a> {
    h: &'a QuadMap,
    s: Matrix,
    t: Matrix,
    cur: QuadMap,
}

impl<'a> Chain<'a> {
    fn new(h: &'a QuadMap, s: Matrix, t: Matrix) -> Chain<'a> {
        let cur = h.compose_unchecked(&s, &t);
        Chain { h, s, t, cur }
    }

    /// cur ← a·cur(b·x) for 4×4 blocks a, b.
    fn step(&mut self, a: &Matrix, b: &Matrix) {
        let f = self.h.field();
        let big_a = Matrix::embed(f, self.s.rows(), 0, a);
        let big_b = Matrix::embed(f, self.t.rows(), 0, b);
        self.s = big_a.mul(&self.s);
        self.t = self.t.mul(&big_b);
        self.cur = self.h.compose_unchecked(&self.s, &self.t);
    }

    /// The leading 4 components in the first 4 variables.
    fn block(&self) -> QuadMap {
        let n = self.cur.nvars();
        let f = self.cur.field();
        let tables = (0..4)
            .map(|k| {
                let mut row = Vec::new();
                for a in 0..4 {
                    for b in a..4 {
                        row.push(self.cur.tables()[k][pair_index(n, a, b)].clone());
                    }
                }
                row
            })
            .collect();
        QuadMap::from_tables(f, 4, tables).expect("4×4 block")
    }

    /// Coefficient of x_v in entry (i, j) of the Jacobian of the current map.
    fn jac_coeff(&self, i: usize, j: usize, v: usize) -> Elem {
        let f = self.cur.field();
        let c = self.cur.coeff(i, j, v).clone();
        if j == v {
            f.add(&c, &c)
        } else {
            c
        }
    }
}

fn fail(step: &str) -> Error {
    Error::NoCase(format!("rank-3 reduction failed at {step}"))
}

/// Constructive reduction to x₁x₃ + c x₂x₄, x₂x₃ − x₁x₄, ½x₃² + (c/2)x₄², ½x₁² + (c/2)x₂².
fn case_five(h: &QuadMap, s0: &Matrix, t0: &Matrix) -> Result<(Matrix, Matrix, Elem)> {
    let f: Field = h.field().clone();
    let mut ch = Chain::new(h, s0.clone(), t0.clone());

    // point v with JF(v) of rank 3, normalized to JF(w) = diag(1,1,1,0)
    let ir = irlem_normalize(&ch.block())?;
    if ir.field_extension_used.is_some() {
        return Err(fail("point search"));
    }
    let t1 = ir.t.clone();
    let w = t1.inverse()?.mul_vec(&ir.point);
    ch.step(&ir.s, &t1);

    // last component in x₁, x₂, x₃ with Hessian congruent to diag(a, b, 0)
    let blk = ch.block();
    let hess4 = blk.hessian(3);
    if (0..4).any(|i| !f.is_zero(hess4.get(i, 3))) {
        return Err(fail("D = 0"));
    }
    let h3 = hess4.submatrix(&[0, 1, 2], &[0, 1, 2]);
    let (u, d) = symmetric_diagonalize(&h3)?;
    let mut order: Vec<usize> = (0..3).filter(|&i| !f.is_zero(&d[i])).collect();
    if order.len() != 2 {
        return Err(fail("rank of the last component"));
    }
    order.extend((0..3).filter(|&i| f.is_zero(&d[i])));
    // column j of U·P is column order[j] of U
    let u = u.mul(&Matrix::permutation(&f, &order));
    let (da, db) = (d[order[0]].clone(), d[order[1]].clone());
    let c = f.div(&db, &da)?;
    let mut a2 = Matrix::embed(&f, 4, 0, &u.inverse()?);
    a2.set(3, 3, f.inv(&da)?);
    let b2 = Matrix::embed(&f, 4, 0, &u);
    ch.step(&a2, &b2);
    let v = b2.inverse()?.mul_vec(&w);

    // column 3 becomes (x₁, x₂, x₃, 0)ᵗ
    if !f.is_zero(&v[0]) || !f.is_zero(&v[1]) || f.is_zero(&v[2]) {
        return Err(fail("the kernel point"));
    }
    let v3 = v[2].clone();
    let s3 = Matrix::diagonal(&f, &[v3.clone(), v3.clone(), v3.clone(), f.one()]);
    let mut t3 = Matrix::identity(&f, 4);
    for i in 0..4 {
        t3.set(i, 2, f.div(&v[i], &v3)?);
    }
    let probe = {
        let mut trial = Chain::new(h, ch.s.clone(), ch.t.clone());
        trial.step(&s3, &t3);
        trial
    };
    // B₁₁ = μ c x₂, B₂₁ = −μ x₁; rescale x₄ by 1/μ
    let mu = f.neg(&probe.jac_coeff(1, 3, 0));
    if f.is_zero(&mu) {
        return Err(fail("the last column"));
    }
    t3.set(3, 3, f.inv(&mu)?);
    ch.step(&s3, &t3);

    // B₃₁ = p₁x₁ + p₂x₂ + p₄x₄ → c̃ x₄
    let p1 = ch.jac_coeff(2, 3, 0);
    let p2 = ch.jac_coeff(2, 3, 1);
    let mut rr = Matrix::identity(&f, 4);
    rr.set(2, 0, f.neg(&f.div(&p2, &c)?));
    rr.set(2, 1, p1);
    ch.step(&rr, &rr.inverse()?);

    // clear the x₁ coefficients of A₁₁, A₂₁, A₃₁ against the last row
    let mut clean = Matrix::identity(&f, 4);
    for i in 0..3 {
        clean.set(i, 3, f.neg(&ch.jac_coeff(i, 0, 0)));
    }
    ch.step(&clean, &Matrix::identity(&f, 4));
    Ok((ch.s, ch.t, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::certificate_check;

    fn display(f: &Field, c: i64) -> QuadMap {
        let s = |t: &str| t.replace('c', &c.to_string());
        QuadMap::parse(
            f,
            4,
            &[
                &s("x1*x3 + c*x2*x4"),
                "x2*x3 - x1*x4",
                &s("1/2*x3^2 + c/2*x4^2"),
                &s("1/2*x1^2 + c/2*x2^2"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn case_five_display_over_f7() {
        let f7 = Field::prime(7).unwrap();
        let h = display(&f7, 2);
        let cert = reduce_rk3(&h).unwrap();
        assert_eq!(cert.case_tag, 5);
        assert!(certificate_check(&h, &cert));
    }

    #[test]
    fn case_two_display() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 3, &["x3^2 + x1*x3", "1/2*x1^2", "x1*x2", "1/2*x2^2"]).unwrap();
        let cert = reduce_rk3(&h).unwrap();
        assert_eq!(cert.case_tag, 2);
    }

    #[test]
    fn case_five_survives_scrambling() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (f, c) in [(Field::prime(5).unwrap(), 2), (Field::prime(3).unwrap(), 1), (Field::rationals(), -3)] {
            let base = display(&f, c).padded(5, 6);
            for _ in 0..20 {
                let (h, _, _) = base.scramble(&mut rng);
                let cert = reduce_rk3(&h).unwrap();
                assert_eq!(cert.case_tag, 5, "{h}");
            }
        }
    }
}

//! Fraction-free elimination over K[x]: rank, kernels and solving over K(x).

use crate::algebra::Poly;
use crate::quadmap::PolyMatrix;

/// Rank over K(x) by Bareiss elimination.
pub fn poly_rank(m: &PolyMatrix) -> usize {
    let mut e = Elim::new(m);
    e.run(false);
    e.pivots.len()
}

/// Result of fraction-free Gauss–Jordan: every pivot entry equals `det`.
pub struct Elim {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Poly>,
    pub pivots: Vec<usize>,
    pub det: Poly,
}

impl Elim {
    pub fn new(m: &PolyMatrix) -> Elim {
        let mut a = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            a.extend(m.row(i));
        }
        Elim {
            rows: m.rows(),
            cols: m.cols(),
            a,
            pivots: Vec::new(),
            det: Poly::constant(m.field(), m.nvars(), m.field().one()),
        }
    }

    fn at(&self, i: usize, j: usize) -> &Poly {
        &self.a[i * self.cols + j]
    }

    /// With `jordan`, rows above the pivot are cleared too.
    pub fn run(&mut self, jordan: bool) {
        let c = self.cols;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self.at(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..c {
                    self.a.swap(p * c + j, row * c + j);
                }
            }
            let piv = self.at(row, col).clone();
            let targets: Vec<usize> = if jordan {
                (0..self.rows).filter(|&i| i != row).collect()
            } else {
                (row + 1..self.rows).collect()
            };
            for i in targets {
                let factor = self.at(i, col).clone();
                for j in 0..c {
                    if j == col {
                        continue;
                    }
                    let mut v = piv.mul(self.at(i, j));
                    if !factor.is_zero() {
                        v = v.sub(&factor.mul(self.at(row, j)));
                    }
                    self.a[i * c + j] = v.exact_div(&self.det).expect("fraction-free step divides exactly");
                }
                self.a[i * c + col] = Poly::zero(piv.field(), piv.nvars());
            }
            self.det = piv;
            self.pivots.push(col);
            row += 1;
        }
    }
}

/// Basis of the right kernel over K(x), with polynomial entries.
pub fn nullspace(m: &PolyMatrix) -> Vec<Vec<Poly>> {
    let mut e = Elim::new(m);
    e.run(true);
    let f = m.field();
    let mut out = Vec::new();
    for free in 0..m.cols() {
        if e.pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Poly::zero(f, m.nvars()); m.cols()];
        v[free] = e.det.clone();
        for (i, &pc) in e.pivots.iter().enumerate() {
            v[pc] = e.at(i, free).neg();
        }
        out.push(v);
    }
    out
}

/// Some w over K(x) with m·w = b, as (numerators, common denominator).
pub fn solve(m: &PolyMatrix, b: &[Poly]) -> Option<(Vec<Poly>, Poly)> {
    let f = m.field();
    let n = m.nvars();
    let mut aug = PolyMatrix::zeros(f, n, m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols(), b[i].clone());
    }
    let mut e = Elim::new(&aug);
    e.run(true);
    if e.pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut w = vec![Poly::zero(f, n); m.cols()];
    for (i, &pc) in e.pivots.iter().enumerate() {
        w[pc] = e.at(i, m.cols()).clone();
    }
    Some((w, e.det))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn kernel_of_singular_matrix() {
        let q = Field::rationals();
        let m = PolyMatrix::parse(&q, 3, &[&["x1", "x2", "x3"], &["x2", "x1", "0"]]).unwrap();
        assert_eq!(poly_rank(&m), 2);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        let prod = m.mul_vec(&k[0]);
        assert!(prod.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn solve_rational_function_system() {
        let q = Field::rationals();
        let m = PolyMatrix::parse(&q, 2, &[&["x1", "x2"], &["0", "x1"]]).unwrap();
        let b = vec![Poly::parse(&q, 2, "1").unwrap(), Poly::parse(&q, 2, "x2").unwrap()];
        let (w, d) = solve(&m, &b).unwrap();
        let lhs = m.mul_vec(&w);
        for (l, r) in lhs.iter().zip(&b) {
            assert_eq!(*l, r.mul(&d));
        }
        let sing = PolyMatrix::parse(&q, 2, &[&["x1", "x2"], &["x1", "x2"]]).unwrap();
        assert!(solve(&sing, &b).is_none());
    }
}

//! Congruence normal forms TᵗMT = P·diag(D) for symmetric and alternating
//! matrices.

use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};

use super::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CongruenceMode {
    Symmetric,
    AlternatingZeroDiag,
}

#[derive(Clone, Debug)]
pub struct CongruenceResult {
    pub t: Matrix,
    /// Involution with P e_i = e_{perm[i]}.
    pub perm: Vec<usize>,
    pub d: Vec<Elem>,
}

impl CongruenceResult {
    fn new(m: &Matrix, t: Matrix, perm: Vec<usize>, d: Vec<Elem>) -> CongruenceResult {
        let r = CongruenceResult { t, perm, d };
        assert!(r.holds_for(m), "congruence identity violated");
        r
    }

    pub fn permutation_matrix(&self) -> Matrix {
        Matrix::permutation(self.t.field(), &self.perm)
    }

    pub fn target(&self) -> Matrix {
        let f = self.t.field();
        self.permutation_matrix().mul(&Matrix::diagonal(f, &self.d))
    }

    pub fn holds_for(&self, m: &Matrix) -> bool {
        self.t.transpose().mul(m).mul(&self.t) == self.target()
    }

    pub fn rank(&self) -> usize {
        let f = self.t.field();
        self.d.iter().filter(|x| !f.is_zero(x)).count()
    }
}

struct Work {
    f: Field,
    m: Matrix,
    t: Matrix,
}

impl Work {
    /// col_j -= beta·col_s on T, and the matching congruence on M.
    fn col_op(&mut self, j: usize, s: usize, beta: &Elem) {
        debug_assert!(s > j, "transform must stay lower triangular");
        let f = &self.f;
        if f.is_zero(beta) {
            return;
        }
        let n = self.m.rows();
        for k in 0..n {
            let v = f.sub(self.m.get(k, j), &f.mul(beta, self.m.get(k, s)));
            self.m.set(k, j, v);
        }
        for k in 0..n {
            let v = f.sub(self.m.get(j, k), &f.mul(beta, self.m.get(s, k)));
            self.m.set(j, k, v);
        }
        for k in 0..n {
            let v = f.sub(self.t.get(k, j), &f.mul(beta, self.t.get(k, s)));
            self.t.set(k, j, v);
        }
    }
}

/// Processes the last active column: zero column, nonzero corner pivot, or a
/// pair of off-diagonal pivots at the lowest nonzero entry.
pub fn congruence_normalize(m: &Matrix, mode: CongruenceMode) -> Result<CongruenceResult> {
    if !m.is_square() {
        return Err(Error::Dimension("congruence needs a square matrix".into()));
    }
    match mode {
        CongruenceMode::Symmetric if !m.is_symmetric() => {
            return Err(Error::Precondition("matrix is not symmetric".into()))
        }
        CongruenceMode::AlternatingZeroDiag if !m.is_alternating() => {
            return Err(Error::Precondition("matrix is not alternating with zero diagonal".into()))
        }
        _ => {}
    }
    let f = m.field().clone();
    let n = m.rows();
    let mut w = Work {
        f: f.clone(),
        m: m.clone(),
        t: Matrix::identity(&f, n),
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let mut d = vec![f.zero(); n];
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&l) = active.last() {
        let nonzero: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| !f.is_zero(w.m.get(i, l)))
            .collect();
        if nonzero.is_empty() {
            active.pop();
            continue;
        }
        let corner = w.m.get(l, l).clone();
        if !f.is_zero(&corner) {
            for &j in &active[..active.len() - 1] {
                let beta = f.div(w.m.get(l, j), &corner)?;
                w.col_op(j, l, &beta);
            }
            d[l] = w.m.get(l, l).clone();
            active.pop();
            continue;
        }
        let i = *nonzero.last().unwrap();
        let a = w.m.get(l, i).clone();
        let b = w.m.get(i, l).clone();
        for &j in active.iter().filter(|&&j| j < i) {
            let beta = f.div(w.m.get(l, j), &a)?;
            w.col_op(j, i, &beta);
        }
        for &j in active.iter().filter(|&&j| j != i && j != l) {
            let gamma = f.div(w.m.get(i, j), &b)?;
            w.col_op(j, l, &gamma);
        }
        let diag = w.m.get(i, i).clone();
        if !f.is_zero(&diag) {
            if !f.has_half() {
                return Err(Error::Congruence(format!(
                    "diagonal entry {} at index {} cannot be cleared in characteristic 2",
                    f.format(&diag),
                    i + 1
                )));
            }
            let gamma = f.div(&diag, &f.mul(&f.from_i64(2), &a))?;
            w.col_op(i, l, &gamma);
        }
        perm[i] = l;
        perm[l] = i;
        d[l] = w.m.get(i, l).clone();
        d[i] = w.m.get(l, i).clone();
        active.retain(|&x| x != i && x != l);
    }
    Ok(CongruenceResult::new(m, w.t, perm, d))
}

/// TᵗMT = diag(D) in characteristic ≠ 2, resolving each 2-cycle with
/// [[1,1],[-1,1]]·[[0,c],[c,0]]·[[1,-1],[1,1]] = diag(2c,-2c).
pub fn symmetric_diagonalize(m: &Matrix) -> Result<(Matrix, Vec<Elem>)> {
    let f = m.field().clone();
    if !f.has_half() {
        return Err(Error::UnsupportedCharacteristic(
            "symmetric diagonalization needs characteristic ≠ 2".into(),
        ));
    }
    let res = congruence_normalize(m, CongruenceMode::Symmetric)?;
    let n = m.rows();
    let mut t2 = Matrix::identity(&f, n);
    let mut d = res.d.clone();
    for i in 0..n {
        let l = res.perm[i];
        if l <= i {
            continue;
        }
        let c = res.d[l].clone();
        t2.set(i, l, f.from_i64(-1));
        t2.set(l, i, f.one());
        let two_c = f.mul(&f.from_i64(2), &c);
        d[i] = two_c.clone();
        d[l] = f.neg(&two_c);
    }
    let t = res.t.mul(&t2);
    assert_eq!(
        t.transpose().mul(m).mul(&t),
        Matrix::diagonal(&f, &d),
        "diagonalization identity violated"
    );
    Ok((t, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn is_unit_lower(t: &Matrix) -> bool {
        let f = t.field();
        (0..t.rows()).all(|i| {
            f.is_one(t.get(i, i)) && (i + 1..t.cols()).all(|j| f.is_zero(t.get(i, j)))
        })
    }

    #[test]
    fn already_normal_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_i64(&f2, &[vec![0, 1], vec![1, 0]]);
        let r = congruence_normalize(&m, CongruenceMode::Symmetric).unwrap();
        assert!(r.t.is_identity());
        assert_eq!(r.perm, vec![1, 0]);
        assert_eq!(r.d, vec![f2.one(), f2.one()]);
    }

    #[test]
    fn alternating_two_by_two() {
        let q = Field::rationals();
        let m = Matrix::from_i64(&q, &[vec![0, 1], vec![-1, 0]]);
        let r = congruence_normalize(&m, CongruenceMode::AlternatingZeroDiag).unwrap();
        assert_eq!(r.rank(), 2);
        assert_eq!(r.perm, vec![1, 0]);
    }

    #[test]
    fn all_ones_rank_one() {
        let q = Field::rationals();
        let m = Matrix::from_i64(&q, &[vec![1, 1], vec![1, 1]]);
        let r = congruence_normalize(&m, CongruenceMode::Symmetric).unwrap();
        assert!(r.holds_for(&m));
        assert!(is_unit_lower(&r.t));
        assert_eq!(r.rank(), 1);
    }

    #[test]
    fn char_two_obstruction() {
        // No unit lower triangular T works here: TᵗMT = M for all of them.
        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_i64(&f2, &[vec![1, 1], vec![1, 0]]);
        for t10 in 0..2 {
            let t = Matrix::from_i64(&f2, &[vec![1, 0], vec![t10, 1]]);
            assert_eq!(t.transpose().mul(&m).mul(&t), m);
        }
        assert!(matches!(
            congruence_normalize(&m, CongruenceMode::Symmetric),
            Err(Error::Congruence(_))
        ));
    }

    #[test]
    fn diagonalize_off_diagonal_pair() {
        let q = Field::rationals();
        let m = Matrix::from_i64(&q, &[vec![0, 3], vec![3, 0]]);
        let (_, d) = symmetric_diagonalize(&m).unwrap();
        assert_eq!(d, vec![q.from_i64(6), q.from_i64(-6)]);
        let diag = Matrix::from_i64(&q, &[vec![2, 0], vec![0, 5]]);
        let (t, d) = symmetric_diagonalize(&diag).unwrap();
        assert!(t.is_identity());
        assert_eq!(d, vec![q.from_i64(2), q.from_i64(5)]);
        let f2 = Field::prime(2).unwrap();
        assert!(symmetric_diagonalize(&Matrix::identity(&f2, 2)).is_err());
    }

    #[test]
    fn random_symmetric_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let mut m = Matrix::zeros(&f5, 5, 5);
            for i in 0..5 {
                for j in i..5 {
                    let v = f5.random(&mut rng);
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            let (t, d) = symmetric_diagonalize(&m).unwrap();
            assert!(t.is_invertible());
            assert_eq!(d.iter().filter(|x| !f5.is_zero(x)).count(), m.rank());
        }
    }

    #[test]
    fn alternating_rank_is_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in [Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::rationals()] {
            for _ in 0..100 {
                let n = rng.gen_range(1..=8);
                let mut m = Matrix::zeros(&f, n, n);
                for i in 0..n {
                    for j in i + 1..n {
                        let v = f.random(&mut rng);
                        m.set(j, i, f.neg(&v));
                        m.set(i, j, v);
                    }
                }
                let r = congruence_normalize(&m, CongruenceMode::AlternatingZeroDiag).unwrap();
                assert!(is_unit_lower(&r.t));
                assert_eq!(r.rank() % 2, 0);
                assert_eq!(r.rank(), m.rank());
                assert!((0..n).all(|i| f.is_zero(&r.d[i]) || r.perm[i] != i));
            }
        }
    }
}

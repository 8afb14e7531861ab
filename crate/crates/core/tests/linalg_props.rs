mod common;

use common::{field, rng};
use proptest::prelude::*;
use quadmap::linalg::{congruence_normalize, symmetric_diagonalize, CongruenceMode, Matrix};
use rand::Rng;

/// Rank from scratch by Gaussian elimination, independent of the library's echelon form.
fn naive_rank(m: &Matrix) -> usize {
    let f = m.field();
    let mut a = m.to_rows();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = f.inv(&a[rank][c]).unwrap();
        for i in 0..a.len() {
            if i != rank && !f.is_zero(&a[i][c]) {
                let k = f.mul(&a[i][c], &inv);
                for j in 0..m.cols() {
                    let d = f.mul(&k, &a[rank][j]);
                    a[i][j] = f.sub(&a[i][j], &d);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn low_rank(f: &quadmap::algebra::Field, r: usize, c: usize, k: usize, rg: &mut rand_chacha::ChaCha8Rng) -> Matrix {
    let a = Matrix::random(f, r, k, rg);
    let b = Matrix::random(f, k, c, rg);
    a.mul(&b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rank_is_invariant_under_equivalence(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let (rows, cols) = (r.gen_range(1..6), r.gen_range(1..6));
        let m = low_rank(&f, rows, cols, r.gen_range(0..5), &mut r);
        let s = Matrix::random_invertible(&f, rows, &mut r);
        let t = Matrix::random_invertible(&f, cols, &mut r);
        prop_assert_eq!(m.rank(), naive_rank(&m));
        prop_assert_eq!(s.mul(&m).mul(&t).rank(), m.rank());
    }

    #[test]
    fn kernel_vectors_are_annihilated(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let m = low_rank(&f, r.gen_range(1..6), r.gen_range(1..6), r.gen_range(0..4), &mut r);
        let k = m.kernel();
        prop_assert_eq!(k.len() + m.rank(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| f.is_zero(x)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn alternating_forms_have_even_rank(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let n = r.gen_range(1..9);
        let a = Matrix::random(&f, n, n, &mut r);
        let m = a.sub(&a.transpose());
        let m = if f.characteristic() == 2 {
            let mut z = m.clone();
            for i in 0..n {
                z.set(i, i, f.zero());
            }
            z
        } else {
            m
        };
        let c = congruence_normalize(&m, CongruenceMode::AlternatingZeroDiag).unwrap();
        prop_assert!(c.holds_for(&m));
        prop_assert_eq!(c.rank() % 2, 0);
        prop_assert_eq!(c.rank(), naive_rank(&m));
        for (i, &p) in c.perm.iter().enumerate() {
            if !f.is_zero(&c.d[i]) {
                prop_assert!(p != i && c.perm[p] == i);
            }
        }
    }

    #[test]
    fn symmetric_forms_diagonalize_away_from_char_two(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        prop_assume!(f.characteristic() != 2);
        let mut r = rng(seed);
        let n = r.gen_range(1..9);
        let a = Matrix::random(&f, n, n, &mut r);
        let m = a.add(&a.transpose());
        let (t, d) = symmetric_diagonalize(&m).unwrap();
        prop_assert!(t.is_invertible());
        prop_assert_eq!(t.transpose().mul(&m).mul(&t), Matrix::diagonal(&f, &d));
    }
}

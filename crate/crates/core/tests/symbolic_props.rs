mod common;

use common::{field, random_nilpotent, rng};
use proptest::prelude::*;
use quadmap::algebra::{Field, Poly};
use quadmap::linalg::Matrix;
use quadmap::quadmap::{PolyMatrix, QuadMap};
use quadmap::symbolic::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn linear_matrix(f: &Field, n: usize, rows: usize, cols: usize, r: &mut ChaCha8Rng) -> PolyMatrix {
    let mats: Vec<Matrix> = (0..n)
        .map(|_| {
            let mut m = Matrix::random(f, rows, cols, r);
            // sparse entries keep the rank interesting
            for i in 0..rows {
                for j in 0..cols {
                    if r.gen_bool(0.5) {
                        m.set(i, j, f.zero());
                    }
                }
            }
            m
        })
        .collect();
    PolyMatrix::from_coefficient_matrices(f, &mats)
}

fn augmented(m: &PolyMatrix, v: &[quadmap::algebra::Elem]) -> PolyMatrix {
    let f = m.field();
    let mut a = PolyMatrix::zeros(f, m.nvars(), m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            a.set(i, j, m.get(i, j).clone());
        }
        a.set(i, m.cols(), Poly::constant(f, m.nvars(), v[i].clone()));
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rank_is_invariant_under_constant_equivalence(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let (rows, cols) = (r.gen_range(1..5), r.gen_range(1..5));
        let m = linear_matrix(&f, 3, rows, cols, &mut r);
        let s = Matrix::random_invertible(&f, rows, &mut r);
        let t = Matrix::random_invertible(&f, cols, &mut r);
        let rk = poly_rank(&m);
        prop_assert_eq!(poly_rank(&m.mul_const_left(&s).mul_const_right(&t)), rk);
        let v = common::random_point(&f, 3, &mut r);
        prop_assert!(m.eval(&v).unwrap().rank() <= rk);
    }

    #[test]
    fn nilpotency_matches_minors_and_powers(seed in any::<u64>(), fi in 0usize..5, nil in any::<bool>()) {
        let f = field(fi);
        let mut r = rng(seed);
        let n = r.gen_range(1..5);
        let m = if nil {
            random_nilpotent(&f, n, &mut r).0.jacobian()
        } else {
            QuadMap::random(&f, n, n, &mut r).jacobian()
        };
        let by_minors = (1..=n).all(|k| principal_minor_sum(&m, k).unwrap().is_zero());
        let by_power = m.pow(n as u32).is_zero();
        prop_assert_eq!(is_nilpotent(&m).unwrap(), by_minors);
        prop_assert_eq!(by_minors, by_power);
        if nil {
            prop_assert!(by_power);
        }
    }

    #[test]
    fn vanishing_minors_give_a_permutation(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let n = r.gen_range(1..8);
        let mut lower = PolyMatrix::zeros(&f, 3, n, n);
        for i in 0..n {
            for j in 0..i {
                if r.gen_bool(0.6) {
                    let c = common::random_point(&f, 3, &mut r);
                    lower.set(i, j, Poly::linear(&f, &c));
                }
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, r.gen_range(0..=i));
        }
        let p = Matrix::permutation(&f, &perm);
        let m = lower.mul_const_left(&p.transpose()).mul_const_right(&p);
        prop_assert!(all_principal_minors_zero(&m).unwrap());
        let rep = permutation_triangularize(&m).unwrap();
        let Verdict::PermutationTriangular(q) = rep.verdict else {
            return Err(TestCaseError::fail("no permutation found"));
        };
        let q = Matrix::permutation(&f, &q);
        prop_assert!(m.mul_const_left(&q.transpose()).mul_const_right(&q).is_strictly_lower());
    }

    #[test]
    fn exponents_of_jordan_chains_sum_to_n_minus_one(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let n = r.gen_range(2..7);
        let mut j = Matrix::zeros(&f, n, n);
        for i in 1..n {
            j.set(i, i - 1, f.one());
        }
        let t = Matrix::random_invertible(&f, n, &mut r);
        let m = t.inverse().unwrap().mul(&j).mul(&t);
        let k = r.gen_range(0..n);
        let mut v: Vec<_> = (0..n).map(|i| if i == k { f.one() } else { f.zero() }).collect();
        v = t.inverse().unwrap().mul_vec(&v);
        let ie = image_exponent_const(&m, &v).unwrap();
        let pe = preimage_exponent_const(&m, &v).unwrap();
        prop_assert_eq!((ie, pe), (n - 1 - k, k));
        let pm = PolyMatrix::from_const(&m, 2);
        let pv: Vec<Poly> = v.iter().map(|c| Poly::constant(&f, 2, c.clone())).collect();
        prop_assert_eq!(image_exponent(&pm, &pv).unwrap() + preimage_exponent(&pm, &pv).unwrap(), n - 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn constant_colspace_vectors_by_brute_force(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let f = Field::prime(p).unwrap();
        let mut r = rng(seed);
        let (rows, cols) = (r.gen_range(1..4), r.gen_range(1..4));
        let m = linear_matrix(&f, 2, rows, cols, &mut r);
        let basis = constant_vectors_in_colspace(&m);
        let rk = poly_rank(&m);
        let span = Matrix::from_rows(&f, basis.clone());
        prop_assert!(basis.is_empty() || span.rank() == basis.len());
        for v in &basis {
            prop_assert_eq!(poly_rank(&augmented(&m, v)), rk);
        }
        for idx in 0..p.pow(rows as u32) {
            let mut t = idx;
            let v: Vec<_> = (0..rows).map(|_| { let c = f.from_i64((t % p) as i64); t /= p; c }).collect();
            let inside = poly_rank(&augmented(&m, &v)) == rk;
            let mut ext = basis.clone();
            ext.push(v.clone());
            let in_span = Matrix::from_rows(&f, ext).rank() == basis.len();
            prop_assert_eq!(inside, in_span, "v = {:?}", v);
        }
    }
}

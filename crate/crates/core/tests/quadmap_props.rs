mod common;

use common::{field, random_nilpotent, rng};
use proptest::prelude::*;
use quadmap::algebra::Poly;
use quadmap::linalg::Matrix;
use quadmap::quadmap::{invert_triangular, PolyMap, QuadMap};
use quadmap::symbolic::is_nilpotent;
use rand::Rng;

fn vars(f: &quadmap::algebra::Field, n: usize) -> Vec<Poly> {
    (0..n).map(|i| Poly::var(f, n, i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_identity(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let (n, m) = (r.gen_range(1..6), r.gen_range(1..6));
        let h = QuadMap::random(&f, n, m, &mut r);
        let lhs = h.jacobian().mul_vec(&vars(&f, n));
        let two = f.from_i64(2);
        let rhs: Vec<Poly> = h.to_polys().iter().map(|p| p.scale(&two)).collect();
        prop_assert_eq!(&lhs, &rhs);
        if f.characteristic() == 2 {
            prop_assert!(lhs.iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn chain_rule(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let (n, m) = (r.gen_range(1..5), r.gen_range(1..5));
        let h = QuadMap::random(&f, n, m, &mut r);
        let s = Matrix::random_invertible(&f, m, &mut r);
        let t = Matrix::random_invertible(&f, n, &mut r);
        let lhs = h.compose(&s, &t).unwrap().jacobian();
        let rhs = h.jacobian().compose_linear(&t).mul_const_left(&s).mul_const_right(&t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hessian_rows_are_jacobian_rows(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let (n, m) = (r.gen_range(1..6), r.gen_range(1..4));
        let h = QuadMap::random(&f, n, m, &mut r);
        let j = h.jacobian();
        for k in 0..m {
            let hk = h.hessian(k);
            for c in 0..n {
                let coeffs: Vec<_> = (0..n).map(|i| hk.get(i, c).clone()).collect();
                prop_assert_eq!(&Poly::linear(&f, &coeffs), j.get(k, c));
            }
        }
    }

    #[test]
    fn keller_check_is_nilpotency(seed in any::<u64>(), fi in 0usize..5, nil in any::<bool>()) {
        let f = field(fi);
        let mut r = rng(seed);
        let n = r.gen_range(1..5);
        let h = if nil { random_nilpotent(&f, n, &mut r).0 } else { QuadMap::random(&f, n, n, &mut r) };
        let keller = h.keller_check().unwrap();
        prop_assert_eq!(keller, is_nilpotent(&h.jacobian()).unwrap());
        prop_assert_eq!(keller, h.keller_determinant() == Poly::constant(&f, n, f.one()));
        if nil {
            prop_assert!(keller);
        }
    }

    #[test]
    fn triangular_inverse_round_trips(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        // both compositions are expanded in full, which grows like 4ⁿ
        let n = r.gen_range(1..4);
        let (h, t) = random_nilpotent(&f, n, &mut r);
        let inv = invert_triangular(&h, &t).unwrap();
        let fwd = PolyMap::keller(&h);
        prop_assert!(inv.compose(&fwd).is_identity());
        prop_assert!(fwd.compose(&inv).is_identity());
    }
}

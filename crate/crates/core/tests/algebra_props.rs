mod common;

use common::{field, random_point, random_poly, rng};
use proptest::prelude::*;
use quadmap::algebra::Poly;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_a_ring_map(seed in any::<u64>(), fi in 0usize..5, n in 1usize..4) {
        let f = field(fi);
        let mut r = rng(seed);
        let (p, q) = (random_poly(&f, n, &mut r), random_poly(&f, n, &mut r));
        let v = random_point(&f, n, &mut r);
        let (pv, qv) = (p.eval(&v).unwrap(), q.eval(&v).unwrap());
        prop_assert_eq!(p.add(&q).eval(&v).unwrap(), f.add(&pv, &qv));
        prop_assert_eq!(p.mul(&q).eval(&v).unwrap(), f.mul(&pv, &qv));
    }

    #[test]
    fn linear_substitutions_compose(seed in any::<u64>(), fi in 0usize..5, n in 1usize..4) {
        let f = field(fi);
        let mut r = rng(seed);
        let p = random_poly(&f, n, &mut r);
        let t = common::random_matrix(&f, n, n, &mut r);
        let u = common::random_matrix(&f, n, n, &mut r);
        let lhs = p.compose_linear(&t.to_rows()).compose_linear(&u.to_rows());
        prop_assert_eq!(lhs, p.compose_linear(&t.mul(&u).to_rows()));
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), fi in 0usize..5, n in 1usize..5) {
        let f = field(fi);
        let p = random_poly(&f, n, &mut rng(seed));
        let back = Poly::parse(&f, n, &p.to_string()).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn frobenius_is_additive() {
    for (p, k) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
        let f = quadmap::algebra::Field::extension(p, k).unwrap();
        let mut r = rng(p * 10 + k as u64);
        for _ in 0..1000 {
            let (a, b) = (f.random(&mut r), f.random(&mut r));
            let lhs = f.pow(&f.add(&a, &b), p);
            assert_eq!(lhs, f.add(&f.pow(&a, p), &f.pow(&b, p)));
        }
        let x = f.element(r.gen_range(0..f.size().unwrap()));
        assert_eq!(f.pow(&x, f.size().unwrap()), x);
    }
}

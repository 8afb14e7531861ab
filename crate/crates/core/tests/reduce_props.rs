mod common;

use common::{field, rng};
use proptest::prelude::*;
use quadmap::algebra::Field;
use quadmap::linalg::Matrix;
use quadmap::quadmap::QuadMap;
use quadmap::reduce::*;
use quadmap::symbolic::poly_rank;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random map in k variables, padded and scrambled, or x_n times k linear forms.
fn low_rank_map(f: &Field, r: &mut ChaCha8Rng) -> QuadMap {
    let k = r.gen_range(1..4);
    let n = k + r.gen_range(0..3);
    let m = r.gen_range(1..6);
    let base = if r.gen_bool(0.5) {
        QuadMap::random(f, k, m, r).padded(n, m + r.gen_range(0..2))
    } else {
        let n = n + 1;
        let mut h = QuadMap::zero(f, n, m);
        for c in 0..m.min(k) {
            for a in 0..n - 1 {
                h.set_coeff(c, a, n - 1, f.random(r));
            }
        }
        h
    };
    base.scramble(r).0
}

fn nonzero_jacobian_rows(h: &QuadMap) -> usize {
    let j = h.jacobian();
    (0..j.rows()).filter(|&i| !j.row_is_zero(i)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn arbitrary_rank_reduction(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let h = low_rank_map(&f, &mut r);
        let rk = poly_rank(&h.jacobian());
        let cert = reduce_rkr(&h).unwrap();
        prop_assert!(certificate_check(&h, &cert));
        let g = cert.reduced(&h).unwrap();
        prop_assert!(nonzero_jacobian_rows(&g) <= (rk * rk + rk) / 2);
        prop_assert_eq!(poly_rank(&g.jacobian()), rk);
    }

    #[test]
    fn certificates_survive_json(seed in any::<u64>(), fi in 0usize..5) {
        let f = field(fi);
        let mut r = rng(seed);
        let h = low_rank_map(&f, &mut r);
        let cert = reduce_rkr(&h).unwrap();
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), cert.to_json());
        prop_assert!(certificate_check(&h, &back));
    }
}

fn case_five(f: &Field, c: i64) -> QuadMap {
    let s = |t: &str| t.replace('c', &c.to_string());
    QuadMap::parse(
        f,
        4,
        &[&s("x1*x3 + c*x2*x4"), "x2*x3 - x1*x4", &s("1/2*x3^2 + c/2*x4^2"), &s("1/2*x1^2 + c/2*x2^2")],
    )
    .unwrap()
}

#[test]
fn tampering_any_field_is_rejected() {
    let f7 = Field::prime(7).unwrap();
    let mut r = rng(7);
    for _ in 0..10 {
        let h = case_five(&f7, 3).padded(5, 5).scramble(&mut r).0;
        let cert = reduce_rk3(&h).unwrap();
        assert_eq!(cert.case_tag, 5);
        assert!(certificate_check(&h, &cert));

        let mut bad = cert.clone();
        bad.case_tag = 2;
        assert!(!certificate_check(&h, &bad), "tag");
        let mut bad = cert.clone();
        bad.theorem = Theorem::Rk4;
        assert!(!certificate_check(&h, &bad), "theorem");
        let mut bad = cert.clone();
        let c = cert.parameters["c"].clone();
        bad.parameters.insert("c".into(), f7.add(&c, &f7.one()));
        assert!(!certificate_check(&h, &bad), "parameter");
        let mut bad = cert.clone();
        bad.parameters.clear();
        assert!(!certificate_check(&h, &bad), "missing parameter");
        let mut bad = cert.clone();
        bad.s = bad.s.scale(&f7.from_i64(2));
        assert!(!certificate_check(&h, &bad), "S");
        let mut bad = cert.clone();
        let mut t = bad.t.clone();
        let flip = f7.add(t.get(0, 0), &f7.one());
        t.set(0, 0, flip);
        bad.t = t;
        assert!(!certificate_check(&h, &bad), "T");
        let mut bad = cert.clone();
        bad.field_extension_used = Some(Field::extension(7, 2).unwrap().descriptor().clone());
        assert!(!certificate_check(&h, &bad), "extension");
        let mut bad = cert.clone();
        bad.s = Matrix::zeros(&f7, 5, 5);
        assert!(!certificate_check(&h, &bad), "singular S");
    }
}

#[test]
fn certificates_of_other_fields_are_rejected() {
    let q = Field::rationals();
    let f7 = Field::prime(7).unwrap();
    let h = case_five(&f7, 1);
    let cert = reduce_rk3(&h).unwrap();
    let hq = case_five(&q, 1);
    assert!(!certificate_check(&hq, &cert));
}

#[test]
fn classification_certificates_check() {
    // the search is complete over a finite field only
    let q = Field::prime(7).unwrap();
    let mut r = rng(3);
    let g = QuadMap::parse(&q, 5, &["0", "x1^2", "x2*x4", "x1*x3 - x2*x5", "x1^2 + x1*x2 + x2^2 + x1*x4"]).unwrap();
    for _ in 0..3 {
        let t = Matrix::random_invertible(&q, 5, &mut r);
        let h = g.conjugate(&t).unwrap();
        let c = classify_dim5(&h).unwrap();
        let cert = c.certificate().expect("witness family is classified");
        assert!(cert.case_tag >= 1);
        assert!(certificate_check(&h, cert));
        assert!(cert.s.mul(&cert.t).is_identity());
    }
}

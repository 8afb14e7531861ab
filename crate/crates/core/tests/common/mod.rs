#![allow(dead_code)]

use quadmap::algebra::{Elem, Field, Mono, Poly};
use quadmap::linalg::Matrix;
use quadmap::quadmap::QuadMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ℚ, a prime field, a char-2 prime field and a char-2 extension.
pub fn field(i: usize) -> Field {
    match i % 5 {
        0 => Field::rationals(),
        1 => Field::prime(5).unwrap(),
        2 => Field::prime(2).unwrap(),
        3 => Field::extension(2, 2).unwrap(),
        _ => Field::extension(3, 2).unwrap(),
    }
}

pub fn random_poly(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let terms = rng.gen_range(0..5);
    let mut p = Poly::zero(f, n);
    for _ in 0..terms {
        let mut m = Mono::one(n);
        for _ in 0..rng.gen_range(0..4) {
            m = m.mul(&Mono::var(n, rng.gen_range(0..n)));
        }
        p.add_term(m, &f.random(rng));
    }
    p
}

pub fn random_point(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    (0..n).map(|_| f.random(rng)).collect()
}

pub fn random_matrix(f: &Field, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::random(f, r, c, rng)
}

/// Strictly lower triangular Jacobian, conjugated by a random T; returns the map and T.
pub fn random_nilpotent(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> (QuadMap, Matrix) {
    let mut h = QuadMap::zero(f, n, n);
    for i in 0..n {
        for a in 0..i {
            for b in a..i {
                h.set_coeff(i, a, b, f.random(rng));
            }
        }
    }
    let t = Matrix::random_invertible(f, n, rng);
    let tinv = t.inverse().unwrap();
    (h.conjugate(&tinv).unwrap(), t)
}

//! Exact scalar arithmetic over ℚ, F_p and F_{p^k}.
//!
//! Elements carry no reference to their field; every operation goes through
//! a [`Field`] handle, which is a cheap reference-counted clone.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Coeffs = SmallVec<[u64; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rationals,
    Prime {
        p: u64,
    },
    /// `modulus` lists the coefficients c0..ck of a monic degree-k polynomial.
    Extension {
        p: u64,
        k: usize,
        modulus: Vec<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Q(BigRational),
    P(u64),
    E(Coeffs),
}

struct Inner {
    desc: FieldDescriptor,
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomials over F_p, little-endian coefficient vectors.

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let mut b = b.to_vec();
    fp_trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - f * bi % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Irreducibility of a monic polynomial over F_p by trial division by all
/// monic polynomials of degree at most k/2.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push(t % p);
                t /= p;
            }
            g.push(1);
            if fp_rem(modulus, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible of degree k, comparing coefficients from degree
/// k-1 down to degree 0 (so x^3+x+1 precedes x^3+x^2+1).
pub fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for idx in 0..count {
        let mut m = vec![0u64; k + 1];
        let mut t = idx;
        for c in m.iter_mut().take(k) {
            *c = t % p;
            t /= p;
        }
        m[k] = 1;
        if (k == 1 || m[0] != 0) && is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Inner {
            desc: FieldDescriptor::Rationals,
            p: 0,
            k: 1,
            modulus: Vec::new(),
        }))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("prime {p} too large")));
        }
        Ok(Field(Arc::new(Inner {
            desc: FieldDescriptor::Prime { p },
            p,
            k: 1,
            modulus: Vec::new(),
        })))
    }

    pub fn extension(p: u64, k: usize) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k < 2 {
            return Err(Error::InvalidField("extension degree must be at least 2".into()));
        }
        Self::extension_with(p, k, default_modulus(p, k))
    }

    pub fn extension_with(p: u64, k: usize, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime(p) || p >= 1 << 20 {
            return Err(Error::InvalidField(format!("bad characteristic {p}")));
        }
        if k < 2 || modulus.len() != k + 1 || modulus[k] != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree k".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be residues".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Field(Arc::new(Inner {
            desc: FieldDescriptor::Extension {
                p,
                k,
                modulus: modulus.clone(),
            },
            p,
            k,
            modulus,
        })))
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Field> {
        match desc {
            FieldDescriptor::Rationals => Ok(Field::rationals()),
            FieldDescriptor::Prime { p } => Field::prime(*p),
            FieldDescriptor::Extension { p, k, modulus } => {
                Field::extension_with(*p, *k, modulus.clone())
            }
        }
    }

    /// Field of size `q` (a prime power), with the default modulus.
    pub fn of_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        if is_prime(q) {
            return Field::prime(q);
        }
        let mut p = 2;
        while p <= q {
            if q.is_multiple_of(p) {
                break;
            }
            p += 1;
        }
        let mut k = 0;
        let mut t = q;
        while t.is_multiple_of(p) {
            t /= p;
            k += 1;
        }
        if t != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Field::extension(p, k)
    }

    /// Accepts `Q`, `F<q>` and `GF(<q>)`.
    pub fn parse_name(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") || t == "QQ" {
            return Ok(Field::rationals());
        }
        let num = if let Some(r) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            r
        } else if let Some(r) = t.strip_prefix('F') {
            r
        } else {
            return Err(Error::InvalidField(format!("unrecognized field name {t:?}")));
        };
        let q: u64 = num
            .parse()
            .map_err(|_| Error::InvalidField(format!("unrecognized field name {t:?}")))?;
        Field::of_order(q)
    }

    pub fn name(&self) -> String {
        match &self.0.desc {
            FieldDescriptor::Rationals => "Q".to_string(),
            FieldDescriptor::Prime { p } => format!("F{p}"),
            FieldDescriptor::Extension { p, k, .. } => format!("F{}", p.pow(*k as u32)),
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.desc
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn has_half(&self) -> bool {
        self.0.p != 2
    }

    pub fn is_rationals(&self) -> bool {
        self.0.p == 0
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    /// Number of elements, `None` for ℚ.
    pub fn size(&self) -> Option<u64> {
        if self.0.p == 0 {
            None
        } else {
            Some(self.0.p.pow(self.0.k as u32))
        }
    }

    fn is_ext(&self) -> bool {
        matches!(self.0.desc, FieldDescriptor::Extension { .. })
    }

    pub fn zero(&self) -> Elem {
        match &self.0.desc {
            FieldDescriptor::Rationals => Elem::Q(BigRational::zero()),
            FieldDescriptor::Prime { .. } => Elem::P(0),
            FieldDescriptor::Extension { k, .. } => Elem::E(SmallVec::from_elem(0, *k)),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match &self.0.desc {
            FieldDescriptor::Rationals => Elem::Q(BigRational::from_integer(BigInt::from(v))),
            FieldDescriptor::Prime { p } => Elem::P(v.rem_euclid(*p as i64) as u64),
            FieldDescriptor::Extension { p, k, .. } => {
                let mut c: Coeffs = SmallVec::from_elem(0, *k);
                c[0] = v.rem_euclid(*p as i64) as u64;
                Elem::E(c)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match &self.0.desc {
            FieldDescriptor::Rationals => Elem::Q(BigRational::from_integer(v.clone())),
            _ => {
                let p = BigInt::from(self.0.p);
                let r = ((v % &p) + &p) % &p;
                self.from_i64(r.to_i64().unwrap())
            }
        }
    }

    /// The image of num/den; fails when den vanishes in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Elem> {
        let d = self.from_i64(den);
        let inv = self.inv(&d)?;
        Ok(self.mul(&self.from_i64(num), &inv))
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &self.0.desc {
            FieldDescriptor::Rationals => Ok(Elem::Q(r.clone())),
            _ => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                Ok(self.mul(&n, &self.inv(&d)?))
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Q(r) => r.is_zero(),
            Elem::P(v) => *v == 0,
            Elem::E(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Q(r) => r.is_one(),
            Elem::P(v) => *v == 1,
            Elem::E(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Elem::P(x), Elem::P(y)) => Elem::P((x + y) % self.0.p),
            (Elem::E(x), Elem::E(y)) => {
                let p = self.0.p;
                Elem::E(x.iter().zip(y.iter()).map(|(a, b)| (a + b) % p).collect())
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Q(x) => Elem::Q(-x),
            Elem::P(x) => Elem::P((self.0.p - x) % self.0.p),
            Elem::E(c) => {
                let p = self.0.p;
                Elem::E(c.iter().map(|x| (p - x) % p).collect())
            }
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x - y),
            (Elem::P(x), Elem::P(y)) => Elem::P((x + self.0.p - y) % self.0.p),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Elem::P(x), Elem::P(y)) => Elem::P(x * y % self.0.p),
            (Elem::E(x), Elem::E(y)) => Elem::E(self.ext_mul(x, y)),
            _ => panic!("mixed element kinds"),
        }
    }

    fn ext_mul(&self, x: &[u64], y: &[u64]) -> Coeffs {
        let p = self.0.p;
        let k = self.0.k;
        let m = &self.0.modulus;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        for d in (k..prod.len()).rev() {
            let f = prod[d];
            if f == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let idx = d - k + i;
                prod[idx] = (prod[idx] + p - f * m[i] % p) % p;
            }
        }
        prod.truncate(k);
        SmallVec::from_vec(prod)
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Elem::Q(x) => Elem::Q(x.recip()),
            Elem::P(x) => Elem::P(pow_mod(*x, self.0.p - 2, self.0.p)),
            Elem::E(_) => self.pow(a, self.size().unwrap() - 2),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn half(&self) -> Result<Elem> {
        if !self.has_half() {
            return Err(Error::UnsupportedCharacteristic("1/2 does not exist in characteristic 2".into()));
        }
        self.from_ratio(1, 2)
    }

    /// Finite fields only: the element with base-p digit expansion `idx`.
    pub fn element(&self, idx: u64) -> Elem {
        match &self.0.desc {
            FieldDescriptor::Rationals => self.from_i64(idx as i64),
            FieldDescriptor::Prime { p } => Elem::P(idx % p),
            FieldDescriptor::Extension { p, k, .. } => {
                let mut c: Coeffs = SmallVec::with_capacity(*k);
                let mut t = idx;
                for _ in 0..*k {
                    c.push(t % p);
                    t /= p;
                }
                Elem::E(c)
            }
        }
    }

    /// Inverse of [`Field::element`].
    pub fn index_of(&self, a: &Elem) -> u64 {
        match a {
            Elem::Q(_) => panic!("index_of on rationals"),
            Elem::P(v) => *v,
            Elem::E(c) => c.iter().rev().fold(0, |acc, &d| acc * self.0.p + d),
        }
    }

    /// All elements of a finite field in index order.
    pub fn elements(&self) -> Vec<Elem> {
        let q = self.size().expect("finite field");
        (0..q).map(|i| self.element(i)).collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.size() {
            Some(q) => self.element(rng.gen_range(0..q)),
            None => {
                let n = rng.gen_range(-4i64..=4);
                let d = if rng.gen_bool(0.25) { rng.gen_range(1i64..=3) } else { 1 };
                self.from_ratio(n, d).unwrap()
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    /// Canonical text: `3`, `-1/2` over ℚ, residues over F_p, `[c0,c1,..]`
    /// over extensions.
    pub fn format(&self, a: &Elem) -> String {
        match a {
            Elem::Q(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Elem::P(v) => v.to_string(),
            Elem::E(c) => {
                let parts: Vec<String> = c.iter().map(|d| d.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    /// True when the canonical text of `a` starts with a minus sign.
    pub fn is_negative(&self, a: &Elem) -> bool {
        matches!(a, Elem::Q(r) if r.is_negative())
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if !self.is_ext() {
                return Err(Error::Parse(format!("coefficient vector {t:?} outside an extension field")));
            }
            let k = self.0.k;
            let mut c: Coeffs = SmallVec::from_elem(0, k);
            let parts: Vec<&str> = inner.split(',').map(|x| x.trim()).filter(|x| !x.is_empty()).collect();
            if parts.len() > k {
                return Err(Error::Parse(format!("too many coefficients in {t:?}")));
            }
            for (i, part) in parts.iter().enumerate() {
                let v: i64 = part.parse().map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
                c[i] = v.rem_euclid(self.0.p as i64) as u64;
            }
            return Ok(Elem::E(c));
        }
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad scalar {t:?}")))?;
        let d: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad scalar {t:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        self.from_rational(&BigRational::new(n, d))
            .map_err(|_| Error::Parse(format!("{t:?} is undefined in {}", self.name())))
    }
}

/// A field homomorphism from a subfield into a larger field of the same
/// characteristic.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    generator_image: Option<Elem>,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Embedding> {
        if source == target {
            return Ok(Embedding {
                source: source.clone(),
                target: target.clone(),
                generator_image: None,
            });
        }
        if source.characteristic() != target.characteristic() || source.is_rationals() {
            return Err(Error::InvalidField(format!("{source} does not embed in {target}")));
        }
        if source.degree() == 1 {
            return Ok(Embedding {
                source: source.clone(),
                target: target.clone(),
                generator_image: None,
            });
        }
        if !target.degree().is_multiple_of(source.degree()) {
            return Err(Error::InvalidField(format!("{source} does not embed in {target}")));
        }
        let modulus = &source.0.modulus;
        for e in target.elements() {
            let mut acc = target.zero();
            for c in modulus.iter().rev() {
                acc = target.add(&target.mul(&acc, &e), &target.from_i64(*c as i64));
            }
            if target.is_zero(&acc) {
                return Ok(Embedding {
                    source: source.clone(),
                    target: target.clone(),
                    generator_image: Some(e),
                });
            }
        }
        Err(Error::InvalidField(format!("no root of the modulus of {source} in {target}")))
    }

    pub fn apply(&self, a: &Elem) -> Elem {
        let t = &self.target;
        match a {
            Elem::Q(_) => a.clone(),
            Elem::P(v) => t.from_i64(*v as i64),
            Elem::E(c) => match &self.generator_image {
                None => a.clone(),
                Some(g) => {
                    let mut acc = t.zero();
                    for d in c.iter().rev() {
                        acc = t.add(&t.mul(&acc, g), &t.from_i64(*d as i64));
                    }
                    acc
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(Field::extension_with(2, 2, vec![1, 0, 1]).is_err());
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn inverses_in_every_small_field() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            let f = Field::of_order(q).unwrap();
            assert_eq!(f.size(), Some(q));
            for a in f.elements().into_iter().skip(1) {
                assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())), "{f} {a:?}");
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(2u64, 3usize), (3, 2), (5, 2), (2, 4)] {
            let f = Field::extension(p, k).unwrap();
            for _ in 0..1000 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                let lhs = f.pow(&f.add(&a, &b), p);
                let rhs = f.add(&f.pow(&a, p), &f.pow(&b, p));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let q = Field::rationals();
        let h = q.parse("-3/6").unwrap();
        assert_eq!(q.format(&h), "-1/2");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("1/2").unwrap(), Elem::P(3));
        assert!(Field::prime(2).unwrap().parse("1/2").is_err());
        let f4 = Field::of_order(4).unwrap();
        let g = f4.parse("[0,1]").unwrap();
        assert_eq!(f4.format(&g), "[0,1]");
        assert_eq!(f4.parse(&f4.format(&g)).unwrap(), g);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f4 = Field::of_order(4).unwrap();
        let f16 = Field::of_order(16).unwrap();
        let emb = Embedding::new(&f4, &f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(emb.apply(&f4.mul(&a, &b)), f16.mul(&emb.apply(&a), &emb.apply(&b)));
                assert_eq!(emb.apply(&f4.add(&a, &b)), f16.add(&emb.apply(&a), &emb.apply(&b)));
            }
        }
        assert!(Embedding::new(&f4, &Field::of_order(8).unwrap()).is_err());
    }
}

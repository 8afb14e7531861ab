//! Canonical text form: `c*x1^a1*...*xn^an` terms, highest graded-lex first.

use std::fmt;

use super::field::{Elem, Field};
use super::poly::{Mono, Poly};
use crate::error::{Error, Result};

fn mono_text(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

fn term_text(f: &Field, m: &Mono, c: &Elem) -> String {
    if m.degree() == 0 {
        return f.format(c);
    }
    let mt = mono_text(m);
    if f.is_one(c) {
        return mt;
    }
    if f.is_negative(c) && f.is_one(&f.neg(c)) {
        return format!("-{mt}");
    }
    format!("{}*{}", f.format(c), mt)
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let f = self.field();
        let mut first = true;
        for (m, c) in self.terms().rev() {
            let t = term_text(f, m, c);
            if first {
                write!(out, "{t}")?;
                first = false;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(out, " - {rest}")?;
            } else {
                write!(out, " + {t}")?;
            }
        }
        Ok(())
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.is_empty() {
                    if ch == '-' {
                        neg = !neg;
                    }
                } else if cur.ends_with('^') || cur.ends_with('*') || cur.ends_with('/') {
                    return Err(Error::Parse(format!("sign after operator in {s:?}")));
                } else {
                    out.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
            }
            c if c.is_whitespace() => {}
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
    }
    if cur.is_empty() {
        if !out.is_empty() || neg {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
    } else {
        out.push((neg, cur));
    }
    Ok(out)
}

impl Poly {
    pub fn parse(field: &Field, n: usize, s: &str) -> Result<Poly> {
        let mut p = Poly::zero(field, n);
        for (neg, term) in split_terms(s)? {
            let mut coeff = field.one();
            let mut m = Mono::one(n);
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {term:?}")));
                }
                if let Some(v) = factor.strip_prefix('x') {
                    let (idx, exp) = match v.split_once('^') {
                        Some((a, b)) => (a, b),
                        None => (v, "1"),
                    };
                    let i: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                    let e: u16 = exp
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {factor:?}")))?;
                    if i == 0 || i > n {
                        return Err(Error::Parse(format!("variable {factor:?} outside x1..x{n}")));
                    }
                    m.0[i - 1] += e;
                } else {
                    coeff = field.mul(&coeff, &field.parse(factor)?);
                }
            }
            if neg {
                coeff = field.neg(&coeff);
            }
            p.add_term(m, &coeff);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_rationals_and_signs() {
        let q = Field::rationals();
        let p = Poly::parse(&q, 4, "1/2*x3^2 + x1*x3 - x2*x4 + 3").unwrap();
        assert_eq!(p.to_string(), "x1*x3 - x2*x4 + 1/2*x3^2 + 3");
        assert_eq!(Poly::parse(&q, 2, "-x1 - -x2").unwrap().to_string(), "-x1 + x2");
    }

    #[test]
    fn prints_extension_coefficients() {
        let f4 = Field::of_order(4).unwrap();
        let p = Poly::parse(&f4, 2, "[0,1]*x1*x2 + x2^2").unwrap();
        assert_eq!(p.to_string(), "[0,1]*x1*x2 + x2^2");
        assert_eq!(Poly::parse(&f4, 2, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn rejects_garbage() {
        let q = Field::rationals();
        assert!(Poly::parse(&q, 2, "x3").is_err());
        assert!(Poly::parse(&q, 2, "x1 +").is_err());
        assert!(Poly::parse(&q, 2, "x1**x2").is_err());
        assert!(Poly::parse(&q, 2, "").unwrap().is_zero());
    }
}

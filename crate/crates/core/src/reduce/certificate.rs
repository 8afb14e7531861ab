//! Certificates and their independent checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Field, FieldDescriptor, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::QuadMap;
use crate::symbolic::{is_nilpotent, poly_rank};

use super::displays::{dim5_patterns, dim6_patterns, rk3np_pattern2, rk3np_pattern3};
use super::invariants::{nonzero_col_extent, nonzero_row_extent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Rkr,
    Rk4,
    Rk3,
    Rk3np,
    Dim5,
    Dim6,
}

impl Theorem {
    pub fn parse(s: &str) -> Result<Theorem> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "rkr" => Theorem::Rkr,
            "rk4" => Theorem::Rk4,
            "rk3" => Theorem::Rk3,
            "rk3np" => Theorem::Rk3np,
            "dim5" => Theorem::Dim5,
            "dim6" => Theorem::Dim6,
            _ => return Err(Error::Parse(format!("unknown theorem {s:?}"))),
        })
    }

    /// Reducers for these conjugate: S = T⁻¹.
    pub fn is_conjugation(self) -> bool {
        matches!(self, Theorem::Rk3np | Theorem::Dim5 | Theorem::Dim6)
    }
}

/// For Dim5/Dim6, case 0 is the triangular verdict and case k the k-th display.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub theorem: Theorem,
    pub case_tag: u32,
    pub field: Field,
    pub s: Matrix,
    pub t: Matrix,
    pub parameters: BTreeMap<String, Elem>,
    pub field_extension_used: Option<FieldDescriptor>,
}

impl Certificate {
    pub fn new(theorem: Theorem, case_tag: u32, s: Matrix, t: Matrix) -> Certificate {
        Certificate {
            theorem,
            case_tag,
            field: s.field().clone(),
            s,
            t,
            parameters: BTreeMap::new(),
            field_extension_used: None,
        }
    }

    pub fn with_parameter(mut self, name: &str, value: Elem) -> Certificate {
        self.parameters.insert(name.to_string(), value);
        self
    }

    /// S·H(Tx).
    pub fn reduced(&self, h: &QuadMap) -> Result<QuadMap> {
        h.compose(&self.s, &self.t)
    }

    /// Fails unless the certificate checks; reducers call this before returning.
    pub fn verified(self, h: &QuadMap) -> Result<Certificate> {
        if certificate_check(h, &self) {
            Ok(self)
        } else {
            Err(Error::Precondition(format!(
                "internal error: {:?} case {} certificate does not check",
                self.theorem, self.case_tag
            )))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CertificateDto::from(self)).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        let dto: CertificateDto = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        dto.into_certificate()
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateDto {
    theorem: Theorem,
    case_tag: u32,
    field: FieldDescriptor,
    #[serde(rename = "S")]
    s: Vec<Vec<String>>,
    #[serde(rename = "T")]
    t: Vec<Vec<String>>,
    parameters: BTreeMap<String, String>,
    field_extension_used: Option<FieldDescriptor>,
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|e| m.field().format(e)).collect())
        .collect()
}

fn parse_matrix(f: &Field, rows: &[Vec<String>]) -> Result<Matrix> {
    let parsed: Vec<Vec<Elem>> = rows
        .iter()
        .map(|r| r.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let width = parsed.first().map_or(0, |r| r.len());
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != width) {
        return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()));
    }
    Ok(Matrix::from_rows(f, parsed))
}

impl From<&Certificate> for CertificateDto {
    fn from(c: &Certificate) -> CertificateDto {
        CertificateDto {
            theorem: c.theorem,
            case_tag: c.case_tag,
            field: c.field.descriptor().clone(),
            s: matrix_strings(&c.s),
            t: matrix_strings(&c.t),
            parameters: c.parameters.iter().map(|(k, v)| (k.clone(), c.field.format(v))).collect(),
            field_extension_used: c.field_extension_used.clone(),
        }
    }
}

impl CertificateDto {
    fn into_certificate(self) -> Result<Certificate> {
        let field = Field::from_descriptor(&self.field)?;
        let parameters = self
            .parameters
            .iter()
            .map(|(k, v)| Ok((k.clone(), field.parse(v)?)))
            .collect::<Result<_>>()?;
        Ok(Certificate {
            theorem: self.theorem,
            case_tag: self.case_tag,
            s: parse_matrix(&field, &self.s)?,
            t: parse_matrix(&field, &self.t)?,
            field,
            parameters,
            field_extension_used: self.field_extension_used,
        })
    }
}

/// Recomputes the reduced map and tests the exact shape of the tagged case
/// together with its side conditions.
pub fn certificate_check(h: &QuadMap, cert: &Certificate) -> bool {
    check_inner(h, cert).unwrap_or(false)
}

fn check_inner(h: &QuadMap, cert: &Certificate) -> Result<bool> {
    if &cert.field != h.field() || cert.field_extension_used.is_some() {
        return Ok(false);
    }
    let reduced = cert.reduced(h)?;
    if cert.theorem.is_conjugation() && !cert.s.mul(&cert.t).is_identity() {
        return Ok(false);
    }
    let expected: &[&str] = match (cert.theorem, cert.case_tag) {
        (Theorem::Rk3, 5) | (Theorem::Dim6, 2) => &["c"],
        _ => &[],
    };
    if cert.parameters.keys().map(String::as_str).ne(expected.iter().copied()) {
        return Ok(false);
    }
    let r = poly_rank(&h.jacobian());
    if poly_rank(&reduced.jacobian()) != r {
        return Ok(false);
    }
    let f = h.field();
    let odd = f.characteristic() != 2;
    let rows = nonzero_row_extent(&reduced);
    let cols = nonzero_col_extent(&reduced);
    let tri = |k: usize| k * k.saturating_sub(1) / 2;
    let ok = match (cert.theorem, cert.case_tag) {
        (Theorem::Rkr, tag) => {
            rows <= tri(r + 1)
                && match tag {
                    1 => rows <= tri(r) + 1,
                    2 => odd && cols <= r,
                    3 => !odd && cols <= r + 1,
                    _ => false,
                }
        }
        (Theorem::Rk4, tag) => {
            r <= 4
                && rows <= tri(r + 1)
                && match tag {
                    1 => rows <= r + 1,
                    2 => r == 4 && odd && tail_vars_within(&reduced, 3, false),
                    3 => r == 4 && !odd && tail_vars_within(&reduced, 4, true),
                    4 => cols <= r + 1,
                    5 => r == 4 && !odd && rows <= 6 && cols <= 6,
                    _ => false,
                }
        }
        (Theorem::Rk3, tag) => r == 3 && rk3_shape(&reduced, tag, cert.parameters.get("c"), rows, cols)?,
        (Theorem::Rk3np, tag) => {
            let n = h.nvars();
            h.ncomps() == n
                && r <= 3
                && is_nilpotent(&reduced.jacobian())?
                && match tag {
                    1 => reduced.jacobian().is_strictly_lower(),
                    2 => n >= 5 && r == 3 && rk3np_pattern2(f, n)?.matches(&reduced.jacobian()),
                    3 => n >= 6 && r == 3 && !odd && rk3np_pattern3(f, n)?.matches(&reduced.jacobian()),
                    _ => false,
                }
        }
        (Theorem::Dim5, tag) => {
            let good = odd && h.nvars() == 5 && h.ncomps() == 5 && r == 4 && is_nilpotent(&reduced.jacobian())?;
            good && match tag {
                0 => reduced.jacobian().is_strictly_lower(),
                1 | 2 => dim5_patterns(f)?[tag as usize - 1].matches(&reduced.jacobian()),
                _ => false,
            }
        }
        (Theorem::Dim6, tag) => {
            let good = !odd && h.nvars() == 6 && h.ncomps() == 6 && r == 4 && is_nilpotent(&reduced.jacobian())?;
            let c = cert.parameters.get("c").map(|c| f.index_of(c));
            good && match tag {
                0 => reduced.jacobian().is_strictly_lower(),
                1..=4 => dim6_patterns(f)?
                    .iter()
                    .any(|(k, pc, p)| *k == tag as usize && *pc == c && p.matches(&reduced.jacobian())),
                _ => false,
            }
        }
    };
    Ok(ok)
}

/// Components 2.. use only the first k variables; with `squares`, squares of
/// later variables are allowed as well.
fn tail_vars_within(h: &QuadMap, k: usize, squares: bool) -> bool {
    let f = h.field();
    let n = h.nvars();
    (1..h.ncomps()).all(|c| {
        (0..n).all(|a| {
            (a..n).all(|b| b < k || (squares && a == b) || f.is_zero(h.coeff(c, a, b)))
        })
    })
}

fn rk3_shape(h: &QuadMap, tag: u32, c: Option<&Elem>, rows: usize, cols: usize) -> Result<bool> {
    let f = h.field();
    let n = h.nvars();
    let odd = f.characteristic() != 2;
    let comps = h.to_polys();
    let expect = |exprs: &[&str], from: usize| -> Result<bool> {
        for (k, e) in exprs.iter().enumerate() {
            if comps.get(from + k) != Some(&Poly::parse(f, n, e)?) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(match tag {
        1 => rows <= 3,
        2 => odd && rows <= 4 && n >= 2 && expect(&["1/2*x1^2", "x1*x2", "1/2*x2^2"], 1)?,
        3 => {
            !odd && rows <= 4 && n >= 3 && h.ncomps() >= 4 && {
                let target = [(0, 1), (0, 2), (1, 2)];
                (0..3).all(|k| {
                    (0..n).all(|a| {
                        (a + 1..n).all(|b| {
                            let want = if target[k] == (a, b) { f.one() } else { f.zero() };
                            h.coeff(k + 1, a, b) == &want
                        })
                    })
                })
            }
        }
        4 => (odd && cols <= 3) || (!odd && cols <= 4),
        5 => {
            let Some(c) = c else { return Ok(false) };
            if !odd || f.is_zero(c) || rows > 4 || n < 4 || h.ncomps() < 4 {
                return Ok(false);
            }
            let half = f.half()?;
            let mut want = QuadMap::zero(f, n, 4);
            let one = f.one();
            let ch = f.mul(c, &half);
            want.set_coeff(0, 0, 2, one.clone());
            want.set_coeff(0, 1, 3, c.clone());
            want.set_coeff(1, 1, 2, one.clone());
            want.set_coeff(1, 0, 3, f.neg(&one));
            want.set_coeff(2, 2, 2, half.clone());
            want.set_coeff(2, 3, 3, ch.clone());
            want.set_coeff(3, 0, 0, half);
            want.set_coeff(3, 1, 1, ch);
            let head = &comps[..4];
            if head != want.to_polys().as_slice() {
                return Ok(false);
            }
            // H̃₁² + c·H̃₂² − 4·H̃₃·H̃₄ = 0
            let four = f.from_i64(4);
            let rel = head[0]
                .mul(&head[0])
                .add(&head[1].mul(&head[1]).scale(c))
                .sub(&head[2].mul(&head[3]).scale(&four));
            rel.is_zero()
        }
        _ => false,
    })
}

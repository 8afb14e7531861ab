//! General polynomial maps, used for inverses and tame factorizations of
//! triangularizable Keller maps x + H.

use crate::algebra::{Field, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::QuadMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    pub comps: Vec<Poly>,
}

impl PolyMap {
    pub fn identity(field: &Field, n: usize) -> PolyMap {
        PolyMap {
            comps: (0..n).map(|i| Poly::var(field, n, i)).collect(),
        }
    }

    /// x + H.
    pub fn keller(h: &QuadMap) -> PolyMap {
        let f = h.field();
        let n = h.nvars();
        PolyMap {
            comps: h
                .to_polys()
                .iter()
                .enumerate()
                .map(|(i, p)| p.add(&Poly::var(f, n, i)))
                .collect(),
        }
    }

    /// x ↦ Tx.
    pub fn linear(t: &Matrix) -> PolyMap {
        PolyMap {
            comps: t.to_rows().iter().map(|r| Poly::linear(t.field(), r)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &PolyMap) -> PolyMap {
        PolyMap {
            comps: self.comps.iter().map(|p| p.substitute(&inner.comps)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self.comps.first() {
            None => true,
            Some(p) => *self == PolyMap::identity(p.field(), self.comps.len()),
        }
    }
}

/// x ↦ x + poly·e_coord, with poly free of x_coord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryMap {
    pub coord: usize,
    pub poly: Poly,
}

impl ElementaryMap {
    pub fn to_map(&self) -> PolyMap {
        let f = self.poly.field();
        let n = self.poly.nvars();
        let mut m = PolyMap::identity(f, n);
        m.comps[self.coord] = m.comps[self.coord].add(&self.poly);
        m
    }

    pub fn inverse(&self) -> ElementaryMap {
        ElementaryMap {
            coord: self.coord,
            poly: self.poly.neg(),
        }
    }
}

/// x + H = L ∘ E_1 ∘ E_2 ∘ ⋯ ∘ E_k ∘ L⁻¹ with L(x) = Tx; `steps` lists E_1..E_k,
/// so E_k is applied first.
#[derive(Clone, Debug)]
pub struct TameFactorization {
    pub t: Matrix,
    pub steps: Vec<ElementaryMap>,
}

impl TameFactorization {
    pub fn compose(&self) -> Result<PolyMap> {
        let f = self.t.field();
        let n = self.t.rows();
        let mut acc = PolyMap::identity(f, n);
        for e in &self.steps {
            acc = acc.compose(&e.to_map());
        }
        let l = PolyMap::linear(&self.t);
        let linv = PolyMap::linear(&self.t.inverse()?);
        Ok(l.compose(&acc).compose(&linv))
    }
}

fn triangular_conjugate(h: &QuadMap, t: &Matrix) -> Result<QuadMap> {
    let g = h.conjugate(t)?;
    if !g.jacobian().is_strictly_lower() {
        return Err(Error::NotTriangular("T⁻¹JH(Tx)T is not strictly lower triangular".into()));
    }
    Ok(g)
}

/// Inverse of x + H by back-substitution in the coordinates given by T.
pub fn invert_triangular(h: &QuadMap, t: &Matrix) -> Result<PolyMap> {
    let g = triangular_conjugate(h, t)?;
    let f = h.field();
    let n = h.nvars();
    let gp = g.to_polys();
    // u_i = y_i - G_i(u_1, …, u_{i-1}) inverts y = x + G(x).
    let mut u: Vec<Poly> = Vec::with_capacity(n);
    for i in 0..n {
        let mut args = u.clone();
        args.extend((i..n).map(|_| Poly::zero(f, n)));
        let gi = gp[i].substitute(&args);
        u.push(Poly::var(f, n, i).sub(&gi));
    }
    let inner = PolyMap { comps: u };
    // x + G is triangular, hence invertible, so a right inverse is the inverse;
    // conjugating by T carries this over to x + H
    if !PolyMap::keller(&g).compose(&inner).is_identity() {
        return Err(Error::Precondition("back-substitution did not invert the map".into()));
    }
    let l = PolyMap::linear(t);
    let linv = PolyMap::linear(&t.inverse()?);
    Ok(l.compose(&inner).compose(&linv))
}

/// Elementary factors of a triangular x + H, one per nonzero component.
pub fn tame_factor_triangular(h: &QuadMap, t: &Matrix) -> Result<TameFactorization> {
    let g = triangular_conjugate(h, t)?;
    let steps = (1..h.nvars())
        .filter(|&i| !g.component_is_zero(i))
        .map(|i| ElementaryMap {
            coord: i,
            poly: g.component(i),
        })
        .collect();
    let fac = TameFactorization { t: t.clone(), steps };
    if fac.compose()? != PolyMap::keller(h) {
        return Err(Error::Precondition("factorization does not compose to x + H".into()));
    }
    Ok(fac)
}

/// x + H = E ∘ (x + H'), where H' is H with component `coord` removed and
/// E is elementary in that coordinate; `t` must triangularize H'.
#[derive(Clone, Debug)]
pub struct ElementarySplit {
    pub step: ElementaryMap,
    pub rest: TameFactorization,
}

pub fn elementary_split(h: &QuadMap, coord: usize, t: &Matrix) -> Result<ElementarySplit> {
    let f = h.field();
    let reduced = h.with_component(coord, vec![f.zero(); h.tables()[coord].len()]);
    let rest = tame_factor_triangular(&reduced, t)?;
    let rest_inv = invert_triangular(&reduced, t)?;
    let poly = h.component(coord).substitute(&rest_inv.comps);
    if poly.involves(coord) {
        return Err(Error::Precondition(format!(
            "the quotient map changes x{} by a polynomial involving x{}",
            coord + 1,
            coord + 1
        )));
    }
    let step = ElementaryMap { coord, poly };
    let total = step.to_map().compose(&rest.compose()?);
    if total != PolyMap::keller(h) {
        return Err(Error::Precondition("split does not compose to x + H".into()));
    }
    Ok(ElementarySplit { step, rest })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_zero_and_one_step() {
        let q = Field::rationals();
        let i2 = Matrix::identity(&q, 2);
        assert!(invert_triangular(&QuadMap::zero(&q, 2, 2), &i2).unwrap().is_identity());
        let h = QuadMap::parse(&q, 2, &["0", "x1^2"]).unwrap();
        let inv = invert_triangular(&h, &i2).unwrap();
        let s: Vec<String> = inv.comps.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["x1", "-x1^2 + x2"]);
        let fac = tame_factor_triangular(&h, &i2).unwrap();
        assert_eq!(fac.steps.len(), 1);
        assert_eq!(fac.steps[0].coord, 1);
        assert_eq!(fac.steps[0].poly.to_string(), "x1^2");
        assert!(tame_factor_triangular(&QuadMap::zero(&q, 2, 2), &i2).unwrap().steps.is_empty());
    }

    #[test]
    fn inverse_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let h = QuadMap::parse(&f3, 3, &["0", "x1^2", "x1*x2"]).unwrap();
        let inv = invert_triangular(&h, &Matrix::identity(&f3, 3)).unwrap();
        assert!(inv.compose(&PolyMap::keller(&h)).is_identity());
    }

    #[test]
    fn non_triangular_rejected() {
        let q = Field::rationals();
        let h = QuadMap::parse(&q, 2, &["x2^2", "0"]).unwrap();
        assert!(matches!(
            invert_triangular(&h, &Matrix::identity(&q, 2)),
            Err(Error::NotTriangular(_))
        ));
        let rev = Matrix::permutation(&q, &[1, 0]);
        assert!(invert_triangular(&h, &rev).is_ok());
    }
}

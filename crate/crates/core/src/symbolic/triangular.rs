//! Strict triangularization by permutations and by constant similarity.

use crate::algebra::{Elem, Field};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::PolyMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// P e_i = e_{perm[i]} and PᵗMP is strictly lower triangular.
    PermutationTriangular(Vec<usize>),
    /// T⁻¹MT is strictly lower triangular.
    SimilarTriangular(Matrix),
    NotTriangularizable,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    MinorTest,
    FlagSearchExhaustive,
    FlagSearchGreedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlagMode {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Debug)]
pub struct TriangularityReport {
    pub verdict: Verdict,
    pub method: Method,
}

impl TriangularityReport {
    pub fn transform(&self, field: &Field) -> Option<Matrix> {
        match &self.verdict {
            Verdict::PermutationTriangular(p) => Some(Matrix::permutation(field, p)),
            Verdict::SimilarTriangular(t) => Some(t.clone()),
            _ => None,
        }
    }
}

fn conjugated_is_lower(m: &PolyMatrix, t: &Matrix) -> bool {
    let Ok(tinv) = t.inverse() else {
        return false;
    };
    m.mul_const_left(&tinv).mul_const_right(t).is_strictly_lower()
}

/// Topological order of the dependency graph of M: row a may only use
/// columns placed before a. Smallest available index first.
pub fn permutation_triangularize(m: &PolyMatrix) -> Result<TriangularityReport> {
    if !m.is_square() {
        return Err(Error::Dimension("triangularity of a non-square matrix".into()));
    }
    let n = m.rows();
    let deps: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| !m.get(a, b).is_zero()).collect())
        .collect();
    let mut placed = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    while perm.len() < n {
        let next = (0..n).find(|&a| !placed[a] && deps[a].iter().all(|&b| b != a && placed[b]));
        match next {
            Some(a) => {
                placed[a] = true;
                perm.push(a);
            }
            None => {
                return Ok(TriangularityReport {
                    verdict: Verdict::NotTriangularizable,
                    method: Method::MinorTest,
                })
            }
        }
    }
    let p = Matrix::permutation(m.field(), &perm);
    assert!(conjugated_is_lower(m, &p), "permutation recheck failed");
    Ok(TriangularityReport {
        verdict: Verdict::PermutationTriangular(perm),
        method: Method::MinorTest,
    })
}

/// Stacked coefficient matrices [M^(1); …; M^(k)].
fn stacked(mats: &[Matrix], left: &Matrix) -> Matrix {
    let f = left.field();
    let n = mats[0].cols();
    let mut rows = Vec::new();
    for m in mats {
        let lm = left.mul(m);
        for i in 0..lm.rows() {
            rows.push(lm.row(i));
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(f, 0, n);
    }
    Matrix::from_rows(f, rows)
}

/// W₀ = 0, W_{i+1} = {v : M^(t)v ∈ W_i for all t}; T lists a basis adapted
/// to the chain with W₁ last.
fn greedy_flag(m: &PolyMatrix) -> Result<Option<Matrix>> {
    let f = m.field();
    let n = m.rows();
    let mats = m.coefficient_matrices()?;
    if mats.is_empty() {
        return Ok(Some(Matrix::identity(f, n)));
    }
    let mut layers: Vec<Vec<Vec<Elem>>> = Vec::new();
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    let mut annihilator = Matrix::identity(f, n);
    loop {
        let w = stacked(&mats, &annihilator).kernel();
        if w.len() == basis.len() {
            return Ok(None);
        }
        let mut layer = Vec::new();
        for v in w {
            let mut trial = basis.clone();
            trial.push(v.clone());
            if Matrix::from_cols(f, n, &trial).rank() == trial.len() {
                basis = trial;
                layer.push(v);
            }
        }
        layers.push(layer);
        if basis.len() == n {
            break;
        }
        let span = Matrix::from_cols(f, n, &basis);
        let ann = span.left_kernel();
        annihilator = Matrix::from_rows(f, ann);
    }
    let cols: Vec<Vec<Elem>> = layers.into_iter().rev().flatten().collect();
    Ok(Some(Matrix::from_cols(f, n, &cols)))
}

/// The vectors of Kⁿ with first nonzero coordinate 1, in index order.
fn projective_points(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    let q = f.size().unwrap();
    let total = q.pow(n as u32);
    let mut out = Vec::new();
    for idx in 1..total {
        let mut v = Vec::with_capacity(n);
        let mut t = idx;
        for _ in 0..n {
            v.push(f.element(t % q));
            t /= q;
        }
        v.reverse();
        if v.iter().find(|x| !f.is_zero(x)).map(|x| f.is_one(x)) == Some(true) {
            out.push(v);
        }
    }
    out
}

fn span_key(f: &Field, n: usize, vecs: &[Vec<Elem>]) -> Vec<u64> {
    let (r, p) = Matrix::from_rows(f, vecs.to_vec()).rref();
    let mut key = Vec::with_capacity(p.len() * n);
    for i in 0..p.len() {
        key.extend(r.row(i).iter().map(|x| f.index_of(x)));
    }
    key
}

/// Depth-first search over flags t_n, t_{n-1}, … with M t ∈ span of the
/// vectors already chosen. Subspaces already explored are skipped, since
/// whether a subspace extends to a full flag depends only on the subspace.
fn exhaustive_flag(m: &PolyMatrix, budget: u64) -> Result<Option<Option<Matrix>>> {
    let f = m.field();
    let n = m.rows();
    let mats = m.coefficient_matrices()?;
    let points = projective_points(f, n);
    struct Search<'a> {
        f: &'a Field,
        n: usize,
        mats: &'a [Matrix],
        points: &'a [Vec<Elem>],
        seen: std::collections::HashSet<Vec<u64>>,
        spent: u64,
        budget: u64,
    }
    impl Search<'_> {
        fn rec(&mut self, chosen: &mut Vec<Vec<Elem>>) -> Option<bool> {
            if chosen.len() == self.n {
                return Some(true);
            }
            let (f, n, mats, points) = (self.f, self.n, self.mats, self.points);
            for p in points {
                self.spent += 1;
                if self.spent > self.budget {
                    return None;
                }
                let ok = mats.iter().all(|mt| {
                    let img = mt.mul_vec(p);
                    if chosen.is_empty() {
                        return img.iter().all(|x| f.is_zero(x));
                    }
                    Matrix::from_cols(f, n, chosen).solve(&img).is_some()
                });
                if !ok {
                    continue;
                }
                let mut trial = chosen.clone();
                trial.push(p.clone());
                if Matrix::from_cols(f, n, &trial).rank() != trial.len() {
                    continue;
                }
                if !self.seen.insert(span_key(f, n, &trial)) {
                    continue;
                }
                chosen.push(p.clone());
                match self.rec(chosen) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                chosen.pop();
            }
            Some(false)
        }
    }
    let mut search = Search {
        f,
        n,
        mats: &mats,
        points: &points,
        seen: Default::default(),
        spent: 0,
        budget,
    };
    let mut chosen = Vec::new();
    match search.rec(&mut chosen) {
        None => Ok(None),
        Some(false) => Ok(Some(None)),
        Some(true) => {
            chosen.reverse();
            Ok(Some(Some(Matrix::from_cols(f, n, &chosen))))
        }
    }
}

/// Default search budget for exhaustive flag enumeration.
pub const FLAG_BUDGET: u64 = 10_000_000;

pub fn flag_triangularize(m: &PolyMatrix, mode: FlagMode) -> Result<TriangularityReport> {
    flag_triangularize_with_budget(m, mode, FLAG_BUDGET)
}

pub fn flag_triangularize_with_budget(m: &PolyMatrix, mode: FlagMode, budget: u64) -> Result<TriangularityReport> {
    if !m.is_square() {
        return Err(Error::Dimension("triangularity of a non-square matrix".into()));
    }
    let f = m.field();
    let (found, method) = match mode {
        FlagMode::Greedy => (Some(greedy_flag(m)?), Method::FlagSearchGreedy),
        FlagMode::Exhaustive => {
            if f.size().is_none() {
                return Err(Error::UnsupportedMode("exhaustive flag search needs a finite field".into()));
            }
            (exhaustive_flag(m, budget)?, Method::FlagSearchExhaustive)
        }
    };
    let verdict = match found {
        None => Verdict::Unknown,
        Some(None) => Verdict::NotTriangularizable,
        Some(Some(t)) => {
            assert!(conjugated_is_lower(m, &t), "flag recheck failed");
            Verdict::SimilarTriangular(t)
        }
    };
    Ok(TriangularityReport { verdict, method })
}

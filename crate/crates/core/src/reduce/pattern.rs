//! Jacobian displays with star slots, and a search for T matching one.

use crate::algebra::{Elem, Field, Mono, Poly};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::{pair_index, table_len, PolyMatrix, QuadMap};

/// A square display; `None` entries are stars.
#[derive(Clone, Debug)]
pub struct Pattern {
    pub name: String,
    pub field: Field,
    pub n: usize,
    pub entries: Vec<Vec<Option<Poly>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Slot {
    Fixed(Elem),
    Free,
}

impl Pattern {
    pub fn parse(field: &Field, name: &str, rows: &[Vec<String>]) -> Result<Pattern> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension(format!("pattern {name} is not square")));
            }
            let mut out = Vec::with_capacity(n);
            for s in row {
                if s.trim() == "*" {
                    out.push(None);
                } else {
                    let p = Poly::parse(field, n, s)?;
                    if !p.is_zero() && !p.is_linear_form() {
                        return Err(Error::Parse(format!("pattern entry {s} is not a linear form")));
                    }
                    out.push(Some(p));
                }
            }
            entries.push(out);
        }
        let pat = Pattern {
            name: name.to_string(),
            field: field.clone(),
            n,
            entries,
        };
        pat.slots()?;
        Ok(pat)
    }

    /// Exact agreement on every non-star entry.
    pub fn matches(&self, j: &PolyMatrix) -> bool {
        if j.rows() != self.n || j.cols() != self.n {
            return false;
        }
        (0..self.n).all(|i| {
            (0..self.n).all(|k| match &self.entries[i][k] {
                None => true,
                Some(p) => j.get(i, k) == p,
            })
        })
    }

    fn coeff(&self, i: usize, col: usize, var: usize) -> Option<Elem> {
        self.entries[i][col]
            .as_ref()
            .map(|p| p.coeff(&Mono::var(self.n, var)))
    }

    /// Per component, the coefficient of each x_a·x_b (a ≤ b) in any map
    /// whose Jacobian matches.
    fn slots(&self) -> Result<Vec<Vec<Slot>>> {
        let f = &self.field;
        let n = self.n;
        let mut out = vec![vec![Slot::Free; table_len(n)]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for a in 0..n {
                for b in a..n {
                    let slot = if a == b {
                        match self.coeff(i, a, a) {
                            None => Slot::Free,
                            Some(c) if f.has_half() => Slot::Fixed(f.mul(&c, &f.half()?)),
                            Some(c) if f.is_zero(&c) => Slot::Free,
                            Some(_) => {
                                return Err(Error::Precondition(format!(
                                    "pattern {}: diagonal term at ({}, {}) in characteristic 2",
                                    self.name,
                                    i + 1,
                                    a + 1
                                )))
                            }
                        }
                    } else {
                        match (self.coeff(i, a, b), self.coeff(i, b, a)) {
                            (None, None) => Slot::Free,
                            (Some(c), None) | (None, Some(c)) => Slot::Fixed(c),
                            (Some(c), Some(d)) if c == d => Slot::Fixed(c),
                            _ => {
                                return Err(Error::Precondition(format!(
                                    "pattern {} is not a Jacobian at row {}",
                                    self.name,
                                    i + 1
                                )))
                            }
                        }
                    };
                    row[pair_index(n, a, b)] = slot;
                }
            }
        }
        Ok(out)
    }

    /// The map with all free slots set to zero.
    pub fn representative(&self) -> QuadMap {
        let slots = self.slots().expect("validated at construction");
        let tables = slots
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| match s {
                        Slot::Fixed(c) => c,
                        Slot::Free => self.field.zero(),
                    })
                    .collect()
            })
            .collect();
        QuadMap::from_tables(&self.field, self.n, tables).expect("table sizes agree")
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Matrix),
    Exhausted,
    OutOfBudget,
}

/// Tracks candidate evaluations across several searches.
#[derive(Clone, Debug)]
pub struct Budget {
    pub limit: u64,
    pub spent: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, spent: 0 }
    }

    fn take(&mut self) -> bool {
        self.spent += 1;
        self.spent <= self.limit
    }
}

pub fn conjugate_matches(h: &QuadMap, pat: &Pattern, t: &Matrix) -> bool {
    match h.conjugate(t) {
        Ok(g) => pat.matches(&g.jacobian()),
        Err(_) => false,
    }
}

/// Column-by-column search for T with J(T⁻¹H(Tx)) matching `pat`. Writing
/// H(Tx) = T·G(x) coefficientwise gives, for x_a·x_b, the equation
/// B(t_a, t_b) = Σ_i g_i t_i; those linear in the open columns are solved
/// exactly, and open columns are enumerated only when nothing is forced.
pub fn search(h: &QuadMap, pat: &Pattern, budget: &mut Budget) -> Result<SearchOutcome> {
    if h.nvars() != pat.n || h.ncomps() != pat.n {
        return Err(Error::Dimension("pattern size differs from the map".into()));
    }
    let slots = pat.slots()?;
    let mats = h.jacobian_coefficients();
    let Some(constraints) = column_constraints(h.field(), pat, &mats) else {
        return Ok(SearchOutcome::Exhausted);
    };
    let mut s = Search {
        h,
        pat,
        f: h.field().clone(),
        n: pat.n,
        slots,
        mats,
        constraints,
        budget,
    };
    let mut cols = vec![None; pat.n];
    Ok(match s.rec(&mut cols) {
        Step::Found(t) => SearchOutcome::Found(t),
        Step::Dead => SearchOutcome::Exhausted,
        Step::Stop => SearchOutcome::OutOfBudget,
    })
}

/// Linear conditions wᵗt_j = 0 on single columns. From JH(Tx)·T = T·JG(x):
/// a zero column j of the display puts t_j in the common kernel of the
/// coefficient matrices, and when the nonzero rows are exactly as many as
/// the dimension of the span W of their columns, those t_i span W.
/// None when the counts already rule the display out.
fn column_constraints(f: &Field, pat: &Pattern, mats: &[Matrix]) -> Option<Vec<Vec<Vec<Elem>>>> {
    let n = pat.n;
    let is_zero = |e: &Option<Poly>| e.as_ref().is_some_and(Poly::is_zero);
    let mut out = vec![Vec::new(); n];
    if mats.is_empty() {
        return Some(out);
    }
    let stacked = Matrix::from_rows(f, mats.iter().flat_map(|m| m.to_rows()).collect());
    let (red, piv) = stacked.rref();
    let kernel_eqs: Vec<Vec<Elem>> = (0..piv.len()).map(|i| red.row(i)).collect();
    let zero_cols: Vec<usize> = (0..n).filter(|&j| (0..n).all(|i| is_zero(&pat.entries[i][j]))).collect();
    if zero_cols.len() > n - kernel_eqs.len() {
        return None;
    }
    for &j in &zero_cols {
        out[j].extend(kernel_eqs.iter().cloned());
    }
    let wide = Matrix::from_cols(f, n, &mats.iter().flat_map(|m| m.transpose().to_rows()).collect::<Vec<_>>());
    let dim_w = wide.rank();
    let live: Vec<usize> = (0..n).filter(|&i| !pat.entries[i].iter().all(is_zero)).collect();
    if live.len() < dim_w {
        return None;
    }
    if live.len() == dim_w {
        let ann = wide.left_kernel();
        for &i in &live {
            out[i].extend(ann.iter().cloned());
        }
    }
    Some(out)
}

enum Step {
    Found(Matrix),
    Dead,
    Stop,
}

struct Search<'a> {
    h: &'a QuadMap,
    pat: &'a Pattern,
    f: Field,
    n: usize,
    slots: Vec<Vec<Slot>>,
    mats: Vec<Matrix>,
    constraints: Vec<Vec<Vec<Elem>>>,
    budget: &'a mut Budget,
}

/// Affine solution set of the current linear system, per open column.
struct Affine {
    particular: Vec<Elem>,
    kernel: Vec<Vec<Elem>>,
}

impl Search<'_> {
    fn jac_at(&self, v: &[Elem]) -> Matrix {
        let f = &self.f;
        let mut acc = Matrix::zeros(f, self.n, self.n);
        for (m, c) in self.mats.iter().zip(v) {
            if !f.is_zero(c) {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }

    fn quad_at(&self, v: &[Elem]) -> Vec<Elem> {
        self.h.eval(v).expect("dimensions agree")
    }

    /// Returns None when the linear system is inconsistent.
    fn solve(&self, cols: &[Option<Vec<Elem>>]) -> Option<Affine> {
        let f = &self.f;
        let n = self.n;
        let open: Vec<usize> = (0..n).filter(|&c| cols[c].is_none()).collect();
        let offset = |c: usize| open.iter().position(|&o| o == c).map(|p| p * n);
        let base_vars = open.len() * n;
        let mut rows: Vec<(Vec<(usize, Elem)>, Vec<Elem>)> = Vec::new();
        let mut zvars = 0;
        for a in 0..n {
            for b in a..n {
                let idx = pair_index(n, a, b);
                let frees: Vec<usize> = (0..n).filter(|&i| self.slots[i][idx] == Slot::Free).collect();
                if frees.iter().any(|&i| cols[i].is_none()) {
                    continue;
                }
                // lhs_const + lhs_lin·t_open = Σ fixed + Σ z·t_free
                let mut konst = vec![f.zero(); n];
                let mut lin: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); n];
                match (&cols[a], &cols[b]) {
                    (Some(ta), Some(tb)) => {
                        let v = if a == b {
                            self.quad_at(ta)
                        } else {
                            self.jac_at(ta).mul_vec(tb)
                        };
                        konst = v;
                    }
                    (Some(ta), None) | (None, Some(ta)) if a != b => {
                        let open_col = if cols[a].is_none() { a } else { b };
                        let jm = self.jac_at(ta);
                        let off = offset(open_col).unwrap();
                        for r in 0..n {
                            for k in 0..n {
                                let c = jm.get(r, k);
                                if !f.is_zero(c) {
                                    lin[r].push((off + k, c.clone()));
                                }
                            }
                        }
                    }
                    _ => continue,
                }
                for i in 0..n {
                    if let Slot::Fixed(g) = &self.slots[i][idx] {
                        if f.is_zero(g) {
                            continue;
                        }
                        match &cols[i] {
                            Some(ti) => {
                                for r in 0..n {
                                    konst[r] = f.sub(&konst[r], &f.mul(g, &ti[r]));
                                }
                            }
                            None => {
                                let off = offset(i).unwrap();
                                for (r, l) in lin.iter_mut().enumerate() {
                                    l.push((off + r, f.neg(g)));
                                }
                            }
                        }
                    }
                }
                for &i in &frees {
                    let ti = cols[i].as_ref().unwrap();
                    let z = base_vars + zvars;
                    zvars += 1;
                    for (r, l) in lin.iter_mut().enumerate() {
                        if !f.is_zero(&ti[r]) {
                            l.push((z, f.neg(&ti[r])));
                        }
                    }
                }
                for r in 0..n {
                    rows.push((lin[r].clone(), vec![f.neg(&konst[r])]));
                }
            }
        }
        for &c in &open {
            let off = offset(c).unwrap();
            for w in &self.constraints[c] {
                let lin = (0..n).filter(|&k| !f.is_zero(&w[k])).map(|k| (off + k, w[k].clone())).collect();
                rows.push((lin, vec![f.zero()]));
            }
        }
        let nv = base_vars + zvars;
        if rows.is_empty() {
            return Some(Affine {
                particular: vec![f.zero(); base_vars],
                kernel: Matrix::identity(f, base_vars).to_rows(),
            });
        }
        let mut aug = Matrix::zeros(f, rows.len(), nv + 1);
        for (r, (lin, rhs)) in rows.iter().enumerate() {
            for (k, c) in lin {
                let cur = f.add(aug.get(r, *k), c);
                aug.set(r, *k, cur);
            }
            aug.set(r, nv, rhs[0].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&nv) {
            return None;
        }
        let mut particular = vec![f.zero(); nv];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = red.get(row, nv).clone();
        }
        let coeffs = red.submatrix(&(0..red.rows()).collect::<Vec<_>>(), &(0..nv).collect::<Vec<_>>());
        let kernel = coeffs.kernel();
        Some(Affine {
            particular: particular[..base_vars].to_vec(),
            kernel: kernel.into_iter().map(|k| k[..base_vars].to_vec()).collect(),
        })
    }

    fn independent(&self, cols: &[Option<Vec<Elem>>]) -> bool {
        let set: Vec<Vec<Elem>> = cols.iter().flatten().cloned().collect();
        set.is_empty() || Matrix::from_cols(&self.f, self.n, &set).rank() == set.len()
    }

    fn candidates(&self, aff: &Affine, slot: usize) -> Vec<Vec<Elem>> {
        let f = &self.f;
        let n = self.n;
        let base: Vec<Elem> = aff.particular[slot * n..(slot + 1) * n].to_vec();
        let dirs: Vec<Vec<Elem>> = aff.kernel.iter().map(|k| k[slot * n..(slot + 1) * n].to_vec()).collect();
        let basis: Vec<Vec<Elem>> = if dirs.iter().all(|d| d.iter().all(|x| f.is_zero(x))) {
            Vec::new()
        } else {
            let m = Matrix::from_rows(f, dirs);
            let (r, p) = m.rref();
            (0..p.len()).map(|i| r.row(i)).collect()
        };
        let d = basis.len() as u32;
        let values: Vec<Elem> = match f.size() {
            Some(_) => f.elements(),
            None => vec![f.zero(), f.one(), f.from_i64(-1)],
        };
        let q = values.len() as u64;
        let total = q.saturating_pow(d);
        let mut out = Vec::new();
        for idx in 0..total {
            let mut v = base.clone();
            let mut t = idx;
            for b in basis.iter().rev() {
                let c = &values[(t % q) as usize];
                t /= q;
                if f.is_zero(c) {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(b) {
                    *x = f.add(x, &f.mul(c, y));
                }
            }
            if v.iter().any(|x| !f.is_zero(x)) {
                out.push(v);
            }
        }
        out
    }

    fn rec(&mut self, cols: &mut Vec<Option<Vec<Elem>>>) -> Step {
        if cols.iter().all(|c| c.is_some()) {
            if !self.budget.take() {
                return Step::Stop;
            }
            let set: Vec<Vec<Elem>> = cols.iter().flatten().cloned().collect();
            let t = Matrix::from_cols(&self.f, self.n, &set);
            if t.is_invertible() && conjugate_matches(self.h, self.pat, &t) {
                return Step::Found(t);
            }
            return Step::Dead;
        }
        let Some(aff) = self.solve(cols) else {
            return Step::Dead;
        };
        let open: Vec<usize> = (0..self.n).filter(|&c| cols[c].is_none()).collect();
        let n = self.n;
        let f = self.f.clone();
        let dim_of = |slot: usize| -> usize {
            let dirs: Vec<Vec<Elem>> = aff.kernel.iter().map(|k| k[slot * n..(slot + 1) * n].to_vec()).collect();
            if dirs.is_empty() {
                0
            } else {
                Matrix::from_rows(&f, dirs).rank()
            }
        };
        let dims: Vec<usize> = (0..open.len()).map(dim_of).collect();
        let forced: Vec<usize> = (0..open.len()).filter(|&s| dims[s] == 0).collect();
        if !forced.is_empty() {
            let mut next = cols.clone();
            for &s in &forced {
                let v = aff.particular[s * n..(s + 1) * n].to_vec();
                if v.iter().all(|x| f.is_zero(x)) {
                    return Step::Dead;
                }
                next[open[s]] = Some(v);
            }
            if !self.independent(&next) {
                return Step::Dead;
            }
            if !self.budget.take() {
                return Step::Stop;
            }
            return self.rec(&mut next);
        }
        let slot = (0..open.len()).min_by_key(|&s| dims[s]).unwrap();
        let col = open[slot];
        for cand in self.candidates(&aff, slot) {
            if !self.budget.take() {
                return Step::Stop;
            }
            cols[col] = Some(cand);
            if self.independent(cols) {
                match self.rec(cols) {
                    Step::Dead => {}
                    other => {
                        cols[col] = None;
                        return other;
                    }
                }
            }
            cols[col] = None;
        }
        Step::Dead
    }
}

/// Coordinate permutations only, the identity first.
pub fn permutation_transform(h: &QuadMap, pat: &Pattern, budget: &mut Budget) -> Result<SearchOutcome> {
    let f = h.field();
    let n = pat.n;
    if h.nvars() != n || h.ncomps() != n {
        return Err(Error::Dimension("pattern size differs from the map".into()));
    }
    if column_constraints(f, pat, &h.jacobian_coefficients()).is_none() {
        return Ok(SearchOutcome::Exhausted);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perms = Vec::new();
    permute(&mut perm, 0, &mut perms);
    for p in perms {
        if !budget.take() {
            return Ok(SearchOutcome::OutOfBudget);
        }
        let t = Matrix::permutation(f, &p);
        if conjugate_matches(h, pat, &t) {
            return Ok(SearchOutcome::Found(t));
        }
    }
    Ok(SearchOutcome::Exhausted)
}

/// Identity and coordinate permutations first, then the column search.
pub fn find_transform(h: &QuadMap, pat: &Pattern, budget: &mut Budget) -> Result<SearchOutcome> {
    match permutation_transform(h, pat, budget)? {
        SearchOutcome::Exhausted => search(h, pat, budget),
        found => Ok(found),
    }
}

/// Permutation matrices with entries in {±1} (signs only in characteristic ≠ 2).
pub fn signed_permutations(f: &Field, n: usize) -> Vec<Matrix> {
    let mut perms = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    permute(&mut cur, 0, &mut perms);
    let signs: Vec<Vec<i64>> = if f.characteristic() == 2 {
        vec![vec![1; n]]
    } else {
        (0..1u32 << n)
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    };
    let mut out = Vec::new();
    for p in &perms {
        for s in &signs {
            let mut m = Matrix::zeros(f, n, n);
            for i in 0..n {
                m.set(p[i], i, f.from_i64(s[i]));
            }
            out.push(m);
        }
    }
    out
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rows(s: &[&[&str]]) -> Vec<Vec<String>> {
        s.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }

    #[test]
    fn slots_follow_the_display() {
        let q = Field::rationals();
        let pat = Pattern::parse(&q, "t", &rows(&[&["x2", "x1", "0"], &["*", "0", "0"], &["x3", "0", "x1"]])).unwrap();
        let rep = pat.representative();
        assert_eq!(rep, QuadMap::parse(&q, 3, &["x1*x2", "0", "x1*x3"]).unwrap());
        assert!(pat.matches(&rep.jacobian()));
        let bad = Pattern::parse(&q, "b", &rows(&[&["x2", "x2"], &["0", "0"]]));
        assert!(bad.is_err());
    }

    #[test]
    fn recovers_a_conjugation() {
        let f3 = Field::prime(3).unwrap();
        let pat = Pattern::parse(
            &f3,
            "p",
            &rows(&[&["0", "0", "0"], &["x3", "0", "x1"], &["x2", "x1", "0"]]),
        )
        .unwrap();
        let g = pat.representative();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = Matrix::random_invertible(&f3, 3, &mut rng);
        let h = g.conjugate(&t.inverse().unwrap()).unwrap();
        let mut budget = Budget::new(1_000_000);
        match search(&h, &pat, &mut budget).unwrap() {
            SearchOutcome::Found(t) => assert!(conjugate_matches(&h, &pat, &t)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn signed_permutation_counts() {
        assert_eq!(signed_permutations(&Field::rationals(), 3).len(), 48);
        assert_eq!(signed_permutations(&Field::prime(2).unwrap(), 3).len(), 6);
    }
}

//! Membership in the rank-4 nilpotent classifications in dimensions 5 and 6.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quadmap::QuadMap;
use crate::symbolic::{flag_triangularize, is_nilpotent, poly_rank, FlagMode};

use super::certificate::{Certificate, Theorem};
use super::displays::{dim5_patterns, dim6_patterns};
use super::pattern::{permutation_transform, search, Budget, Pattern, SearchOutcome};
use super::rk3np::SEARCH_BUDGET;

#[derive(Clone, Debug)]
pub enum Classification {
    Certified(Certificate),
    /// Every candidate was examined without a match (finite fields only).
    NoMatch { spent: u64 },
    /// The budget ran out, or the search space over ℚ is not exhausted by the grid.
    Unknown { spent: u64 },
}

impl Classification {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Classification::Certified(c) => Some(c),
            _ => None,
        }
    }
}

fn preconditions(h: &QuadMap, n: usize, char_two: bool) -> Result<()> {
    let f = h.field();
    if (f.characteristic() == 2) != char_two {
        return Err(Error::Precondition(format!(
            "classification in dimension {n} needs characteristic {}",
            if char_two { "2" } else { "≠ 2" }
        )));
    }
    if h.nvars() != n || h.ncomps() != n {
        return Err(Error::Precondition(format!("map must be {n} components in {n} variables")));
    }
    let j = h.jacobian();
    if !is_nilpotent(&j)? {
        return Err(Error::Precondition("Jacobian is not nilpotent".into()));
    }
    let r = poly_rank(&j);
    if r != 4 {
        return Err(Error::Precondition(format!("rank is {r}, not 4")));
    }
    Ok(())
}

fn classify(
    h: &QuadMap,
    theorem: Theorem,
    patterns: Vec<(u32, Option<u64>, Pattern)>,
    budget: u64,
) -> Result<Classification> {
    let f = h.field();
    let tri = flag_triangularize(&h.jacobian(), FlagMode::Greedy)?;
    let conj = |tag: u32, t: Matrix| -> Result<Certificate> {
        Ok(Certificate::new(theorem, tag, t.inverse()?, t))
    };
    if let Some(t) = tri.transform(f) {
        return Ok(Classification::Certified(conj(0, t)?.verified(h)?));
    }
    let mut budget = Budget::new(budget);
    let mut complete = f.size().is_some();
    let certify = |tag: u32, c: &Option<u64>, t: Matrix| -> Result<Classification> {
        let mut cert = conj(tag, t)?;
        if let Some(c) = c {
            cert = cert.with_parameter("c", f.from_i64(*c as i64));
        }
        Ok(Classification::Certified(cert.verified(h)?))
    };
    for (tag, c, pat) in &patterns {
        if let SearchOutcome::Found(t) = permutation_transform(h, pat, &mut budget)? {
            return certify(*tag, c, t);
        }
    }
    for (tag, c, pat) in &patterns {
        match search(h, pat, &mut budget)? {
            SearchOutcome::Found(t) => return certify(*tag, c, t),
            SearchOutcome::Exhausted => {}
            SearchOutcome::OutOfBudget => complete = false,
        }
    }
    Ok(if complete {
        Classification::NoMatch { spent: budget.spent }
    } else {
        Classification::Unknown { spent: budget.spent }
    })
}

pub fn classify_dim5(h: &QuadMap) -> Result<Classification> {
    classify_dim5_with_budget(h, SEARCH_BUDGET)
}

pub fn classify_dim5_with_budget(h: &QuadMap, budget: u64) -> Result<Classification> {
    preconditions(h, 5, false)?;
    let pats = dim5_patterns(h.field())?
        .into_iter()
        .enumerate()
        .map(|(i, p)| (i as u32 + 1, None, p))
        .collect();
    classify(h, Theorem::Dim5, pats, budget)
}

pub fn classify_dim6(h: &QuadMap) -> Result<Classification> {
    classify_dim6_with_budget(h, SEARCH_BUDGET)
}

pub fn classify_dim6_with_budget(h: &QuadMap, budget: u64) -> Result<Classification> {
    preconditions(h, 6, true)?;
    let pats = dim6_patterns(h.field())?
        .into_iter()
        .map(|(k, c, p)| (k as u32, c, p))
        .collect();
    classify(h, Theorem::Dim6, pats, budget)
}

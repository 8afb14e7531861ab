//! Lexicographic enumeration of all n-component quadratic maps over a finite field.

use crate::algebra::{Field, FieldDescriptor};
use crate::error::{Error, Result};
use crate::quadmap::{table_len, QuadMap};
use crate::symbolic::is_nilpotent;

/// Largest enumeration accepted without an explicit budget.
pub const ENUMERATION_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapFilter {
    All,
    Nilpotent,
}

impl MapFilter {
    pub fn parse(s: &str) -> Result<MapFilter> {
        match s {
            "all" | "none" => Ok(MapFilter::All),
            "nilpotent" => Ok(MapFilter::Nilpotent),
            _ => Err(Error::Parse(format!("unknown filter {s:?}"))),
        }
    }

    pub fn accepts(&self, h: &QuadMap) -> bool {
        match self {
            MapFilter::All => true,
            MapFilter::Nilpotent => is_nilpotent(&h.jacobian()).expect("square map"),
        }
    }
}

/// The coefficient-table space, indexed in lex order with the first
/// coefficient of the first component most significant.
#[derive(Clone, Debug)]
pub struct Enumeration {
    field: Field,
    n: usize,
    q: u64,
    slots: usize,
    total: u64,
}

impl Enumeration {
    pub fn new(desc: &FieldDescriptor, n: usize, budget: u64) -> Result<Enumeration> {
        let field = Field::from_descriptor(desc)?;
        let Some(q) = field.size() else {
            return Err(Error::Precondition("enumeration needs a finite field".into()));
        };
        let slots = n * table_len(n);
        let total = u32::try_from(slots)
            .ok()
            .and_then(|s| q.checked_pow(s))
            .filter(|&t| t <= budget);
        let Some(total) = total else {
            return Err(Error::Budget(format!(
                "{q}^{slots} maps over {} with n = {n} exceed the budget of {budget}",
                field.name()
            )));
        };
        Ok(Enumeration { field, n, q, slots, total })
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, index: u64) -> QuadMap {
        assert!(index < self.total, "index out of range");
        let len = table_len(self.n);
        let mut digits = vec![0u64; self.slots];
        let mut t = index;
        for d in digits.iter_mut().rev() {
            *d = t % self.q;
            t /= self.q;
        }
        let tables = digits
            .chunks(len)
            .map(|c| c.iter().map(|&d| self.field.element(d)).collect())
            .collect();
        QuadMap::from_tables(&self.field, self.n, tables).expect("table sizes")
    }

    pub fn iter(&self) -> impl Iterator<Item = QuadMap> + '_ {
        (0..self.total).map(|i| self.get(i))
    }
}

/// All maps passing `filter`, lazily and in lex order.
pub fn enumerate_maps(
    desc: &FieldDescriptor,
    n: usize,
    filter: MapFilter,
    budget: u64,
) -> Result<impl Iterator<Item = QuadMap>> {
    let e = Enumeration::new(desc, n, budget)?;
    Ok((0..e.len()).map(move |i| e.get(i)).filter(move |h| filter.accepts(h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let f2 = FieldDescriptor::Prime { p: 2 };
        assert_eq!(enumerate_maps(&f2, 2, MapFilter::All, ENUMERATION_BUDGET).unwrap().count(), 64);
        assert_eq!(Enumeration::new(&f2, 3, ENUMERATION_BUDGET).unwrap().len(), 1 << 18);
    }

    #[test]
    fn refuses_large_spaces() {
        let f3 = FieldDescriptor::Prime { p: 3 };
        let err = Enumeration::new(&f3, 3, ENUMERATION_BUDGET).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
        assert!(Enumeration::new(&FieldDescriptor::Rationals, 2, ENUMERATION_BUDGET).is_err());
    }

    #[test]
    fn lex_order() {
        let e = Enumeration::new(&FieldDescriptor::Prime { p: 2 }, 2, ENUMERATION_BUDGET).unwrap();
        assert!(e.get(0).is_zero());
        assert_eq!(e.get(1).to_string(), "(0, x2^2)");
        assert_eq!(e.get(32).to_string(), "(x1^2, 0)");
    }
}

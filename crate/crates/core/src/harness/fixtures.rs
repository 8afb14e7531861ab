//! Named maps with recorded properties: the displayed normal forms of the
//! classifications and the small-field maps on which pointwise rank fails.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::quadmap::QuadMap;
use crate::reduce::{
    classify_dim5_with_budget, classify_dim6_with_budget, irlem_normalize_with, reduce_rk3, reduce_rk3_nilpotent_with_budget,
    reduce_rk4, reduce_rkr, Certificate, Classification, ExtensionPolicy, Theorem, SEARCH_BUDGET,
};
use crate::symbolic::{is_nilpotent, poly_rank};

use super::format::MapDocument;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseExpectation {
    pub theorem: Theorem,
    pub tag: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    pub rank: usize,
    pub nilpotent: bool,
    #[serde(default)]
    pub cases: Vec<CaseExpectation>,
    /// No point of K^n attains the rank, but one exists over an extension.
    #[serde(default)]
    pub rank_needs_extension: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureDocument {
    pub id: String,
    pub map: MapDocument,
    pub expect: Expectations,
}

#[derive(Clone, Debug)]
pub struct MapFixture {
    pub id: String,
    pub map: QuadMap,
    pub expect: Expectations,
}

/// Runs the reducer of `theorem`; classifications without a certificate are errors.
pub fn reduce_with(theorem: Theorem, h: &QuadMap) -> Result<Certificate> {
    reduce_with_budget(theorem, h, SEARCH_BUDGET)
}

/// As [`reduce_with`], with `budget` candidate transforms for the display searches.
pub fn reduce_with_budget(theorem: Theorem, h: &QuadMap, budget: u64) -> Result<Certificate> {
    let classified = |c: Classification| match c {
        Classification::Certified(c) => Ok(c),
        Classification::NoMatch { .. } => Err(Error::NoCase("no display matches".into())),
        Classification::Unknown { spent } => Err(Error::Budget(format!("search undecided after {spent} candidates"))),
    };
    match theorem {
        Theorem::Rkr => reduce_rkr(h),
        Theorem::Rk4 => reduce_rk4(h),
        Theorem::Rk3 => reduce_rk3(h),
        Theorem::Rk3np => reduce_rk3_nilpotent_with_budget(h, budget),
        Theorem::Dim5 => classified(classify_dim5_with_budget(h, budget)?),
        Theorem::Dim6 => classified(classify_dim6_with_budget(h, budget)?),
    }
}

fn mismatch(id: &str, what: String) -> Error {
    Error::Precondition(format!("fixture {id}: {what}"))
}

impl MapFixture {
    /// Parses the map and re-verifies every expectation.
    pub fn load(doc: &FixtureDocument) -> Result<MapFixture> {
        let map = doc.map.to_map()?;
        let fx = MapFixture {
            id: doc.id.clone(),
            map,
            expect: doc.expect.clone(),
        };
        fx.verify()?;
        Ok(fx)
    }

    pub fn from_json(s: &str) -> Result<MapFixture> {
        let doc: FixtureDocument = serde_json::from_str(s).map_err(|e| Error::Parse(format!("json: {e}")))?;
        MapFixture::load(&doc)
    }

    pub fn document(&self) -> FixtureDocument {
        FixtureDocument {
            id: self.id.clone(),
            map: MapDocument::from_map(&self.map),
            expect: self.expect.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("fixtures serialize")
    }

    pub fn verify(&self) -> Result<()> {
        let id = &self.id;
        let h = &self.map;
        let j = h.jacobian();
        let r = poly_rank(&j);
        if r != self.expect.rank {
            return Err(mismatch(id, format!("rank {r}, expected {}", self.expect.rank)));
        }
        let nil = j.is_square() && is_nilpotent(&j)?;
        if nil != self.expect.nilpotent {
            return Err(mismatch(id, format!("nilpotent is {nil}")));
        }
        for c in &self.expect.cases {
            let cert = reduce_with(c.theorem, h).map_err(|e| mismatch(id, format!("{:?}: {e}", c.theorem)))?;
            if cert.case_tag != c.tag {
                return Err(mismatch(id, format!("{:?} case {}, expected {}", c.theorem, cert.case_tag, c.tag)));
            }
        }
        if self.expect.rank_needs_extension {
            if irlem_normalize_with(h, ExtensionPolicy::Never).is_ok() {
                return Err(mismatch(id, "a rank point exists over the base field".into()));
            }
            let ext = irlem_normalize_with(h, ExtensionPolicy::Auto)?;
            if ext.field_extension_used.is_none() {
                return Err(mismatch(id, "no extension was used".into()));
            }
        }
        Ok(())
    }
}

struct Spec {
    id: String,
    field: Field,
    n: usize,
    comps: Vec<String>,
    expect: Expectations,
}

fn spec(id: impl Into<String>, field: &Field, n: usize, comps: &[&str], rank: usize, nilpotent: bool) -> Spec {
    Spec {
        id: id.into(),
        field: field.clone(),
        n,
        comps: comps.iter().map(|s| s.to_string()).collect(),
        expect: Expectations {
            rank,
            nilpotent,
            cases: Vec::new(),
            rank_needs_extension: false,
        },
    }
}

impl Spec {
    fn case(mut self, theorem: Theorem, tag: u32) -> Spec {
        self.expect.cases.push(CaseExpectation { theorem, tag });
        self
    }

    fn needs_extension(mut self) -> Spec {
        self.expect.rank_needs_extension = true;
        self
    }

    fn document(&self) -> Result<FixtureDocument> {
        let comps: Vec<&str> = self.comps.iter().map(String::as_str).collect();
        let h = QuadMap::parse(&self.field, self.n, &comps)?;
        Ok(FixtureDocument {
            id: self.id.clone(),
            map: MapDocument::from_map(&h),
            expect: self.expect.clone(),
        })
    }
}

fn field(name: &str) -> Field {
    Field::parse_name(name).expect("catalog field names are valid")
}

fn rk3_displays() -> Vec<Spec> {
    let mut out = Vec::new();
    for name in ["Q", "F7"] {
        let f = field(name);
        out.push(
            spec(format!("rk3-2-{name}"), &f, 3, &["x3^2 + x1*x3", "1/2*x1^2", "x1*x2", "1/2*x2^2"], 3, false)
                .case(Theorem::Rk3, 2),
        );
        for c in 1..=3 {
            let s = |t: &str| t.replace('c', &c.to_string());
            out.push(
                spec(
                    format!("rk3-5-{name}-c{c}"),
                    &f,
                    4,
                    &[&s("x1*x3 + c*x2*x4"), "x2*x3 - x1*x4", &s("1/2*x3^2 + c/2*x4^2"), &s("1/2*x1^2 + c/2*x2^2")],
                    3,
                    false,
                )
                .case(Theorem::Rk3, 5),
            );
        }
    }
    for name in ["F2", "F4"] {
        let f = field(name);
        out.push(
            spec(format!("rk3-3-{name}"), &f, 4, &["x1*x4 + x3^2", "x1*x2", "x1*x3", "x2*x3"], 3, false)
                .case(Theorem::Rk3, 3),
        );
    }
    out
}

fn rk3np_displays() -> Vec<Spec> {
    let mut out = Vec::new();
    let second: [(&str, usize, [&str; 3]); 3] = [
        ("rep", 5, ["x2*x5", "x1*x4 - x3*x5", "x2*x4"]),
        ("stars", 5, ["x2*x5 + x4^2", "x1*x4 - x3*x5 + x4*x5", "x2*x4 + x5^2"]),
        ("stars", 6, ["x2*x5 + x4*x6", "x1*x4 - x3*x5 + x6^2", "x2*x4 + x5*x6"]),
    ];
    for name in ["Q", "F3", "F2"] {
        let f = field(name);
        for (kind, n, head) in &second {
            let mut comps: Vec<&str> = head.to_vec();
            comps.resize(*n, "0");
            out.push(spec(format!("rk3np-2-{kind}-n{n}-{name}"), &f, *n, &comps, 3, true).case(Theorem::Rk3np, 2));
        }
    }
    let third: [(&str, usize, [&str; 4]); 3] = [
        ("rep", 6, ["x2*x6", "x1*x5 + x3*x6", "x2*x5", "x5*x6"]),
        ("stars", 6, ["x2*x6", "x1*x5 + x3*x6 + x5*x6 + x6^2", "x2*x5", "x5*x6"]),
        ("stars", 7, ["x2*x6", "x1*x5 + x3*x6 + x5*x7 + x6*x7", "x2*x5", "x5*x6"]),
    ];
    for name in ["F2", "F4"] {
        let f = field(name);
        for (kind, n, head) in &third {
            let mut comps: Vec<&str> = head.to_vec();
            comps.resize(*n, "0");
            out.push(spec(format!("rk3np-3-{kind}-n{n}-{name}"), &f, *n, &comps, 3, true).case(Theorem::Rk3np, 3));
        }
    }
    out
}

/// z₁ ≠ 0 in the first family; with z₁ = 0 the rank drops to 3.
fn dim5_families() -> Vec<Spec> {
    let q = field("Q");
    let mut out = Vec::new();
    let unit = [-1i64, 0, 1];
    for z1 in [-1i64, 1] {
        for z2 in unit {
            for z3 in unit {
                for z4 in unit {
                    let c2 = format!("{z1}*x1^2");
                    let c5 = format!("{z2}*x1^2 + {z3}*x1*x2 + {z4}*x2^2 + x1*x4");
                    out.push(
                        spec(
                            format!("dim5-g1-z{z1},{z2},{z3},{z4}"),
                            &q,
                            5,
                            &["0", &c2, "x2*x4", "x1*x3 - x2*x5", &c5],
                            4,
                            true,
                        )
                        .case(Theorem::Dim5, 1),
                    );
                }
            }
        }
    }
    for z1 in unit {
        for z2 in unit {
            let c2 = format!("{z1}*x1^2 + 1/2*x4^2");
            let c5 = format!("{z2}*x1^2 + x1*x4");
            out.push(
                spec(
                    format!("dim5-g2-z{z1},{z2}"),
                    &q,
                    5,
                    &["0", &c2, "x1*x2 - x4*x5", "x1*x3 + 1/2*x5^2", &c5],
                    4,
                    true,
                )
                .case(Theorem::Dim5, 2),
            );
        }
    }
    out
}

fn dim6_displays() -> Vec<Spec> {
    let mut out = Vec::new();
    let maps: [(&str, u32, [&str; 6]); 7] = [
        ("1-rep", 1, ["0", "0", "x1*x2", "x3*x5", "x2*x4 + x3*x6", "x2*x5"]),
        ("1-stars", 1, ["0", "0", "x1*x2", "x3*x5", "x2*x4 + x3*x6 + x1*x3", "x2*x5 + x1*x2 + x2*x3"]),
        ("2-c0", 2, ["0", "0", "x2*x5", "x1*x3 + x2*x6", "x1*x4", "x1*x5"]),
        ("2-c1", 2, ["0", "0", "x2*x5", "x1*x3 + x2*x5 + x2*x6", "x1*x4 + x2*x6", "x1*x5"]),
        ("3-stars-a", 3, ["0", "0", "x2*x4", "x1*x3 + x2*x5", "x1*x4", "x2*x3 + x4*x5"]),
        ("3-stars-b", 3, ["0", "0", "x2*x4", "x1*x3 + x2*x5", "x1*x4", "x1*x2 + x3*x4 + x2*x5"]),
        ("4", 4, ["0", "x4*x5", "x1*x2 + x4*x6 + x5^2", "x1*x3 + x5*x6", "x1*x4", "x1*x5"]),
    ];
    for name in ["F2", "F4"] {
        let f = field(name);
        for (kind, tag, comps) in &maps {
            out.push(spec(format!("dim6-{kind}-{name}"), &f, 6, comps, 4, true).case(Theorem::Dim6, *tag));
        }
    }
    out
}

/// The third map is read with x₃ and x₅ exchanged; as printed its Jacobian is not nilpotent.
fn counterexample_specs() -> Vec<Spec> {
    vec![
        spec(
            "small-field-1",
            &field("F3"),
            5,
            &["0", "1/2*x1^2", "1/2*x2^2", "x1*x3 + x2*x3", "x1*x4 - x2*x4"],
            4,
            true,
        ),
        spec("small-field-2", &field("F2"), 6, &["0", "0", "x1*x2", "x1*x3", "x2*x4", "x1*x5 - x2*x5"], 4, true),
        spec(
            "small-field-3",
            &field("F2"),
            6,
            &["0", "0", "x1*x4", "x1*x5 - x2*x3", "x2*x4", "x1*x3 - x3*x4"],
            4,
            true,
        ),
    ]
    .into_iter()
    .map(Spec::needs_extension)
    .collect()
}

fn load_all(docs: Vec<FixtureDocument>) -> Result<Vec<MapFixture>> {
    docs.par_iter().map(MapFixture::load).collect()
}

fn documents(specs: Vec<Spec>) -> Result<Vec<FixtureDocument>> {
    specs.iter().map(Spec::document).collect()
}

/// The three maps over F₂ and F₃ whose Jacobian rank is attained only over an extension.
pub fn counterexamples() -> Result<Vec<MapFixture>> {
    load_all(documents(counterexample_specs())?)
}

/// Every fixture document, unverified: displays of all classifications, then the small-field maps.
pub fn catalog_documents() -> Result<Vec<FixtureDocument>> {
    let mut specs = rk3_displays();
    specs.extend(rk3np_displays());
    specs.extend(dim5_families());
    specs.extend(dim6_displays());
    specs.extend(counterexample_specs());
    documents(specs)
}

pub fn catalog() -> Result<Vec<MapFixture>> {
    load_all(catalog_documents()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexamples_load() {
        assert_eq!(counterexamples().unwrap().len(), 3);
    }

    #[test]
    fn third_small_field_map_as_printed_is_not_nilpotent() {
        let f2 = field("F2");
        let h = QuadMap::parse(&f2, 6, &["0", "0", "x1*x4", "x1*x3 - x2*x5", "x2*x4", "x1*x5 - x4*x5"]).unwrap();
        assert!(!is_nilpotent(&h.jacobian()).unwrap());
    }

    #[test]
    fn wrong_expectations_are_rejected() {
        let mut doc = counterexamples().unwrap()[0].document();
        doc.expect.rank = 3;
        assert!(MapFixture::load(&doc).is_err());
    }
}

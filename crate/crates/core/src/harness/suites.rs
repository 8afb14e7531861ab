//! Named verification suites. Each runs its cases independently (in
//! parallel where cheap), records failures with the offending map, and is
//! deterministic given the seed.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Embedding, Field, FieldDescriptor, Poly};
use crate::error::{Error, Result};
use crate::linalg::{congruence_normalize, symmetric_diagonalize, CongruenceMode, Matrix};
use crate::quadmap::{PolyMatrix, QuadMap};
use crate::reduce::{
    certificate_check, irlem_normalize, irlem_normalize_with, rows_dependent_over_k, Certificate, ExtensionPolicy,
    Theorem,
};
use crate::symbolic::{exponent_report, generic_point, image_exponent, is_nilpotent, poly_rank};

use super::enumerate::{Enumeration, ENUMERATION_BUDGET};
use super::fixtures::{catalog_documents, counterexamples, reduce_with_budget, MapFixture};
use super::format::MapDocument;

pub const DEFAULT_SEED: u64 = 20_170_127;

pub const SUITES: &[(&str, &str)] = &[
    ("displays", "every displayed normal form has the claimed rank, nilpotency and case"),
    ("dim3-f2-exhaustive", "nilpotent quadratic maps in dimension 3 over F2 are triangularizable"),
    ("rk3-case5-relation", "H1^2 + c H2^2 - 4 H3 H4 = 0 for the rank-3 case-5 form"),
    ("irlem-roundtrip", "S JH T = sum M(i) L(i) with M(1) = diag(I_r, 0) at a point of full rank"),
    ("congruence", "symmetric and alternating matrices are congruent to permutation times diagonal"),
    ("euler-identities", "JH x = 2H, and det(I + JH) = 1 for nilpotent JH"),
    ("reducer-roundtrip", "scrambled normal forms are recovered with valid certificates; tampering is caught"),
    ("exponents", "IE and PE of the generic point for the dimension-5 witnesses and in characteristic 2"),
    ("row-dependence", "nilpotent JH of rank at most 4 has K-linearly dependent rows"),
    ("small-field", "over tiny fields the Jacobian rank may be attained only over an extension"),
];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Candidate budget for display searches.
    pub budget: u64,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions {
            seed: DEFAULT_SEED,
            budget: crate::reduce::SEARCH_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub case: String,
    pub detail: String,
    pub map: Option<MapDocument>,
}

impl Failure {
    fn key(&self) -> (&str, &str, &str, Option<&[String]>) {
        (&self.check, &self.case, &self.detail, self.map.as_ref().map(|m| m.components.as_slice()))
    }
}

fn sort_failures(v: &mut [Failure]) {
    v.sort_by(|a, b| a.key().cmp(&b.key()));
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub header: String,
    pub seed: u64,
    pub budget: u64,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub counters: BTreeMap<String, u64>,
    pub budget_spent: u64,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    fn empty(suite: &str, opts: &SuiteOptions) -> SuiteReport {
        let header = SUITES.iter().find(|(n, _)| *n == suite).map_or("", |(_, h)| h);
        SuiteReport {
            suite: suite.to_string(),
            header: header.to_string(),
            seed: opts.seed,
            budget: opts.budget,
            cases: 0,
            failures: Vec::new(),
            counters: BTreeMap::new(),
            budget_spent: 0,
            wall_time_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failures of one check only.
    pub fn failures_of(&self, check: &str) -> usize {
        self.failures.iter().filter(|f| f.check == check).count()
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    /// Associative and commutative: failures are kept sorted.
    pub fn merge(mut self, other: SuiteReport) -> SuiteReport {
        assert_eq!(self.suite, other.suite, "merging reports of different suites");
        self.cases += other.cases;
        self.failures.extend(other.failures);
        sort_failures(&mut self.failures);
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self.budget_spent += other.budget_spent;
        self.wall_time_ms += other.wall_time_ms;
        self
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn count(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_default() += 1;
    }

    fn fail(&mut self, check: &str, case: impl Into<String>, map: Option<&QuadMap>, detail: impl Into<String>) {
        self.failures.push(Failure {
            check: check.to_string(),
            case: case.into(),
            detail: detail.into(),
            map: map.map(MapDocument::from_map),
        });
    }

    /// `ok` or a failure; returns `ok`.
    fn expect(&mut self, ok: bool, check: &str, case: &str, map: Option<&QuadMap>, detail: impl Into<String>) -> bool {
        if !ok {
            self.fail(check, case, map, detail);
        }
        ok
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report without its wall time; identical across runs with the same seed and budget.
    pub fn fingerprint(&self) -> String {
        let mut r = self.clone();
        r.wall_time_ms = 0.0;
        serde_json::to_string(&r).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {}: {} cases, {} failures, seed {}, {:.0} ms\n  {}\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.cases,
            self.failures.len(),
            self.seed,
            self.wall_time_ms,
            self.header
        );
        for (k, v) in &self.counters {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for f in self.failures.iter().take(20) {
            out.push_str(&format!("  [{}] {}: {}", f.check, f.case, f.detail));
            if let Some(m) = &f.map {
                out.push_str(&format!(" ({})", m.components.join(", ")));
            }
            out.push('\n');
        }
        if self.failures.len() > 20 {
            out.push_str(&format!("  … {} more\n", self.failures.len() - 20));
        }
        out
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

pub fn verify_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let start = Instant::now();
    let run: fn(&SuiteOptions) -> Result<SuiteReport> = match name {
        "displays" => displays,
        "dim3-f2-exhaustive" => dim3_f2_exhaustive,
        "rk3-case5-relation" => rk3_case5_relation,
        "irlem-roundtrip" => irlem_roundtrip,
        "congruence" => congruence,
        "euler-identities" => euler_identities,
        "reducer-roundtrip" => reducer_roundtrip,
        "exponents" => exponents,
        "row-dependence" => row_dependence,
        "small-field" => small_field,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    let mut report = run(opts)?;
    sort_failures(&mut report.failures);
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// One stream of the invocation's generator per case, so parallel order does not matter.
fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn field(name: &str) -> Field {
    Field::parse_name(name).expect("suite field names are valid")
}

fn fan_out<T: Sync>(name: &str, opts: &SuiteOptions, items: &[T], f: impl Fn(usize, &T, &mut SuiteReport) + Sync) -> SuiteReport {
    items
        .par_iter()
        .enumerate()
        .map(|(i, item)| {
            let mut r = SuiteReport::empty(name, opts);
            f(i, item, &mut r);
            r
        })
        .reduce(|| SuiteReport::empty(name, opts), SuiteReport::merge)
}

fn displays(opts: &SuiteOptions) -> Result<SuiteReport> {
    let docs = catalog_documents()?;
    Ok(fan_out("displays", opts, &docs, |_, doc, r| {
        r.case();
        if let Err(e) = MapFixture::load(doc) {
            r.fail("fixture", &doc.id, doc.map.to_map().ok().as_ref(), e.to_string());
        }
    }))
}

/// wᵗ·JH = 0 for a nonzero w.
fn is_row_dependence(h: &QuadMap, w: &[crate::algebra::Elem]) -> bool {
    let f = h.field();
    if w.len() != h.ncomps() || w.iter().all(|x| f.is_zero(x)) {
        return false;
    }
    let j = h.jacobian();
    (0..j.cols()).all(|c| {
        let mut acc = Poly::zero(f, h.nvars());
        for (i, wi) in w.iter().enumerate() {
            acc.add_assign(&j.get(i, c).scale(wi));
        }
        acc.is_zero()
    })
}

fn gl_f2(n: usize) -> Vec<(Matrix, Matrix)> {
    let f2 = field("F2");
    (0u32..1 << (n * n))
        .filter_map(|bits| {
            let rows = (0..n)
                .map(|i| (0..n).map(|j| f2.element(u64::from(bits >> (i * n + j) & 1))).collect())
                .collect();
            let t = Matrix::from_rows(&f2, rows);
            t.inverse().ok().map(|ti| (t, ti))
        })
        .collect()
}

fn dim3_f2_exhaustive(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "dim3-f2-exhaustive";
    let e = Enumeration::new(&FieldDescriptor::Prime { p: 2 }, 3, ENUMERATION_BUDGET)?;
    let gl = gl_f2(3);
    let chunk = 1 << 10;
    let starts: Vec<u64> = (0..e.len()).step_by(chunk).collect();
    let mut report = fan_out(name, opts, &starts, |_, &start, r| {
        for idx in start..(start + chunk as u64).min(e.len()) {
            let h = e.get(idx);
            r.case();
            if !is_nilpotent(&h.jacobian()).expect("square") {
                continue;
            }
            r.count("nilpotent maps");
            let case = format!("map {idx}");
            let mut found = false;
            for (t, ti) in &gl {
                r.budget_spent += 1;
                if h.compose_unchecked(ti, t).jacobian().is_strictly_lower() {
                    found = true;
                    break;
                }
            }
            r.expect(found, "triangular", &case, Some(&h), "no T in GL3(F2) gives a strictly lower triangular Jacobian");
            let ok = rows_dependent_over_k(&h).is_some_and(|w| is_row_dependence(&h, &w));
            r.expect(ok, "row-dependence", &case, Some(&h), "no row dependence witness");
        }
    });
    report.count("GL3(F2) size");
    *report.counters.get_mut("GL3(F2) size").unwrap() = gl.len() as u64;
    Ok(report)
}

fn case5_display(f: &Field, c: i64) -> Result<QuadMap> {
    let s = |t: &str| t.replace('c', &c.to_string());
    QuadMap::parse(
        f,
        4,
        &[&s("x1*x3 + c*x2*x4"), "x2*x3 - x1*x4", &s("1/2*x3^2 + c/2*x4^2"), &s("1/2*x1^2 + c/2*x2^2")],
    )
}

/// H₁² + c·H₂² − 4·H₃·H₄ on the first four components.
fn case5_relation(h: &QuadMap, c: &crate::algebra::Elem) -> Poly {
    let f = h.field();
    let p = h.to_polys();
    let four = f.from_i64(4);
    p[0].mul(&p[0]).add(&p[1].mul(&p[1]).scale(c)).sub(&p[2].mul(&p[3]).scale(&four))
}

fn rk3_case5_relation(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "rk3-case5-relation";
    let mut items = Vec::new();
    for fname in ["F7", "Q"] {
        for c in 1..=3i64 {
            for k in 0..6u64 {
                items.push((fname, c, k));
            }
        }
    }
    Ok(fan_out(name, opts, &items, |i, &(fname, c, k), r| {
        r.case();
        let f = field(fname);
        let case = format!("{fname} c={c} #{k}");
        let base = case5_display(&f, c).expect("display parses");
        if k == 0 {
            let rel = case5_relation(&base, &f.from_i64(c));
            r.expect(rel.is_zero(), "relation", &case, Some(&base), format!("display relation is {rel}"));
            return;
        }
        let mut rng = case_rng(opts.seed, i as u64);
        let (h, _, _) = base.padded(5, 6).scramble(&mut rng);
        let cert = match reduce_with_budget(Theorem::Rk3, &h, opts.budget) {
            Ok(c) => c,
            Err(e) => {
                r.fail("reduce", &case, Some(&h), e.to_string());
                return;
            }
        };
        if !r.expect(cert.case_tag == 5, "case", &case, Some(&h), format!("case {}", cert.case_tag)) {
            return;
        }
        let red = cert.reduced(&h).expect("certificate applies");
        let cc = cert.parameters.get("c").cloned().unwrap_or_else(|| f.zero());
        let rel = case5_relation(&red, &cc);
        r.expect(rel.is_zero(), "relation", &case, Some(&h), format!("reduced relation is {rel}"));
    }))
}

/// S₀·(x₁x_n, …, x_r x_n, 0, …)(T₀x), whose Jacobian has rank r.
fn known_rank_map<R: Rng>(f: &Field, r: usize, rng: &mut R) -> QuadMap {
    let n = r + 1 + rng.gen_range(0..2);
    let m = r + rng.gen_range(0..2);
    let mut comps: Vec<String> = (1..=r).map(|i| format!("x{i}*x{n}")).collect();
    comps.resize(m, "0".to_string());
    let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
    let base = QuadMap::parse(f, n, &refs).expect("known form parses");
    base.scramble(rng).0
}

/// S·JH·T against Σ M⁽ⁱ⁾·Lᵢ, recomputed over the working field.
fn irlem_identity(h: &QuadMap, r: usize, res: &crate::reduce::IrlemResult) -> std::result::Result<(), String> {
    let f = &res.field;
    let h = if h.field() == f {
        h.clone()
    } else {
        h.map_field(&Embedding::new(h.field(), f).map_err(|e| e.to_string())?)
    };
    let (n, m) = (h.nvars(), h.ncomps());
    if res.rank != r {
        return Err(format!("rank {} instead of {r}", res.rank));
    }
    if res.coefficient_matrices.len() != n || res.forms.len() != n {
        return Err("wrong number of terms".into());
    }
    let lhs = h.jacobian().mul_const_left(&res.s).mul_const_right(&res.t);
    let mut rhs = PolyMatrix::zeros(f, n, m, n);
    for (mi, form) in res.coefficient_matrices.iter().zip(&res.forms) {
        let l = Poly::linear(f, form);
        let term = PolyMatrix::from_const(mi, n).map_entries(|p| p.mul(&l));
        rhs = rhs.add(&term);
    }
    if lhs != rhs {
        return Err("S JH T differs from the sum".into());
    }
    let mut lead = Matrix::zeros(f, m, n);
    for i in 0..r {
        lead.set(i, i, f.one());
    }
    if res.coefficient_matrices[0] != lead {
        return Err("first coefficient matrix is not diag(I_r, 0)".into());
    }
    if Matrix::from_rows(f, res.forms.clone()).rank() != n {
        return Err("forms are dependent".into());
    }
    Ok(())
}

fn irlem_roundtrip(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "irlem-roundtrip";
    let mut items = Vec::new();
    for fname in ["Q", "F5", "F2"] {
        for k in 0..100 {
            items.push((fname, k));
        }
    }
    Ok(fan_out(name, opts, &items, |i, &(fname, k), rep| {
        rep.case();
        let f = field(fname);
        let mut rng = case_rng(opts.seed, i as u64);
        let small = f.size() == Some(2);
        let r = if small { rng.gen_range(3..=4) } else { rng.gen_range(1..=4) };
        let h = known_rank_map(&f, r, &mut rng);
        let case = format!("{fname} #{k} r={r}");
        match irlem_normalize(&h) {
            Ok(res) => {
                if small {
                    rep.expect(res.field_extension_used.is_some(), "extension", &case, Some(&h), "no extension");
                }
                if let Err(e) = irlem_identity(&h, r, &res) {
                    rep.fail("identity", &case, Some(&h), e);
                }
            }
            Err(e) => rep.fail("normalize", &case, Some(&h), e.to_string()),
        }
    }))
}

fn random_symmetric<R: Rng>(f: &Field, n: usize, alternating: bool, rng: &mut R) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            if i == j {
                if !alternating {
                    m.set(i, i, f.random(rng));
                }
                continue;
            }
            let v = f.random(rng);
            m.set(j, i, if alternating { f.neg(&v) } else { v.clone() });
            m.set(i, j, v);
        }
    }
    m
}

fn congruence(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "congruence";
    let items: Vec<(bool, usize)> = (0..400).map(|i| (i >= 200, i % 200)).collect();
    Ok(fan_out(name, opts, &items, |i, &(alternating, k), rep| {
        rep.case();
        let fname = ["F2", "F3", "Q"][k % 3];
        let f = field(fname);
        let mut rng = case_rng(opts.seed, i as u64);
        let n = rng.gen_range(1..=8);
        let m = random_symmetric(&f, n, alternating, &mut rng);
        let kind = if alternating { "alternating" } else { "symmetric" };
        let case = format!("{kind} {fname} n={n} #{k}");
        let detail = |what: &str| format!("{what}: {:?}", super::format::matrix_to_rows(&m));
        let mode = if alternating { CongruenceMode::AlternatingZeroDiag } else { CongruenceMode::Symmetric };
        match congruence_normalize(&m, mode) {
            Ok(res) => {
                let target = Matrix::permutation(&f, &res.perm).mul(&Matrix::diagonal(&f, &res.d));
                let ok = res.t.transpose().mul(&m).mul(&res.t) == target && res.t.is_invertible();
                rep.expect(ok, "normal-form", &case, None, detail("TᵗMT is not P·D"));
                let involution = (0..n).all(|i| res.perm[res.perm[i]] == i);
                rep.expect(involution, "normal-form", &case, None, detail("P is not symmetric"));
                if alternating {
                    let even = m.rank() % 2 == 0 && (0..n).all(|i| res.perm[i] != i || f.is_zero(&res.d[i]));
                    rep.expect(even, "even-rank", &case, None, detail("odd rank or fixed support point"));
                }
            }
            Err(e) => rep.fail("normal-form", &case, None, detail(&e.to_string())),
        }
        if !alternating && f.has_half() {
            match symmetric_diagonalize(&m) {
                Ok((t, d)) => {
                    let ok = t.transpose().mul(&m).mul(&t) == Matrix::diagonal(&f, &d)
                        && d.iter().filter(|x| !f.is_zero(x)).count() == m.rank();
                    rep.expect(ok, "diagonal", &case, None, detail("TᵗMT is not diag(D)"));
                }
                Err(e) => rep.fail("diagonal", &case, None, detail(&e.to_string())),
            }
        }
    }))
}

/// Σⱼ xⱼ ∂Hᵢ/∂xⱼ from the component polynomials.
fn euler_sum(h: &QuadMap) -> Vec<Poly> {
    let n = h.nvars();
    let f = h.field();
    h.to_polys()
        .iter()
        .map(|p| {
            let mut acc = Poly::zero(f, n);
            for j in 0..n {
                acc.add_assign(&p.derivative(j).mul(&Poly::var(f, n, j)));
            }
            acc
        })
        .collect()
}

fn euler_identities(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "euler-identities";
    let mut items = Vec::new();
    for fname in ["Q", "F5", "F2", "F4"] {
        for k in 0..1000 {
            items.push((fname, k));
        }
    }
    let mut report = fan_out(name, opts, &items, |i, &(fname, k), rep| {
        rep.case();
        let f = field(fname);
        let mut rng = case_rng(opts.seed, i as u64);
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let h = QuadMap::random(&f, n, m, &mut rng);
        let two = f.from_i64(2);
        let doubled: Vec<Poly> = h.to_polys().iter().map(|p| p.scale(&two)).collect();
        let by_jacobian = h.jacobian().mul_vec(&generic_point(&h.jacobian()));
        let case = format!("{fname} #{k}");
        let ok = euler_sum(&h) == doubled && by_jacobian == doubled;
        rep.expect(ok, "euler", &case, Some(&h), "JH·x ≠ 2H");
    });
    let docs = catalog_documents()?;
    let keller = fan_out(name, opts, &docs, |_, doc, rep| {
        let Ok(h) = doc.map.to_map() else {
            rep.fail("keller", &doc.id, None, "fixture does not parse");
            return;
        };
        if !doc.expect.nilpotent {
            return;
        }
        rep.case();
        rep.count("nilpotent fixtures");
        let n = h.nvars();
        let det = PolyMatrix::identity(h.field(), n, n).add(&h.jacobian()).det();
        let one = Poly::constant(h.field(), n, h.field().one());
        rep.expect(det == one, "keller", &doc.id, Some(&h), format!("det(I + JH) = {det}"));
    });
    report = report.merge(keller);
    Ok(report)
}

/// Base maps for every case tag of the arbitrary-rank, rank-4 and rank-3 reducers.
fn roundtrip_bases() -> Vec<(Theorem, u32, &'static str, usize, Vec<&'static str>)> {
    let six3 = vec!["x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"];
    let sqfree4 = vec!["x1*x2", "x1*x3", "x1*x4", "x2*x3", "x2*x4", "x3*x4"];
    vec![
        (Theorem::Rkr, 1, "Q", 3, vec!["x1*x3", "x2*x3"]),
        (Theorem::Rkr, 2, "F5", 2, vec!["x1^2", "x1*x2", "x2^2"]),
        (Theorem::Rkr, 3, "F2", 3, vec!["x1*x2", "x1*x3", "x2*x3"]),
        (Theorem::Rk4, 1, "Q", 4, vec!["x1*x4", "x2*x4", "x3*x4"]),
        (Theorem::Rk4, 2, "F7", 4, vec!["x4^2", "x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"]),
        (Theorem::Rk4, 3, "F2", 5, vec!["x1*x5", "x1*x2", "x1*x3", "x1*x4", "x2*x3", "x2*x4", "x3*x4"]),
        (Theorem::Rk4, 4, "F5", 3, six3.clone()),
        (Theorem::Rk4, 5, "F2", 6, vec!["x2*x3", "x1*x3", "x1*x2", "x5*x6", "x4*x6", "x4*x5"]),
        (Theorem::Rk3, 1, "Q", 4, vec!["x1*x4", "x2*x4", "x3*x4"]),
        (Theorem::Rk3, 2, "Q", 3, vec!["x3^2 + x1*x3", "1/2*x1^2", "x1*x2", "1/2*x2^2"]),
        (Theorem::Rk3, 3, "F2", 4, vec!["x1*x4 + x3^2", "x1*x2", "x1*x3", "x2*x3"]),
        (Theorem::Rk3, 4, "F5", 3, six3),
        (Theorem::Rk3, 4, "F2", 4, sqfree4),
        (
            Theorem::Rk3,
            5,
            "F7",
            4,
            vec!["x1*x3 + 2*x2*x4", "x2*x3 - x1*x4", "1/2*x3^2 + x4^2", "1/2*x1^2 + x2^2"],
        ),
    ]
}

const SCRAMBLES: usize = 50;
const TAMPERS: usize = 100;

fn reducer_roundtrip(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "reducer-roundtrip";
    let bases = roundtrip_bases();
    let mut items = Vec::new();
    for (b, _) in bases.iter().enumerate() {
        for k in 0..SCRAMBLES {
            items.push((b, k));
        }
    }
    let mut report = fan_out(name, opts, &items, |i, &(b, k), rep| {
        rep.case();
        let (theorem, tag, fname, n, comps) = &bases[b];
        let f = field(fname);
        let base = QuadMap::parse(&f, *n, comps).expect("base map parses");
        let case = format!("{theorem:?} case {tag} over {fname} #{k}");
        let mut rng = case_rng(opts.seed, i as u64);
        let padded = base.padded(n + rng.gen_range(0..2), base.ncomps() + rng.gen_range(0..2));
        let h = if k == 0 { padded } else { padded.scramble(&mut rng).0 };
        match reduce_with_budget(*theorem, &h, opts.budget) {
            Ok(cert) => {
                rep.expect(cert.case_tag == *tag, "case", &case, Some(&h), format!("case {}", cert.case_tag));
                rep.expect(certificate_check(&h, &cert), "check", &case, Some(&h), "certificate rejected");
            }
            Err(e) => rep.fail("reduce", &case, Some(&h), e.to_string()),
        }
    });
    let tamper_bases: Vec<(Theorem, &str, usize, Vec<&str>)> = vec![
        (Theorem::Rk3, "Q", 4, vec!["x1*x3 + 3*x2*x4", "x2*x3 - x1*x4", "1/2*x3^2 + 3/2*x4^2", "1/2*x1^2 + 3/2*x2^2"]),
        (Theorem::Rk3, "F7", 4, vec!["x1*x3 + 2*x2*x4", "x2*x3 - x1*x4", "1/2*x3^2 + x4^2", "1/2*x1^2 + x2^2"]),
        (Theorem::Rk4, "Q", 4, vec!["x4^2", "x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"]),
        (Theorem::Rkr, "Q", 3, vec!["x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"]),
    ];
    let tampers: Vec<usize> = (0..TAMPERS).collect();
    let tamper = fan_out(name, opts, &tampers, |i, &k, rep| {
        rep.case();
        let (theorem, fname, n, comps) = &tamper_bases[k % tamper_bases.len()];
        let f = field(fname);
        let mut rng = case_rng(opts.seed ^ 0x7a3e, i as u64);
        let base = QuadMap::parse(&f, *n, comps).expect("base map parses");
        let h = base.padded(n + 1, base.ncomps() + 1).scramble(&mut rng).0;
        let case = format!("tamper {theorem:?} over {fname} #{k}");
        let cert = match reduce_with_budget(*theorem, &h, opts.budget) {
            Ok(c) => c,
            Err(e) => {
                rep.fail("tamper", &case, Some(&h), e.to_string());
                return;
            }
        };
        let mut bad: Certificate = cert.clone();
        // the support cases constrain only one side, so both are replaced
        bad.s = Matrix::random_invertible(&f, bad.s.rows(), &mut rng);
        bad.t = Matrix::random_invertible(&f, bad.t.rows(), &mut rng);
        let rejected = (bad.s == cert.s && bad.t == cert.t) || !certificate_check(&h, &bad);
        if rep.expect(rejected, "tamper", &case, Some(&h), "tampered certificate accepted") {
            rep.count("tampered certificates rejected");
        }
    });
    report = report.merge(tamper);
    Ok(report)
}

fn exponents(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "exponents";
    let docs: Vec<_> = catalog_documents()?.into_iter().filter(|d| d.id.starts_with("dim5-")).collect();
    let mut report = fan_out(name, opts, &docs, |_, doc, rep| {
        rep.case();
        let h = doc.map.to_map().expect("fixture parses");
        let j = h.jacobian();
        match exponent_report(&j, &generic_point(&j)) {
            Ok(e) => {
                let ok = e.pe == Some(0) && e.ie == Some(4);
                rep.expect(ok, "dim5", &doc.id, Some(&h), format!("IE = {:?}, PE = {:?}", e.ie, e.pe));
            }
            Err(e) => rep.fail("dim5", &doc.id, Some(&h), e.to_string()),
        }
    });
    let items: Vec<usize> = (0..200).collect();
    let char2 = fan_out(name, opts, &items, |i, &k, rep| {
        rep.case();
        let fname = if k % 2 == 0 { "F2" } else { "F4" };
        let f = field(fname);
        let mut rng = case_rng(opts.seed, i as u64);
        let n = rng.gen_range(2..=6);
        let h = random_nilpotent(&f, n, &mut rng);
        let j = h.jacobian();
        let case = format!("{fname} n={n} #{k}");
        if j.is_zero() {
            rep.count("zero Jacobians skipped");
            return;
        }
        match image_exponent(&j, &generic_point(&j)) {
            Ok(ie) => {
                rep.expect(ie == 0, "char2", &case, Some(&h), format!("IE = {ie}"));
            }
            Err(e) => rep.fail("char2", &case, Some(&h), e.to_string()),
        }
    });
    report = report.merge(char2);
    Ok(report)
}

/// T⁻¹·H(Tx) for a random H with Hᵢ ∈ K[x₁, …, x_{i−1}].
fn random_nilpotent<R: Rng>(f: &Field, n: usize, rng: &mut R) -> QuadMap {
    let mut h = QuadMap::zero(f, n, n);
    for i in 0..n {
        for a in 0..i {
            for b in a..i {
                h.set_coeff(i, a, b, f.random(rng));
            }
        }
    }
    let t = Matrix::random_invertible(f, n, rng);
    h.conjugate(&t).expect("square map")
}

fn row_dependence(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "row-dependence";
    let docs = catalog_documents()?;
    let mut report = fan_out(name, opts, &docs, |_, doc, rep| {
        if !doc.expect.nilpotent || doc.expect.rank > 4 {
            return;
        }
        rep.case();
        let h = doc.map.to_map().expect("fixture parses");
        let ok = rows_dependent_over_k(&h).is_some_and(|w| is_row_dependence(&h, &w));
        rep.expect(ok, "fixture", &doc.id, Some(&h), "no row dependence witness");
    });
    let items: Vec<usize> = (0..300).collect();
    let random = fan_out(name, opts, &items, |i, &k, rep| {
        rep.case();
        let fname = ["Q", "F3", "F2", "F4"][k % 4];
        let f = field(fname);
        let mut rng = case_rng(opts.seed, i as u64);
        // nilpotent of size ≤ 5, so the rank is at most 4
        let n = rng.gen_range(2..=5);
        let h = random_nilpotent(&f, n, &mut rng);
        let ok = rows_dependent_over_k(&h).is_some_and(|w| is_row_dependence(&h, &w));
        rep.expect(ok, "random", &format!("{fname} n={n} #{k}"), Some(&h), "no row dependence witness");
    });
    report = report.merge(random);
    Ok(report)
}

fn small_field(opts: &SuiteOptions) -> Result<SuiteReport> {
    let name = "small-field";
    let mut report = SuiteReport::empty(name, opts);
    let fixtures = match counterexamples() {
        Ok(f) => f,
        Err(e) => {
            report.fail("load", "counterexamples", None, e.to_string());
            return Ok(report);
        }
    };
    for fx in fixtures {
        report.case();
        let h = &fx.map;
        let j = h.jacobian();
        let id = fx.id.as_str();
        let nil = is_nilpotent(&j).unwrap_or(false);
        report.expect(nil, "nilpotent", id, Some(h), "Jacobian is not nilpotent");
        let base = irlem_normalize_with(h, ExtensionPolicy::Never);
        let failed = matches!(base, Err(Error::NoCase(_)));
        report.expect(failed, "base-field", id, Some(h), "a point of full rank exists over the base field");
        match irlem_normalize_with(h, ExtensionPolicy::Auto) {
            Ok(res) => {
                let ok = res.field_extension_used.is_some() && irlem_identity(h, poly_rank(&j), &res).is_ok();
                report.expect(ok, "extension", id, Some(h), "normalization over the extension is wrong");
            }
            Err(e) => report.fail("extension", id, Some(h), e.to_string()),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            verify_suite("nope", &SuiteOptions::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn merge_is_order_independent() {
        let opts = SuiteOptions::default();
        let mk = |case: &str| {
            let mut r = SuiteReport::empty("displays", &opts);
            r.case();
            r.count("k");
            r.fail("c", case, None, "d");
            r
        };
        let (a, b, c) = (mk("a"), mk("b"), mk("c"));
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = c.merge(a.merge(b));
        assert_eq!(left.fingerprint(), right.fingerprint());
    }

    #[test]
    fn small_field_suite_passes() {
        let r = verify_suite("small-field", &SuiteOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}

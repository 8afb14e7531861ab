use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quadmap::algebra::{Field, Poly};
use quadmap::harness::{
    enumerate_maps, map_from_json, matrix_to_rows, reduce_with_budget, suite_names, verify_suite, write_jsonl,
    MapFilter, SuiteOptions, SuiteReport, DEFAULT_SEED, ENUMERATION_BUDGET,
};
use quadmap::linalg::Matrix;
use quadmap::quadmap::{invert_triangular, QuadMap};
use quadmap::reduce::{certificate_check, rows_dependent_over_k, Certificate, Theorem, SEARCH_BUDGET};
use quadmap::symbolic::{
    exponent_report, flag_triangularize_with_budget, ExponentReport, generic_point, is_nilpotent, permutation_triangularize,
    poly_rank, FlagMode,
};

#[derive(Parser)]
#[command(name = "quadmap", version, about = "Exact tools for quadratic homogeneous maps")]
struct Cli {
    /// Seed for the suites' random cases.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Candidate transforms allowed in display and flag searches.
    #[arg(long, global = true, env = "QUADMAP_BUDGET", default_value_t = SEARCH_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, nilpotency, Keller determinant, exponents and a row dependence.
    Analyze { map: PathBuf },
    /// Reduce a map to a normal form and print the certificate.
    Reduce {
        map: PathBuf,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
    },
    /// Check a certificate against a map.
    Check { map: PathBuf, cert: PathBuf },
    /// Invert x + H for a triangularizable nilpotent Jacobian.
    Invert { map: PathBuf },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Stream every map over a finite field as JSON Lines.
    Enumerate {
        #[arg(long)]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        filter: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    Theorem::parse(s).map_err(|e| e.to_string())
}

/// Outcome of a command: a document to print and whether it passed.
struct Output {
    doc: Value,
    text: String,
    pass: bool,
}

/// Errors in the input rather than in the mathematics; these exit with 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn read_map(path: &Path) -> anyhow::Result<QuadMap> {
    let s = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    Ok(map_from_json(&s).map_err(|e| Usage(format!("{}: {e}", path.display())))?)
}

fn polys(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn analyze(h: &QuadMap, seed: u64) -> anyhow::Result<Output> {
    let f = h.field();
    let j = h.jacobian();
    let rank = poly_rank(&j);
    let witness = rows_dependent_over_k(h);
    let mut doc = json!({
        "seed": seed,
        "field": f.name(),
        "nvars": h.nvars(),
        "ncomps": h.ncomps(),
        "rank": rank,
        "row_dependence": witness.as_ref().map(|w| w.iter().map(|x| f.format(x)).collect::<Vec<_>>()),
    });
    let mut text = format!("field {}\nvariables {}\ncomponents {}\nrank {rank}\n", f.name(), h.nvars(), h.ncomps());
    if h.nvars() == h.ncomps() {
        let nilpotent = is_nilpotent(&j)?;
        let det = h.keller_determinant();
        // exponents are defined for nilpotent matrices only
        let rep = if nilpotent {
            exponent_report(&j, &generic_point(&j))?
        } else {
            ExponentReport { ie: None, pe: None, ie_witness: None, pe_witness: None }
        };
        doc["nilpotent"] = json!(nilpotent);
        doc["keller_determinant"] = json!(det.to_string());
        doc["keller"] = json!(h.keller_check()?);
        doc["image_exponent"] = json!(rep.ie);
        doc["preimage_exponent"] = json!(rep.pe);
        let show = |x: Option<usize>| x.map_or("undefined".to_string(), |v| v.to_string());
        text += &format!(
            "nilpotent {nilpotent}\ndet(I + JH) = {det}\nIE(JH, x) {}\nPE(JH, x) {}\n",
            show(rep.ie),
            show(rep.pe)
        );
    }
    match &witness {
        Some(w) => text += &format!("row dependence {}\n", w.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(" ")),
        None => text += "rows independent over the base field\n",
    }
    Ok(Output { doc, text, pass: true })
}

fn certificate_text(cert: &Certificate) -> String {
    let f = &cert.field;
    let mut s = format!("{:?} case {}\n", cert.theorem, cert.case_tag);
    for (k, v) in &cert.parameters {
        s += &format!("{k} = {}\n", f.format(v));
    }
    for (name, m) in [("S", &cert.s), ("T", &cert.t)] {
        s += &format!("{name} =\n");
        for row in matrix_to_rows(m) {
            s += &format!("  [{}]\n", row.join(", "));
        }
    }
    s
}

fn reduce(h: &QuadMap, theorem: Theorem, budget: u64) -> anyhow::Result<Output> {
    use quadmap::Error;
    match reduce_with_budget(theorem, h, budget) {
        Ok(cert) => {
            let reduced = cert.reduced(h)?;
            let mut doc: Value = serde_json::from_str(&cert.to_json())?;
            doc["reduced"] = json!(polys(&reduced.to_polys()));
            let text = format!("{}reduced {reduced}\n", certificate_text(&cert));
            Ok(Output { doc, text, pass: true })
        }
        Err(e @ (Error::NoCase(_) | Error::Budget(_) | Error::Precondition(_))) => Ok(Output {
            doc: json!({ "theorem": theorem, "error": e.to_string() }),
            text: format!("{e}\n"),
            pass: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn check(h: &QuadMap, cert_path: &Path) -> anyhow::Result<Output> {
    let s = std::fs::read_to_string(cert_path).map_err(|e| Usage(format!("{}: {e}", cert_path.display())))?;
    let cert = Certificate::from_json(&s).map_err(|e| Usage(format!("{}: {e}", cert_path.display())))?;
    let valid = certificate_check(h, &cert);
    Ok(Output {
        doc: json!({ "theorem": cert.theorem, "case_tag": cert.case_tag, "valid": valid }),
        text: format!("{:?} case {}: {}\n", cert.theorem, cert.case_tag, if valid { "valid" } else { "invalid" }),
        pass: valid,
    })
}

/// T with T⁻¹·JH(Tx)·T strictly lower triangular, if one is found.
fn triangularizer(h: &QuadMap, budget: u64) -> anyhow::Result<Option<Matrix>> {
    let f = h.field();
    let j = h.jacobian();
    if let Some(t) = permutation_triangularize(&j)?.transform(f) {
        return Ok(Some(t));
    }
    if let Some(t) = flag_triangularize_with_budget(&j, FlagMode::Greedy, budget)?.transform(f) {
        return Ok(Some(t));
    }
    if f.size().is_some() {
        return Ok(flag_triangularize_with_budget(&j, FlagMode::Exhaustive, budget)?.transform(f));
    }
    Ok(None)
}

fn invert(h: &QuadMap, budget: u64) -> anyhow::Result<Output> {
    if h.nvars() != h.ncomps() || !is_nilpotent(&h.jacobian())? {
        return Ok(Output {
            doc: json!({ "error": "the Jacobian is not nilpotent" }),
            text: "the Jacobian is not nilpotent\n".into(),
            pass: false,
        });
    }
    let Some(t) = triangularizer(h, budget)? else {
        return Ok(Output {
            doc: json!({ "error": "no triangularizing transform found" }),
            text: "no triangularizing transform found\n".into(),
            pass: false,
        });
    };
    let inv = invert_triangular(h, &t)?;
    let comps = polys(&inv.comps);
    let mut text = String::new();
    for (i, c) in comps.iter().enumerate() {
        text += &format!("y{} ↦ {c}\n", i + 1);
    }
    Ok(Output {
        doc: json!({ "field": h.field().name(), "nvars": h.nvars(), "T": matrix_to_rows(&t), "inverse": comps }),
        text,
        pass: true,
    })
}

fn verify(suite: &str, opts: &SuiteOptions) -> anyhow::Result<Output> {
    let names: Vec<&str> = if suite == "all" { suite_names() } else { vec![suite] };
    if let Some(bad) = names.iter().find(|n| !suite_names().contains(n)) {
        return Err(Usage(format!("unknown suite {bad:?}; known: {}", suite_names().join(", "))).into());
    }
    let reports: Vec<SuiteReport> = names.iter().map(|n| verify_suite(n, opts)).collect::<Result<_, _>>()?;
    let pass = reports.iter().all(SuiteReport::passed);
    let docs: Vec<Value> = reports.iter().map(|r| serde_json::from_str(&r.to_json())).collect::<Result<_, _>>()?;
    Ok(Output {
        doc: if docs.len() == 1 { docs.into_iter().next().unwrap() } else { Value::Array(docs) },
        text: reports.iter().map(SuiteReport::to_text).collect(),
        pass,
    })
}

fn enumerate(field: &str, n: usize, filter: &str, out: Option<&Path>) -> anyhow::Result<Output> {
    let f = Field::parse_name(field).map_err(|e| Usage(e.to_string()))?;
    let filter = MapFilter::parse(filter).map_err(|e| Usage(e.to_string()))?;
    let maps = enumerate_maps(f.descriptor(), n, filter, ENUMERATION_BUDGET)?;
    let count = match out {
        Some(path) => {
            let file = File::create(path).with_context(|| path.display().to_string())?;
            let mut w = BufWriter::new(file);
            let c = write_jsonl(&mut w, maps)?;
            w.flush()?;
            c
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let c = write_jsonl(&mut w, maps)?;
            w.flush()?;
            c
        }
    };
    let doc = json!({ "field": f.name(), "n": n, "maps": count });
    let text = format!("{count} maps over {} in {n} variables\n", f.name());
    Ok(Output { doc, text, pass: true })
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let opts = SuiteOptions { seed: cli.seed, budget: cli.budget };
    match &cli.command {
        Command::Analyze { map } => analyze(&read_map(map)?, cli.seed),
        Command::Reduce { map, theorem } => reduce(&read_map(map)?, *theorem, cli.budget),
        Command::Check { map, cert } => check(&read_map(map)?, cert),
        Command::Invert { map } => invert(&read_map(map)?, cli.budget),
        Command::Verify { suite } => verify(suite, &opts),
        Command::Enumerate { field, n, filter, out } => {
            let o = enumerate(field, *n, filter, out.as_deref())?;
            // the stream owns stdout when no file is given
            if out.is_none() {
                eprint!("{}", o.text);
                return Ok(Output { text: String::new(), doc: Value::Null, ..o });
            }
            Ok(o)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            match cli.format {
                Format::Json if !o.doc.is_null() => {
                    println!("{}", serde_json::to_string_pretty(&o.doc).expect("json values print"))
                }
                Format::Json => {}
                Format::Text => print!("{}", o.text),
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() { 2 } else { 1 })
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hallcrest::hallalg::{validate_conventions, HallAlgebra, HallElement, Status, SuiteReport};
use hallcrest::hallpoly::{ChiEngine, SamplingConfig};
use hallcrest::quiverlab::{DimVector, QuiverPresentation};
use hallcrest::repcore::{CatalogMethod, CatalogOptions, IndecTable, IsoClass};
use hallcrest::{Error, ErrorKind};
use serde_json::{json, Value};

/// Degenerate Hall algebra computations for quivers with relations.
#[derive(Parser)]
#[command(name = "hallcrest", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Quiver presentation file.
    #[arg(long)]
    quiver: PathBuf,
    /// Catalog primes, also the start of the sampling ladder.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
    /// Dimension bound, one entry per vertex; a single entry is repeated.
    #[arg(long = "dim-bound", value_delimiter = ',', default_value = "2")]
    dim_bound: Vec<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Unstable interpolations are refusals rather than flagged values.
    #[arg(long)]
    strict: bool,
    /// Include wall-clock timings in the report (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    /// Catalog construction method.
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Exhaustive,
    Extensions,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Assoc,
    Lie,
    Initial,
    Pbw,
    GreenDegen,
    GreenClassical,
    Comult,
    Jacobi,
    ExtVanishing,
    Rerun,
    All,
}

const ALL_SUITES: [Suite; 10] = [
    Suite::Assoc,
    Suite::Lie,
    Suite::Jacobi,
    Suite::Initial,
    Suite::Pbw,
    Suite::GreenDegen,
    Suite::GreenClassical,
    Suite::Comult,
    Suite::ExtVanishing,
    Suite::Rerun,
];

#[derive(Subcommand)]
enum Cmd {
    /// Indecomposable catalogs per prime.
    Catalog {
        #[command(flatten)]
        common: Common,
    },
    /// The product u_A • u_B with the point counts behind every coefficient.
    Product {
        #[command(flatten)]
        common: Common,
        a: String,
        b: String,
    },
    /// χ of a filtration variety V(C_1, ..., C_r; X), C_1 at the bottom.
    Chi {
        #[command(flatten)]
        common: Common,
        /// Subquotient classes, bottom first.
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<String>,
        /// The filtered module.
        #[arg(long)]
        of: String,
    },
    /// χ of the extensions 0 -> SUB -> X -> QUOTIENT -> 0 with middle term X.
    Ext {
        #[command(flatten)]
        common: Common,
        quotient: String,
        sub: String,
        #[arg(long)]
        middle: String,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Largest power checked by the initial-terms suite.
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// Primes at which the classical formula is evaluated.
        #[arg(long = "green-primes", value_delimiter = ',', default_value = "2,3")]
        green_primes: Vec<u64>,
        /// Ladder used by the rerun suite.
        #[arg(long = "rerun-primes", value_delimiter = ',', default_value = "3,5,7,11")]
        rerun_primes: Vec<u64>,
    },
    /// Bracket structure constants of the indecomposables as CSV.
    Constants {
        #[command(flatten)]
        common: Common,
        /// Emit JSON with the antisymmetry and Jacobi results instead of CSV.
        #[arg(long)]
        json: bool,
    },
}

fn fail(e: Error) -> (ExitCode, String) {
    let code = match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Refusal => 3,
        ErrorKind::Internal => 1,
    };
    (ExitCode::from(code), e.to_string())
}

struct Session {
    common: Common,
    algebra: HallAlgebra,
    started: Instant,
}

impl Session {
    fn open(common: Common) -> Result<Session, Error> {
        let started = Instant::now();
        let text = std::fs::read_to_string(&common.quiver)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", common.quiver.display())))?;
        let pres = QuiverPresentation::parse(&text)?;
        let n = pres.vertex_count();
        let bound = match common.dim_bound.len() {
            1 => vec![common.dim_bound[0]; n],
            k if k == n => common.dim_bound.clone(),
            k => return Err(Error::InvalidInput(format!("dimension bound has {k} entries for {n} vertices"))),
        };
        let method = match common.method {
            Method::Auto => CatalogMethod::Auto,
            Method::Exhaustive => CatalogMethod::Exhaustive,
            Method::Extensions => CatalogMethod::Extensions,
        };
        let opts = CatalogOptions { method, ..CatalogOptions::default() };
        let table = IndecTable::build(pres, &common.primes, DimVector::new(bound), opts)?;
        let mut ladder = common.primes.clone();
        ladder.sort_unstable();
        let cfg = SamplingConfig { strict: common.strict, ..SamplingConfig::with_ladder(ladder) };
        let engine = ChiEngine::new(Arc::new(table), cfg)?;
        Ok(Session { common, algebra: HallAlgebra::new(engine), started })
    }

    fn table(&self) -> &IndecTable {
        self.algebra.table()
    }

    fn class(&self, s: &str) -> Result<IsoClass, Error> {
        IsoClass::parse(s, self.table())
    }

    fn engine_ladder(&self) -> Vec<u64> {
        self.algebra.engine().config().ladder.clone()
    }

    fn bound(&self) -> DimVector {
        self.table().dim_bound().clone()
    }

    fn header(&self) -> Value {
        let name = self.common.quiver.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        json!({
            "quiver": name,
            "primes": self.engine_ladder(),
            "dim_bound": self.bound().as_slice(),
            "strict": self.common.strict,
        })
    }

    fn emit(&self, mut report: Value) -> Result<(), Error> {
        let secs = self.started.elapsed().as_secs_f64();
        if self.common.timing {
            report["timing_seconds"] = json!(secs);
        }
        for w in self.table().warnings() {
            eprintln!("warning: {w}");
        }
        eprintln!("elapsed: {secs:.2}s");
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        write_out(self.common.out.as_deref(), &text)
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn catalog(common: Common) -> Result<ExitCode, Error> {
    let s = Session::open(common)?;
    let mut report = s.header();
    report["catalog"] = s.table().to_json();
    eprintln!("{} indecomposables", s.table().classes().len());
    s.emit(report)?;
    Ok(ExitCode::SUCCESS)
}

fn product(common: Common, a: &str, b: &str) -> Result<ExitCode, Error> {
    let s = Session::open(common)?;
    let (ca, cb) = (s.class(a)?, s.class(b)?);
    let t = s.table();
    let mut certs = serde_json::Map::new();
    let mut prod = HallElement::zero();
    for (x, r) in s.algebra.product_chi(&ca, &cb)? {
        prod.add_term(x.clone(), r.value);
        certs.insert(x.display(t).to_string(), serde_json::to_value(&r).expect("result serializes"));
    }
    let mut report = s.header();
    report["a"] = json!(ca.display(t).to_string());
    report["b"] = json!(cb.display(t).to_string());
    report["product"] = prod.to_json(t);
    report["certificates"] = Value::Object(certs);
    eprintln!("{}", prod.show(t));
    s.emit(report)?;
    Ok(ExitCode::SUCCESS)
}

fn chi(common: Common, classes: &[String], of: &str) -> Result<ExitCode, Error> {
    let s = Session::open(common)?;
    let cs = classes.iter().map(|c| s.class(c)).collect::<Result<Vec<_>, _>>()?;
    let x = s.class(of)?;
    let r = s.algebra.engine().chi_filtration(&cs, &x)?;
    let t = s.table();
    let mut report = s.header();
    report["classes"] = json!(cs.iter().map(|c| c.display(t).to_string()).collect::<Vec<_>>());
    report["of"] = json!(x.display(t).to_string());
    report["result"] = serde_json::to_value(&r).expect("result serializes");
    eprintln!("chi = {} from {}", r.value, r.polynomial);
    s.emit(report)?;
    Ok(ExitCode::SUCCESS)
}

fn ext(common: Common, quotient: &str, sub: &str, middle: &str) -> Result<ExitCode, Error> {
    let s = Session::open(common)?;
    let (a, b, x) = (s.class(quotient)?, s.class(sub)?, s.class(middle)?);
    let r = s.algebra.engine().chi_ext_middle(&a, &b, &x)?;
    let t = s.table();
    let mut report = s.header();
    report["quotient"] = json!(a.display(t).to_string());
    report["sub"] = json!(b.display(t).to_string());
    report["middle"] = json!(x.display(t).to_string());
    report["result"] = serde_json::to_value(&r).expect("result serializes");
    eprintln!("chi = {} from {}", r.value, r.polynomial);
    s.emit(report)?;
    Ok(ExitCode::SUCCESS)
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Assoc => "assoc",
        Suite::Lie => "lie",
        Suite::Initial => "initial",
        Suite::Pbw => "pbw",
        Suite::GreenDegen => "green-degen",
        Suite::GreenClassical => "green-classical",
        Suite::Comult => "comult",
        Suite::Jacobi => "jacobi",
        Suite::ExtVanishing => "ext-vanishing",
        Suite::Rerun => "rerun",
        Suite::All => "all",
    }
}

struct VerifyOpts {
    kmax: u32,
    green_primes: Vec<u64>,
    rerun_primes: Vec<u64>,
}

fn run_suite(s: &Session, suite: Suite, opts: &VerifyOpts, explicit: bool) -> Result<SuiteReport, Error> {
    let h = &s.algebra;
    let b = s.bound();
    let name = suite_name(suite);
    let out = match suite {
        Suite::Assoc => h.verify_associativity(&b),
        Suite::Lie => h.verify_lie(&b),
        Suite::Jacobi => h.verify_jacobi(&b),
        Suite::Initial => h.verify_initial_terms(&b, opts.kmax),
        Suite::Pbw => h.verify_pbw(&b, None),
        Suite::GreenDegen => h.verify_green_degenerate(&b),
        Suite::Comult => h.verify_comult(&b),
        Suite::ExtVanishing => h.verify_ext_vanishing(&b),
        Suite::GreenClassical => {
            if !s.table().presentation().is_hereditary() && !explicit {
                return Ok(SuiteReport::skipped(name, "presentation has relations".into()));
            }
            let primes = s.table().primes();
            let mut merged: Option<SuiteReport> = None;
            for &p in &opts.green_primes {
                let r = match h.verify_green_classical(&b, p, &primes) {
                    Ok(r) => r,
                    Err(e) => return refusal_or(name, e),
                };
                merged = Some(match merged {
                    None => r,
                    Some(m) => combine(m, r),
                });
            }
            return Ok(merged.unwrap_or_else(|| SuiteReport::skipped(name, "no primes given".into())));
        }
        Suite::Rerun => return rerun(s, &opts.rerun_primes),
        Suite::All => unreachable!(),
    };
    out.or_else(|e| refusal_or(name, e))
}

fn combine(mut a: SuiteReport, b: SuiteReport) -> SuiteReport {
    a.checks += b.checks;
    a.failures += b.failures;
    a.witnesses.extend(b.witnesses);
    a.witnesses.truncate(25);
    if b.status == Status::Fail {
        a.status = Status::Fail;
    }
    a.details = Value::Array(match a.details {
        Value::Array(mut v) => {
            v.push(b.details);
            v
        }
        d => vec![d, b.details],
    });
    a
}

fn refusal_or(name: &str, e: Error) -> Result<SuiteReport, Error> {
    match e.kind() {
        ErrorKind::Refusal => Ok(SuiteReport::refused(name, e.to_string())),
        _ => Err(e),
    }
}

/// Every certified χ is stable and reproduced on another ladder.
fn rerun(s: &Session, primes: &[u64]) -> Result<SuiteReport, Error> {
    let eng = s.algebra.engine();
    let results = eng.results();
    let unstable: Vec<Value> = results.iter().filter(|(_, r)| !r.stable).map(|(k, _)| json!(k)).collect();
    let other = eng.with_config(SamplingConfig { strict: s.common.strict, ..SamplingConfig::with_ladder(primes.to_vec()) })?;
    let diffs = match eng.compare_with(&other) {
        Ok(d) => d,
        Err(e) => return refusal_or("rerun", e),
    };
    let failures = (unstable.len() + diffs.len()) as u64;
    let mut witnesses: Vec<Value> = unstable.into_iter().map(|k| json!({"unstable": k})).collect();
    witnesses.extend(diffs.iter().map(|k| json!({"ladder_mismatch": k})));
    witnesses.truncate(25);
    Ok(SuiteReport {
        suite: "rerun".into(),
        status: if failures == 0 { Status::Pass } else { Status::Fail },
        checks: results.len() as u64 * 2,
        failures,
        witnesses,
        notes: vec![],
        details: json!({"results": results.len(), "ladder": primes}),
    })
}

fn verify(common: Common, suite: Suite, opts: VerifyOpts) -> Result<ExitCode, Error> {
    validate_conventions()?;
    let s = Session::open(common)?;
    let suites: Vec<Suite> = if suite == Suite::All { ALL_SUITES.to_vec() } else { vec![suite] };
    let mut reports = Vec::new();
    for &x in &suites {
        let t = Instant::now();
        let r = run_suite(&s, x, &opts, suite != Suite::All)?;
        eprintln!(
            "{:<16} {:<8} checks {:>6}  failures {:>4}  {:.2}s",
            r.suite,
            format!("{:?}", r.status).to_lowercase(),
            r.checks,
            r.failures,
            t.elapsed().as_secs_f64()
        );
        reports.push(r);
    }
    let status = if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if reports.iter().any(|r| r.status == Status::Refused) {
        Status::Refused
    } else {
        Status::Pass
    };
    let mut report = s.header();
    report["suites"] = serde_json::to_value(&reports).expect("reports serialize");
    report["status"] = serde_json::to_value(status).expect("status serializes");
    report["certified_values"] = json!(s.algebra.engine().result_count());
    s.emit(report)?;
    Ok(ExitCode::from(match status {
        Status::Fail => 1,
        Status::Refused => 3,
        _ => 0,
    }))
}

fn constants(common: Common, as_json: bool) -> Result<ExitCode, Error> {
    let s = Session::open(common)?;
    let c = s.algebra.structure_constants(&s.bound())?;
    let ok = c.lie.passed() && c.jacobi.passed();
    eprintln!("{} nonzero constants; antisymmetry/closure {:?}, jacobi {:?}", c.rows.len(), c.lie.status, c.jacobi.status);
    if as_json {
        let mut report = s.header();
        report["constants"] = serde_json::to_value(&c).expect("table serializes");
        s.emit(report)?;
    } else {
        write_out(s.common.out.as_deref(), &c.to_csv())?;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Catalog { common } => catalog(common),
        Cmd::Product { common, a, b } => product(common, &a, &b),
        Cmd::Chi { common, classes, of } => chi(common, &classes, &of),
        Cmd::Ext { common, quotient, sub, middle } => ext(common, &quotient, &sub, &middle),
        Cmd::Verify { common, suite, kmax, green_primes, rerun_primes } => {
            verify(common, suite, VerifyOpts { kmax, green_primes, rerun_primes })
        }
        Cmd::Constants { common, json } => constants(common, json),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let (code, msg) = fail(e);
            eprintln!("error: {msg}");
            code
        }
    }
}

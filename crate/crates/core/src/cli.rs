//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verified negative answer, 2 stopped by the
//! budget, 3 bad input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::awfs::json::{parse_gen_cover, parse_gen_or_square, parse_map, parse_psh_gen, parse_psh_map};
use crate::awfs::psh::{psh_free_factorization, verify_psh_factorization, PshGenFamily, PshVerticalMap};
use crate::awfs::{free_factorization, has_rlp, recover_wtype, verify_factorization, Engine, Rlp, DEFAULT_PROBLEM_CAP};
use crate::classical::{build_initial, check_target, initial_hom, TargetOutcome};
use crate::error::{Error, Result};
use crate::fin::{Assignments, Fam};
use crate::per::{self, cover, CrossCheck, TwoCoverBase};
use crate::poly::{self, enumerate_algebras, Algebra, PolyRed, TableAlgebra, DEFAULT_ALGEBRA_CAP};
use crate::prescat::cube::{gen_truncated_cube, structure_check_is_exhaustive};
use crate::prescat::json::parse_psh;
use crate::prescat::PshPolyRed;
use crate::presheaf::{
    check_presheaf_laws, check_psh_target, enumerate_n, enumerate_psh_algebras, small_diagrams_over, PshTargetOutcome,
};
use crate::{Budget, Status};

const TARGET_CAP: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "wred", version, about = "Initial algebras of polynomials with reductions, and free factorizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = EngineArg::Classical)]
    engine: EngineArg,
    #[arg(long, global = true, default_value_t = 16)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 100_000)]
    max_count: usize,
    /// 2-cover base file for the per engine.
    #[arg(long, global = true)]
    cover_base: Option<PathBuf>,
    /// Target algebras for verify-initial.
    #[arg(long, global = true)]
    targets: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Number of cube generators for demo-cube.
    #[arg(long, global = true, default_value_t = 1)]
    dim: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coherence and classification of a polynomial.
    Check { file: PathBuf },
    /// Reduction places per constructor.
    Classify { file: PathBuf },
    /// Build the initial algebra with the chosen engine.
    BuildInitial { file: PathBuf },
    /// Check initiality against target algebras by exhaustive search.
    VerifyInitial { file: PathBuf },
    /// Compare the per engine with the classical one.
    Crosscheck { file: PathBuf },
    /// Free factorization of a map against a generating family.
    Factorize { gen: PathBuf, map: PathBuf },
    /// Whether a map solves every lifting problem from a generating family.
    Rlp { gen: PathBuf, map: PathBuf },
    /// Recover the plain W-type from the factorization of `0 -> 1`.
    RecoverWtype { file: PathBuf },
    /// The truncated cube generating family and its Leibniz subobject.
    DemoCube,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Classical,
    Per,
    Presheaf,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Classical => Engine::Classical,
            EngineArg::Per => Engine::Per,
            EngineArg::Presheaf => Engine::Presheaf,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// The result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    summary: String,
    fields: Map<String, Value>,
}

impl Report {
    fn new(code: i32, summary: impl Into<String>) -> Self {
        Report {
            code,
            summary: summary.into(),
            fields: Map::new(),
        }
    }

    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut m = Map::new();
                m.insert("exit_code".into(), self.code.into());
                m.insert("summary".into(), self.summary.clone().into());
                m.extend(self.fields.clone());
                let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!("{}\n", self.summary);
                for (k, v) in &self.fields {
                    text_value(&mut s, k, v, 0);
                }
                s
            }
        }
    }
}

fn text_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (n, item) in items.iter().enumerate() {
                text_value(out, &n.to_string(), item, indent + 1);
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, item) in m {
                text_value(out, k, item, indent + 1);
            }
        }
        _ => out.push_str(&format!("{pad}{key}: {}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Incoherent(_) | Error::NotLocallyDecidable | Error::NotAnAlgebra(_) => 1,
        Error::CapExceeded { .. } | Error::NotFinite(_) => 2,
        _ => 3,
    }
}

fn status_code(s: Status) -> i32 {
    if s.is_finite() {
        0
    } else {
        2
    }
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => {
            let code = code_of(&e);
            let report = Report::new(code, format!("error: {e}"));
            Outcome {
                code,
                stdout: report.render(cli.format),
                stderr: String::new(),
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn is_diagram_file(text: &str) -> Result<bool> {
    let v: Value = serde_json::from_str(text)?;
    Ok(v.get("category").is_some())
}

enum Input {
    Poly(PolyRed),
    Psh(Box<PshPolyRed>),
}

fn read_poly_or_psh(path: &Path) -> Result<Input> {
    let text = read(path)?;
    if is_diagram_file(&text)? {
        Ok(Input::Psh(Box::new(parse_psh(&text)?)))
    } else {
        Ok(Input::Poly(poly::json::parse(&text)?))
    }
}

fn read_poly(path: &Path) -> Result<PolyRed> {
    match read_poly_or_psh(path)? {
        Input::Poly(p) => Ok(p),
        Input::Psh(_) => Err(Error::Unsupported("this command takes a polynomial over finite sets".into())),
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let budget = Budget {
        max_depth: cli.depth,
        max_count: cli.max_count,
    };
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Classify { file } => classify(file),
        Command::BuildInitial { file } => build(cli, file, budget),
        Command::VerifyInitial { file } => verify(cli, file, budget),
        Command::Crosscheck { file } => crosscheck(cli, file, budget),
        Command::Factorize { gen, map } => factorize(cli, gen, map, budget),
        Command::Rlp { gen, map } => rlp(gen, map),
        Command::RecoverWtype { file } => recover(file, budget),
        Command::DemoCube => demo_cube(cli.dim),
    }
}

fn names(fam: &Fam, es: &[usize]) -> Vec<String> {
    es.iter().map(|&e| fam.name(e).to_string()).collect()
}

fn set_text(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn carrier_by_base(base: &[String], carrier: &Fam) -> Map<String, Value> {
    base.iter()
        .enumerate()
        .map(|(z, n)| (n.clone(), json!(names(carrier, carrier.fibre(z)))))
        .collect()
}

fn poly_sizes(p: &PolyRed) -> Report {
    Report::new(0, "")
        .field("base", p.base().len())
        .field("constructors", p.constructors().len())
        .field("arities", p.arities().len())
        .field("reductions", p.reductions().len())
}

fn check(file: &Path) -> Result<Report> {
    match read_poly_or_psh(file) {
        Ok(Input::Poly(p)) => {
            let rep = p.check_coherence();
            let mut out = poly_sizes(&p);
            if rep.passes() {
                out.summary = format!("coherent; classification: {}", p.classify());
            } else {
                let bad: Vec<String> = rep.violations.iter().map(|&x| p.arity_name(x).to_string()).collect();
                out.code = 1;
                out.summary = format!("incoherent at: {}", bad.join(", "));
            }
            Ok(out)
        }
        Ok(Input::Psh(pp)) => {
            let ld = pp.check_locally_decidable();
            Ok(Report::new(
                0,
                format!("coherent; locally decidable: {}", if ld { "yes" } else { "no" }),
            )
            .field("objects", pp.cat.object_count())
            .field("morphisms", pp.cat.morphism_count()))
        }
        Err(Error::Incoherent(bad)) => Ok(Report::new(1, format!("incoherent at: {}", bad.join(", ")))),
        Err(e) => Err(e),
    }
}

fn classify(file: &Path) -> Result<Report> {
    match read_poly_or_psh(file)? {
        Input::Poly(p) => {
            let places: Map<String, Value> = (0..p.constructors().len())
                .filter(|&y| !p.reduction_places(y).is_empty())
                .map(|y| {
                    let xs: Vec<String> = p.reduction_places(y).iter().map(|&x| p.arity_name(x).to_string()).collect();
                    (p.cons_name(y).to_string(), json!(xs))
                })
                .collect();
            Ok(Report::new(0, format!("classification: {}", p.classify())).field("reduction places", places))
        }
        Input::Psh(pp) => {
            let mut per_obj = Map::new();
            for c in 0..pp.cat.object_count() {
                let mut m = Map::new();
                for y in 0..pp.y.components[c].len() {
                    let n = pp.arity(c, y).iter().filter(|&&x| pp.reduces(c, x)).count();
                    if n > 0 {
                        m.insert(pp.y.components[c].name(y).to_string(), n.into());
                    }
                }
                per_obj.insert(pp.object_name(c).to_string(), Value::Object(m));
            }
            let ld = pp.check_locally_decidable();
            Ok(Report::new(0, format!("locally decidable: {}", if ld { "yes" } else { "no" }))
                .field("reduction places", per_obj))
        }
    }
}

fn cover_for(cli: &Cli, p: &PolyRed) -> Result<TwoCoverBase> {
    match &cli.cover_base {
        Some(path) => cover::parse(&read(path)?, p),
        None => Ok(TwoCoverBase::for_poly(p)),
    }
}

fn build(cli: &Cli, file: &Path, budget: Budget) -> Result<Report> {
    let input = read_poly_or_psh(file)?;
    match (cli.engine, input) {
        (EngineArg::Presheaf, input) => {
            let pp = match input {
                Input::Poly(p) => PshPolyRed::from_poly(&p)?,
                Input::Psh(pp) => *pp,
            };
            let frag = enumerate_n(&pp, budget)?;
            let laws = check_presheaf_laws(&pp, &frag);
            let mut comps = Map::new();
            for c in 0..pp.cat.object_count() {
                comps.insert(pp.object_name(c).to_string(), json!(frag.render_component(c, &pp)));
            }
            Ok(Report::new(
                status_code(frag.status),
                format!("{}; normal forms {}", frag.status, frag.len()),
            )
            .field("status", frag.status.to_string())
            .field("normal forms", comps)
            .field("presheaf laws", law_text(laws.passes(), &laws.violations)))
        }
        (_, Input::Psh(_)) => Err(Error::Unsupported("diagram polynomials need --engine presheaf".into())),
        (EngineArg::Classical, Input::Poly(p)) => {
            let ci = build_initial(&p, budget)?;
            let c0 = ci.c0.names(&p);
            let carrier = ci.wc.carrier();
            Ok(Report::new(
                status_code(ci.wc.status()),
                format!("{}; carrier size {}; C0 = {}", ci.wc.status(), carrier.len(), set_text(&c0)),
            )
            .field("status", ci.wc.status().to_string())
            .field("C0", json!(c0))
            .field("carrier", carrier_by_base(p.base().names(), carrier)))
        }
        (EngineArg::Per, Input::Poly(p)) => {
            let p = p.normalize_reductions();
            let cb = cover_for(cli, &p)?;
            let q = per::quotient(&p, &cb, budget)?;
            Ok(Report::new(
                status_code(q.status),
                format!("{}; carrier size {}", q.status, q.carrier.len()),
            )
            .field("status", q.status.to_string())
            .field("carrier", carrier_by_base(p.base().names(), &q.carrier)))
        }
    }
}

fn law_text(ok: bool, violations: &[String]) -> Value {
    if ok {
        "pass".into()
    } else {
        json!(violations)
    }
}

/// Every algebra on carriers whose fibres have at most `max` elements.
fn small_algebras(p: &PolyRed, max: usize) -> Result<Vec<TableAlgebra>> {
    let sizes: Vec<Vec<usize>> = (0..p.base().len()).map(|_| (0..=max).collect()).collect();
    let mut out = Vec::new();
    for pick in Assignments::new(&sizes) {
        let mut carrier = Fam::empty(p.base().len());
        for (z, &n) in pick.iter().enumerate() {
            for k in 0..n {
                carrier.push(format!("{}.{k}", p.base_name(z)), z)?;
            }
        }
        out.extend(enumerate_algebras(p, &carrier, DEFAULT_ALGEBRA_CAP)?);
        if out.len() > TARGET_CAP {
            return Err(Error::CapExceeded {
                what: "target algebras",
                needed: out.len() as u128,
                cap: TARGET_CAP as u128,
            });
        }
    }
    Ok(out)
}

fn outcome_summary(n: usize, failed: usize, skipped: usize, not_algebras: usize) -> (i32, String) {
    let mut summary = if failed > 0 {
        format!("initiality fails for {failed} of {n} targets")
    } else {
        format!("initial against {} of {n} targets", n - skipped - not_algebras)
    };
    if not_algebras > 0 {
        summary.push_str(&format!("; {not_algebras} not algebras"));
    }
    if skipped > 0 {
        summary.push_str(&format!("; {skipped} skipped"));
    }
    let code = if failed > 0 || not_algebras > 0 {
        1
    } else if skipped > 0 {
        2
    } else {
        0
    };
    (code, summary)
}

fn verify(cli: &Cli, file: &Path, budget: Budget) -> Result<Report> {
    let input = read_poly_or_psh(file)?;
    if cli.engine == EngineArg::Presheaf {
        let pp = match input {
            Input::Poly(p) => PshPolyRed::from_poly(&p)?,
            Input::Psh(pp) => *pp,
        };
        if cli.targets.is_some() {
            return Err(Error::Unsupported("target files are for finite-set polynomials".into()));
        }
        let frag = enumerate_n(&pp, budget)?;
        if !frag.status.is_finite() {
            return Ok(Report::new(2, format!("{}; initiality not checked", frag.status)));
        }
        let mut outcomes = Vec::new();
        let mut failed = 0;
        for (carrier, to_base) in small_diagrams_over(&pp, 2, TARGET_CAP)? {
            for alg in enumerate_psh_algebras(&pp, &carrier, &to_base, TARGET_CAP)? {
                match check_psh_target(&pp, &frag, &alg, TARGET_CAP)? {
                    PshTargetOutcome::Unique => outcomes.push("unique homomorphism".to_string()),
                    PshTargetOutcome::Failed(why) => {
                        failed += 1;
                        outcomes.push(why);
                    }
                }
            }
        }
        let (code, summary) = outcome_summary(outcomes.len(), failed, 0, 0);
        return Ok(Report::new(code, summary)
            .field("targets", "all algebras with components of size at most 2")
            .field("outcomes", json!(outcomes)));
    }
    let Input::Poly(p) = input else {
        return Err(Error::Unsupported("diagram polynomials need --engine presheaf".into()));
    };
    let p = p.normalize_reductions();
    p.require_coherent()?;
    let (targets, source) = match &cli.targets {
        Some(path) => (poly::json::parse_algebras(&read(path)?, &p)?, "file"),
        None => (small_algebras(&p, 2)?, "all algebras with fibres of size at most 2"),
    };
    let refs: Vec<&dyn Algebra> = targets.iter().map(|t| t as &dyn Algebra).collect();
    let results: Vec<TargetOutcome> = match cli.engine {
        EngineArg::Per => {
            let cb = cover_for(cli, &p)?;
            let q = per::quotient(&p, &cb, budget)?;
            let Some(qa) = &q.algebra else {
                return Ok(Report::new(2, format!("{}; initiality not checked", q.status)));
            };
            refs.iter()
                .map(|&t| check_target(&p, qa, || per::per_initial_hom(&p, &cb, &q, t), t, DEFAULT_ALGEBRA_CAP))
                .collect::<Result<_>>()?
        }
        _ => {
            let ci = build_initial(&p, budget)?;
            let Some(d) = &ci.algebra else {
                return Ok(Report::new(2, format!("{}; initiality not checked", ci.wc.status())));
            };
            refs.iter()
                .map(|&t| check_target(&p, d, || initial_hom(&p, &ci.wc, t), t, DEFAULT_ALGEBRA_CAP))
                .collect::<Result<_>>()?
        }
    };
    let failed = results.iter().filter(|o| matches!(o, TargetOutcome::Failed { .. })).count();
    let skipped = results.iter().filter(|o| matches!(o, TargetOutcome::Skipped(_))).count();
    let not_algebras = results.iter().filter(|o| matches!(o, TargetOutcome::NotAnAlgebra(_))).count();
    let outcomes: Vec<String> = results.iter().map(ToString::to_string).collect();
    let (code, summary) = outcome_summary(outcomes.len(), failed, skipped, not_algebras);
    Ok(Report::new(code, summary).field("targets", source).field("outcomes", json!(outcomes)))
}

fn crosscheck(cli: &Cli, file: &Path, budget: Budget) -> Result<Report> {
    let p = read_poly(file)?.normalize_reductions();
    let cb = cover_for(cli, &p)?;
    let res = per::crosscheck(&p, &cb, budget)?;
    let code = match &res {
        CrossCheck::Agree { .. } => 0,
        CrossCheck::Disagree(_) => 1,
        CrossCheck::Inconclusive(_) => 2,
    };
    let mut report = Report::new(code, res.to_string());
    if let CrossCheck::Agree { names, .. } = &res {
        let pairs: Map<String, Value> = names.iter().map(|(a, b)| (a.clone(), json!(b))).collect();
        report = report.field("per to classical", pairs);
    }
    Ok(report)
}

fn factorize(cli: &Cli, gen_path: &Path, map_path: &Path, budget: Budget) -> Result<Report> {
    let gen_text = read(gen_path)?;
    let map_text = read(map_path)?;
    if is_diagram_file(&gen_text)? || cli.engine == EngineArg::Presheaf {
        let (gen, f) = if is_diagram_file(&gen_text)? {
            let gen = parse_psh_gen(&gen_text)?;
            let f = parse_psh_map(&map_text, Some(gen.cat()))?;
            (gen, f)
        } else {
            let sq = parse_gen_or_square(&gen_text)?;
            if sq != sq.level1.as_square() {
                return Err(Error::Unsupported("the presheaf engine takes single generating families".into()));
            }
            (PshGenFamily::from_finite(&sq.level1), PshVerticalMap::from_finite(&parse_map(&map_text)?))
        };
        return psh_factorize(&gen, &f, budget);
    }
    let sq = parse_gen_or_square(&gen_text)?;
    let f = parse_map(&map_text)?;
    let cb = match &cli.cover_base {
        Some(path) => Some(parse_gen_cover(&read(path)?, &sq.level1)?),
        None => None,
    };
    let fact = free_factorization(&sq, &f, budget, cli.engine.into(), cb.as_ref())?;
    let e = &fact.carrier;
    let mut report = Report::new(status_code(fact.status), format!("{}; |E| = {}", fact.status, e.len()))
        .field("engine", fact.engine.to_string())
        .field("status", fact.status.to_string())
        .field("E", carrier_by_base(f.y.total().names(), e));
    if let Some(l) = &fact.l {
        let lm: Map<String, Value> = l.iter().enumerate().map(|(x, &v)| (f.x.name(x).to_string(), json!(e.name(v)))).collect();
        report = report.field("L", lm);
    }
    let rm: Map<String, Value> = (0..e.len()).map(|v| (e.name(v).to_string(), json!(f.y.name(e.over(v))))).collect();
    report = report.field("Rmap", rm);
    if let Some(table) = &fact.fillers {
        let l1 = &sq.level1;
        let rows: Vec<Value> = table
            .entries
            .iter()
            .map(|(p, vals)| {
                let beta: Vec<String> = p.beta.iter().map(|&y| f.y.name(y).to_string()).collect();
                let gamma: Vec<String> = p.gamma.iter().map(|&x| e.name(x).to_string()).collect();
                let fill: Vec<String> = vals.iter().map(|&x| e.name(x).to_string()).collect();
                json!(format!(
                    "{} over {}: β = [{}], γ = [{}] ↦ [{}]",
                    l1.index.name(p.i),
                    f.index.name(p.j),
                    beta.join(", "),
                    gamma.join(", "),
                    fill.join(", ")
                ))
            })
            .collect();
        report = report.field("fillers", rows);
        let v = verify_factorization(&sq, &f, &fact)?;
        let rlp_ok = has_rlp(&sq, &fact.as_vertical(&f), DEFAULT_PROBLEM_CAP)?.is_solved();
        report = report
            .field("verification", law_text(v.passes(), &v.violations))
            .field("rlp of Rmap", if rlp_ok { "yes" } else { "no" });
        if !v.passes() || !rlp_ok {
            report.code = 1;
            report.summary.push_str("; verification failed");
        } else {
            report.summary.push_str("; verified");
        }
    }
    Ok(report)
}

fn psh_factorize(gen: &PshGenFamily, f: &PshVerticalMap, budget: Budget) -> Result<Report> {
    let fact = psh_free_factorization(gen, f, budget)?;
    let cat = gen.cat();
    let mut e_by_obj = Map::new();
    let mut l_by_obj = Map::new();
    for c in 0..cat.object_count() {
        let comp = &fact.carrier.components[c];
        e_by_obj.insert(cat.objects().name(c).to_string(), json!(comp.names()));
        if let Some(l) = &fact.l {
            let m: Map<String, Value> = (0..f.x.components[c].len())
                .map(|x| (f.x.components[c].name(x).to_string(), json!(comp.name(l.apply(c, x)))))
                .collect();
            l_by_obj.insert(cat.objects().name(c).to_string(), Value::Object(m));
        }
    }
    let mut report = Report::new(
        status_code(fact.status),
        format!("{}; |E| = {}", fact.status, fact.carrier.total_len()),
    )
    .field("engine", "presheaf")
    .field("status", fact.status.to_string())
    .field("E", e_by_obj);
    if fact.l.is_some() {
        let v = verify_psh_factorization(f, &fact);
        report = report.field("L", l_by_obj).field("verification", law_text(v.passes(), &v.violations));
        if v.passes() {
            report.summary.push_str("; verified");
        } else {
            report.code = 1;
            report.summary.push_str("; verification failed");
        }
    }
    Ok(report)
}

fn rlp(gen_path: &Path, map_path: &Path) -> Result<Report> {
    let gen_text = read(gen_path)?;
    if is_diagram_file(&gen_text)? {
        return Err(Error::Unsupported("rlp takes finite-set inputs".into()));
    }
    let sq = parse_gen_or_square(&gen_text)?;
    let f = parse_map(&read(map_path)?)?;
    Ok(match has_rlp(&sq, &f, DEFAULT_PROBLEM_CAP)? {
        Rlp::Solved(table) => Report::new(0, format!("yes: all {} lifting problems solved", table.entries.len())),
        Rlp::Unsolvable(p) => {
            let beta: Vec<String> = p.beta.iter().map(|&y| f.y.name(y).to_string()).collect();
            let gamma: Vec<String> = p.gamma.iter().map(|&x| f.x.name(x).to_string()).collect();
            Report::new(1, "no: a lifting problem has no filler")
                .field("index", sq.level1.index.name(p.i))
                .field("over", f.index.name(p.j))
                .field("beta", json!(beta))
                .field("gamma", json!(gamma))
        }
    })
}

fn recover(file: &Path, budget: Budget) -> Result<Report> {
    let p = read_poly(file)?;
    let rep = recover_wtype(&p, budget)?;
    Ok(Report::new(if rep.agrees() { 0 } else { 1 }, rep.to_string())
        .field("status", rep.status.to_string())
        .field("carrier", json!(rep.carrier))
        .field("plain trees", json!(rep.wtype)))
}

fn demo_cube(n: usize) -> Result<Report> {
    let cube = gen_truncated_cube(n)?;
    let structure = cube.check_structure();
    let leibniz = cube.check_leibniz();
    let mut per_obj = Map::new();
    for c in 0..cube.cat.object_count() {
        per_obj.insert(
            cube.cat.objects().name(c).to_string(),
            json!({
                "dM": cube.dm(c).len(),
                "faces": cube.faces.components[c].len(),
                "leibniz": cube.leibniz.components[c].len(),
            }),
        );
    }
    let ok = structure.passes() && leibniz.passes();
    Ok(Report::new(
        if ok { 0 } else { 1 },
        format!(
            "cube n = {n}: {} objects, {} morphisms; {}",
            cube.cat.object_count(),
            cube.cat.morphism_count(),
            if ok { "checks pass" } else { "checks fail" }
        ),
    )
    .field("objects", per_obj)
    .field("structure", law_text(structure.passes(), &structure.violations))
    .field(
        "functor laws",
        if structure_check_is_exhaustive(&cube.cat) { "all composable pairs" } else { "sampled composable pairs" },
    )
    .field("leibniz", law_text(leibniz.passes(), &leibniz.violations)))
}

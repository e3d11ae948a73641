//! Command-line front end: parses fan and morphism documents, runs the
//! analyses and renders a JSON report.
//!
//! Exit codes: 0 when everything was computed and every asserted property
//! holds, 1 when a property that must hold by theory fails, 2 for invalid
//! input or unmet hypotheses.

pub mod report;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use toricfan::classes::{
    curve_class_space, divisor_class_group, euler_jaczewski_summands, picard_rank,
    verify_sequences,
};
use toricfan::corpus::blowup_chain;
use toricfan::fan::construct::fiber_product_fan;
use toricfan::fan::{
    hirzebruch_fan, product_fan, projective_space_fan, projectivized_split_bundle_fan,
    resolve_with_trace, star_subdivision, validate_fan, Fan,
};
use toricfan::io::{parse_fan, parse_morphism, serialize_fan};
use toricfan::morphism::{
    check_compatibility, is_generically_finite, is_split_bundle_morphism, j_of, lemma1_check,
    stein_factor, ToricMorphism,
};
use toricfan::recognize::{
    is_product, is_projective, is_projective_space, theorem1_toric_verify,
    theorem2_toric_verify, Theorem1Verdict, Theorem2Verdict,
};
use toricfan::Error;

use report::{digest, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ALARM: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Default seed for commands that draw random numbers.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(name = "toricfan", version, about = "Exact analyses of toric fans and morphisms")]
pub struct Cli {
    /// Seed for randomised constructions.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validity, smoothness, completeness, projectivity and Picard rank of a fan.
    Analyze {
        /// Fan document; standard input when absent or `-`.
        input: Option<PathBuf>,
    },
    /// Both exact sequences of a fan and the classes of the ray divisors.
    Sequences { input: Option<PathBuf> },
    /// Compatibility, generic finiteness, J, the span check and the Stein
    /// factorization of a morphism.
    Morphism { input: Option<PathBuf> },
    /// Build a fan from parameters.
    Construct {
        #[command(subcommand)]
        what: Construction,
        /// Also write the canonical fan document to this file.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Projective-space and product recognition.
    Recognize { input: Option<PathBuf> },
    /// Resolution of singularities.
    Resolve { input: Option<PathBuf> },
    /// Verifies that the target of a surjective morphism with smooth
    /// projective Picard-rank-one target is a projective space.
    Theorem1 { input: Option<PathBuf> },
    /// Verifies that a variety with two split bundle structures of
    /// complementary dimension is a fiber product over P^1.
    Theorem2 {
        /// Morphism document for X → Y.
        first: PathBuf,
        /// Morphism document for X → Z.
        second: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construction {
    ProjectiveSpace { n: usize },
    Hirzebruch {
        #[arg(allow_negative_numbers = true)]
        a: i64,
    },
    /// Product of two fans.
    Product { first: PathBuf, second: PathBuf },
    /// Star subdivision at a primitive vector, e.g. `--at 1,1`.
    StarSubdivision {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        at: Vec<i64>,
    },
    /// Projectivised split bundle: one twist row per summand, rows
    /// separated by `;` and entries by `,` (e.g. `--twists "0,1;0,2"`).
    SplitBundle {
        base: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        twists: String,
    },
    /// Fiber product of two split-bundle morphisms onto P^1.
    FiberProduct { first: PathBuf, second: PathBuf },
    /// A chain of random blowups of a base fan, drawn from `--seed`.
    RandomBlowups {
        base: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Sequences { .. } => "sequences",
            Command::Morphism { .. } => "morphism",
            Command::Construct { .. } => "construct",
            Command::Recognize { .. } => "recognize",
            Command::Resolve { .. } => "resolve",
            Command::Theorem1 { .. } => "theorem1",
            Command::Theorem2 { .. } => "theorem2",
        }
    }
}

/// Reads every input up front so the digest covers exactly what was parsed.
struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    texts: Vec<(String, String)>,
}

impl Inputs<'_> {
    fn read(&mut self, path: Option<&Path>) -> Result<String, String> {
        let name = path.map(|p| p.display().to_string()).unwrap_or_else(|| "-".into());
        let text = if name == "-" {
            if self.stdin_used {
                return Err("standard input can only be read once".into());
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| format!("<stdin>: {e}"))?;
            s
        } else {
            std::fs::read_to_string(&name).map_err(|e| format!("{name}: {e}"))?
        };
        self.texts.push((name, text.clone()));
        Ok(text)
    }

    fn fan(&mut self, path: Option<&Path>) -> Result<Fan, String> {
        let text = self.read(path)?;
        let label = self.texts.last().unwrap().0.clone();
        parse_fan(&text).map_err(|e| format!("{label}: {e}"))
    }

    fn morphism(&mut self, path: Option<&Path>) -> Result<ToricMorphism, String> {
        let text = self.read(path)?;
        let label = self.texts.last().unwrap().0.clone();
        parse_morphism(&text).map_err(|e| format!("{label}: {e}"))
    }

    fn digest(&self, extra: &str) -> String {
        let mut parts: Vec<&[u8]> = self.texts.iter().map(|(_, t)| t.as_bytes()).collect();
        parts.push(extra.as_bytes());
        digest(parts)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the report and the exit code; `--help` and `--version` come
/// back as `Err` with the text to print.
pub fn run(args: &[String], stdin: &mut dyn Read) -> Result<(Report, i32), String> {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Err(e.to_string());
            }
            let mut r = Report::new("invalid", digest([args.join(" ").as_bytes()]));
            r.note(e.to_string().trim_end().to_string());
            return Ok((r, EXIT_INVALID));
        }
    };
    let mut inputs = Inputs {
        stdin,
        stdin_used: false,
        texts: Vec::new(),
    };
    let name = cli.command.name();
    let outcome = dispatch(&cli, &mut inputs);
    let extra = match &cli.command {
        Command::Construct { .. } => args[1..].join(" "),
        _ => String::new(),
    };
    let mut report = Report::new(name, inputs.digest(&extra));
    let code = match outcome {
        Ok(out) => {
            report.results = out.results;
            report.diagnostics = out.diagnostics;
            out.code
        }
        Err(msg) => {
            report.note(msg);
            EXIT_INVALID
        }
    };
    Ok((report, code))
}

struct Outcome {
    results: serde_json::Map<String, Value>,
    diagnostics: Vec<String>,
    code: i32,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            results: serde_json::Map::new(),
            diagnostics: Vec::new(),
            code: EXIT_OK,
        }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    /// Records a failed theory-backed assertion.
    fn alarm(&mut self, msg: impl Into<String>) {
        self.note(msg);
        self.code = self.code.max(EXIT_ALARM);
    }

    fn invalid(&mut self, msg: impl Into<String>) {
        self.note(msg);
        self.code = EXIT_INVALID;
    }
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome, String> {
    match &cli.command {
        Command::Analyze { input } => analyze(&inputs.fan(input.as_deref())?),
        Command::Sequences { input } => sequences(&inputs.fan(input.as_deref())?),
        Command::Morphism { input } => morphism(&inputs.morphism(input.as_deref())?),
        Command::Construct { what, out } => construct(what, out.as_deref(), cli.seed, inputs),
        Command::Recognize { input } => recognize(&inputs.fan(input.as_deref())?),
        Command::Resolve { input } => resolve(&inputs.fan(input.as_deref())?),
        Command::Theorem1 { input } => theorem1(&inputs.morphism(input.as_deref())?),
        Command::Theorem2 { first, second } => {
            let f = inputs.morphism(Some(first))?;
            let g = inputs.morphism(Some(second))?;
            theorem2(&f, &g)
        }
    }
}

/// Validates a fan; on defects fills the outcome and returns `false`.
fn require_valid(f: &Fan, out: &mut Outcome, label: &str) -> bool {
    let v = validate_fan(f);
    if v.is_valid() {
        return true;
    }
    let defects: Vec<Value> = v.defects.iter().map(|d| json!(d.to_string())).collect();
    out.set(&format!("{label}defects"), Value::Array(defects));
    out.invalid(format!("{label}fan is not valid"));
    false
}

fn analyze(f: &Fan) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    let valid = require_valid(f, &mut out, "");
    out.set("valid", valid);
    if !valid {
        return Ok(out);
    }
    let smooth = f.is_smooth();
    let simplicial = f.is_simplicial();
    let complete = f.is_complete();
    out.set("dim", f.dim());
    out.set("ray_count", f.num_rays());
    out.set("smooth", smooth);
    out.set("simplicial", simplicial);
    out.set("complete", complete);
    match is_projective(f) {
        Ok(cert) => {
            let projective = cert.is_some();
            out.set("projective", projective);
            if let Some(c) = &cert {
                if !c.verify(f) {
                    out.alarm("projectivity certificate fails re-verification");
                }
                out.set("certificate", report::certificate(c));
            }
            if complete && f.dim() <= 2 && !projective {
                out.alarm("complete fan of dimension at most 2 reported non-projective");
            }
        }
        Err(e) => {
            out.set("projective", Value::Null);
            out.note(format!("projectivity: {e}"));
        }
    }
    match picard_rank(f) {
        Ok(rho) => {
            out.set("picard_rank", rho);
            if smooth && complete && f.num_rays() != f.dim() + rho {
                out.alarm("rank identity #rays = dim + Picard rank fails");
            }
        }
        Err(e) => {
            out.set("picard_rank", Value::Null);
            out.note(format!("Picard rank: {e}"));
        }
    }
    Ok(out)
}

fn sequences(f: &Fan) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    if !require_valid(f, &mut out, "") {
        return Ok(out);
    }
    let r = verify_sequences(f);
    out.set("sequences", report::sequences(&r));
    match divisor_class_group(f) {
        Ok(cl) => out.set(
            "class_group",
            json!({"free_rank": cl.free_rank, "torsion": report::ints(&cl.torsion)}),
        ),
        Err(e) => out.note(format!("class group: {e}")),
    }
    let curves: Vec<Value> = curve_class_space(f)
        .iter()
        .map(|c| report::ints(&c.intersections))
        .collect();
    out.set("curve_classes", Value::Array(curves));
    match euler_jaczewski_summands(f) {
        Ok(s) => {
            out.set("summand_count", s.len());
            out.set(
                "summands",
                Value::Array(s.iter().map(report::class_element).collect()),
            );
        }
        Err(e) => out.note(format!("summands: {e}")),
    }
    if f.is_smooth() && f.is_complete() && !r.is_exact() {
        out.alarm("sequences of a smooth complete fan are not exact");
    }
    Ok(out)
}

fn ray_set(m: &ToricMorphism, j: &std::collections::BTreeSet<usize>) -> Value {
    json!({
        "indices": j.iter().collect::<Vec<_>>(),
        "rays": j.iter().map(|&r| m.source().ray(r).to_vec()).collect::<Vec<_>>(),
    })
}

fn require_valid_morphism(m: &ToricMorphism, out: &mut Outcome) -> bool {
    if !require_valid(m.source(), out, "source ") || !require_valid(m.target(), out, "target ") {
        return false;
    }
    let c = check_compatibility(m);
    out.set("compatible", c.compatible);
    if let Some(cone) = c.offending_cone {
        out.set("offending_cone", cone);
        out.invalid(format!("source cone {cone} maps into no target cone"));
        return false;
    }
    true
}

fn morphism(m: &ToricMorphism) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    if !require_valid_morphism(m, &mut out) {
        return Ok(out);
    }
    match is_generically_finite(m) {
        Ok(g) => {
            out.set("generically_finite", g.finite);
            out.set("index", g.index.as_ref().map(report::int).unwrap_or(Value::Null));
        }
        Err(e) => out.note(format!("generic finiteness: {e}")),
    }
    match j_of(m) {
        Ok(j) => out.set("J", ray_set(m, &j)),
        Err(e) => out.note(format!("J: {e}")),
    }
    match lemma1_check(m) {
        Ok(ok) => {
            out.set("lemma1", ok);
            if !ok {
                out.alarm("counterexample alarm: J-rays do not span N");
            }
        }
        Err(e) => out.note(format!("lemma1: {e}")),
    }
    match stein_factor(m) {
        Ok(s) => out.set(
            "stein",
            json!({
                "middle": report::fan(&s.middle),
                "connected_part": report::morphism(&s.connected_part),
                "finite_part": report::morphism(&s.finite_part),
            }),
        ),
        Err(e) => out.note(format!("stein: {e}")),
    }
    match is_split_bundle_morphism(m) {
        Some(b) => out.set(
            "split_bundle",
            json!({
                "k": b.k,
                "fiber_fan": report::fan(&b.fiber_fan),
                "kernel_basis": report::matrix(&b.kernel_basis),
            }),
        ),
        None => out.set("split_bundle", Value::Null),
    }
    Ok(out)
}

fn parse_twists(s: &str) -> Result<Vec<Vec<i64>>, String> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|e| format!("--twists: {x:?}: {e}"))
                })
                .collect()
        })
        .collect()
}

fn construct(
    what: &Construction,
    out_path: Option<&Path>,
    seed: u64,
    inputs: &mut Inputs,
) -> Result<Outcome, String> {
    let lib = |r: toricfan::Result<Fan>| r.map_err(|e: Error| e.to_string());
    let mut out = Outcome::new();
    let fan = match what {
        Construction::ProjectiveSpace { n } => lib(projective_space_fan(*n))?,
        Construction::Hirzebruch { a } => lib(hirzebruch_fan(*a))?,
        Construction::Product { first, second } => {
            let a = inputs.fan(Some(first))?;
            let b = inputs.fan(Some(second))?;
            lib(product_fan(&a, &b))?
        }
        Construction::StarSubdivision { input, at } => {
            let f = inputs.fan(Some(input))?;
            lib(star_subdivision(&f, at))?
        }
        Construction::SplitBundle { base, twists } => {
            let f = inputs.fan(Some(base))?;
            lib(projectivized_split_bundle_fan(&f, &parse_twists(twists)?))?
        }
        Construction::FiberProduct { first, second } => {
            let f = inputs.morphism(Some(first))?;
            let g = inputs.morphism(Some(second))?;
            let fp = fiber_product_fan(&f, &g).map_err(|e| e.to_string())?;
            out.set("to_first", report::matrix(&fp.to_first));
            out.set("to_second", report::matrix(&fp.to_second));
            fp.fan
        }
        Construction::RandomBlowups { base, steps } => {
            let f = inputs.fan(Some(base))?;
            if !f.is_smooth() {
                return Err("random blowups need a smooth base fan".into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            out.set("seed", seed);
            blowup_chain(&mut rng, &f, *steps).pop().unwrap()
        }
    };
    if let Some(p) = out_path {
        std::fs::write(p, serialize_fan(&fan)).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    out.set("fan", report::fan(&fan));
    Ok(out)
}

fn recognize(f: &Fan) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    if !require_valid(f, &mut out, "") {
        return Ok(out);
    }
    match is_projective_space(f) {
        Some(w) => {
            if !w.verify(f) {
                out.alarm("projective-space witness fails verification");
            }
            out.set("projective_space", json!({"witness": report::matrix(&w.matrix)}));
        }
        None => out.set("projective_space", Value::Null),
    }
    match is_product(f) {
        Ok(Some(s)) => out.set(
            "product",
            json!({
                "first_rays": s.first_rays,
                "second_rays": s.second_rays,
                "first_basis": report::matrix(&s.first_basis),
                "second_basis": report::matrix(&s.second_basis),
                "first_fan": report::fan(&s.first_fan),
                "second_fan": report::fan(&s.second_fan),
            }),
        ),
        Ok(None) => out.set("product", Value::Null),
        Err(e) => {
            out.set("product", Value::Null);
            out.note(format!("product: {e}"));
        }
    }
    Ok(out)
}

fn resolve(f: &Fan) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    if !require_valid(f, &mut out, "") {
        return Ok(out);
    }
    let t = resolve_with_trace(f);
    out.set("fan", report::fan(&t.result));
    out.set("inserted", json!(t.inserted));
    let steps: Vec<Value> = t.multiplicities.iter().map(|m| report::ints(m)).collect();
    out.set("multiplicities", Value::Array(steps));
    out.set("smooth", t.result.is_smooth());
    if !t.result.is_smooth() {
        out.alarm("resolution output is not smooth");
    }
    if t.multiplicities.windows(2).any(|w| w[1] >= w[0]) {
        out.alarm("multiplicities did not decrease at every step");
    }
    Ok(out)
}

fn theorem1(m: &ToricMorphism) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    if !require_valid(m.source(), &mut out, "source ") || !require_valid(m.target(), &mut out, "target ") {
        return Ok(out);
    }
    match theorem1_toric_verify(m) {
        Ok(Theorem1Verdict::Confirmed(w)) => {
            out.set("verdict", "confirmed");
            out.set("witness", report::matrix(&w.matrix));
        }
        Ok(Theorem1Verdict::Refuted) => {
            out.set("verdict", "refuted");
            out.alarm("counterexample alarm: target is not a projective space");
        }
        Err(Error::Hypotheses(v)) => {
            out.set("verdict", "hypotheses violated");
            out.set("violations", json!(v));
            out.invalid("hypotheses violated");
        }
        Err(e) => out.invalid(e.to_string()),
    }
    Ok(out)
}

fn theorem2(f: &ToricMorphism, g: &ToricMorphism) -> Result<Outcome, String> {
    let mut out = Outcome::new();
    for (label, m) in [("first ", f), ("second ", g)] {
        if !require_valid(m.source(), &mut out, label) || !require_valid(m.target(), &mut out, label) {
            return Ok(out);
        }
    }
    let x = f.source();
    out.set("dim", x.dim());
    out.set("ray_count", x.num_rays());
    if let Ok(rho) = picard_rank(x) {
        out.set("picard_rank", rho);
    }
    match theorem2_toric_verify(x, f, g) {
        Ok(Theorem2Verdict::FiberProductConfirmed {
            to_base,
            fiber_product,
            isomorphism,
        }) => {
            out.set("verdict", "fiber-product confirmed");
            out.set("to_base", json!([report::matrix(&to_base.0), report::matrix(&to_base.1)]));
            out.set("fiber_product", report::fan(&fiber_product.fan));
            out.set("isomorphism", report::matrix(&isomorphism));
        }
        Ok(Theorem2Verdict::NoToricWitness(why)) => {
            out.set("verdict", "no toric witness found");
            out.alarm(why);
        }
        Err(Error::Hypotheses(v)) => {
            out.set("verdict", "hypotheses violated");
            out.set("violations", json!(v));
            out.invalid("hypotheses violated");
        }
        Err(e) => out.invalid(e.to_string()),
    }
    Ok(out)
}

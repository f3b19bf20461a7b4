//! Command-line front end. Every command is a thin wrapper around one or
//! two library calls; output goes to a string so tests can drive `run_with`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperring_core::constructions::{localize, marshall_quotient, quotient_by_ideal};
use hyperring_core::hull::hull;
use hyperring_core::morphism::find_isomorphism;
use hyperring_core::multiring::{classify, is_hyperring, validate_multiring};
use hyperring_core::presheaf::{build_presheaf, mono_failure, sheaf_failure};
use hyperring_core::realspec::{enumerate_sper, is_rrm, preorder_generated, q_construction, q_reduction};
use hyperring_core::spectra::{is_maximal, spec};
use hyperring_core::vonneumann::{geometric_hull, is_geometric, is_vnh};
use hyperring_core::{Budget, Error, Morphism, Multiring, Subset};

use crate::format::{emit, parse_definition, parse_tables, DefinitionError};
use crate::registry::{builtin, builtins, Instance};
use crate::report::{Status, SCHEMA};
use crate::theorems::{theorem, theorem_registry, verify, Theorem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "hyperring-lab",
    version,
    about = "Finite multirings: constructions, spectra, hulls and theorem checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search budget: morphism searches need |A|·|B| <= N².
    #[arg(long, global = true, env = "HYPERRING_LAB_BUDGET")]
    budget: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a definition and print its structure flags.
    Check { file: String },
    /// List the prime ideals.
    Spec { file: String },
    /// List the orders (morphisms into the sign hyperfield).
    Sper { file: String },
    /// Quotient by the ideal generated by the given elements.
    Quotient {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        ideal: Vec<String>,
    },
    /// Localize at a prime (by index in `spec`) or at the multiplicative set
    /// generated by the given elements.
    Localize(LocalizeArgs),
    /// Marshall quotient by the multiplicative set generated by the given
    /// elements.
    Marshall {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
    },
    /// Real reduction `Q_T(A)`; `T` defaults to the sums of squares.
    Qreal {
        file: String,
        #[arg(long, value_delimiter = ',')]
        preorder: Option<Vec<String>>,
    },
    /// The von Neumann hull `V(A)`.
    Hull { file: String },
    /// The geometric hull `A/ₘS_u` of a von Neumann hyperring.
    Geohull { file: String },
    /// Sections of the structural presheaf.
    Presheaf {
        file: String,
        #[arg(long)]
        sheaf_check: bool,
    },
    /// Search for an isomorphism.
    Iso { first: String, second: String },
    /// Run theorem checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct LocalizeArgs {
    file: String,
    #[arg(long, conflicts_with = "set", required_unless_present = "set")]
    at_prime: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "theorem", required_unless_present = "theorem")]
    all: bool,
    #[arg(long)]
    theorem: Option<String>,
    #[arg(long, conflicts_with = "instance", required_unless_present = "instance")]
    registry: Option<String>,
    /// A definition file or a builtin id.
    #[arg(long)]
    instance: Option<String>,
    /// Include wall times (makes the report non-reproducible).
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<DefinitionError> for Failure {
    fn from(e: DefinitionError) -> Self {
        match e {
            DefinitionError::Parse(_) => Failure::Usage(e.to_string()),
            DefinitionError::Validation { .. } => Failure::Other(e.to_string()),
        }
    }
}

/// Text and JSON renderings of one command's result.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

/// Loads a definition file, or a builtin id when no such file exists.
fn load(source: &str) -> Result<Instance, Failure> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
        let ring = parse_definition(&text)?;
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source).to_string();
        return Ok(Instance {
            id,
            ring: Arc::new(ring),
        });
    }
    match builtin(source)? {
        Some(i) => Ok(i),
        None => Err(Failure::Usage(format!("{source}: no such file or builtin instance"))),
    }
}

fn elements(a: &Multiring, names: &[String]) -> Result<Subset, Failure> {
    let mut s = a.empty_set();
    for n in names {
        let x = a
            .index_of(n.trim())
            .ok_or_else(|| Failure::Usage(format!("unknown element '{n}' in {}", a.name())))?;
        s.insert(x);
    }
    Ok(s)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn map_comment(label: &str, f: &Morphism) -> String {
    let (d, c) = (f.dom(), f.cod());
    let pairs: Vec<String> = d
        .elements()
        .map(|x| format!("{}->{}", d.elem_name(x), c.elem_name(f.apply(x))))
        .collect();
    format!("# {label}: {}\n", pairs.join(" "))
}

fn map_json(f: &Morphism) -> Value {
    let (d, c) = (f.dom(), f.cod());
    Value::Array(
        d.elements()
            .map(|x| json!([d.elem_name(x), c.elem_name(f.apply(x))]))
            .collect(),
    )
}

/// A construction result: its definition, preceded by the canonical map.
fn construction_output(label: &str, f: &Morphism) -> Output {
    let text = format!("{}{}", map_comment(label, f), emit(f.cod()));
    let json = json!({ "result": emit(f.cod()), "size": f.cod().n(), "map": map_json(f) });
    Output::ok(text, json)
}

fn check(source: &str) -> Result<Output, Failure> {
    let path = Path::new(source);
    let ring = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
        let (raw, report) = parse_tables(&text)?;
        if !report.is_ok() {
            let mut text = String::from("multiring=no\n");
            let mut list = Vec::new();
            for v in &report.violations {
                let names: Vec<&str> = v.witness.iter().map(|&i| raw.names[i].as_str()).collect();
                text.push_str(&format!("violation {}: ({}) {}\n", v.axiom, names.join(", "), v.detail));
                list.push(json!({ "axiom": v.axiom.to_string(), "witness": names, "detail": v.detail }));
            }
            return Ok(Output {
                text,
                json: json!({ "multiring": false, "violations": list }),
                code: EXIT_FAILS,
            });
        }
        let _ = validate_multiring(&raw)?;
        Arc::new(Multiring::from_raw(raw)?)
    } else {
        load(source)?.ring
    };
    let a = &ring;
    let hyper = is_hyperring(a);
    let c = classify(a);
    let vnh = hyper && is_vnh(a)?;
    let geometric = vnh && is_geometric(a)?;
    let rrm = is_rrm(a);
    let text = format!(
        "multiring=yes hyperring={} hyperfield={} rrm={} vnh={} geometric={}\n",
        yes(hyper),
        yes(c.hyperfield),
        yes(rrm),
        yes(vnh),
        yes(geometric)
    );
    let json = json!({
        "name": a.name(), "size": a.n(), "multiring": true, "hyperring": hyper,
        "multidomain": c.multidomain, "multifield": c.multifield, "hyperfield": c.hyperfield,
        "rrm": rrm, "vnh": vnh, "geometric": geometric,
    });
    Ok(Output::ok(text, json))
}

fn spec_cmd(a: &Arc<Multiring>) -> Result<Output, Failure> {
    let primes = spec(a)?;
    let mut text = String::new();
    let mut list = Vec::new();
    for (k, p) in primes.iter().enumerate() {
        let max = is_maximal(a, p);
        text.push_str(&format!(
            "p{k} = {}{}\n",
            a.show_set(p),
            if max { " maximal" } else { "" }
        ));
        let members: Vec<&str> = p.iter().map(|x| a.elem_name(x)).collect();
        list.push(json!({ "members": members, "maximal": max }));
    }
    if primes.is_empty() {
        text.push_str("empty spectrum\n");
    }
    Ok(Output::ok(text, json!({ "primes": list })))
}

fn sper_cmd(a: &Arc<Multiring>, budget: &Budget) -> Result<Output, Failure> {
    let points = enumerate_sper(a, None, budget)?;
    let mut text = String::new();
    let mut list = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let signs: Vec<String> = a
            .elements()
            .map(|x| format!("{}:{}", a.elem_name(x), p.sign(x)))
            .collect();
        text.push_str(&format!("s{k} {}\n", signs.join(" ")));
        let obj: serde_json::Map<String, Value> = a
            .elements()
            .map(|x| (a.elem_name(x).to_string(), json!(p.sign(x))))
            .collect();
        list.push(Value::Object(obj));
    }
    if points.is_empty() {
        text.push_str("empty real spectrum\n");
    }
    Ok(Output::ok(text, json!({ "orders": list })))
}

fn presheaf_cmd(a: &Arc<Multiring>, sheaf_check: bool, budget: &Budget) -> Result<Output, Failure> {
    let sheaf = build_presheaf(a)?;
    let mut text = String::new();
    let mut list = Vec::new();
    for s in sheaf.sections() {
        let open: Vec<String> = s.open.iter().map(|k| format!("p{k}")).collect();
        text.push_str(&format!(
            "D({}) = {{{}}}  sections: {} elements\n",
            a.elem_name(s.generator),
            open.join(","),
            s.ring.result().n()
        ));
        list.push(
            json!({ "generator": a.elem_name(s.generator), "open": s.open.to_vec(), "size": s.ring.result().n() }),
        );
    }
    let mut json = json!({ "sections": list });
    let mut code = EXIT_OK;
    if sheaf_check {
        let mono = mono_failure(&sheaf, budget)?;
        let glue = if mono.is_none() {
            sheaf_failure(&sheaf, budget)?
        } else {
            None
        };
        let failure = mono.clone().or(glue);
        text.push_str(&format!(
            "monopresheaf={} sheaf={}\n",
            yes(mono.is_none()),
            yes(failure.is_none())
        ));
        if let Some(f) = &failure {
            text.push_str(&format!("witness: {}\n", f.describe(&sheaf)));
            code = EXIT_FAILS;
        }
        json["monopresheaf"] = json!(mono.is_none());
        json["sheaf"] = json!(failure.is_none());
        if let Some(f) = &failure {
            json["witness"] = json!(f.describe(&sheaf));
        }
    }
    Ok(Output { text, json, code })
}

fn iso_cmd(a: &Arc<Multiring>, b: &Arc<Multiring>, budget: &Budget) -> Result<Output, Failure> {
    match find_isomorphism(a, b, budget)? {
        Some(f) => Ok(Output::ok(
            format!(
                "isomorphism {}\n",
                map_comment("map", &f).trim_start_matches("# map: ").trim_end()
            ),
            json!({ "isomorphic": true, "map": map_json(&f) }),
        )),
        None => Ok(Output {
            text: "no isomorphism\n".into(),
            json: json!({ "isomorphic": false }),
            code: EXIT_FAILS,
        }),
    }
}

fn verify_cmd(args: &VerifyArgs, budget: &Budget) -> Result<Output, Failure> {
    let theorems: Vec<&Theorem> = match &args.theorem {
        Some(id) => vec![theorem(id).ok_or_else(|| Failure::Usage(format!("unknown theorem '{id}'")))?],
        None => theorem_registry().iter().collect(),
    };
    let instances = match (&args.registry, &args.instance) {
        (Some(r), _) if r == "builtin" => builtins()?,
        (Some(r), _) => return Err(Failure::Usage(format!("unknown registry '{r}'"))),
        (None, Some(i)) => vec![load(i)?],
        (None, None) => return Err(Failure::Usage("need --registry or --instance".into())),
    };
    let report = verify(&theorems, &instances, budget, args.timings);
    let budget_hit = report
        .results
        .iter()
        .any(|r| matches!(&r.status, Status::Skipped { reason } if reason.starts_with("budget exceeded")));
    let code = if report.summary.fail > 0 {
        EXIT_FAILS
    } else if budget_hit {
        EXIT_BUDGET
    } else {
        EXIT_OK
    };
    let json = serde_json::to_value(&report).map_err(|e| Failure::Other(e.to_string()))?;
    Ok(Output {
        text: report.to_text(),
        json,
        code,
    })
}

fn dispatch(cli: &Cli, budget: &Budget) -> Result<Output, Failure> {
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Spec { file } => spec_cmd(&load(file)?.ring),
        Command::Sper { file } => sper_cmd(&load(file)?.ring, budget),
        Command::Quotient { file, ideal } => {
            let a = load(file)?.ring;
            let i = a.ideal_generated(&elements(&a, ideal)?);
            Ok(construction_output(
                "projection",
                quotient_by_ideal(&a, &i)?.canonical(),
            ))
        }
        Command::Localize(args) => {
            let a = load(&args.file)?.ring;
            let s = match (&args.at_prime, &args.set) {
                (Some(k), _) => {
                    let primes = spec(&a)?;
                    let p = primes
                        .get(*k)
                        .ok_or_else(|| Failure::Usage(format!("no prime p{k}; spec has {}", primes.len())))?;
                    p.complement()
                }
                (None, Some(set)) => a.multiplicative_closure(&elements(&a, set)?),
                (None, None) => return Err(Failure::Usage("need --at-prime or --set".into())),
            };
            Ok(construction_output("localization", localize(&a, &s)?.canonical()))
        }
        Command::Marshall { file, set } => {
            let a = load(file)?.ring;
            let s = a.multiplicative_closure(&elements(&a, set)?);
            Ok(construction_output(
                "projection",
                marshall_quotient(&a, &s)?.canonical(),
            ))
        }
        Command::Qreal { file, preorder } => {
            let a = load(file)?.ring;
            let q = match preorder {
                Some(xs) => q_construction(&a, &preorder_generated(&a, &elements(&a, xs)?), budget),
                None => q_reduction(&a, budget),
            };
            match q {
                Ok(q) => Ok(construction_output("projection", q.projection())),
                Err(e @ (Error::EmptyRealSpectrum | Error::ImproperPreorder(_))) => Ok(Output {
                    text: format!("{e}\n"),
                    json: json!({ "error": e.to_string() }),
                    code: EXIT_FAILS,
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Hull { file } => {
            let a = load(file)?.ring;
            Ok(construction_output("v", hull(&a, budget)?.canonical()))
        }
        Command::Geohull { file } => {
            let a = load(file)?.ring;
            Ok(construction_output("projection", geometric_hull(&a)?.canonical()))
        }
        Command::Presheaf { file, sheaf_check } => presheaf_cmd(&load(file)?.ring, *sheaf_check, budget),
        Command::Iso { first, second } => iso_cmd(&load(first)?.ring, &load(second)?.ring, budget),
        Command::Verify(args) => verify_cmd(args, budget),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Spec { .. } => "spec",
        Command::Sper { .. } => "sper",
        Command::Quotient { .. } => "quotient",
        Command::Localize(_) => "localize",
        Command::Marshall { .. } => "marshall",
        Command::Qreal { .. } => "qreal",
        Command::Hull { .. } => "hull",
        Command::Geohull { .. } => "geohull",
        Command::Presheaf { .. } => "presheaf",
        Command::Iso { .. } => "iso",
        Command::Verify(_) => "verify",
    }
}

/// Runs the CLI on `args` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    let budget = match cli.budget {
        Some(0) => {
            let _ = writeln!(stderr, "error: budget must be positive");
            return EXIT_USAGE;
        }
        Some(n) => Budget::with_search(n),
        None => Budget::default(),
    };
    let output = match dispatch(&cli, &budget) {
        Ok(o) => o,
        Err(f) => {
            let (msg, code) = match f {
                Failure::Usage(m) => (m, EXIT_USAGE),
                Failure::Budget(m) => (m, EXIT_BUDGET),
                Failure::Other(m) => (m, EXIT_FAILS),
            };
            let _ = writeln!(stderr, "error: {msg}");
            return code;
        }
    };
    let rendered = match cli.format {
        Format::Text => output.text,
        Format::Json => {
            let mut doc = json!({ "schema": SCHEMA, "command": command_name(&cli.command) });
            if let (Value::Object(d), Value::Object(body)) = (&mut doc, output.json) {
                for (k, v) in body {
                    d.entry(k).or_insert(v);
                }
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(rendered.as_bytes());
        }
    }
    output.code
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

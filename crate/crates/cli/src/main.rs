//! `sadic`: certificates and invariants of S-adic subshifts from the command
//! line. Every command prints one JSON report on standard output.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input
//! error, 3 inconclusive.

mod render;
mod reproduce;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use sadic::balance::{
    balance_dashboard, balance_dashboard_with, BalanceParams, BalanceVerdict, ClassHypotheses,
};
use sadic::dimgroup::{
    cone_membership, descriptor, image_subgroup_generators, infinitesimal_lattice_with_bound,
    soe_test, Descriptor, MeasureVector, Membership, ProbeParams, SoeVerdict,
};
use sadic::directive::{IntSequence, Primitivity};
use sadic::families::{self, FamilySpec};
use sadic::free_group::{free_basis_check, BasisVerdict};
use sadic::json::{
    descriptor_from_value, descriptor_to_value, sequence_from_value, sequence_to_value,
};
use sadic::language::build_language;
use sadic::measures::{ergodicity_probe, ProbeVerdict};
use sadic::numeric::parse_rational;
use sadic::returns::return_words;
use sadic::{certify, DirectiveSequence, LanguageTable, Word};

#[derive(Parser)]
#[command(
    name = "sadic",
    version,
    about = "Certificates and invariants of S-adic subshifts"
)]
struct Cli {
    /// Compact JSON on one line (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in family as JSON.
    Family {
        #[arg(long)]
        name: String,
        /// Sequence a_n for sec65: `geometric:BASE:SHIFT` (a_n = BASE^(n+SHIFT)) or `list:a1,a2,...`.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = 40)]
        horizon: usize,
        /// Period word for arnoux_rauzy.
        #[arg(long)]
        word: Option<String>,
        /// Alphabet size for arnoux_rauzy.
        #[arg(long)]
        d: Option<usize>,
        /// Period pairs for brun, e.g. `12,23,31`.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Primitivity, unimodularity and properness certificate.
    Certify {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// Factor complexity and dendric test.
    Language {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Write the factors of every length up to max-len, one per line.
        #[arg(long)]
        factors_out: Option<PathBuf>,
    },
    /// Whether every bispecial factor up to max-len has a tree as extension graph.
    Dendric {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Return words to a factor and the free-basis check.
    Returns {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 3)]
        stability: usize,
    },
    /// Letter-measure cones and the ergodicity probe.
    Measures {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value_t = 100)]
        depth: usize,
        #[arg(long, default_value = "1e-8")]
        eps: String,
    },
    /// Dimension-group descriptor and infinitesimal lattice.
    Dimgroup {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value_t = 400)]
        depth: usize,
        #[arg(long, default_value = "1e-30")]
        eps: String,
        /// Coefficient bound of the integer-relation search.
        #[arg(long, default_value = "1000000")]
        bound: String,
        /// Group element to place against the positive cone, e.g. `1,-1`.
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
    },
    /// Search a strong-orbit-equivalence witness between two descriptors.
    Soe {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 400)]
        depth: usize,
        #[arg(long, default_value = "1e-30")]
        eps: String,
        /// Require exact measures to lie in this field.
        #[arg(long)]
        exact_field: Option<String>,
    },
    /// Discrepancy profiles and balance verdicts.
    Balance {
        #[arg(long)]
        ds: String,
        #[arg(long, default_value_t = 256)]
        max_len: usize,
        /// Comma-separated factors whose profiles are reported.
        #[arg(long)]
        factors: Option<String>,
        #[arg(long)]
        factor_max_len: Option<usize>,
    },
    /// Re-run one of the paper's worked examples and check its claim.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    #[value(name = "fig1")]
    Fig1,
    #[value(name = "ex6.3")]
    Ex63,
    #[value(name = "ex6.4")]
    Ex64,
    #[value(name = "ex6.5")]
    Ex65,
    #[value(name = "sec5")]
    Sec5,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "input_error",
            message: message.into(),
        }
    }
}

impl From<sadic::Error> for Failure {
    fn from(e: sadic::Error) -> Self {
        match e {
            sadic::Error::Inconclusive(_) => Failure {
                code: 3,
                kind: "inconclusive",
                message: e.to_string(),
            },
            _ => Failure {
                code: 2,
                kind: "input_error",
                message: e.to_string(),
            },
        }
    }
}

type Outcome = Result<(Map<String, Value>, u8), Failure>;

/// Something named by `--ds`, `--left` or `--right`.
enum Subject {
    Sequence(DirectiveSequence),
    /// The three-interval exchange of the infinitesimal example, known
    /// through its coding and exact lengths.
    Ex63,
    Descriptor(Descriptor),
}

struct Input {
    subject: Subject,
    meta: Value,
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn builtin(name: &str) -> Result<Subject, Failure> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    Ok(match (base, arg) {
        ("fibonacci", None) => Subject::Sequence(families::fibonacci()),
        ("tribonacci", None) => Subject::Sequence(families::tribonacci()),
        ("thue_morse", None) => Subject::Sequence(families::thue_morse()),
        ("thue_morse_conjugate", None) => Subject::Sequence(families::thue_morse_conjugate()),
        ("sec65", None) => Subject::Sequence(families::sec65_default()),
        ("arnoux_rauzy", Some(w)) => Subject::Sequence(families::arnoux_rauzy(w, None)?),
        ("brun", Some(p)) => Subject::Sequence(families::brun(p)?),
        ("iet3_ex63", None) => Subject::Ex63,
        ("iet64", None) => Subject::Descriptor(families::iet64_descriptor(&ProbeParams::default())?),
        _ => {
            return Err(Failure::input(format!(
                "{name:?} is neither a readable file nor a built-in (fibonacci, tribonacci, thue_morse, \
                 thue_morse_conjugate, sec65, arnoux_rauzy:WORD, brun:PAIRS, iet3_ex63, iet64)"
            )))
        }
    })
}

fn canonical_bytes(subject: &Subject) -> Vec<u8> {
    let v = match subject {
        Subject::Sequence(ds) => sequence_to_value(ds),
        Subject::Ex63 => descriptor_to_value(&families::ex63_descriptor()),
        Subject::Descriptor(d) => descriptor_to_value(d),
    };
    serde_json::to_vec(&v).expect("serializable")
}

fn resolve(spec: &str) -> Result<Input, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let bytes =
            fs::read(path).map_err(|e| Failure::input(format!("cannot read {spec}: {e}")))?;
        let v: Value = serde_json::from_slice(&bytes)
            .map_err(|e| Failure::input(format!("{spec} is not valid JSON: {e}")))?;
        let subject = if v.get("kind").and_then(Value::as_str) == Some("descriptor") {
            Subject::Descriptor(descriptor_from_value(&v)?)
        } else {
            Subject::Sequence(sequence_from_value(v)?)
        };
        return Ok(Input {
            subject,
            meta: json!({"name": spec, "source": "file", "sha256": sha256(&bytes)}),
        });
    }
    let subject = builtin(spec)?;
    let digest = sha256(&canonical_bytes(&subject));
    Ok(Input {
        subject,
        meta: json!({"name": spec, "source": "builtin", "sha256": digest}),
    })
}

fn sequence_of(input: &Input, what: &str) -> Result<DirectiveSequence, Failure> {
    match &input.subject {
        Subject::Sequence(ds) => Ok(ds.clone()),
        _ => Err(Failure::input(format!("{what} needs a directive sequence"))),
    }
}

fn descriptor_of(input: &Input, params: &ProbeParams) -> Result<Descriptor, Failure> {
    Ok(match &input.subject {
        Subject::Sequence(ds) => descriptor(ds, params)?,
        Subject::Ex63 => families::ex63_descriptor(),
        Subject::Descriptor(d) => d.clone(),
    })
}

/// Length of the coding read for the exchange's language.
fn ex63_coding_len(max_len: usize) -> usize {
    50_000 + 400 * max_len
}

fn language_of(input: &Input, max_len: usize) -> Result<LanguageTable, Failure> {
    match &input.subject {
        Subject::Sequence(ds) => Ok(build_language(ds, max_len)?),
        Subject::Ex63 => Ok(families::ex63_language(ex63_coding_len(max_len), max_len)?),
        Subject::Descriptor(_) => Err(Failure::input(
            "a descriptor has no language; pass a directive sequence",
        )),
    }
}

fn probe_params(depth: usize, eps: &str) -> Result<ProbeParams, Failure> {
    Ok(ProbeParams {
        max_depth: depth,
        eps: parse_rational(eps)?,
    })
}

fn parse_words(list: &str, lang: &LanguageTable) -> Result<Vec<Word>, Failure> {
    list.split(',')
        .filter(|s| !s.is_empty())
        .map(|w| Ok(lang.alphabet().parse(w)?))
        .collect()
}

fn parse_int_sequence(spec: &str) -> Result<IntSequence, Failure> {
    let bad = || {
        Failure::input(format!(
            "--a {spec:?}: expected geometric:BASE:SHIFT or list:a1,a2,..."
        ))
    };
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "geometric" => {
            let (b, s) = rest.split_once(':').ok_or_else(bad)?;
            Ok(IntSequence::Geometric {
                base: b.parse().map_err(|_| bad())?,
                shift: s.parse().map_err(|_| bad())?,
            })
        }
        "list" => Ok(IntSequence::List(
            rest.split(',')
                .map(|x| x.trim().parse::<BigInt>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?,
        )),
        _ => Err(bad()),
    }
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    }
}

fn family(
    name: &str,
    a: Option<&str>,
    horizon: usize,
    word: Option<&str>,
    d: Option<usize>,
    pairs: Option<&str>,
    out: Option<&Path>,
) -> Outcome {
    let need = |x: Option<&str>, flag: &str| {
        x.map(str::to_owned)
            .ok_or_else(|| Failure::input(format!("{name} needs {flag}")))
    };
    let mut note = Value::Null;
    let object = match name {
        "iet3_ex63" => descriptor_to_value(&families::ex63_descriptor()),
        "iet64" => descriptor_to_value(&families::iet64_descriptor(&ProbeParams::default())?),
        _ => {
            let spec = match name {
                "fibonacci" => FamilySpec::Fibonacci,
                "tribonacci" => FamilySpec::Tribonacci,
                "thue_morse" => FamilySpec::ThueMorse,
                "thue_morse_conjugate" => FamilySpec::ThueMorseConjugate,
                "arnoux_rauzy" => FamilySpec::ArnouxRauzy {
                    word: need(word, "--word")?,
                    d,
                },
                "brun" => FamilySpec::Brun {
                    pairs: need(pairs, "--pairs")?,
                },
                "sec65" => {
                    let a = match a {
                        Some(s) => parse_int_sequence(s)?,
                        None => {
                            note =
                                json!("a_n = 2^(n+1) (default instance; the sum of 1/a_n is 1/2)");
                            IntSequence::Geometric { base: 2, shift: 1 }
                        }
                    };
                    FamilySpec::Sec65 { a, horizon }
                }
                _ => {
                    return Err(Failure::input(format!(
                        "unknown family {name:?}; known: {}, iet64",
                        families::BUILTIN_NAMES.join(", ")
                    )))
                }
            };
            sequence_to_value(&families::make(&spec)?)
        }
    };
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(&object).expect("serializable");
        text.push('\n');
        fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok((
        obj(json!({
            "family": name,
            "object": object,
            "written": out.map(|p| p.display().to_string()),
            "note": note,
        })),
        0,
    ))
}

fn certify_cmd(input: &Input, depth: usize) -> Outcome {
    let ds = sequence_of(input, "certify")?;
    let cert = certify(&ds, depth)?;
    let code = if cert.is_primitive_unimodular_properizable() {
        0
    } else if matches!(cert.primitive, Primitivity::Inconclusive { .. }) {
        3
    } else {
        1
    };
    Ok((obj(render::certificate(ds.alphabet(), &cert)), code))
}

fn language_cmd(input: &Input, max_len: usize, factors_out: Option<&Path>) -> Outcome {
    let lang = language_of(input, max_len)?;
    let complexity = (0..=max_len)
        .map(|n| lang.complexity(n))
        .collect::<Result<Vec<_>, _>>()?;
    let dendric = if max_len >= 2 {
        Some(render::dendric(
            lang.alphabet(),
            &lang.is_dendric(max_len - 2)?,
        ))
    } else {
        None
    };
    if let Some(path) = factors_out {
        let mut text = String::new();
        for n in 1..=max_len {
            for w in lang.factors(n)? {
                text.push_str(&lang.alphabet().render(&w));
                text.push('\n');
            }
        }
        fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok((
        obj(json!({
            "max_len": max_len,
            "complexity": complexity,
            "dendric": dendric,
            "generation_depth": lang.generation_depth(),
            "factors_written": factors_out.map(|p| p.display().to_string()),
        })),
        0,
    ))
}

fn dendric_cmd(input: &Input, max_len: usize) -> Outcome {
    let lang = language_of(input, max_len + 2)?;
    let v = lang.is_dendric(max_len)?;
    let code = if v.dendric { 0 } else { 1 };
    Ok((obj(render::dendric(lang.alphabet(), &v)), code))
}

fn returns_cmd(input: &Input, word: &str, stability: usize) -> Outcome {
    let ds = sequence_of(input, "returns")?;
    let w = ds.alphabet().parse(word)?;
    let r = return_words(&ds, w.as_slice(), stability)?;
    let basis = free_basis_check(&r.returns, ds.d());
    let code = match basis.verdict {
        BasisVerdict::Basis => 0,
        BasisVerdict::NotBasis => 1,
        BasisVerdict::Inconclusive => 3,
    };
    Ok((obj(render::returns(ds.alphabet(), &r, &basis)), code))
}

fn measures_cmd(input: &Input, depth: usize, eps: &str) -> Outcome {
    let ds = sequence_of(input, "measures")?;
    let report = ergodicity_probe(&ds, depth, &parse_rational(eps)?)?;
    let code = if matches!(report.verdict, ProbeVerdict::Inconclusive { .. }) {
        3
    } else {
        0
    };
    Ok((obj(render::probe(&report)), code))
}

fn dimgroup_cmd(
    input: &Input,
    params: &ProbeParams,
    bound: &str,
    element: Option<&str>,
) -> Outcome {
    let desc = descriptor_of(input, params)?;
    let bound: BigInt = bound
        .parse()
        .map_err(|_| Failure::input(format!("--bound {bound:?} is not an integer")))?;
    let mut code = 0;
    let lattice = match infinitesimal_lattice_with_bound(&desc, &bound) {
        Ok(l) => render::lattice(&l),
        Err(e @ sadic::Error::Inconclusive(_)) => {
            code = 3;
            json!({"inconclusive": e.to_string()})
        }
        Err(e) => return Err(e.into()),
    };
    let generators = image_subgroup_generators(&desc);
    let membership = match element {
        None => Value::Null,
        Some(s) => {
            let x: Vec<BigInt> = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Failure::input(format!("--element {s:?}: not integers")))
                })
                .collect::<Result<_, _>>()?;
            let m = cone_membership(&desc, &x)?;
            json!({
                "element": render::ints(&x),
                "verdict": match m {
                    Membership::Positive => "positive",
                    Membership::Zero => "zero",
                    Membership::NegativeOrMixed => "negative_or_mixed",
                    Membership::Undecidable => "undecidable",
                },
            })
        }
    };
    Ok((
        obj(json!({
            "descriptor": descriptor_to_value(&desc),
            "unit": render::ints(&desc.unit()),
            "uniquely_ergodic": desc.is_uniquely_ergodic(),
            "infinitesimals": lattice,
            "image_generators": {
                "duplicates": generators.duplicates,
                "note": generators.note,
            },
            "membership": membership,
        })),
        code,
    ))
}

fn check_field(desc: &Descriptor, field: &str) -> Result<(), Failure> {
    let radicand: u64 = field
        .strip_prefix("sqrt")
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Failure::input(format!("--exact-field {field:?}: expected sqrtD")))?;
    for m in &desc.extreme_measures {
        match m {
            MeasureVector::Quadratic(v) if v.iter().any(|q| q.radicand() != radicand) => {
                return Err(Failure::input(format!(
                    "measures of {:?} do not lie in Q(sqrt {radicand})",
                    desc.provenance
                )))
            }
            MeasureVector::Boxed(_) => {
                return Err(Failure::input(format!(
                    "measures of {:?} are only known by enclosures, not in Q(sqrt {radicand})",
                    desc.provenance
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

fn soe_cmd(
    left: &Input,
    right: &Input,
    bound: i64,
    params: &ProbeParams,
    field: Option<&str>,
) -> Outcome {
    let (l, r) = (descriptor_of(left, params)?, descriptor_of(right, params)?);
    if let Some(f) = field {
        check_field(&l, f)?;
        check_field(&r, f)?;
    }
    let v = soe_test(&l, &r, bound)?;
    let code = match v {
        SoeVerdict::Witness { .. } => 0,
        SoeVerdict::NotSoe { .. } => 1,
        SoeVerdict::NoWitnessWithinBound { .. } => 3,
    };
    Ok((
        obj(json!({
            "bound": bound,
            "verdict": render::soe(&v),
            "left": descriptor_to_value(&l),
            "right": descriptor_to_value(&r),
        })),
        code,
    ))
}

fn balance_cmd(
    input: &Input,
    max_len: usize,
    factors: Option<&str>,
    factor_max_len: Option<usize>,
) -> Outcome {
    let mut params = BalanceParams {
        up_to: max_len,
        factor_up_to: factor_max_len,
        ..BalanceParams::default()
    };
    let (report, alphabet) = match &input.subject {
        Subject::Sequence(ds) => {
            if let Some(list) = factors {
                let words = list
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|w| Ok(ds.alphabet().parse(w)?))
                    .collect::<Result<Vec<_>, Failure>>()?;
                params.factors = Some(words);
            }
            (balance_dashboard(ds, &params)?, ds.alphabet().clone())
        }
        Subject::Ex63 => {
            let need = max_len.max(factor_max_len.unwrap_or(0)).max(3);
            let lang = language_of(input, need)?;
            if let Some(list) = factors {
                params.factors = Some(parse_words(list, &lang)?);
            }
            let hyp = ClassHypotheses::from_dendric(&lang, (need - 2).min(20))?;
            let desc = families::ex63_descriptor();
            (
                balance_dashboard_with(&lang, Some(&desc), hyp, &params)?,
                lang.alphabet().clone(),
            )
        }
        Subject::Descriptor(_) => {
            return Err(Failure::input(
                "balance needs a directive sequence or iet3_ex63",
            ))
        }
    };
    let code = match report.letter_verdict {
        BalanceVerdict::EmpiricallyBalanced { .. } => 0,
        BalanceVerdict::NotBalanced { .. } => 1,
        BalanceVerdict::Inconclusive { .. } => 3,
    };
    Ok((obj(render::balance(&alphabet, &report)), code))
}

fn run(cli: &Cli) -> (Outcome, Vec<Value>) {
    let mut inputs = Vec::new();
    let mut load = |spec: &str| -> Result<Input, Failure> {
        let i = resolve(spec)?;
        inputs.push(i.meta.clone());
        Ok(i)
    };
    let outcome = (|| match &cli.command {
        Command::Family {
            name,
            a,
            horizon,
            word,
            d,
            pairs,
            out,
        } => family(
            name,
            a.as_deref(),
            *horizon,
            word.as_deref(),
            *d,
            pairs.as_deref(),
            out.as_deref(),
        ),
        Command::Certify { ds, depth } => certify_cmd(&load(ds)?, *depth),
        Command::Language {
            ds,
            max_len,
            factors_out,
        } => language_cmd(&load(ds)?, *max_len, factors_out.as_deref()),
        Command::Dendric { ds, max_len } => dendric_cmd(&load(ds)?, *max_len),
        Command::Returns {
            ds,
            word,
            stability,
        } => returns_cmd(&load(ds)?, word, *stability),
        Command::Measures { ds, depth, eps } => measures_cmd(&load(ds)?, *depth, eps),
        Command::Dimgroup {
            ds,
            depth,
            eps,
            bound,
            element,
        } => {
            let input = load(ds)?;
            dimgroup_cmd(
                &input,
                &probe_params(*depth, eps)?,
                bound,
                element.as_deref(),
            )
        }
        Command::Soe {
            left,
            right,
            bound,
            depth,
            eps,
            exact_field,
        } => {
            let (l, r) = (load(left)?, load(right)?);
            soe_cmd(
                &l,
                &r,
                *bound,
                &probe_params(*depth, eps)?,
                exact_field.as_deref(),
            )
        }
        Command::Balance {
            ds,
            max_len,
            factors,
            factor_max_len,
        } => balance_cmd(&load(ds)?, *max_len, factors.as_deref(), *factor_max_len),
        Command::Reproduce { target } => {
            let (v, ok) = match target {
                Target::Fig1 => reproduce::fig1()?,
                Target::Ex63 => reproduce::ex63()?,
                Target::Ex64 => reproduce::ex64()?,
                Target::Ex65 => reproduce::ex65()?,
                Target::Sec5 => reproduce::sec5()?,
            };
            let mut m = obj(v);
            m.insert("claim_holds".into(), json!(ok));
            Ok((m, if ok { 0 } else { 1 }))
        }
    })();
    (outcome, inputs)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SADIC_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::input(format!("SADIC_THREADS={v:?} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::input(format!("cannot configure threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (outcome, inputs) = match configure_threads() {
        Ok(()) => run(&cli),
        Err(f) => (Err(f), Vec::new()),
    };
    let (mut body, code) = match outcome {
        Ok((m, code)) => (m, code),
        Err(f) => {
            eprintln!("sadic: {}", f.message);
            let mut m = Map::new();
            m.insert(
                "error".into(),
                json!({"kind": f.kind, "message": f.message}),
            );
            (m, f.code)
        }
    };
    body.insert(
        "meta".into(),
        json!({
            "tool": "sadic",
            "version": env!("CARGO_PKG_VERSION"),
            "command": argv,
            "inputs": inputs,
            "exit_code": code,
            "determinism": "no randomness is used; output does not depend on SADIC_THREADS",
        }),
    );
    let body = Value::Object(body);
    let text = if cli.pretty {
        serde_json::to_string_pretty(&body)
    } else {
        serde_json::to_string(&body)
    };
    // A closed pipe downstream is not an error of the command.
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("serializable"));
    ExitCode::from(code)
}

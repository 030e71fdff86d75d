use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cgcert_core::colored::hopf_report;
use cgcert_core::cover::{rescaling_classes, Character, CoverPresentation};
use cgcert_core::dataset::load_paper_dataset;
use cgcert_core::gilmer::{
    certify_genus_lower_bound, check_certificate, Caps, GenusCertificate, DEFAULT_SUBGROUP_CAP,
};
use cgcert_core::infection::InfectionConfig;
use cgcert_core::knot::{
    alexander_polynomial, parse_knot_expr_with, seifert_matrix, signature_of_expr, unit_circle_root_count,
    FsResolver, KnotExpr, RationalAngle, SeifertKnot,
};
use cgcert_core::linalg::{smith_normal_form, IntMatrix, DEFAULT_ENUMERATION_CAP};
use cgcert_core::{bigjson, selftest, Error};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "cgcert",
    version,
    about = "Exact knot invariants and Casson-Gordon 4-genus certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Largest number of characters to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Largest number of subgroups to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBGROUP_CAP)]
    subgroup_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix.
    Snf { file: PathBuf },
    /// First homology of the double branched cover of a Seifert matrix.
    H1 { file: String },
    /// Alexander polynomial and its roots on the unit circle.
    Alex { knot: String },
    /// Levine-Tristram signature at exp(2 pi i j/n).
    Sig {
        knot: String,
        #[arg(long, value_name = "j/n")]
        at: RationalAngle,
    },
    /// Characters of the double branched cover to Z/q.
    Chars {
        file: String,
        #[arg(long = "mod", value_name = "q")]
        modulus: u64,
        /// Restrict to characters satisfying the site conditions of CONFIG.
        #[arg(long, value_name = "CONFIG")]
        small: Option<PathBuf>,
    },
    /// Signature of the generalized Hopf link L_m.
    HopfSig {
        #[arg(long)]
        m: u64,
    },
    /// Certify g4 >= genus + 1 for an infected knot or a connected sum of copies.
    Certify {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long, default_value_t = 1)]
        genus: u64,
        /// Re-validate an existing certificate instead of building one.
        #[arg(long, value_name = "CERT")]
        check: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    Selftest,
}

struct Report {
    value: Value,
    code: u8,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = Caps {
        characters: cli.cap,
        subgroups: cli.subgroup_cap,
    };
    let report = match run(&cli.command, caps) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::CapExceeded { .. } => 3,
                _ => 2,
            });
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&report.value)
    } else {
        serde_json::to_string(&report.value)
    }
    .expect("JSON values always serialize")
        + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.code)
}

fn run(cmd: &Command, caps: Caps) -> cgcert_core::Result<Report> {
    match cmd {
        Command::Snf { file } => snf(file),
        Command::H1 { file } => {
            let cover = load_cover(file)?;
            Ok(Report::ok(json!({
                "relation_matrix": cover.relation_matrix().to_json_value()["rows"],
                "invariant_factors": big_list(cover.invariant_factors()),
                "order": bigjson::to_value(cover.order()),
            })))
        }
        Command::Alex { knot } => {
            let k = load_knot(knot)?;
            let delta = alexander_polynomial(&k);
            Ok(Report::ok(json!({
                "polynomial": delta.to_string(),
                "coefficients": big_list(delta.coeffs()),
                "unit_circle_roots": unit_circle_root_count(&delta)?,
            })))
        }
        Command::Sig { knot, at } => {
            let e = knot_expr(knot)?;
            Ok(Report::ok(json!({
                "knot": e.to_string(),
                "at": at,
                "signature": signature_of_expr(&e, *at)?,
            })))
        }
        Command::Chars { file, modulus, small } => chars(file, *modulus, small.as_deref(), caps),
        Command::HopfSig { m } => Ok(Report::ok(serde_json::to_value(hopf_report(*m)?)?)),
        Command::Certify {
            config,
            copies,
            genus,
            check,
        } => {
            let cfg = InfectionConfig::load(config)?;
            match check {
                Some(path) => check_cert(&cfg, path),
                None => {
                    let cert = certify_genus_lower_bound(&cfg, *copies, *genus, caps)?;
                    let code = if cert.is_certified() { 0 } else { 1 };
                    Ok(Report {
                        value: serde_json::to_value(&cert)?,
                        code,
                    })
                }
            }
        }
        Command::Selftest => {
            let outcomes = selftest::run_all();
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let checks: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({"id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail}))
                .collect();
            Ok(Report {
                value: json!({"checks": checks, "passed": passed}),
                code: if passed { 0 } else { 1 },
            })
        }
    }
}

fn big_list<T: std::borrow::Borrow<num_bigint::BigInt>>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| bigjson::to_value(x.borrow())).collect())
}

fn snf(file: &Path) -> cgcert_core::Result<Report> {
    let m = IntMatrix::load(file)?;
    let r = smith_normal_form(&m);
    Ok(Report::ok(json!({
        "diagonal": big_list(&r.diagonal()),
        "invariant_factors": big_list(&r.invariant_factors()),
        "u": r.u.to_json_value()["rows"],
        "v": r.v.to_json_value()["rows"],
    })))
}

/// `paper` or a Seifert matrix file.
fn load_seifert(arg: &str) -> cgcert_core::Result<SeifertKnot> {
    if arg == "paper" {
        return Ok(load_paper_dataset()?.seifert);
    }
    SeifertKnot::new(IntMatrix::load(arg)?)
}

fn load_cover(arg: &str) -> cgcert_core::Result<CoverPresentation> {
    CoverPresentation::from_seifert(&load_seifert(arg)?)
}

fn knot_expr(arg: &str) -> cgcert_core::Result<KnotExpr> {
    if arg == "paper" || Path::new(arg).is_file() {
        return Ok(KnotExpr::Literal(load_seifert(arg)?));
    }
    parse_knot_expr_with(arg, &FsResolver::new("."))
}

fn load_knot(arg: &str) -> cgcert_core::Result<SeifertKnot> {
    match knot_expr(arg)? {
        KnotExpr::Literal(k) => Ok(k),
        e => seifert_matrix(&e),
    }
}

fn character_values(chars: &[Character]) -> Value {
    Value::Array(chars.iter().map(|c| json!(c.values())).collect())
}

fn chars(file: &str, q: u64, small: Option<&Path>, caps: Caps) -> cgcert_core::Result<Report> {
    let cover = load_cover(file)?;
    let count = cover.character_count(q)?;
    let mut out = json!({
        "modulus": q,
        "count": bigjson::to_value(&count.into()),
        "invariant_factors": big_list(cover.invariant_factors()),
    });
    match small {
        None => {
            out["characters"] = character_values(&cover.enumerate_characters(q, caps.characters)?);
        }
        Some(path) => {
            let cfg = InfectionConfig::load(path)?;
            if cfg.base != cover {
                return Err(Error::invalid("the configuration is for a different base knot"));
            }
            let cfg = InfectionConfig::new(cfg.base, cfg.sites, q, None)?;
            let set = cfg.small_character_set(caps.characters)?;
            let classes: Vec<Value> = rescaling_classes(&set)?
                .iter()
                .map(|c| character_values(c))
                .collect();
            out["small_set"] = character_values(&set);
            out["small_set_size"] = json!(set.len());
            out["surjective"] = json!(set.iter().filter(|c| c.is_surjective()).count());
            out["rescaling_classes"] = Value::Array(classes);
        }
    }
    Ok(Report::ok(out))
}

fn check_cert(cfg: &InfectionConfig, path: &Path) -> cgcert_core::Result<Report> {
    let text = fs::read_to_string(path)?;
    let cert: GenusCertificate = serde_json::from_str(&text)?;
    let problems = check_certificate(cfg, &cert)?;
    let valid = problems.is_empty();
    let code = if valid && cert.is_certified() { 0 } else { 1 };
    Ok(Report {
        value: json!({
            "valid": valid,
            "certified": cert.is_certified(),
            "conclusion": cert.conclusion,
            "problems": problems,
        }),
        code,
    })
}

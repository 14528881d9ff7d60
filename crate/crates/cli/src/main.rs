//! `cremona`: build and check chains of Cremona transformations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cremona::certificate::{from_doc, linear_system, to_doc, CertificateDoc, InputDoc};
use cremona::chain::{run_chain, verify_certificate};
use cremona::config::{RunConfig, DEFAULT_Q2_RETRIES, DEFAULT_TRIALS};
use cremona::grammar::format_poly;
use cremona::obstruction::{check_obstruction, gen_nodal_curve, DivisorialInput, Singularity};
use cremona::sample::seeded;
use cremona::{Error, Field, FieldSpec, PrimeField, Rationals, DEFAULT_PRIME};

#[derive(Parser)]
#[command(name = "cremona", version, about = "Cremona equivalence of birational embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Connect φ_L to φ_G by a chain of Cremona transformations.
    Equivalence(ChainArgs),
    /// Same as `equivalence` with G = {s0, ..., sr}.
    Linearize(ChainArgs),
    /// Re-check a certificate with fresh randomness.
    Verify(VerifyArgs),
    /// Canonicity test for a hypersurface with ordinary singularities.
    Obstruct(ObstructArgs),
    /// Print input documents for built-in fixtures.
    Examples {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = cremona::bimonoid::DEFAULT_K_MAX)]
    k_max: u32,
    #[arg(long, default_value_t = DEFAULT_Q2_RETRIES)]
    q2_retries: usize,
    #[arg(long, default_value = "certificate.json")]
    output: PathBuf,
    /// Log per-step progress to stderr.
    #[arg(short, long)]
    verbose: bool,
    /// Run every step even when A_i already induces the target map.
    #[arg(long)]
    no_shortcut: bool,
    /// Refuse inputs on which the injectivity heuristic finds a collision.
    #[arg(long)]
    require_injectivity_heuristic: bool,
    /// Default prime when the input does not name a field.
    #[arg(long, env = "CREMONA_PRIME", default_value_t = DEFAULT_PRIME)]
    prime: u64,
}

#[derive(Args)]
struct VerifyArgs {
    cert: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Log every check to stderr.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct ObstructArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// Multiplicities of the singular points.
    #[arg(long, value_delimiter = ',')]
    mults: Vec<u32>,
    /// All listed singularities are ordinary.
    #[arg(long)]
    ordinary: bool,
}

#[derive(Subcommand)]
enum Example {
    /// Rational plane curve of degree a+1 with nodes, from a (1,a) curve on a quadric.
    NodalCurve {
        #[arg(long, default_value_t = 5)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "CREMONA_PRIME", default_value_t = DEFAULT_PRIME)]
        prime: u64,
    },
    /// Twisted cubic against a line in P^3.
    TwistedCubic,
    /// Projected Veronese surface against a plane in P^4.
    Veronese,
}

// a closed pipe downstream is not an error worth a panic
fn emit(report: &Value) {
    let text = serde_json::to_string_pretty(report).expect("json");
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Equivalence(a) => chain_command(&a, false),
        Command::Linearize(a) => chain_command(&a, true),
        Command::Verify(a) => verify_command(&a),
        Command::Obstruct(a) => obstruct_command(&a),
        Command::Examples { which } => examples_command(which),
    };
    match outcome {
        Ok((report, code)) => {
            emit(&report);
            ExitCode::from(code)
        }
        Err((e, extra)) => {
            let mut report = json!({
                "status": "error",
                "exit_code": e.exit_code(),
                "error": e.to_string(),
            });
            if let Value::Object(map) = extra {
                report.as_object_mut().unwrap().extend(map);
            }
            eprintln!("cremona: {e}");
            emit(&report);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

type Outcome = Result<(Value, u8), (Error, Value)>;

fn bare(e: Error) -> (Error, Value) {
    (e, Value::Null)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn chain_command(args: &ChainArgs, linearize: bool) -> Outcome {
    let doc = InputDoc::from_json(&read(&args.input).map_err(bare)?).map_err(bare)?;
    let spec = doc.field.unwrap_or(FieldSpec::Prime(args.prime));
    match spec {
        FieldSpec::Prime(p) => chain_in(&PrimeField::new(p).map_err(bare)?, &doc, args, linearize),
        FieldSpec::Rationals => chain_in(&Rationals, &doc, args, linearize),
    }
}

fn chain_in<F: Field>(field: &F, doc: &InputDoc, args: &ChainArgs, linearize: bool) -> Outcome {
    let (l, g) = doc.systems(field).map_err(bare)?;
    let g = if linearize {
        linear_system(field, l.param_vars() - 1)
    } else {
        g.ok_or_else(|| bare(Error::Parse("input has no `G`; use `linearize` or add one".into())))?
    };
    let config = RunConfig {
        seed: args.seed,
        trials: args.trials,
        k_max: args.k_max,
        q2_retries: args.q2_retries,
        early_termination: !args.no_shortcut,
        ..RunConfig::default()
    };
    let vars = doc.vars().map_err(bare)?;
    match run_chain(field, l, g, &config) {
        Ok(cert) => {
            let inj = &cert.injectivity;
            if args.require_injectivity_heuristic && (inj.l_collision || inj.g_collision) {
                return Err(bare(Error::InvalidInput(
                    "injectivity heuristic found a collision; input is not birational onto its image".into(),
                )));
            }
            let text = to_doc(field, &cert, &vars).to_json();
            write(&args.output, &text).map_err(bare)?;
            let e2e = cert.end_to_end.as_ref().expect("complete run");
            if args.verbose {
                for s in &cert.steps {
                    eprintln!(
                        "step {}: k = {}, q2 attempts {}, conjugation {}/{}",
                        s.index,
                        s.map.surface().k(),
                        s.transcript.q2_attempts,
                        s.transcript.conjugation_trials,
                        args.trials
                    );
                }
                if let Some(i) = cert.shortcut {
                    eprintln!("A_{i} already induces the target map");
                }
                eprintln!("end to end: {}/{} forward, {}/{} backward", e2e.forward_passes, e2e.trials, e2e.backward_passes, e2e.trials);
            }
            let steps: Vec<Value> = cert
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "i": s.index,
                        "k": s.map.surface().k(),
                        "q2_attempts": s.transcript.q2_attempts,
                        "conjugation_trials": s.transcript.conjugation_trials,
                        "roundtrip_trials": s.transcript.roundtrip.trials,
                    })
                })
                .collect();
            Ok((
                json!({
                    "status": "ok",
                    "field": field.spec().to_string(),
                    "r": cert.input.r,
                    "n": cert.input.n,
                    "steps": steps,
                    "shortcut": cert.shortcut,
                    "end_to_end": {
                        "trials": e2e.trials,
                        "forward_passes": e2e.forward_passes,
                        "backward_passes": e2e.backward_passes,
                        "failure_log2": e2e.failure_log2,
                    },
                    "injectivity": {"l_collision": inj.l_collision, "g_collision": inj.g_collision},
                    "certificate": args.output.display().to_string(),
                }),
                0,
            ))
        }
        Err(abort) => {
            let step = match &abort.error {
                Error::StepVerificationFailure { step, .. } | Error::RetriesExhausted { step, .. } => Some(*step),
                _ if abort.partial.input.n > 0 => Some(abort.partial.steps.len()),
                _ => None,
            };
            let mut extra = json!({ "failed_step": step, "completed_steps": abort.partial.steps.len() });
            if abort.partial.input.n > 0 {
                let partial = args.output.with_extension("partial.json");
                if write(&partial, &to_doc(field, &abort.partial, &vars).to_json()).is_ok() {
                    extra["partial_certificate"] = json!(partial.display().to_string());
                }
            }
            Err((abort.error, extra))
        }
    }
}

fn verify_command(args: &VerifyArgs) -> Outcome {
    let doc = CertificateDoc::from_json(&read(&args.cert).map_err(bare)?).map_err(bare)?;
    match doc.field {
        FieldSpec::Prime(p) => verify_in(&PrimeField::new(p).map_err(bare)?, &doc, args),
        FieldSpec::Rationals => verify_in(&Rationals, &doc, args),
    }
}

fn verify_in<F: Field>(field: &F, doc: &CertificateDoc, args: &VerifyArgs) -> Outcome {
    let cert = from_doc(field, doc).map_err(bare)?;
    let report = verify_certificate(field, &cert, args.trials, &mut seeded(args.seed));
    if args.verbose {
        for c in &report.checks {
            let at = c.step.map(|s| format!(" [{s}]")).unwrap_or_default();
            let detail = if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) };
            eprintln!("{} {}{at}{detail}", if c.passed { "ok  " } else { "FAIL" }, c.name);
        }
    }
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"check": c.name, "step": c.step, "passed": c.passed, "detail": c.detail}))
        .collect();
    let failed: Vec<&Value> = checks.iter().filter(|c| c["passed"] == false).collect();
    let body = json!({
        "status": if report.passed() { "ok" } else { "failed" },
        "checks": checks.len(),
        "failures": failed,
        "trials": args.trials,
        "seed": args.seed,
    });
    if report.passed() {
        Ok((body, 0))
    } else {
        let first = report.failures().next().expect("a failure");
        let e = Error::VerificationFailed(format!(
            "{}{}: {}",
            first.name,
            first.step.map(|s| format!(" (step {s})")).unwrap_or_default(),
            first.detail
        ));
        Err((e, body))
    }
}

fn obstruct_command(args: &ObstructArgs) -> Outcome {
    let input = DivisorialInput {
        n: args.n,
        d: args.d,
        singularities: args
            .mults
            .iter()
            .map(|&m| Singularity {
                multiplicity: m,
                ordinary: args.ordinary,
            })
            .collect(),
    };
    let r = check_obstruction(&input).map_err(bare)?;
    let entries: Vec<Value> = r
        .discrepancies
        .iter()
        .map(|d| json!({"center": d.center, "multiplicity": d.multiplicity, "discrepancy": d.value.to_string()}))
        .collect();
    Ok((
        json!({
            "status": "ok",
            "n": args.n,
            "d": args.d,
            "coefficient": r.coefficient.to_string(),
            "discrepancies": entries,
            "verdict": r.verdict.to_string(),
            "explanation": r.explanation,
        }),
        0,
    ))
}

fn examples_command(which: Example) -> Outcome {
    let doc = match which {
        Example::NodalCurve { a, seed, prime } => {
            let field = PrimeField::new(prime).map_err(bare)?;
            let c = gen_nodal_curve(&field, a, &mut seeded(seed), 64).map_err(bare)?;
            let st = ["s", "t"];
            let center: Vec<String> = c.center.iter().map(|v| field.format(v)).collect();
            InputDoc {
                field: Some(field.spec()),
                r: Some(1),
                n: Some(2),
                param_vars: Some(st.map(String::from).to_vec()),
                l: c.system.entries().iter().map(|e| format_poly(&field, e, &st)).collect(),
                g: Some(vec!["s".into(), "t".into(), "0".into()]),
                note: Some(format!(
                    "degree {} plane curve, {} expected nodes; p = {}; q = {}; center = [{}]",
                    a + 1,
                    c.expected_nodes,
                    format_poly(&field, &c.p, &st),
                    format_poly(&field, &c.q, &st),
                    center.join(" : ")
                )),
            }
        }
        Example::TwistedCubic => fixture(&["s", "t"], &["s^3", "s^2*t", "s*t^2", "t^3"], &["s", "t", "0", "0"]),
        Example::Veronese => fixture(
            &["s", "t", "u"],
            &["s^2", "t^2", "u^2", "s*t", "s*u"],
            &["s", "t", "u", "0", "0"],
        ),
    };
    Ok((serde_json::to_value(&doc).expect("json"), 0))
}

fn fixture(vars: &[&str], l: &[&str], g: &[&str]) -> InputDoc {
    InputDoc {
        field: None,
        r: Some(vars.len() - 1),
        n: Some(l.len() - 1),
        param_vars: Some(vars.iter().map(|s| s.to_string()).collect()),
        l: l.iter().map(|s| s.to_string()).collect(),
        g: Some(g.iter().map(|s| s.to_string()).collect()),
        note: None,
    }
}

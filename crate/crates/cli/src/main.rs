//! Command-line front end over the effect-order library. Every subcommand
//! is a pure function of its flags and input files; outputs are JSON with
//! round-trip-exact floats. Exit codes: 0 success / all suites pass,
//! 1 verification failure, 2 configuration or input error.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use effect_order::io::{AutomorphismJson, MatrixJson, OperatorJson, PairJson};
use effect_order::sampling::{
    random_boundary_effect, random_canonical, random_effect, random_invertible_operator,
    random_ordered_pair,
};
use effect_order::{
    compose_automorphisms, invert_automorphism, limit_apply, run_suite, AutomorphismForm,
    CanonicalParams, Effect, Lambda, MoebiusParam, SamplerConfig, VerifyConfig, SUITE_NAMES,
};

/// Matches the deepest interior-mixing step of the boundary profile
/// (`n = 2^14`), so `--boundary-mode limit` exercises the same sequence the
/// verification suites certify.
const LIMIT_N_MAX: u64 = 1 << 14;

#[derive(Parser)]
#[command(
    name = "effect-order",
    version,
    about = "Order automorphisms of the effect algebra [0, I]: generation, application, conversion, group operations, and verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random object and write it as JSON
    Gen(GenArgs),
    /// Apply an automorphism to an effect
    Apply(ApplyArgs),
    /// Convert an automorphism between parameterizations
    Convert(ConvertArgs),
    /// Compose two automorphisms (the second operand applies first)
    Compose(ComposeArgs),
    /// Invert an automorphism
    Invert(InvertArgs),
    /// Run verification suites and report results
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Effect,
    OrderedPair,
    BoundaryEffect,
    Operator,
    Automorphism,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Sampler seed; falls back to EFFECT_ORDER_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    /// Condition-number bound for operator and automorphism sampling
    #[arg(long = "cond-max")]
    cond_max: Option<f64>,
    /// Moebius parameter for the generated automorphism (must be negative)
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    /// Renormalize the generated automorphism's canonical representative
    /// through the congruence form with this lambda ("auto" or a number)
    #[arg(long)]
    lambda: Option<String>,
    /// Number of zero eigenvalues for boundary-effect generation
    #[arg(long = "rank-deficiency")]
    rank_deficiency: Option<usize>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryMode {
    /// Evaluate the canonical formula directly (total on [0, I])
    Direct,
    /// Evaluate through interior approximants A_n with extrapolation
    Limit,
    /// Evaluate both ways and report the Frobenius gap
    Both,
}

#[derive(Args)]
struct ApplyArgs {
    automorphism: PathBuf,
    effect: PathBuf,
    #[arg(long = "boundary-mode", value_enum, default_value = "direct")]
    boundary_mode: BoundaryMode,
    /// Invertibility threshold for the congruence-form inverse
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetForm {
    Canonical,
    Alt,
    Congruence,
}

#[derive(Args)]
struct ConvertArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    to: TargetForm,
    /// Lambda for congruence -> canonical reconstruction: "auto" or a
    /// number strictly above max(1, |S|^2)
    #[arg(long, default_value = "auto")]
    lambda: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InvertArgs {
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    /// Inclusive dimension range, e.g. 2..6
    #[arg(long = "dim-range")]
    dim_range: Option<String>,
    /// Per-cell trial count override
    #[arg(long)]
    trials: Option<usize>,
    /// Suite seed; falls back to EFFECT_ORDER_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    /// Replace every per-check tolerance (diagnostic)
    #[arg(long)]
    tol: Option<f64>,
    /// Write reports as JSON lines to this file instead of stdout
    #[arg(long = "json-out")]
    json_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Apply(args) => cmd_apply(args),
        Cmd::Convert(args) => cmd_convert(args),
        Cmd::Compose(args) => cmd_compose(args),
        Cmd::Invert(args) => cmd_invert(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn fail(err: impl Display) -> String {
    err.to_string()
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("EFFECT_ORDER_SEED") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("EFFECT_ORDER_SEED must be an unsigned integer, got '{v}'")),
        Err(_) => Ok(0),
    }
}

fn parse_lambda(raw: &str) -> Result<Lambda, String> {
    if raw == "auto" {
        return Ok(Lambda::Auto);
    }
    raw.parse::<f64>()
        .map(Lambda::Value)
        .map_err(|_| format!("--lambda expects 'auto' or a number, got '{raw}'"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(out: Option<&Path>, value: &impl serde::Serialize) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(fail)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_form(path: &Path) -> Result<AutomorphismForm, String> {
    read_json::<AutomorphismJson>(path)?.to_form().map_err(fail)
}

fn load_effect(path: &Path) -> Result<Effect, String> {
    read_json::<MatrixJson>(path)?.to_effect().map_err(fail)
}

fn reject_flag<T>(flag: &Option<T>, name: &str, kind: &str) -> Result<(), String> {
    if flag.is_some() {
        return Err(format!("{name} does not apply to 'gen {kind}'"));
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let seed = resolve_seed(args.seed)?;
    let mut cfg = SamplerConfig::default().with_seed(seed).with_dim(args.dim);
    if let Some(c) = args.cond_max {
        cfg = cfg.with_cond_max(c);
    }
    match args.kind {
        GenKind::Effect | GenKind::OrderedPair => {
            let kind = if matches!(args.kind, GenKind::Effect) {
                "effect"
            } else {
                "ordered-pair"
            };
            reject_flag(&args.cond_max, "--cond-max", kind)?;
            reject_flag(&args.p, "--p", kind)?;
            reject_flag(&args.lambda, "--lambda", kind)?;
            reject_flag(&args.rank_deficiency, "--rank-deficiency", kind)?;
            if matches!(args.kind, GenKind::Effect) {
                let e = random_effect(&cfg, 0).map_err(fail)?;
                write_output(args.out.as_deref(), &MatrixJson::from(&e))?;
            } else {
                let (a, b) = random_ordered_pair(&cfg, 0).map_err(fail)?;
                write_output(
                    args.out.as_deref(),
                    &PairJson {
                        a: MatrixJson::from(&a),
                        b: MatrixJson::from(&b),
                    },
                )?;
            }
        }
        GenKind::BoundaryEffect => {
            reject_flag(&args.cond_max, "--cond-max", "boundary-effect")?;
            reject_flag(&args.p, "--p", "boundary-effect")?;
            reject_flag(&args.lambda, "--lambda", "boundary-effect")?;
            let deficiency = args.rank_deficiency.unwrap_or(1);
            let e = random_boundary_effect(&cfg, 0, deficiency).map_err(fail)?;
            write_output(args.out.as_deref(), &MatrixJson::from(&e))?;
        }
        GenKind::Operator => {
            reject_flag(&args.p, "--p", "operator")?;
            reject_flag(&args.lambda, "--lambda", "operator")?;
            reject_flag(&args.rank_deficiency, "--rank-deficiency", "operator")?;
            let t = random_invertible_operator(&cfg, 0).map_err(fail)?;
            write_output(args.out.as_deref(), &OperatorJson::from(&t))?;
        }
        GenKind::Automorphism => {
            reject_flag(&args.rank_deficiency, "--rank-deficiency", "automorphism")?;
            let mut c = match args.p {
                Some(p) => {
                    let p = MoebiusParam::new(p).map_err(fail)?;
                    let t = random_invertible_operator(&cfg, 0).map_err(fail)?;
                    CanonicalParams::new(p, t).map_err(fail)?
                }
                None => random_canonical(&cfg, 0, -4.0, -0.25).map_err(fail)?,
            };
            // An explicit lambda picks a different canonical representative
            // of the same map by rebuilding through the congruence form.
            if let Some(raw) = &args.lambda {
                let lambda = parse_lambda(raw)?;
                let g = c.to_congruence().map_err(fail)?;
                c = CanonicalParams::from_congruence(&g, lambda).map_err(fail)?;
            }
            write_output(
                args.out.as_deref(),
                &AutomorphismJson::from(&AutomorphismForm::Canonical(c)),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn apply_direct(form: &AutomorphismForm, a: &Effect, tol: f64) -> Result<Effect, String> {
    match form {
        AutomorphismForm::Congruence(g) => g.apply(a, tol).map_err(fail),
        other => other.apply(a).map_err(fail),
    }
}

fn cmd_apply(args: ApplyArgs) -> Result<ExitCode, String> {
    let form = load_form(&args.automorphism)?;
    let a = load_effect(&args.effect)?;
    match args.boundary_mode {
        BoundaryMode::Direct => {
            let b = apply_direct(&form, &a, args.tol)?;
            write_output(args.out.as_deref(), &MatrixJson::from(&b))?;
        }
        BoundaryMode::Limit => {
            let c = form.to_canonical(Lambda::Auto).map_err(fail)?;
            let b = limit_apply(&c, &a, LIMIT_N_MAX).map_err(fail)?;
            write_output(args.out.as_deref(), &MatrixJson::from(&b))?;
        }
        BoundaryMode::Both => {
            let direct = apply_direct(&form, &a, args.tol)?;
            let c = form.to_canonical(Lambda::Auto).map_err(fail)?;
            let limit = limit_apply(&c, &a, LIMIT_N_MAX).map_err(fail)?;
            let gap = direct
                .matrix()
                .sub(limit.matrix())
                .map_err(fail)?
                .frobenius_norm();
            let payload = serde_json::json!({
                "direct": MatrixJson::from(&direct),
                "limit": MatrixJson::from(&limit),
                "frobenius_gap": gap,
            });
            write_output(args.out.as_deref(), &payload)?;
            eprintln!("dual-path Frobenius gap: {gap:.6e}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_convert(args: ConvertArgs) -> Result<ExitCode, String> {
    let form = load_form(&args.input)?;
    let lambda = parse_lambda(&args.lambda)?;
    let converted = match (args.to, &form) {
        (TargetForm::Canonical, AutomorphismForm::Canonical(_))
        | (TargetForm::Alt, AutomorphismForm::Alt(_))
        | (TargetForm::Congruence, AutomorphismForm::Congruence(_)) => form,
        (TargetForm::Canonical, _) => {
            AutomorphismForm::Canonical(form.to_canonical(lambda).map_err(fail)?)
        }
        (TargetForm::Alt, _) => {
            AutomorphismForm::Alt(form.to_canonical(lambda).map_err(fail)?.to_alt().map_err(fail)?)
        }
        (TargetForm::Congruence, _) => {
            AutomorphismForm::Congruence(form.to_congruence().map_err(fail)?)
        }
    };
    write_output(args.out.as_deref(), &AutomorphismJson::from(&converted))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compose(args: ComposeArgs) -> Result<ExitCode, String> {
    let f1 = load_form(&args.first)?;
    let f2 = load_form(&args.second)?;
    let composed = compose_automorphisms(&f1, &f2).map_err(fail)?;
    write_output(args.out.as_deref(), &AutomorphismJson::from(&composed))?;
    eprintln!("composed in congruence form; the second operand applies first");
    Ok(ExitCode::SUCCESS)
}

fn cmd_invert(args: InvertArgs) -> Result<ExitCode, String> {
    let form = load_form(&args.input)?;
    let inverted = invert_automorphism(&form).map_err(fail)?;
    write_output(args.out.as_deref(), &AutomorphismJson::from(&inverted))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_dim_range(raw: &str) -> Result<(usize, usize), String> {
    let err = || format!("--dim-range expects LO..HI (inclusive), got '{raw}'");
    let (lo, hi) = raw.split_once("..").ok_or_else(err)?;
    let lo = lo.trim().parse().map_err(|_| err())?;
    let hi = hi.trim().parse().map_err(|_| err())?;
    if lo < 1 || lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let names: Vec<&str> = if args.suite == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&args.suite.as_str()) {
        vec![SUITE_NAMES
            .iter()
            .find(|n| **n == args.suite)
            .copied()
            .unwrap()]
    } else {
        return Err(format!(
            "unknown suite '{}'; available: all, {}",
            args.suite,
            SUITE_NAMES.join(", ")
        ));
    };
    let cfg = VerifyConfig {
        seed: resolve_seed(args.seed)?,
        dims: args.dim_range.as_deref().map(parse_dim_range).transpose()?,
        trials: args.trials,
        tol: args.tol,
    };
    let mut reports = Vec::with_capacity(names.len());
    for name in names {
        reports.push(run_suite(name, &cfg).map_err(fail)?);
    }
    for r in &reports {
        println!("{}", r.human_row());
    }
    let all_pass = reports.iter().all(|r| r.pass);
    println!(
        "{}/{} suites pass",
        reports.iter().filter(|r| r.pass).count(),
        reports.len()
    );
    let lines: Vec<String> = reports
        .iter()
        .map(|r| serde_json::to_string(r).map_err(fail))
        .collect::<Result<_, _>>()?;
    match &args.json_out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            for line in &lines {
                writeln!(file, "{line}").map_err(|e| format!("{}: {e}", path.display()))?;
            }
        }
        None => {
            for line in &lines {
                println!("{line}");
            }
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

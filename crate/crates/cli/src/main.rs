use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use securenand::audit::strategies::{entangler, pad_probe, random_malicious};
use securenand::audit::{audit_blindness_channel, audit_blindness_emission, audit_correctness, leakage_under_strategy};
use securenand::delegation::{evaluate_delegated, BooleanCircuit};
use securenand::nogo::{self, search_classical_nogo, NogoError, SearchBounds, DEFAULT_BUDGET};
use securenand::protocol::{ClientProgram, ProtocolError};
use securenand::report::{CommandEcho, Report};
use securenand::rng::SeededRng;
use securenand::selftest;
use securenand::{run_protocol, ProtocolVariant, ServerStrategy};

/// Largest search budget accepted on the command line.
const BUDGET_CEILING: u128 = 2_000_000_000;
const MIN_TOLERANCE: f64 = 1e-14;
const LEAK_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "securenand", version, about = "Simulate, audit and compose SecureNAND protocol runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One honest protocol run.
    RunNand(RunNand),
    /// Exact correctness, blindness and leakage audits.
    Audit(Audit),
    /// Bounded impossibility checks.
    #[command(subcommand)]
    Nogo(Nogo),
    /// Evaluate a circuit with one delegated protocol run per NAND.
    Delegate(Delegate),
    /// Run the full invariant suite.
    Selftest(Selftest),
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RunNand {
    #[arg(long)]
    variant: ProtocolVariant,
    #[arg(long, value_parser = bit)]
    a: u8,
    #[arg(long, value_parser = bit)]
    b: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AuditKind {
    Correctness,
    Blindness,
    Channel,
    Leakage,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StrategyKind {
    Honest,
    Entangler,
    Random,
    PadProbe,
}

#[derive(Args, Serialize)]
struct Audit {
    kind: AuditKind,
    #[arg(long)]
    variant: ProtocolVariant,
    /// Equality tolerance of the verdict (at least 1e-14).
    #[arg(long, value_parser = tolerance)]
    tolerance: Option<f64>,
    /// Force a pad bit to zero; repeatable.
    #[arg(long = "remove-pad")]
    remove_pad: Vec<usize>,
    /// Server strategy for leakage audits.
    #[arg(long, value_enum, default_value_t = StrategyKind::Honest)]
    strategy: StrategyKind,
    /// Seed for sampled strategies.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Subcommand)]
enum Nogo {
    /// Exhaustive search over XOR-client classical protocols.
    Classical(Classical),
    /// Checker suite on quantum-offline two-round candidates.
    Qo2(Qo2),
}

#[derive(Args, Serialize)]
struct Classical {
    #[arg(long = "random-bits")]
    random_bits: usize,
    #[arg(long = "msg-bits")]
    msg_bits: usize,
    #[arg(long = "reply-bits")]
    reply_bits: usize,
    /// Restrict server tables to reachable messages.
    #[arg(long)]
    prune: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = budget)]
    budget: u128,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Serialize)]
struct Qo2 {
    #[arg(long, default_value_t = 100)]
    candidates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Serialize)]
struct Delegate {
    /// Circuit file, or `-` for standard input.
    circuit: String,
    /// Input bits in declaration order, e.g. `10`.
    #[arg(long, value_parser = bits, default_value = "")]
    inputs: Bits,
    #[arg(long)]
    variant: ProtocolVariant,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

#[derive(Args, Serialize)]
struct Selftest {
    /// Run a single criterion.
    #[arg(long)]
    criterion: Option<u8>,
    #[command(flatten)]
    #[serde(skip)]
    output: Output,
}

fn bit(s: &str) -> Result<u8, String> {
    match s {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => Err(format!("expected 0 or 1, got {s:?}")),
    }
}

#[derive(Clone, Serialize)]
#[serde(transparent)]
struct Bits(Vec<u8>);

fn bits(s: &str) -> Result<Bits, String> {
    s.chars()
        .filter(|c| !matches!(c, ',' | ' ' | '_'))
        .map(|c| bit(&c.to_string()))
        .collect::<Result<_, _>>()
        .map(Bits)
}

fn tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t >= MIN_TOLERANCE {
        Ok(t)
    } else {
        Err(format!("tolerance must be at least {MIN_TOLERANCE:e}"))
    }
}

fn budget(s: &str) -> Result<u128, String> {
    let b: u128 = s.parse().map_err(|e| format!("{e}"))?;
    if b <= BUDGET_CEILING {
        Ok(b)
    } else {
        Err(format!("budget above the ceiling of {BUDGET_CEILING}"))
    }
}

/// Error exits; audit failures are not errors and exit 1 through `Done`.
enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Done {
    pass: bool,
}

fn emit<R: Serialize + DeserializeOwned>(report: &Report<R>, output: &Output, summary: &str) -> Result<Done, Failure> {
    match &output.out {
        Some(path) => {
            fs::write(path, report.to_json() + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            println!("{summary}");
            println!("report: {}", path.display());
        }
        None => {
            eprintln!("{summary}");
            println!("{}", report.to_json());
        }
    }
    Ok(Done { pass: report.pass })
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn run_nand(cmd: RunNand, start: Instant) -> Result<Done, Failure> {
    let t = run_protocol(cmd.variant, cmd.a, cmd.b, cmd.seed, &ServerStrategy::Honest)?;
    let summary = format!("out={}", t.out);
    let report = Report::new(CommandEcho::new("run-nand", &cmd), Some(cmd.seed), true, t, elapsed_ms(start));
    emit(&report, &cmd.output, &summary)
}

fn program(cmd: &Audit) -> Result<ClientProgram, Failure> {
    let pads = cmd.variant.random_bits();
    cmd.remove_pad.iter().try_fold(ClientProgram::new(cmd.variant), |p, &i| {
        if i < pads {
            Ok(p.without_pad_bit(i))
        } else {
            Err(Failure::Input(format!("{} has {pads} pad bit(s), cannot remove {i}", cmd.variant)))
        }
    })
}

fn audit(cmd: Audit, start: Instant) -> Result<Done, Failure> {
    let p = program(&cmd)?;
    let echo = CommandEcho::new("audit", &cmd);
    let name = format!("audit {} {}", serde_json::to_value(cmd.kind)?.as_str().unwrap_or(""), cmd.variant);
    let verdict = |pass: bool| if pass { "pass" } else { "FAIL" };
    match cmd.kind {
        AuditKind::Correctness => {
            let mut r = audit_correctness(p)?;
            if let Some(t) = cmd.tolerance {
                r = r.with_tolerance(t);
            }
            let summary = format!("{name}: {} (min success probability {:.15})", verdict(r.pass), r.min_probability);
            emit(&Report::new(echo, None, r.pass, r, elapsed_ms(start)), &cmd.output, &summary)
        }
        AuditKind::Blindness | AuditKind::Channel => {
            let mut r = match cmd.kind {
                AuditKind::Channel => audit_blindness_channel(p),
                _ => audit_blindness_emission(p),
            }
            .map_err(|e| match e {
                ProtocolError::NoClientTransform(v) => {
                    Failure::Input(format!("channel audit needs a bounce variant; {v} has no client transform"))
                }
                e => e.into(),
            })?;
            if let Some(t) = cmd.tolerance {
                r = r.with_tolerance(t);
            }
            let note = if r.vacuous { ", vacuous: the client emits nothing" } else { "" };
            let summary = format!(
                "{name}: {} (max pairwise trace distance {:e}{note})",
                verdict(r.pass),
                r.max_pairwise_trace_distance
            );
            emit(&Report::new(echo, None, r.pass, r, elapsed_ms(start)), &cmd.output, &summary)
        }
        AuditKind::Leakage => {
            let strategy = match cmd.strategy {
                StrategyKind::Honest => ServerStrategy::Honest,
                StrategyKind::Entangler => entangler(cmd.variant),
                StrategyKind::Random => random_malicious(cmd.variant, &mut SeededRng::new(cmd.seed)),
                StrategyKind::PadProbe if cmd.variant == ProtocolVariant::GhzBounce => pad_probe(),
                StrategyKind::PadProbe => return Err(Failure::Input("the pad probe targets ghz-bounce only".into())),
            };
            let r = leakage_under_strategy(p, &strategy)?;
            let tol = cmd.tolerance.unwrap_or(LEAK_TOL);
            let pass = (r.guessing_probability - 0.25).abs() <= tol && r.optimal_guessing_upper <= 0.25 + tol;
            let summary = format!(
                "{name}: {} (guessing probability {:.12}, optimum in [{:.12}, {:.12}])",
                verdict(pass),
                r.guessing_probability,
                r.optimal_guessing_lower,
                r.optimal_guessing_upper
            );
            emit(&Report::new(echo, Some(cmd.seed), pass, r, elapsed_ms(start)), &cmd.output, &summary)
        }
    }
}

fn classical(cmd: Classical, start: Instant) -> Result<Done, Failure> {
    let bounds = SearchBounds::new(cmd.random_bits, cmd.msg_bits, cmd.reply_bits);
    let r = search_classical_nogo(bounds, cmd.prune, cmd.budget).map_err(|e| match e {
        NogoError::BudgetExceeded { .. } | NogoError::BoundsTooLarge(_) => Failure::Input(format!("refused: {e}")),
        e => e.into(),
    })?;
    let pass = r.witness.is_none();
    let summary = if pass {
        format!(
            "checked {} candidates (analytic {}): no blind and correct protocol",
            r.candidates_checked, r.analytic_count
        )
    } else {
        format!("witness found after checking {} candidates", r.candidates_checked)
    };
    let report = Report::new(CommandEcho::new("nogo classical", &cmd), None, pass, r, elapsed_ms(start));
    emit(&report, &cmd.output, &summary)
}

fn qo2(cmd: Qo2, start: Instant) -> Result<Done, Failure> {
    let r = nogo::qo2_sweep(cmd.candidates, cmd.seed)?;
    let summary = format!(
        "positive control leaks {:.12}; {}/{} random candidates correct, all leaking with probability 1: {} (min {:.12})",
        r.positive_control.leakage_lower,
        r.correct,
        cmd.candidates,
        r.pass,
        r.min_leakage
    );
    let report = Report::new(CommandEcho::new("nogo qo2", &cmd), Some(cmd.seed), r.pass, r, elapsed_ms(start));
    emit(&report, &cmd.output, &summary)
}

fn delegate(cmd: Delegate, start: Instant) -> Result<Done, Failure> {
    let (text, source) = if cmd.circuit == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        (s, "<stdin>".to_owned())
    } else {
        let s = fs::read_to_string(&cmd.circuit).map_err(|e| Failure::Input(format!("{}: {e}", cmd.circuit)))?;
        (s, cmd.circuit.clone())
    };
    let circuit = BooleanCircuit::parse(&text).map_err(|e| Failure::Input(format!("{source}:{e}")))?;
    let lowered = circuit.lower();
    let trace = evaluate_delegated(&lowered, &cmd.inputs.0, cmd.variant, cmd.seed)?;
    let summary = circuit
        .outputs()
        .zip(trace.outputs())
        .map(|(w, v)| format!("{w}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    let report = Report::new(CommandEcho::new("delegate", &cmd), Some(cmd.seed), true, trace, elapsed_ms(start));
    emit(&report, &cmd.output, &summary)
}

fn run_selftest(cmd: Selftest, start: Instant) -> Result<Done, Failure> {
    let results = match cmd.criterion {
        Some(id) => vec![selftest::run_criterion(id).ok_or_else(|| Failure::Input(format!("no criterion {id}")))?],
        None => selftest::run_all(),
    };
    let lines: Vec<String> = results
        .iter()
        .map(|r| format!("AC{:<2} {} {}: {}", r.id, if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail))
        .collect();
    let pass = results.iter().all(|r| r.pass);
    let report = Report::new(CommandEcho::new("selftest", &cmd), None, pass, results, elapsed_ms(start));
    emit(&report, &cmd.output, &lines.join("\n"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match cli.command {
        Command::RunNand(c) => run_nand(c, start),
        Command::Audit(c) => audit(c, start),
        Command::Nogo(Nogo::Classical(c)) => classical(c, start),
        Command::Nogo(Nogo::Qo2(c)) => qo2(c, start),
        Command::Delegate(c) => delegate(c, start),
        Command::Selftest(c) => run_selftest(c, start),
    };
    match outcome {
        Ok(Done { pass: true }) => ExitCode::SUCCESS,
        Ok(Done { pass: false }) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

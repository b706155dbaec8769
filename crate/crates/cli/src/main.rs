//! `gbit`: command-line front end to the generalized-bit toolkit.
//!
//! Exit codes: 0 success, 1 a verification reported a deviation,
//! 2 bad input (usage, unreadable or malformed files, dimension mismatch).

mod format;
mod states;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gbit_core::axiom::{
    embedded_maximally_entangled, inversion_entanglement_contradiction, search_entangled_in_subspace,
    InversionReport, SearchConfig, SearchReport,
};
use gbit_core::composite::composite_prob;
use gbit_core::gbit::measure_prob;
use gbit_core::mirror::{mirror_report, ThreeGbitMarginals};
use gbit_core::verify::{verify_all, Outcome};
use gbit_core::TwoGbit;
use serde::Serialize;

use crate::format::{sig12, vector};
use crate::states::StateFile;

#[derive(Parser)]
#[command(name = "gbit", version, about = "Composite generalized bits: probabilities, axiom checks and the mirror construction")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

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
    /// Probability of finding state A when B is measured.
    ///
    /// Both files hold either a single gbit `{"d", "x"}` or a pair
    /// `{"d", "x", "y", "T"}`. The composite value is printed unclamped.
    Prob { a: PathBuf, b: PathBuf },

    /// Decide whether the axioms admit entangled pure states for dimension d.
    Dcheck {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        /// Optimizer restarts (odd d only).
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Bell tables and the W-state inconsistency of mirrored quantum mechanics.
    MirrorReport {
        /// Corrupt one W marginal before the final check.
        #[arg(long, hide = true)]
        inject_sign_error: bool,
    },

    /// Run every internal consistency check.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Write a named state as JSON.
    Export {
        /// One of psi1..psi4, psi-qm, psi-mqm, singlet, mirror-probe, w-13, mirror-w-13, e1.
        name: String,
        /// Dimension for psi1..psi4 and e1.
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
}

enum Failure {
    /// Exit 1.
    Deviation(String),
    /// Exit 2.
    Input(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Rendered {
    text: String,
    json: String,
    failure: Option<String>,
}

impl Rendered {
    fn ok(text: String, json: &impl Serialize) -> Result<Self, Failure> {
        let json = serde_json::to_string_pretty(json).map_err(Failure::input)?;
        Ok(Self { text, json, failure: None })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Deviation(msg)) => {
            eprintln!("gbit: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("gbit: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(Failure::input)?;
    }
    let rendered = match &cli.command {
        Command::Prob { a, b } => prob(a, b)?,
        Command::Dcheck { d, restarts, seed } => dcheck(*d as usize, *restarts, *seed)?,
        Command::MirrorReport { inject_sign_error } => mirror(*inject_sign_error)?,
        Command::VerifyAll { seed } => verify(*seed)?,
        Command::Export { name, d } => {
            let value = states::preset(name, *d).map_err(Failure::Input)?;
            let json = serde_json::to_string_pretty(&value).map_err(Failure::input)?;
            Rendered { text: format!("{json}\n"), json, failure: None }
        }
    };
    let body = match cli.format {
        Format::Text => rendered.text,
        Format::Json => rendered.json + "\n",
    };
    emit(cli.out.as_deref(), &body)?;
    match rendered.failure {
        Some(msg) => Err(Failure::Deviation(msg)),
        None => Ok(()),
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(Failure::input)
        }
    }
}

#[derive(Serialize)]
struct ProbOutput {
    kind: &'static str,
    d: usize,
    probability: f64,
}

fn prob(a: &Path, b: &Path) -> Result<Rendered, Failure> {
    let a = states::read_state(a).map_err(Failure::Input)?;
    let b = states::read_state(b).map_err(Failure::Input)?;
    if a.d() != b.d() {
        return Err(Failure::Input(format!("dimension mismatch: {} vs {}", a.d(), b.d())));
    }
    let p = match (&a, &b) {
        (StateFile::Pair(a), StateFile::Pair(b)) => composite_prob(a, b),
        (StateFile::Single(a), StateFile::Single(b)) => measure_prob(a, b),
        _ => {
            return Err(Failure::Input(format!(
                "cannot compare a {} state with a {} state",
                a.kind(),
                b.kind()
            )))
        }
    }
    .map_err(Failure::input)?;
    let out = ProbOutput { kind: a.kind(), d: a.d(), probability: p };
    Rendered::ok(format!("{}\n", sig12(p)), &out)
}

fn verdict_line(d: usize, exist: bool) -> String {
    let word = if exist { "exist" } else { "do not exist" };
    format!("d={d}: entangled states {word} under axioms")
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    mode: &'static str,
    #[serde(flatten)]
    report: &'a SearchReport,
    verdict: String,
}

#[derive(Serialize)]
struct InversionOutput<'a> {
    mode: &'static str,
    state: &'a TwoGbit,
    #[serde(flatten)]
    report: &'a InversionReport<f64>,
    entangled_states_exist: bool,
    verdict: String,
}

fn dcheck(d: usize, restarts: usize, seed: u64) -> Result<Rendered, Failure> {
    if d.is_multiple_of(2) {
        return inversion(d);
    }
    let config = SearchConfig { restarts, seed, ..SearchConfig::default() };
    let report = search_entangled_in_subspace(d, &config).map_err(Failure::input)?;
    let verdict = verdict_line(d, report.entangled_states_exist);
    let mut text = String::new();
    let triples = if report.triples_capped { " (sampled)" } else { "" };
    let _ = writeln!(
        text,
        "constraints: {} ({} single flips, {} triple flips{triples}), positivity {}",
        report.constraint_count,
        report.single_flips,
        report.triple_flips,
        if report.positivity_enforced { "enforced" } else { "off" }
    );
    let _ = writeln!(
        text,
        "restarts: {} (seed {}), feasible: {}",
        report.restarts, report.seed, report.feasible_restarts
    );
    let _ = writeln!(text, "max |T| = {}, residual = {:.3e}", sig12(report.max_t_norm), report.residual);
    let _ = writeln!(text, "{verdict}");
    let out = SearchOutput { mode: "search", report: &report, verdict };
    Rendered::ok(text, &out)
}

/// Even d: the total inversion is a proper rotation, and applying it to one
/// half of any pure state with vanishing local vectors gives `P = -1/2`.
fn inversion(d: usize) -> Result<Rendered, Failure> {
    let state = if d == 2 {
        let s = 1.5f64.sqrt();
        TwoGbit::correlated_diagonal(&[s, -s])
    } else {
        embedded_maximally_entangled::<f64>(d).map_err(Failure::input)?
    };
    let report = inversion_entanglement_contradiction(&state).map_err(Failure::input)?;
    let exist = report.entangled && !report.contradiction;
    let verdict = verdict_line(d, exist);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "total inversion E = -1 has det {}1 and is {}a rotation",
        if report.inversion_is_rotation { "+" } else { "-" },
        if report.inversion_is_rotation { "" } else { "not " }
    );
    let _ = writeln!(text, "test state: x = y = 0, diag T = {}", vector(state.t().diagonal().as_slice()));
    let _ = writeln!(
        text,
        "P(psi, (E,1) psi) = {}  ((|y|^2 - 1)/2 = {})",
        sig12(report.p_left),
        sig12(report.formula_left)
    );
    let _ = writeln!(
        text,
        "P(psi, (1,E) psi) = {}  ((|x|^2 - 1)/2 = {})",
        sig12(report.p_right),
        sig12(report.formula_right)
    );
    let _ = writeln!(text, "{verdict}");
    let out = InversionOutput {
        mode: "inversion",
        state: &state,
        report: &report,
        entangled_states_exist: exist,
        verdict,
    };
    Rendered::ok(text, &out)
}

fn marginals_text(out: &mut String, title: &str, m: &ThreeGbitMarginals<f64>) {
    let _ = writeln!(out, "{title}");
    for (name, v) in [("x", &m.x), ("y", &m.y), ("z", &m.z)] {
        let _ = writeln!(out, "  {name}   = {}", vector(v.as_slice()));
    }
    for (name, t) in [("T12", &m.t12), ("T13", &m.t13), ("T23", &m.t23)] {
        let rows: Vec<String> = t.row_iter().map(|r| vector(&r.iter().copied().collect::<Vec<_>>())).collect();
        let _ = writeln!(out, "  {name} = [{}]", rows.join(", "));
    }
}

fn mirror(inject_sign_error: bool) -> Result<Rendered, Failure> {
    let report = mirror_report(inject_sign_error);
    let mut text = report.bell_tables.render_text();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    marginals_text(&mut text, "W state marginals:", &report.w_marginals);
    marginals_text(&mut text, "mirrored W marginals (partial transpose on gbit 2):", &report.mirror_w_marginals);
    let _ = writeln!(
        text,
        "P(mirror probe, mirrored W_13) = {} (exact {})",
        sig12(report.overlap),
        report.overlap_exact
    );
    if report.overlap < 0.0 {
        text.push_str("negative probability: mirrored quantum mechanics is inconsistent for three gbits\n");
    }
    let mut rendered = Rendered::ok(text, &report)?;
    if !report.passed() {
        rendered.failure = Some(format!("mirror report deviations: {}", report.deviations.join("; ")));
    }
    Ok(rendered)
}

fn verify(seed: u64) -> Result<Rendered, Failure> {
    let report = verify_all(seed);
    let mut text = String::new();
    for c in &report.checks {
        let tag = match c.outcome {
            Outcome::Pass => "pass",
            Outcome::ExpectedFail => "expected-fail",
            Outcome::Fail => "FAIL",
        };
        let _ = writeln!(text, "[{tag}] {}: {}", c.name, c.detail);
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.outcome == Outcome::Fail)
        .map(|c| c.name)
        .collect();
    let _ = writeln!(text, "{} checks, {} failed", report.checks.len(), failed.len());
    let mut rendered = Rendered::ok(text, &report)?;
    if !failed.is_empty() {
        rendered.failure = Some(format!("failed checks: {}", failed.join(", ")));
    }
    Ok(rendered)
}

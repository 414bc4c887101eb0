//! `qcomplex`: complexity reports, symmetry analysis, amplitude quantization,
//! and Grover-with-cutoff experiments over JSON state/matrix files.
//!
//! Exit codes: 0 success, 1 domain error (a JSON object `{code, message,
//! context}` on stderr), 2 usage error.

mod manifest;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qcomplex_core::ampquant::{quantize, trace_quantum, AmplitudeType};
use qcomplex_core::complexity::{
    quantum_complexity_h, quantum_complexity_state, ComplexityReport, SearchStrategy,
};
use qcomplex_core::grover::{
    estimate_q, run_gsa, GroverConfig, IterationCount, JitterConfig, SuccessRule,
};
use qcomplex_core::operator::chain_h4;
use qcomplex_core::symmetry::{
    build_connected_state, commutant, evolution_operator, is_connected, is_equilibrium,
    lemma_column_permutation_check,
};
use qcomplex_core::tavis::build_tavis_cummings;
use qcomplex_core::{io, Error as CoreError, StateVector};

use manifest::RunContext;

#[derive(Parser)]
#[command(
    name = "qcomplex",
    version,
    about = "Quantum state complexity toolkit",
    max_term_width = 100
)]
struct Cli {
    /// Worker-thread cap for the parallel searches and sweeps.
    #[arg(long, global = true, env = "QCOMPLEX_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Naive and permutation-minimized complexity of a state or Hamiltonian.
    Complexity(ComplexityArgs),
    /// Equilibrium, connectivity, commutant order, and the column lemma.
    Symmetry(SymmetryArgs),
    /// Amplitude quantization of an equilibrium state against an operator.
    Quantize(QuantizeArgs),
    /// Grover search with an optional minimum-amplitude cutoff.
    Grover(GroverArgs),
    /// Sweep register sizes at a fixed cutoff and locate the breakdown scale.
    EstimateQ(EstimateQArgs),
    /// Write a ready-made state or matrix fixture as JSON.
    GenFixture(GenFixtureArgs),
}

#[derive(Args)]
struct ComplexityArgs {
    /// State JSON file (exactly one of --state/--ham).
    #[arg(long, conflicts_with = "ham")]
    state: Option<PathBuf>,
    /// Hamiltonian JSON file.
    #[arg(long)]
    ham: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Heuristic)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also write the report to a file (with a manifest).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Heuristic,
}

impl From<StrategyArg> for SearchStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => SearchStrategy::Exhaustive,
            StrategyArg::Heuristic => SearchStrategy::heuristic(),
        }
    }
}

#[derive(Args)]
struct SymmetryArgs {
    #[arg(long)]
    ham: PathBuf,
    #[arg(long)]
    state: PathBuf,
    /// Also check the lemma for the evolution operator at this time.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuantizeArgs {
    #[arg(long)]
    state: PathBuf,
    /// Operator JSON file.
    #[arg(long)]
    op: PathBuf,
    /// Grid step ε of the approximation.
    #[arg(long)]
    eps: f64,
    /// Print the trajectory record of this quantum instead of the full set.
    #[arg(long)]
    trace: Option<u64>,
    /// Write the quanta JSON here (with a manifest).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GroverArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    target: usize,
    /// Truncation threshold; 0 runs the standard evolution.
    #[arg(long, default_value_t = 0.0)]
    eps_min: f64,
    /// Iteration count: "optimal" or an integer.
    #[arg(long, default_value = "optimal", value_parser = parse_iterations)]
    iters: IterationCount,
    #[arg(long, default_value_t = 0.5)]
    success_threshold: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::Probability)]
    rule: RuleArg,
    /// Multiplicative amplitude jitter magnitude (off by default).
    #[arg(long)]
    jitter: Option<f64>,
    #[arg(long, default_value_t = 0)]
    jitter_seed: u64,
    /// Per-iteration CSV: iter,beta_re,beta_im,alpha_modulus,support_size,success.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Probability,
    AmplitudeJump,
}

fn parse_iterations(s: &str) -> Result<IterationCount, String> {
    if s.eq_ignore_ascii_case("optimal") {
        Ok(IterationCount::Optimal)
    } else {
        s.parse::<usize>()
            .map(IterationCount::Fixed)
            .map_err(|_| format!("expected \"optimal\" or an integer, got {s:?}"))
    }
}

#[derive(Args)]
struct EstimateQArgs {
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long)]
    eps_min: f64,
    #[arg(long, default_value_t = 0.5)]
    success_threshold: f64,
    /// Per-size CSV of the sweep.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct GenFixtureArgs {
    #[arg(long, value_enum)]
    kind: FixtureKind,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Qubit count (ghz, gsa-state).
    #[arg(long)]
    n: Option<usize>,
    /// Rotation angle t (gsa-state).
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, default_value_t = 0)]
    target: usize,
    /// Atom count (tavis-cummings).
    #[arg(long)]
    atoms: Option<usize>,
    #[arg(long, default_value_t = 1)]
    n_max: usize,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Comma-separated couplings, one per atom (tavis-cummings).
    #[arg(long, value_delimiter = ',')]
    couplings: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Hamiltonian file (connected).
    #[arg(long)]
    ham: Option<PathBuf>,
    /// Seed basis index for the orbit (connected).
    #[arg(long)]
    seed_index: Option<usize>,
    /// Comma-separated amplitude types, e.g. "+1,-1,+i,-i" (connected).
    #[arg(long, value_delimiter = ',')]
    pattern: Vec<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    /// (|00…0⟩ + |11…1⟩)/√2 on --n qubits.
    Ghz,
    /// Two-valued rotation state: sin t on --target, cos t/√(N−1) elsewhere.
    GsaState,
    /// The 4×4 chain Hamiltonian reduced by CNOT conjugation.
    ChainH4,
    /// Tavis–Cummings Hamiltonian with a photon cutoff.
    TavisCummings,
    /// Orbit state of --seed-index under the symmetries of --ham.
    Connected,
}

/// Argument combinations clap's declarative checks cannot express; reported
/// with the usage exit code.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: &str) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Best effort: re-initialization in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if err.is::<UsageError>() => {
            eprintln!("error: {err}");
            eprintln!("For usage run: qcomplex --help");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Complexity(args) => cmd_complexity(args),
        Command::Symmetry(args) => cmd_symmetry(args),
        Command::Quantize(args) => cmd_quantize(args),
        Command::Grover(args) => cmd_grover(args),
        Command::EstimateQ(args) => cmd_estimate_q(args),
        Command::GenFixture(args) => cmd_gen_fixture(args),
    }
}

fn error_json(err: &anyhow::Error) -> String {
    let code = match err.downcast_ref::<CoreError>() {
        Some(core) => error_code(core),
        None => "io_error",
    };
    json!({
        "code": code,
        "message": err.to_string(),
        "context": err.chain().skip(1).map(|c| c.to_string()).collect::<Vec<_>>(),
    })
    .to_string()
}

fn error_code(err: &CoreError) -> &'static str {
    use CoreError::*;
    match err {
        DimensionMismatch { .. } => "dimension_mismatch",
        NotQubitStructured { .. } => "not_qubit_structured",
        NotABijection => "not_a_bijection",
        InvalidSubset => "invalid_subset",
        NotNormalized { .. } => "not_normalized",
        ExhaustiveTooLarge { .. } => "exhaustive_too_large",
        TooManyQubits { .. } => "too_many_qubits",
        NotHermitian { .. } => "not_hermitian",
        NotConnected { .. } => "not_connected",
        NotEquilibrium { .. } => "not_equilibrium",
        UnequalColumnWeights { .. } => "unequal_column_weights",
        ZeroColumnWeight => "zero_column_weight",
        EmptyStateGrid => "empty_state_grid",
        TotalCancellation => "total_cancellation",
        UnknownQuantumId(_) => "unknown_quantum_id",
        AllAmplitudesDropped { .. } => "all_amplitudes_dropped",
        DeadOrbit { .. } => "dead_orbit",
        NonFiniteAmplitude(_) => "non_finite_amplitude",
        Invalid { .. } => "invalid_input",
    }
}

fn report_json(report: &ComplexityReport) -> serde_json::Value {
    json!({
        "naive": report.naive,
        "quantum": report.quantum,
        "certified": report.certified,
        "strategy": report.strategy,
        "witness": report.witness.as_slice(),
    })
}

fn cmd_complexity(args: ComplexityArgs) -> Result<()> {
    let mut ctx = RunContext::new("complexity");
    let strategy: SearchStrategy = args.strategy.into();
    let report = match (&args.state, &args.ham) {
        (Some(path), None) => {
            let psi = io::state_from_json(&ctx.read_input(path)?)?;
            quantum_complexity_state(&psi, &strategy, args.tol)?
        }
        (None, Some(path)) => {
            let h = io::matrix_from_json(&ctx.read_input(path)?)?;
            quantum_complexity_h(&h, &strategy, args.tol)?
        }
        _ => return Err(usage("exactly one of --state or --ham is required")),
    };
    let mut text = serde_json::to_string_pretty(&report_json(&report))?;
    text.push('\n');
    print!("{text}");
    if let Some(out) = &args.out {
        ctx.stage_output(out, text);
    }
    ctx.finish()
}

fn cmd_symmetry(args: SymmetryArgs) -> Result<()> {
    let mut ctx = RunContext::new("symmetry");
    let h = io::matrix_from_json(&ctx.read_input(&args.ham)?)?;
    let psi = io::state_from_json(&ctx.read_input(&args.state)?)?;
    let n = h
        .n_qubits()
        .ok_or(CoreError::NotQubitStructured { dim: h.dim() })?;

    let equilibrium = is_equilibrium(&psi, &h, args.tol)?;
    let connectivity = is_connected(&psi, &h, args.tol)?;
    let group_order = commutant(&h, n, args.tol)?.order();

    // The lemma precondition is connectivity; null marks a refusal.
    let lemma_ok = if connectivity.connected {
        let mut ok = lemma_column_permutation_check(&psi, &h, args.tol)?.ok;
        if let Some(t) = args.t {
            let u = evolution_operator(&h, t, args.hbar, args.tol)?;
            ok = ok && lemma_column_permutation_check(&psi, &u, args.tol)?.ok;
        }
        Some(ok)
    } else {
        None
    };

    let mut text = serde_json::to_string_pretty(&json!({
        "equilibrium": equilibrium,
        "connected": connectivity.connected,
        "group_order": group_order,
        "lemma_ok": lemma_ok,
    }))?;
    text.push('\n');
    print!("{text}");
    if let Some(out) = &args.out {
        ctx.stage_output(out, text);
    }
    ctx.finish()
}

fn cmd_quantize(args: QuantizeArgs) -> Result<()> {
    let mut ctx = RunContext::new("quantize");
    let psi = io::state_from_json(&ctx.read_input(&args.state)?)?;
    let op = io::matrix_from_json(&ctx.read_input(&args.op)?)?;
    let theta = quantize(&psi, &op, args.eps)?;
    let quanta_json = io::quanta_to_json(&theta);
    match args.trace {
        Some(id) => {
            let q = trace_quantum(&theta, id)?;
            let mut text = serde_json::to_string_pretty(&json!({
                "id": q.id,
                "size": q.size,
                "b_in": q.b_in,
                "b_fin": q.b_fin,
                "t_in": q.t_in.as_str(),
                "t_fin": q.t_fin.as_str(),
            }))?;
            text.push('\n');
            print!("{text}");
        }
        None => {
            if args.out.is_none() {
                print!("{quanta_json}");
            }
        }
    }
    if let Some(out) = &args.out {
        ctx.stage_output(out, quanta_json);
    }
    ctx.finish()
}

fn cmd_grover(args: GroverArgs) -> Result<()> {
    let mut ctx = RunContext::new("grover");
    let cfg = GroverConfig {
        n: args.n,
        target: args.target,
        iterations: args.iters,
        eps_min: args.eps_min,
        success_threshold: args.success_threshold,
        success_rule: match args.rule {
            RuleArg::Probability => SuccessRule::Probability,
            RuleArg::AmplitudeJump => SuccessRule::AmplitudeJump,
        },
        jitter: args.jitter.map(|amplitude| JitterConfig {
            amplitude,
            seed: args.jitter_seed,
        }),
    };
    let record = run_gsa(&cfg)?;
    let mut text = serde_json::to_string_pretty(&json!({
        "n": record.n,
        "target": record.target,
        "eps_min": record.eps_min,
        "iterations_run": record.iterations.len(),
        "success_iteration": record.success_iteration,
        "final_success_probability": record.final_success_probability,
        "all_dropped_at": record.all_dropped_at,
        "renormalization_events": record.renormalization_events,
    }))?;
    text.push('\n');
    print!("{text}");
    if let Some(csv) = &args.csv {
        let mut out = String::from("iter,beta_re,beta_im,alpha_modulus,support_size,success\n");
        for r in &record.iterations {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.iter, r.beta.re, r.beta.im, r.alpha_modulus, r.support_size, r.success
            )?;
        }
        ctx.stage_output(csv, out);
    }
    ctx.finish()
}

fn cmd_estimate_q(args: EstimateQArgs) -> Result<()> {
    let mut ctx = RunContext::new("estimate-q");
    if args.n_min < 1 || args.n_min > args.n_max {
        return Err(usage("need 1 <= --n-min <= --n-max"));
    }
    let estimate = estimate_q(args.n_min..=args.n_max, args.eps_min, args.success_threshold)?;
    let mut text = serde_json::to_string_pretty(&json!({
        "eps_min": estimate.eps_min,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "q_hat": estimate.q_hat,
    }))?;
    text.push('\n');
    print!("{text}");
    if let Some(csv) = &args.csv {
        let mut out = String::from(
            "n,uniform_amplitude,predicted_breakdown,untruncated_success_iter,truncated_success_iter,all_dropped,deviated\n",
        );
        for r in &estimate.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                r.uniform_amplitude,
                r.predicted_breakdown,
                r.untruncated_success_iter.map_or(String::new(), |v| v.to_string()),
                r.truncated_success_iter.map_or(String::new(), |v| v.to_string()),
                r.all_dropped,
                r.deviated
            )?;
        }
        ctx.stage_output(csv, out);
    }
    ctx.finish()
}

fn cmd_gen_fixture(args: GenFixtureArgs) -> Result<()> {
    let mut ctx = RunContext::new("gen-fixture");
    let content = match args.kind {
        FixtureKind::Ghz => {
            let n = args.n.ok_or_else(|| usage("--kind ghz requires --n"))?;
            io::state_to_json(&StateVector::ghz(n))
        }
        FixtureKind::GsaState => {
            let n = args.n.ok_or_else(|| usage("--kind gsa-state requires --n"))?;
            let t = args.t.ok_or_else(|| usage("--kind gsa-state requires --t"))?;
            io::state_to_json(&qcomplex_core::grover::build_gsa_state(n, args.target, t))
        }
        FixtureKind::ChainH4 => io::matrix_to_json(&chain_h4()),
        FixtureKind::TavisCummings => {
            let k = args
                .atoms
                .ok_or_else(|| usage("--kind tavis-cummings requires --atoms"))?;
            let h = build_tavis_cummings(k, args.n_max, args.omega, &args.couplings, args.hbar)?;
            io::matrix_to_json(&h)
        }
        FixtureKind::Connected => {
            let ham = args
                .ham
                .as_ref()
                .ok_or_else(|| usage("--kind connected requires --ham"))?;
            let seed = args
                .seed_index
                .ok_or_else(|| usage("--kind connected requires --seed-index"))?;
            if args.pattern.is_empty() {
                return Err(usage("--kind connected requires --pattern"));
            }
            let h = io::matrix_from_json(&ctx.read_input(ham)?)?;
            let n = h
                .n_qubits()
                .ok_or(CoreError::NotQubitStructured { dim: h.dim() })?;
            let pattern = args
                .pattern
                .iter()
                .map(|s| AmplitudeType::parse(s))
                .collect::<qcomplex_core::Result<Vec<_>>>()?;
            io::state_to_json(&build_connected_state(&h, n, seed, &pattern, args.tol)?)
        }
    };
    ctx.stage_output(&args.out, content);
    ctx.finish()
}

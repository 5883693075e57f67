//! The `qec` command line.
//!
//! Exit status: 0 on success or a passing check, 1 when a correctability
//! condition fails, 2 on malformed input.

pub mod experiment;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::bounds::{gv_guaranteed_codewords, min_n_gv, min_n_hamming, sphere_volume, hamming_holds, BoundQuery};
use crate::channels::{apply_channel, ChannelSource, NoiseModel, QubitChannel};
use crate::codes::{catalogue, catalogue_code, check_condition, encode, Condition, QuantumCode};
use crate::decoder::{two_projector_correction, two_projector_protocol, Strategy, TraceEntry};
use crate::error::{invalid, Error, Result};
use crate::statespace::{fidelity_against, schmidt_diagnostics, PureState};
use experiment::{records_to_csv, run_experiment, ExperimentConfig, LogicalSpec, TableMode};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qec", version, about = "Entanglement-induced error workbench")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a correctability condition; prints the report as JSON.
    Verify(VerifyArgs),
    /// Tabulate the Hamming and Gilbert–Varshamov bounds.
    Bounds(BoundsArgs),
    /// Three-qubit phase-code walkthrough with the two-projector protocol.
    Demo3(Demo3Args),
    /// Monte Carlo encode, noise, decode runs.
    Simulate(SimulateArgs),
    /// List built-in codes and their expected verdicts.
    Catalogue(CatalogueArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Catalogue name or path to a code file.
    #[arg(long)]
    pub code: String,
    /// Defaults to the code's claimed t.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = Condition::General)]
    pub condition: Condition,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub t: usize,
    /// Last block length tabulated; defaults to the larger minimum.
    #[arg(long)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Demo3Args {
    #[arg(long, default_value = "0.6")]
    pub c0: Complex64,
    #[arg(long, default_value = "0.8")]
    pub c1: Complex64,
    /// Qubit passed through the decoherence channel; omit for none.
    #[arg(long)]
    pub qubit: Option<usize>,
    /// `⟨a₀|a₁⟩` of the decoherence channel.
    #[arg(long, default_value = "0")]
    pub overlap: Complex64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub code: String,
    /// Defaults to the code's claimed t.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, value_enum, default_value_t = TableMode::Auto)]
    pub patterns: TableMode,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// `decoherence:<overlap>`, `random:<env_dim>`, `identity`, or a channel file.
    #[arg(long, default_value = "decoherence:0")]
    pub channel: String,
    /// Noise model file; replaces --p, --channel and --qubits.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    /// `all` or comma-separated qubit indices.
    #[arg(long, default_value = "all")]
    pub qubits: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Strategy::Exhaustive)]
    pub strategy: Strategy,
    /// `random` or comma-separated complex amplitudes.
    #[arg(long, default_value = "random")]
    pub logical: String,
    /// Condition each trial on at most this many activated qubits.
    #[arg(long)]
    pub max_active: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the JSON summary here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogueArgs {
    /// Run every expected check and fail on a mismatch.
    #[arg(long)]
    pub check: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ConditionFailed(_) => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (status, bytes) = match &cli.command {
        Command::Verify(a) => verify(a)?,
        Command::Bounds(a) => bounds(a, cli.format)?,
        Command::Demo3(a) => demo3(a, cli.seed, cli.format)?,
        Command::Simulate(a) => simulate(a, cli.seed, cli.format, err)?,
        Command::Catalogue(a) => catalogue_cmd(a, cli.format)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => out.write_all(&bytes)?,
    }
    Ok(status)
}

pub fn resolve_code(spec: &str) -> Result<QuantumCode> {
    match catalogue_code(spec) {
        Some(c) => Ok(c),
        None => QuantumCode::load(Path::new(spec)),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn verify(a: &VerifyArgs) -> Result<(i32, Vec<u8>)> {
    let code = resolve_code(&a.code)?;
    let report = check_condition(&code, a.t.unwrap_or(code.claimed_t()), a.condition)?;
    Ok((if report.passed { 0 } else { 1 }, to_json(&report)?))
}

#[derive(Serialize)]
struct BoundsRow {
    n: usize,
    l: usize,
    t: usize,
    sphere_volume: String,
    hamming: bool,
    gv_codewords: String,
    gv_ok: bool,
}

#[derive(Serialize)]
struct BoundsTable {
    rows: Vec<BoundsRow>,
    min_n_hamming: usize,
    min_n_gv: usize,
}

fn bounds(a: &BoundsArgs, format: Format) -> Result<(i32, Vec<u8>)> {
    let hamming = min_n_hamming(a.l, a.t);
    let gv = min_n_gv(a.l, a.t);
    let start = a.l.max(a.t);
    let max_n = a.max_n.unwrap_or(hamming.max(gv).max(start));
    if max_n < start {
        return Err(invalid(format!("--max-n {max_n} is below the smallest valid n = {start}")));
    }
    let target = num_bigint::BigUint::one() << a.l;
    let rows = (start..=max_n)
        .map(|n| {
            let q = BoundQuery::new(n, a.l, a.t)?;
            let gv_codewords = gv_guaranteed_codewords(n, a.t);
            Ok(BoundsRow {
                n,
                l: a.l,
                t: a.t,
                sphere_volume: sphere_volume(n, a.t)?.to_string(),
                hamming: hamming_holds(q),
                gv_ok: gv_codewords >= target,
                gv_codewords: gv_codewords.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let table = BoundsTable { rows, min_n_hamming: hamming, min_n_gv: gv };
    let bytes = match format {
        Format::Json => to_json(&table)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &table.rows {
                w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
            }
            let mut bytes = w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?;
            writeln!(bytes, "# min_n_hamming {hamming}")?;
            writeln!(bytes, "# min_n_gv {gv}")?;
            bytes
        }
    };
    Ok((0, bytes))
}

/// Everything the three-qubit walkthrough computes.
#[derive(Debug, Serialize)]
pub struct Demo3Report {
    pub c0: Complex64,
    pub c1: Complex64,
    pub qubit: Option<usize>,
    pub overlap: Complex64,
    pub encoded: PureState,
    pub joint: PureState,
    pub trace: Vec<TraceEntry>,
    pub l1: u8,
    pub l2: u8,
    pub label: String,
    pub correction: Option<String>,
    pub recovered: PureState,
    pub fidelity: f64,
    pub max_schmidt_coefficient: f64,
    pub disentangled: bool,
}

pub fn run_demo3(a: &Demo3Args, seed: u64) -> Result<Demo3Report> {
    let code = catalogue_code("phase3").expect("built-in");
    let logical = PureState::from_terms(1, &[("0".parse()?, a.c0), ("1".parse()?, a.c1)])?;
    let encoded = encode(&code, &logical)?;
    let joint = match a.qubit {
        Some(q) if q >= 3 => return Err(invalid(format!("qubit {q} out of range for 3 qubits"))),
        Some(q) => apply_channel(&encoded, q, &QubitChannel::decoherence(a.overlap)?)?,
        None => encoded.clone(),
    };
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let outcome = two_projector_protocol(&joint, &code, &mut rng)?;
    let schmidt = schmidt_diagnostics(&outcome.recovered_state);
    Ok(Demo3Report {
        c0: logical.amplitudes()[0],
        c1: logical.amplitudes()[1],
        qubit: a.qubit,
        overlap: a.overlap,
        fidelity: fidelity_against(&outcome.recovered_state, &encoded)?,
        max_schmidt_coefficient: schmidt.max_coefficient,
        disentangled: schmidt.disentangled(),
        label: outcome.label(),
        correction: outcome.correction.map(|b| format!("P{b}")),
        l1: outcome.l1,
        l2: outcome.l2,
        trace: outcome.trace,
        recovered: outcome.recovered_state,
        encoded,
        joint,
    })
}

fn write_terms(buf: &mut Vec<u8>, title: &str, s: &PureState) -> Result<()> {
    writeln!(buf, "{title}:")?;
    for e in s.to_file().amps {
        if e.re.abs() < 1e-15 && e.im.abs() < 1e-15 {
            continue;
        }
        let env = if e.env_idx.is_empty() { String::new() } else { format!(" env{:?}", e.env_idx) };
        writeln!(buf, "  {:+.6}{:+.6}i |{}>{env}", e.re, e.im, e.basis)?;
    }
    Ok(())
}

fn demo3(a: &Demo3Args, seed: u64, format: Format) -> Result<(i32, Vec<u8>)> {
    let r = run_demo3(a, seed)?;
    if format == Format::Json {
        return Ok((0, to_json(&r)?));
    }
    let mut buf = Vec::new();
    writeln!(buf, "code phase3: C0 = (|000>+|011>+|101>+|110>)/2, C1 = (|111>+|100>+|010>+|001>)/2")?;
    writeln!(buf, "logical: c0 = {}, c1 = {}", r.c0, r.c1)?;
    write_terms(&mut buf, "encoded", &r.encoded)?;
    match r.qubit {
        Some(q) => writeln!(buf, "decoherence on qubit {q}, <a0|a1> = {}", r.overlap)?,
        None => writeln!(buf, "no decoherence")?,
    }
    write_terms(&mut buf, "joint state", &r.joint)?;
    for e in &r.trace {
        writeln!(buf, "measure {}: p(1) = {:.12}, result {}", e.label, e.probability, e.result)?;
    }
    writeln!(
        buf,
        "outcome L1 = {}, L2 = {} (written L2L1: {}) -> correction {}",
        r.l1,
        r.l2,
        r.label,
        r.correction.as_deref().unwrap_or("none")
    )?;
    writeln!(buf, "fidelity {:.12}, max Schmidt coefficient {:.12}, disentangled {}", r.fidelity, r.max_schmidt_coefficient, r.disentangled)?;
    writeln!(buf, "outcome table (L2L1 -> correction):")?;
    for (l2, l1) in [(1u8, 1u8), (0, 1), (1, 0), (0, 0)] {
        let c = two_projector_correction(l1, l2).map_or_else(|| "none".to_string(), |b| format!("P{b}"));
        writeln!(buf, "  {l2}{l1} -> {c}")?;
    }
    Ok((0, buf))
}

fn parse_qubits(s: &str) -> Result<Option<Vec<usize>>> {
    if s == "all" {
        return Ok(None);
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad qubit index {x:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn simulate(a: &SimulateArgs, seed: u64, format: Format, err: &mut dyn Write) -> Result<(i32, Vec<u8>)> {
    let code = resolve_code(&a.code)?;
    let noise = match &a.noise {
        Some(path) => NoiseModel::load(path)?,
        None => NoiseModel::new(a.p, ChannelSource::parse(&a.channel)?, parse_qubits(&a.qubits)?)?,
    };
    let config = ExperimentConfig {
        t: a.t.unwrap_or(code.claimed_t()),
        code,
        table: a.patterns,
        noise,
        trials: a.trials,
        seed,
        strategy: a.strategy,
        logical: LogicalSpec::parse(&a.logical)?,
        max_active: a.max_active,
        workers: a.workers,
    };
    let e = run_experiment(&config)?;
    if let Some(path) = &a.summary {
        std::fs::write(path, to_json(&e.summary)?)?;
    }
    let s = &e.summary;
    writeln!(err, "{} / {} exact successes (rate {:.6}, analytic bound {:.6})", s.successes, s.trials, s.success_rate, s.analytic_bound)?;
    let bytes = match format {
        Format::Csv => records_to_csv(&e.records)?,
        Format::Json => to_json(&serde_json::json!({ "summary": e.summary, "records": e.records }))?,
    };
    Ok((0, bytes))
}

#[derive(Serialize)]
struct CatalogueRow {
    name: String,
    n: usize,
    l: usize,
    claimed_t: usize,
    expectations: String,
}

fn catalogue_cmd(a: &CatalogueArgs, format: Format) -> Result<(i32, Vec<u8>)> {
    let entries = catalogue();
    let mut status = 0;
    let mut rows = Vec::new();
    for entry in &entries {
        let mut parts = Vec::new();
        for e in &entry.expectations {
            let mut s = format!("{}:{}:{}", e.condition, e.t, if e.passes { "pass" } else { "fail" });
            if a.check {
                let actual = check_condition(&entry.code, e.t, e.condition)?.passed;
                if actual != e.passes {
                    status = 1;
                    s.push_str("(mismatch)");
                }
            }
            parts.push(s);
        }
        rows.push(CatalogueRow {
            name: entry.code.name().to_string(),
            n: entry.code.n(),
            l: entry.code.l(),
            claimed_t: entry.code.claimed_t(),
            expectations: parts.join(";"),
        });
    }
    let bytes = match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
            }
            w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?
        }
    };
    Ok((status, bytes))
}

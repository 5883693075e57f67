//! Seeded Monte Carlo runs of encode → noise → decode.
//!
//! Trial `i` draws from `ChaCha20Rng::seed_from_u64(seed)` switched to stream
//! `i`, so its outcome depends only on `(seed, i)` and never on scheduling.
//! Within a trial the draws are, in order: the random logical state (if
//! requested), one uniform per eligible qubit for activation (repeated as a
//! block while a `max_active` cap is exceeded), one random channel per
//! activated qubit (for random channel sources), then one uniform per binary
//! syndrome measurement.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{apply_channel, NoiseModel};
use crate::codes::{encode, QuantumCode};
use crate::decoder::{correct, Strategy, SyndromeTable};
use crate::error::{invalid, Error, Result};
use crate::errors::PatternFilter;
use crate::statespace::{FactorLayout, PureState};
use crate::tolerance::{MAX_AMPLITUDES, ORTHO, ZERO_PROB};

/// Trials count as exact successes above this fidelity (and disentangled).
pub const SUCCESS_FIDELITY: f64 = 1.0 - 1e-8;

const MAX_REJECTIONS: usize = 1_000_000;

/// Which syndrome table a run decodes with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    /// First buildable of: all, degenerate, phase, amplitude.
    #[default]
    Auto,
    All,
    Phase,
    Amplitude,
    Degenerate,
}

pub fn build_table(code: &QuantumCode, t: usize, mode: TableMode) -> Result<SyndromeTable> {
    match mode {
        TableMode::Auto => SyndromeTable::build_auto(code, t),
        TableMode::All => SyndromeTable::build(code, t, PatternFilter::All),
        TableMode::Phase => SyndromeTable::build(code, t, PatternFilter::PhaseOnly),
        TableMode::Amplitude => SyndromeTable::build(code, t, PatternFilter::AmplitudeOnly),
        TableMode::Degenerate => SyndromeTable::build_degenerate(code, t, PatternFilter::All),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogicalSpec {
    RandomPerTrial,
    Fixed(Vec<Complex64>),
}

impl LogicalSpec {
    /// `random`, or comma-separated complex amplitudes such as `0.6,0.8i`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "random" {
            return Ok(LogicalSpec::RandomPerTrial);
        }
        s.split(',')
            .map(|x| x.trim().parse::<Complex64>().map_err(|_| Error::Parse(format!("bad amplitude {x:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(LogicalSpec::Fixed)
    }

    fn describe(&self) -> String {
        match self {
            LogicalSpec::RandomPerTrial => "random".into(),
            LogicalSpec::Fixed(v) => v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub code: QuantumCode,
    pub t: usize,
    pub table: TableMode,
    pub noise: NoiseModel,
    pub trials: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub logical: LogicalSpec,
    /// Condition on at most this many activated qubits (rejection sampling).
    pub max_active: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Activated qubits joined by `;`.
    pub activated: String,
    /// Syndrome pattern or `none`.
    pub syndrome: String,
    pub fidelity: f64,
    pub disentangled: bool,
    pub corrected: bool,
}

impl TrialRecord {
    pub fn success(&self) -> bool {
        self.fidelity >= SUCCESS_FIDELITY && self.disentangled
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub code: String,
    pub n: usize,
    pub l: usize,
    pub t: usize,
    pub table: TableMode,
    pub table_filter: PatternFilter,
    pub table_degenerate: bool,
    pub syndromes: usize,
    pub p: f64,
    pub channel: String,
    pub qubits: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub logical: String,
    pub max_active: Option<usize>,
    pub workers: Option<usize>,
    pub rng: &'static str,
    pub ortho_tolerance: f64,
    pub zero_probability: f64,
    pub success_fidelity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub config: ConfigEcho,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_fidelity: f64,
    pub corrected: usize,
    pub disentangled: usize,
    /// Probability that at most `t` qubits activate (given the cap, if any).
    pub analytic_bound: f64,
    /// Binomial standard error of `analytic_bound` at this trial count.
    pub bound_std_error: f64,
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `P(at most t of m activate | at most cap activate)`, each with probability `p`.
pub fn activation_bound(m: usize, t: usize, p: f64, cap: Option<usize>) -> f64 {
    let mass = |k: usize| -> f64 {
        (0..=k.min(m)).map(|i| binomial(m, i) * p.powi(i as i32) * (1.0 - p).powi((m - i) as i32)).sum()
    };
    let cap = cap.unwrap_or(m);
    let denom = mass(cap);
    if denom == 0.0 {
        return 1.0;
    }
    mass(t.min(cap)) / denom
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Rejects configurations that could exceed the amplitude cap, before any trial.
pub fn check_dimension(config: &ExperimentConfig) -> Result<()> {
    let eligible = config.noise.eligible(config.code.n())?.len();
    let worst = if config.noise.p == 0.0 { 0 } else { config.max_active.map_or(eligible, |c| c.min(eligible)) };
    let mut dim = 1usize << config.code.n();
    for _ in 0..worst {
        dim = dim.saturating_mul(config.noise.source.env_dim());
    }
    if dim > MAX_AMPLITUDES {
        return Err(Error::DimensionCap(dim));
    }
    Ok(())
}

fn run_trial(config: &ExperimentConfig, table: &SyndromeTable, eligible: &[usize], trial: usize) -> Result<TrialRecord> {
    let mut rng = trial_rng(config.seed, trial);
    let l = config.code.l();
    let logical = match &config.logical {
        LogicalSpec::RandomPerTrial => PureState::random(FactorLayout::system(l)?, &mut rng),
        LogicalSpec::Fixed(amps) => PureState::new(FactorLayout::system(l)?, amps.clone())?,
    };
    let reference = encode(&config.code, &logical)?;
    let mut activated = Vec::new();
    for attempt in 0.. {
        if attempt == MAX_REJECTIONS {
            return Err(invalid("activation cap is essentially never met"));
        }
        activated = eligible.iter().copied().filter(|_| rng.random::<f64>() < config.noise.p).collect();
        if config.max_active.is_none_or(|c| activated.len() <= c) {
            break;
        }
    }
    let mut joint = reference.clone();
    for &q in &activated {
        let ch = config.noise.source.draw(&mut rng)?;
        joint = apply_channel(&joint, q, &ch)?;
    }
    let report = correct(&joint, table, config.strategy, &mut rng, &reference)?;
    Ok(TrialRecord {
        trial,
        activated: activated.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(";"),
        syndrome: report.syndrome.map_or_else(|| "none".to_string(), |p| p.to_string()),
        fidelity: report.fidelity,
        disentangled: report.disentangled,
        corrected: report.corrected,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    if config.trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if let LogicalSpec::Fixed(a) = &config.logical {
        if a.len() != 1 << config.code.l() {
            return Err(Error::LengthMismatch(a.len(), 1 << config.code.l()));
        }
        PureState::new(FactorLayout::system(config.code.l())?, a.clone())?;
    }
    check_dimension(config)?;
    let eligible = config.noise.eligible(config.code.n())?;
    let table = build_table(&config.code, config.t, config.table)?;

    let work = || (0..config.trials).into_par_iter().map(|i| run_trial(config, &table, &eligible, i)).collect::<Result<Vec<_>>>();
    let records = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let trials = records.len();
    let successes = records.iter().filter(|r| r.success()).count();
    let bound = activation_bound(eligible.len(), config.t, config.noise.p, config.max_active);
    let summary = Summary {
        config: ConfigEcho {
            code: config.code.name().to_string(),
            n: config.code.n(),
            l: config.code.l(),
            t: config.t,
            table: config.table,
            table_filter: table.filter(),
            table_degenerate: table.is_degenerate(),
            syndromes: table.len(),
            p: config.noise.p,
            channel: config.noise.source.describe(),
            qubits: eligible.clone(),
            trials: config.trials,
            seed: config.seed,
            strategy: config.strategy,
            logical: config.logical.describe(),
            max_active: config.max_active,
            workers: config.workers,
            rng: "ChaCha20 seed_from_u64(seed), stream = trial index",
            ortho_tolerance: ORTHO,
            zero_probability: ZERO_PROB,
            success_fidelity: SUCCESS_FIDELITY,
        },
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        mean_fidelity: records.iter().map(|r| r.fidelity).sum::<f64>() / trials as f64,
        corrected: records.iter().filter(|r| r.corrected).count(),
        disentangled: records.iter().filter(|r| r.disentangled).count(),
        analytic_bound: bound,
        bound_std_error: (bound * (1.0 - bound) / trials as f64).sqrt(),
    };
    Ok(Experiment { records, summary })
}

pub fn records_to_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
    }
    w.into_inner().map_err(|e| invalid(format!("csv: {e}")))
}

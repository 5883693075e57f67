//! Projective syndrome measurement over the subspaces
//! `H_p = span{A_α P_β |C^k⟩}`, recovery, and disentanglement checks.
//!
//! Every binary measurement consumes exactly one uniform deviate from the
//! caller's generator, in walk order, and yields outcome 1 when the deviate
//! falls below the projection probability. Probabilities within
//! [`ZERO_PROB`] of 0 or 1 are treated as certain.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstrings::BitString;
use crate::codes::{check_filtered, degenerate_classes, pattern_images, Condition, QuantumCode};
use crate::error::{invalid, Error, Result};
use crate::errors::{apply_amplitude, apply_phase, enumerate_filtered, ErrorPattern, PatternFilter};
use crate::statespace::{fidelity_against, inner, project_raw, schmidt_diagnostics, PureState, Subspace};
use crate::tolerance::{GRAM, ZERO_PROB};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Exhaustive,
    Hierarchical,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Hierarchical => "hierarchical",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SyndromeEntry {
    pub pattern: ErrorPattern,
    pub subspace: Subspace,
}

impl SyndromeEntry {
    pub fn label(&self) -> String {
        format!("H[{}]", self.pattern)
    }
}

/// Ordered syndrome subspaces for one code and weight bound.
#[derive(Clone, Debug)]
pub struct SyndromeTable {
    code: String,
    n: usize,
    t: usize,
    filter: PatternFilter,
    degenerate: bool,
    entries: Vec<SyndromeEntry>,
}

fn condition_for(filter: PatternFilter) -> Condition {
    match filter {
        PatternFilter::All => Condition::General,
        PatternFilter::PhaseOnly => Condition::Phase,
        PatternFilter::AmplitudeOnly => Condition::Amplitude,
    }
}

impl SyndromeTable {
    /// One subspace per admitted pattern; requires the strict condition.
    pub fn build(code: &QuantumCode, t: usize, filter: PatternFilter) -> Result<Self> {
        let report = check_filtered(code, t, condition_for(filter), filter)?;
        if !report.passed {
            return Err(Error::ConditionFailed(Box::new(report)));
        }
        let patterns = enumerate_filtered(code.n(), t, filter)?;
        SyndromeTable::from_patterns(code, t, filter, false, patterns)
    }

    /// One subspace per class of patterns that act identically on the code;
    /// the class representative (first in canonical order) labels it.
    pub fn build_degenerate(code: &QuantumCode, t: usize, filter: PatternFilter) -> Result<Self> {
        let report = check_filtered(code, t, Condition::Degenerate, filter)?;
        if !report.passed {
            return Err(Error::ConditionFailed(Box::new(report)));
        }
        let patterns = enumerate_filtered(code.n(), t, filter)?;
        let reps = degenerate_classes(code, &patterns)?.into_iter().map(|c| c.representative).collect();
        SyndromeTable::from_patterns(code, t, filter, true, reps)
    }

    /// First table that builds among: strict over all patterns, degenerate
    /// over all patterns, strict phase-only, strict amplitude-only.
    pub fn build_auto(code: &QuantumCode, t: usize) -> Result<Self> {
        SyndromeTable::build(code, t, PatternFilter::All)
            .or_else(|_| SyndromeTable::build_degenerate(code, t, PatternFilter::All))
            .or_else(|_| SyndromeTable::build(code, t, PatternFilter::PhaseOnly))
            .or_else(|_| SyndromeTable::build(code, t, PatternFilter::AmplitudeOnly))
    }

    fn from_patterns(
        code: &QuantumCode,
        t: usize,
        filter: PatternFilter,
        degenerate: bool,
        patterns: Vec<ErrorPattern>,
    ) -> Result<Self> {
        let images = pattern_images(code, &patterns)?;
        let kdim = code.vectors().len();
        let layout = code.vectors()[0].layout().clone();
        let entries = patterns
            .into_iter()
            .zip(images.chunks(kdim))
            .map(|(pattern, members)| Ok(SyndromeEntry { pattern, subspace: Subspace::new(layout.clone(), members.to_vec())? }))
            .collect::<Result<Vec<_>>>()?;
        let table = SyndromeTable { code: code.name().to_string(), n: code.n(), t, filter, degenerate, entries };
        let defect = table.gram_defect()?;
        if defect > GRAM {
            return Err(invalid(format!("syndrome bases are not orthonormal (Gram defect {defect:.3e})")));
        }
        Ok(table)
    }

    /// Largest entry of `|G − I|` over all basis vectors of all subspaces.
    pub fn gram_defect(&self) -> Result<f64> {
        let basis: Vec<&PureState> = self.entries.iter().flat_map(|e| e.subspace.members()).collect();
        let mut worst = 0.0f64;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis[..=i].iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(b, a)? - expected).norm());
            }
        }
        Ok(worst)
    }

    pub fn code_name(&self) -> &str {
        &self.code
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn filter(&self) -> PatternFilter {
        self.filter
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn entries(&self) -> &[SyndromeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of basis vectors across all subspaces.
    pub fn basis_count(&self) -> usize {
        self.entries.iter().map(|e| e.subspace.dim()).sum()
    }

    fn union(&self, lo: usize, hi: usize) -> Vec<&Subspace> {
        self.entries[lo..hi].iter().map(|e| &e.subspace).collect()
    }

    fn union_label(&self, lo: usize, hi: usize) -> String {
        if hi - lo == 1 {
            self.entries[lo].label()
        } else {
            format!("U[{lo}..{hi}]")
        }
    }

    fn check_state(&self, state: &PureState) -> Result<()> {
        if state.qubits() != self.n {
            return Err(Error::LengthMismatch(state.qubits(), self.n));
        }
        Ok(())
    }
}

/// One binary measurement in a walk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub label: String,
    pub result: u8,
    /// Probability of outcome 1 given the preceding outcomes.
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub collapsed: PureState,
    pub syndrome: Option<ErrorPattern>,
    pub trace: Vec<TraceEntry>,
}

struct Split {
    probability: f64,
    inside: Option<PureState>,
    outside: Option<PureState>,
}

/// Projects onto the span of mutually orthogonal `parts`.
fn split(state: &PureState, parts: &[&Subspace]) -> Result<Split> {
    let mut inside = PureState::zero(state.layout().clone());
    for sub in parts {
        inside.add_scaled(num_complex::Complex64::new(1.0, 0.0), &project_raw(state, sub)?)?;
    }
    let probability = inside.norm_sqr().clamp(0.0, 1.0);
    let mut outside = state.clone();
    outside.add_scaled(num_complex::Complex64::new(-1.0, 0.0), &inside)?;
    Ok(Split {
        probability,
        inside: (probability >= ZERO_PROB).then(|| inside.normalized()).transpose()?,
        outside: (1.0 - probability >= ZERO_PROB).then(|| outside.normalized()).transpose()?,
    })
}

fn binary_measure<R: Rng + ?Sized>(
    state: &PureState,
    parts: &[&Subspace],
    label: String,
    rng: &mut R,
    trace: &mut Vec<TraceEntry>,
) -> Result<(bool, PureState)> {
    let s = split(state, parts)?;
    let u: f64 = rng.random();
    let hit = match (&s.inside, &s.outside) {
        (Some(_), None) => true,
        (None, _) => false,
        (Some(_), Some(_)) => u < s.probability,
    };
    trace.push(TraceEntry { label, result: hit as u8, probability: s.probability });
    let next = if hit { s.inside } else { s.outside };
    Ok((hit, next.expect("branch taken has nonzero weight")))
}

/// Walks the subspaces in table order, stopping at the first outcome 1.
pub fn measure_exhaustive<R: Rng + ?Sized>(state: &PureState, table: &SyndromeTable, rng: &mut R) -> Result<Measurement> {
    table.check_state(state)?;
    let mut trace = Vec::new();
    let mut cur = state.clone();
    for entry in &table.entries {
        let (hit, next) = binary_measure(&cur, &[&entry.subspace], entry.label(), rng, &mut trace)?;
        cur = next;
        if hit {
            return Ok(Measurement { collapsed: cur, syndrome: Some(entry.pattern), trace });
        }
    }
    Ok(Measurement { collapsed: cur, syndrome: None, trace })
}

/// Binary search over dyadic blocks: first the union of all subspaces, then
/// the first half of the surviving block until one subspace remains.
pub fn measure_hierarchical<R: Rng + ?Sized>(state: &PureState, table: &SyndromeTable, rng: &mut R) -> Result<Measurement> {
    table.check_state(state)?;
    let mut trace = Vec::new();
    let m = table.entries.len();
    let (hit, mut cur) = binary_measure(state, &table.union(0, m), table.union_label(0, m), rng, &mut trace)?;
    if !hit {
        return Ok(Measurement { collapsed: cur, syndrome: None, trace });
    }
    let (mut lo, mut hi) = (0, m);
    while hi - lo > 1 {
        let mid = lo + (hi - lo).div_ceil(2);
        let (hit, next) = binary_measure(&cur, &table.union(lo, mid), table.union_label(lo, mid), rng, &mut trace)?;
        cur = next;
        if hit {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Measurement { collapsed: cur, syndrome: Some(table.entries[lo].pattern), trace })
}

pub fn measure<R: Rng + ?Sized>(state: &PureState, table: &SyndromeTable, strategy: Strategy, rng: &mut R) -> Result<Measurement> {
    match strategy {
        Strategy::Exhaustive => measure_exhaustive(state, table, rng),
        Strategy::Hierarchical => measure_hierarchical(state, table, rng),
    }
}

/// Exact probability of each syndrome (table order) followed by the
/// probability of no syndrome, as induced by `strategy`'s walk.
pub fn outcome_distribution(state: &PureState, table: &SyndromeTable, strategy: Strategy) -> Result<Vec<f64>> {
    table.check_state(state)?;
    let m = table.entries.len();
    let mut probs = vec![0.0; m + 1];
    match strategy {
        Strategy::Exhaustive => {
            let mut cur = Some(state.clone());
            let mut weight = 1.0;
            for (i, entry) in table.entries.iter().enumerate() {
                let Some(s) = cur.take() else { break };
                let sp = split(&s, &[&entry.subspace])?;
                probs[i] = weight * sp.probability;
                weight *= 1.0 - sp.probability;
                cur = sp.outside;
            }
            if cur.is_some() {
                probs[m] = weight;
            }
        }
        Strategy::Hierarchical => {
            let sp = split(state, &table.union(0, m))?;
            if sp.outside.is_some() {
                probs[m] = 1.0 - sp.probability;
            }
            if let Some(inside) = sp.inside {
                descend(table, &inside, sp.probability, 0, m, &mut probs)?;
            }
        }
    }
    Ok(probs)
}

fn descend(table: &SyndromeTable, state: &PureState, weight: f64, lo: usize, hi: usize, probs: &mut [f64]) -> Result<()> {
    if hi - lo == 1 {
        probs[lo] += weight;
        return Ok(());
    }
    let mid = lo + (hi - lo).div_ceil(2);
    let sp = split(state, &table.union(lo, mid))?;
    if let Some(inside) = sp.inside {
        descend(table, &inside, weight * sp.probability, lo, mid, probs)?;
    }
    if let Some(outside) = sp.outside {
        descend(table, &outside, weight * (1.0 - sp.probability), mid, hi, probs)?;
    }
    Ok(())
}

/// Applies `P_β̄ A_ᾱ`: the amplitude flip first, then the phase.
pub fn recover(collapsed: &PureState, syndrome: &ErrorPattern) -> Result<PureState> {
    apply_phase(syndrome.beta(), &apply_amplitude(syndrome.alpha(), collapsed)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeReport {
    pub syndrome: Option<ErrorPattern>,
    pub outcome_trace: Vec<TraceEntry>,
    pub recovered_state: PureState,
    pub fidelity: f64,
    pub max_schmidt_coefficient: f64,
    pub purity: f64,
    pub disentangled: bool,
    pub corrected: bool,
}

/// Measure, recover, and score against `reference` (a system-only state).
pub fn correct<R: Rng + ?Sized>(
    state: &PureState,
    table: &SyndromeTable,
    strategy: Strategy,
    rng: &mut R,
    reference: &PureState,
) -> Result<DecodeReport> {
    let m = measure(state, table, strategy, rng)?;
    let recovered = match &m.syndrome {
        Some(p) => recover(&m.collapsed, p)?,
        None => m.collapsed,
    };
    let fidelity = fidelity_against(&recovered, reference)?;
    let schmidt = schmidt_diagnostics(&recovered);
    Ok(DecodeReport {
        syndrome: m.syndrome,
        outcome_trace: m.trace,
        fidelity,
        max_schmidt_coefficient: schmidt.max_coefficient,
        purity: schmidt.purity,
        disentangled: schmidt.disentangled(),
        corrected: m.syndrome.is_some(),
        recovered_state: recovered,
    })
}

/// Result of the two-projector protocol on a three-qubit phase code.
#[derive(Clone, Debug, Serialize)]
pub struct TwoProjectorOutcome {
    /// Outcome of `L₁`, the projector onto `span{C^k, P₁₀₀ C^k}`.
    pub l1: u8,
    /// Outcome of `L₂`, the projector onto `span{C^k, P₀₁₀ C^k}`.
    pub l2: u8,
    /// The phase correction applied, if any.
    pub correction: Option<BitString>,
    pub trace: Vec<TraceEntry>,
    pub recovered_state: PureState,
}

impl TwoProjectorOutcome {
    /// Outcomes written `L₂L₁`, the order in which the correction table
    /// `11 → none, 01 → P₁₀₀, 10 → P₀₁₀, 00 → P₀₀₁` reads correctly.
    pub fn label(&self) -> String {
        format!("{}{}", self.l2, self.l1)
    }
}

/// Correction selected by the `(L₁, L₂)` outcomes.
pub fn two_projector_correction(l1: u8, l2: u8) -> Option<BitString> {
    let beta = match (l1, l2) {
        (1, 1) => return None,
        (1, 0) => "100",
        (0, 1) => "010",
        _ => "001",
    };
    Some(beta.parse().expect("literal bit string"))
}

/// Measures `L₁` then `L₂` and applies the mapped phase correction.
pub fn two_projector_protocol<R: Rng + ?Sized>(state: &PureState, code: &QuantumCode, rng: &mut R) -> Result<TwoProjectorOutcome> {
    if code.n() != 3 || code.l() != 1 {
        return Err(invalid("the two-projector protocol needs a three-qubit code with one logical qubit"));
    }
    if state.qubits() != 3 {
        return Err(Error::LengthMismatch(state.qubits(), 3));
    }
    let projector = |beta: &str| -> Result<Subspace> {
        let beta: BitString = beta.parse()?;
        let mut members = code.vectors().to_vec();
        for v in code.vectors() {
            members.push(apply_phase(&beta, v)?);
        }
        Subspace::new(code.vectors()[0].layout().clone(), members)
    };
    let mut trace = Vec::new();
    let (h1, s1) = binary_measure(state, &[&projector("100")?], "L1".into(), rng, &mut trace)?;
    let (h2, s2) = binary_measure(&s1, &[&projector("010")?], "L2".into(), rng, &mut trace)?;
    let (l1, l2) = (h1 as u8, h2 as u8);
    let correction = two_projector_correction(l1, l2);
    let recovered_state = match &correction {
        Some(beta) => apply_phase(beta, &s2)?,
        None => s2,
    };
    Ok(TwoProjectorOutcome { l1, l2, correction, trace, recovered_state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_channel, QubitChannel};
    use crate::codes::{catalogue_code, encode};
    use crate::errors::apply_pattern;
    use crate::statespace::FactorLayout;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    #[test]
    fn table_sizes() {
        let phase3 = catalogue_code("phase3").unwrap();
        let t = SyndromeTable::build(&phase3, 1, PatternFilter::PhaseOnly).unwrap();
        let betas: Vec<String> = t.entries().iter().map(|e| e.pattern.beta().to_string()).collect();
        assert_eq!(betas, ["(000)", "(001)", "(010)", "(100)"]);
        assert_eq!(t.basis_count(), 8);
        assert!(matches!(SyndromeTable::build(&phase3, 1, PatternFilter::All), Err(Error::ConditionFailed(_))));

        let t0 = SyndromeTable::build(&phase3, 0, PatternFilter::All).unwrap();
        assert_eq!(t0.len(), 1);
        assert!(t0.entries()[0].pattern.is_identity());

        let steane = catalogue_code("steane7").unwrap();
        let t = SyndromeTable::build(&steane, 1, PatternFilter::All).unwrap();
        assert_eq!(t.len(), 22);
        assert_eq!(t.basis_count(), 44);

        let shor = catalogue_code("shor9").unwrap();
        assert!(SyndromeTable::build(&shor, 1, PatternFilter::All).is_err());
        let t = SyndromeTable::build_degenerate(&shor, 1, PatternFilter::All).unwrap();
        assert_eq!(t.len(), 22);
        assert!(t.is_degenerate());
        let auto = SyndromeTable::build_auto(&phase3, 1).unwrap();
        assert_eq!(auto.filter(), PatternFilter::PhaseOnly);
    }

    #[test]
    fn uncorrupted_state_has_zero_syndrome() {
        let code = catalogue_code("perfect5").unwrap();
        let table = SyndromeTable::build(&code, 1, PatternFilter::All).unwrap();
        let psi = encode(&code, &PureState::random(FactorLayout::system(1).unwrap(), &mut rng(1))).unwrap();
        for strategy in [Strategy::Exhaustive, Strategy::Hierarchical] {
            let m = measure(&psi, &table, strategy, &mut rng(2)).unwrap();
            assert!(m.syndrome.unwrap().is_identity());
            assert!(m.collapsed.distance(&psi).unwrap() < 1e-12);
        }
    }

    #[test]
    fn single_error_identified_and_recovered() {
        let code = catalogue_code("perfect5").unwrap();
        let table = SyndromeTable::build(&code, 1, PatternFilter::All).unwrap();
        let psi = encode(&code, &PureState::random(FactorLayout::system(1).unwrap(), &mut rng(3))).unwrap();
        for entry in table.entries() {
            let corrupted = apply_pattern(&entry.pattern, &psi).unwrap();
            for strategy in [Strategy::Exhaustive, Strategy::Hierarchical] {
                let m = measure(&corrupted, &table, strategy, &mut rng(4)).unwrap();
                assert_eq!(m.syndrome, Some(entry.pattern));
                let back = recover(&m.collapsed, &entry.pattern).unwrap();
                assert!(back.distance(&psi).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn hierarchical_uses_logarithmic_measurements() {
        let code = catalogue_code("perfect5").unwrap();
        let table = SyndromeTable::build(&code, 1, PatternFilter::All).unwrap();
        let psi = encode(&code, &PureState::basis(&bs("0")).unwrap()).unwrap();
        let m = measure_hierarchical(&psi, &table, &mut rng(0)).unwrap();
        // 1 + ceil(log2 16)
        assert_eq!(m.trace.len(), 5);
        assert_eq!(m.trace[0].label, "U[0..16]");
        let single = SyndromeTable::build(&code, 0, PatternFilter::All).unwrap();
        let m = measure_hierarchical(&psi, &single, &mut rng(0)).unwrap();
        assert_eq!(m.trace.len(), 1);
        let e = measure_exhaustive(&psi, &single, &mut rng(0)).unwrap();
        assert_eq!(m.trace, e.trace);
    }

    #[test]
    fn decohered_phase3_distribution() {
        let code = catalogue_code("phase3").unwrap();
        let table = SyndromeTable::build(&code, 1, PatternFilter::PhaseOnly).unwrap();
        let ch = QubitChannel::decoherence(Complex64::new(0.0, 0.0)).unwrap();
        let psi = encode(&code, &PureState::random(FactorLayout::system(1).unwrap(), &mut rng(5))).unwrap();
        let joint = apply_channel(&psi, 0, &ch).unwrap();
        for strategy in [Strategy::Exhaustive, Strategy::Hierarchical] {
            let d = outcome_distribution(&joint, &table, strategy).unwrap();
            // zero, β=001, β=010, β=100, none
            let expected = [0.5, 0.0, 0.0, 0.5, 0.0];
            for (x, y) in d.iter().zip(expected) {
                assert!((x - y).abs() < 1e-12, "{strategy}: {d:?}");
            }
        }
    }

    #[test]
    fn no_syndrome_outside_all_subspaces() {
        let code = catalogue_code("perfect5").unwrap();
        let table = SyndromeTable::build(&code, 0, PatternFilter::All).unwrap();
        // orthogonal to the code space
        let v = apply_pattern(&"A(10000)P(00000)".parse().unwrap(), &code.vectors()[0]).unwrap();
        for strategy in [Strategy::Exhaustive, Strategy::Hierarchical] {
            let m = measure(&v, &table, strategy, &mut rng(0)).unwrap();
            assert!(m.syndrome.is_none());
            assert!(m.collapsed.distance(&v).unwrap() < 1e-12);
        }
    }

    #[test]
    fn recover_inverts_patterns() {
        let s = PureState::random(FactorLayout::system(3).unwrap(), &mut rng(9));
        for a in BitString::all(3) {
            for b in BitString::all(3) {
                let p = ErrorPattern::new(a, b).unwrap();
                let back = recover(&apply_pattern(&p, &s).unwrap(), &p).unwrap();
                assert!(back.distance(&s).unwrap() < 1e-12);
            }
        }
        assert_eq!(recover(&s, &ErrorPattern::identity(3)).unwrap(), s);
    }

    #[test]
    fn two_projector_outcome_map() {
        assert_eq!(two_projector_correction(1, 1), None);
        assert_eq!(two_projector_correction(1, 0), Some(bs("100")));
        assert_eq!(two_projector_correction(0, 1), Some(bs("010")));
        assert_eq!(two_projector_correction(0, 0), Some(bs("001")));

        let code = catalogue_code("phase3").unwrap();
        let psi = encode(&code, &PureState::random(FactorLayout::system(1).unwrap(), &mut rng(6))).unwrap();
        let out = two_projector_protocol(&psi, &code, &mut rng(1)).unwrap();
        assert_eq!((out.l1, out.l2), (1, 1));
        assert_eq!(out.label(), "11");
        assert!(out.correction.is_none());

        for (beta, label) in [("100", "01"), ("010", "10"), ("001", "00")] {
            let corrupted = apply_phase(&bs(beta), &psi).unwrap();
            let out = two_projector_protocol(&corrupted, &code, &mut rng(1)).unwrap();
            assert_eq!(out.label(), label);
            assert_eq!(out.correction, Some(bs(beta)));
            assert!(out.recovered_state.distance(&psi).unwrap() < 1e-12);
        }
    }

    #[test]
    fn correct_report_is_deterministic() {
        let code = catalogue_code("shor9").unwrap();
        let table = SyndromeTable::build_degenerate(&code, 1, PatternFilter::All).unwrap();
        let logical = PureState::random(FactorLayout::system(1).unwrap(), &mut rng(7));
        let psi = encode(&code, &logical).unwrap();
        let ch = QubitChannel::random(4, &mut rng(8)).unwrap();
        let joint = apply_channel(&psi, 4, &ch).unwrap();
        let run = |seed| {
            let r = correct(&joint, &table, Strategy::Hierarchical, &mut rng(seed), &psi).unwrap();
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(run(42), run(42));
        let r = correct(&joint, &table, Strategy::Exhaustive, &mut rng(42), &psi).unwrap();
        assert!(r.fidelity > 1.0 - 1e-8);
        assert!(r.disentangled);
        assert!(r.corrected);
    }
}

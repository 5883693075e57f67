//! Quantum codes: code-vectors, correctability checkers, encoder synthesis,
//! component extraction and a small built-in catalogue.
//!
//! The checkers build the images `A_α P_β |C^k⟩` of every code-vector under
//! every admitted pattern and compare their Gram matrix with the identity.
//! An off-diagonal entry is exactly `⟨C^k|P_β A_α A_α' P_β'|C^l⟩`.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitstrings::BitString;
use crate::error::{invalid, Error, Result};
use crate::errors::{apply_pattern, apply_phase, enumerate_filtered, ErrorPattern, PatternFilter};
use crate::statespace::{inner, FactorLayout, PureState};
use crate::tolerance::ORTHO;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCode {
    name: String,
    n: usize,
    l: usize,
    claimed_t: usize,
    vectors: Vec<PureState>,
}

impl QuantumCode {
    /// Checks the vector count, layouts and orthonormality.
    pub fn new(name: impl Into<String>, n: usize, l: usize, claimed_t: usize, vectors: Vec<PureState>) -> Result<Self> {
        let name = name.into();
        if l > n {
            return Err(invalid(format!("code {name}: l = {l} exceeds n = {n}")));
        }
        if vectors.len() != 1 << l {
            return Err(invalid(format!("code {name}: expected {} code-vectors, got {}", 1 << l, vectors.len())));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.qubits() != n || !v.layout().is_system_only() {
                return Err(invalid(format!("code {name}: vector {i} is not an {n}-qubit system state")));
            }
            for (j, w) in vectors[..=i].iter().enumerate() {
                let ip = inner(w, v)?;
                let expected = if i == j { 1.0 } else { 0.0 };
                if (ip - expected).norm() > ORTHO {
                    return Err(invalid(format!("code {name}: ⟨C^{j}|C^{i}⟩ = {ip}, expected {expected}")));
                }
            }
        }
        Ok(QuantumCode { name, n, l, claimed_t, vectors })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn claimed_t(&self) -> usize {
        self.claimed_t
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn from_file(file: &CodeFile) -> Result<Self> {
        let vectors = file
            .vectors
            .iter()
            .map(|entries| {
                let mut v = PureState::zero(FactorLayout::system(file.n)?);
                for e in entries {
                    if e.basis.len() != file.n {
                        return Err(Error::LengthMismatch(e.basis.len(), file.n));
                    }
                    v.amplitudes_mut()[e.basis.index() as usize] += Complex64::new(e.re, e.im);
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        QuantumCode::new(file.name.clone(), file.n, file.l, file.t, vectors)
    }

    pub fn to_file(&self) -> CodeFile {
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                v.amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                    .map(|(j, a)| BasisEntry {
                        basis: BitString::from_index(self.n, j as u64).expect("index in range"),
                        re: a.re,
                        im: a.im,
                    })
                    .collect()
            })
            .collect();
        CodeFile { name: self.name.clone(), n: self.n, l: self.l, t: self.claimed_t, vectors }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: CodeFile = serde_json::from_str(&text)?;
        QuantumCode::from_file(&file)
    }
}

/// JSON form of a code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub name: String,
    pub n: usize,
    pub l: usize,
    pub t: usize,
    pub vectors: Vec<Vec<BasisEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub basis: BitString,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Which correctability criterion to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// `⟨C^k|A_α A_α'|C^l⟩ = δ_kl δ_αα'`
    Amplitude,
    /// `⟨C^k|P_β P_β'|C^l⟩ = δ_kl δ_ββ'`
    Phase,
    /// `⟨C^k|P_β A_α A_α' P_β'|C^l⟩ = δ_kl δ_αα' δ_ββ'`
    General,
    /// The general condition after merging patterns that act identically
    /// (up to one phase) on every code-vector.
    Degenerate,
}

impl Condition {
    pub fn filter(&self) -> PatternFilter {
        match self {
            Condition::Amplitude => PatternFilter::AmplitudeOnly,
            Condition::Phase => PatternFilter::PhaseOnly,
            Condition::General | Condition::Degenerate => PatternFilter::All,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Amplitude => "amplitude",
            Condition::Phase => "phase",
            Condition::General => "general",
            Condition::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

/// One failing Gram entry: `⟨C^k| (A_α P_β)† (A_α' P_β') |C^l⟩ = value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k: usize,
    pub l: usize,
    pub pattern: ErrorPattern,
    pub pattern_prime: ErrorPattern,
    pub value: Complex64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub code: String,
    pub condition: Condition,
    pub t: usize,
    pub passed: bool,
    /// Number of distinct Gram entries compared.
    pub checked: usize,
    /// Largest `|inner − expected|` seen, passing or not.
    pub worst: f64,
    /// Patterns kept after merging (equals the pattern count except for
    /// the degenerate condition).
    pub patterns: usize,
    /// Each unordered pair reported once, in canonical order.
    pub violations: Vec<Violation>,
}

/// A set of patterns whose images coincide on the code, up to `phase`
/// relative to the representative.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternClass {
    pub representative: ErrorPattern,
    pub members: Vec<(ErrorPattern, Complex64)>,
}

fn check_t(code: &QuantumCode, t: usize) -> Result<()> {
    if t > code.n {
        return Err(invalid(format!("t = {t} exceeds n = {}", code.n)));
    }
    Ok(())
}

/// `E_p |C^k⟩` for every pattern (major) and code-vector (minor).
pub(crate) fn pattern_images(code: &QuantumCode, patterns: &[ErrorPattern]) -> Result<Vec<PureState>> {
    patterns
        .par_iter()
        .map(|p| code.vectors.iter().map(|v| apply_pattern(p, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

fn gram_report(code: &QuantumCode, condition: Condition, t: usize, patterns: &[ErrorPattern]) -> Result<ConditionReport> {
    let images = pattern_images(code, patterns)?;
    let kdim = code.vectors.len();
    let rows: Vec<(f64, Vec<Violation>)> = (0..images.len())
        .into_par_iter()
        .map(|i| {
            let mut worst = 0.0f64;
            let mut bad = Vec::new();
            for j in i..images.len() {
                let value = inner(&images[i], &images[j]).expect("images share a layout");
                let expected = if i == j { 1.0 } else { 0.0 };
                let dev = (value - expected).norm();
                worst = worst.max(dev);
                if dev > ORTHO {
                    bad.push(Violation {
                        k: i % kdim,
                        l: j % kdim,
                        pattern: patterns[i / kdim],
                        pattern_prime: patterns[j / kdim],
                        value,
                        expected,
                    });
                }
            }
            (worst, bad)
        })
        .collect();
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let violations: Vec<Violation> = rows.into_iter().flat_map(|r| r.1).collect();
    let m = images.len();
    Ok(ConditionReport {
        code: code.name.clone(),
        condition,
        t,
        passed: violations.is_empty(),
        checked: m * (m + 1) / 2,
        worst,
        patterns: patterns.len(),
        violations,
    })
}

pub fn check_amplitude_condition(code: &QuantumCode, t: usize) -> Result<ConditionReport> {
    check_condition(code, t, Condition::Amplitude)
}

pub fn check_phase_condition(code: &QuantumCode, t: usize) -> Result<ConditionReport> {
    check_condition(code, t, Condition::Phase)
}

pub fn check_general_condition(code: &QuantumCode, t: usize) -> Result<ConditionReport> {
    check_condition(code, t, Condition::General)
}

pub fn check_condition(code: &QuantumCode, t: usize, condition: Condition) -> Result<ConditionReport> {
    check_filtered(code, t, condition, condition.filter())
}

/// Like [`check_condition`] but over an explicit pattern family; used when
/// a degenerate code is admitted with a restricted table.
pub fn check_filtered(code: &QuantumCode, t: usize, condition: Condition, filter: PatternFilter) -> Result<ConditionReport> {
    check_t(code, t)?;
    let patterns = enumerate_filtered(code.n, t, filter)?;
    match condition {
        Condition::Degenerate => {
            let classes = degenerate_classes(code, &patterns)?;
            let reps: Vec<ErrorPattern> = classes.iter().map(|c| c.representative).collect();
            gram_report(code, condition, t, &reps)
        }
        _ => gram_report(code, condition, t, &patterns),
    }
}

/// Groups `patterns` (canonical order) into classes whose images agree on
/// every code-vector up to a common unit phase. The first pattern of each
/// class is its representative.
pub fn degenerate_classes(code: &QuantumCode, patterns: &[ErrorPattern]) -> Result<Vec<PatternClass>> {
    let images = pattern_images(code, patterns)?;
    let kdim = code.vectors.len();
    let mut classes: Vec<(usize, PatternClass)> = Vec::new();
    for (pi, p) in patterns.iter().enumerate() {
        let mine = &images[pi * kdim..(pi + 1) * kdim];
        let mut joined = false;
        for (ri, class) in classes.iter_mut() {
            let rep = &images[*ri * kdim..(*ri + 1) * kdim];
            let phase = inner(&rep[0], &mine[0])?;
            if (phase.norm() - 1.0).abs() > ORTHO {
                continue;
            }
            let same = rep.iter().zip(mine).skip(1).all(|(a, b)| {
                inner(a, b).map(|c| (c - phase).norm() <= ORTHO).unwrap_or(false)
            });
            if same {
                class.members.push((*p, phase));
                joined = true;
                break;
            }
        }
        if !joined {
            classes.push((pi, PatternClass { representative: *p, members: vec![(*p, Complex64::new(1.0, 0.0))] }));
        }
    }
    Ok(classes.into_iter().map(|(_, c)| c).collect())
}

/// Unitary `U` with `U(|k⟩⊗|0…0⟩) = |C^k⟩`, data qubits leading.
///
/// The other columns come from Gram–Schmidt over the computational basis
/// in ascending index order, skipping candidates dependent within 1e-9.
pub fn synthesize_encoder(code: &QuantumCode) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << code.n;
    let shift = code.n - code.l;
    let mut basis: Vec<Vec<Complex64>> = code.vectors.iter().map(|v| v.amplitudes().to_vec()).collect();
    for j in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut r = vec![Complex64::new(0.0, 0.0); dim];
        r[j] = Complex64::new(1.0, 0.0);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c: Complex64 = b.iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
        }
        let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > ORTHO {
            r.iter_mut().for_each(|z| *z /= norm);
            basis.push(r);
        }
    }
    assert_eq!(basis.len(), dim, "basis completion is rank deficient");

    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    let mut completions = basis.drain(code.vectors.len()..);
    for col in 0..dim {
        let src = if col & ((1 << shift) - 1) == 0 {
            code.vectors[col >> shift].amplitudes().to_vec()
        } else {
            completions.next().expect("enough completion vectors")
        };
        for (row, z) in src.into_iter().enumerate() {
            u[(row, col)] = z;
        }
    }
    Ok(u)
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let g = u.adjoint() * u;
    g.iter()
        .enumerate()
        .map(|(idx, z)| {
            let (r, c) = (idx % g.nrows(), idx / g.nrows());
            (z - if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).norm()
        })
        .fold(0.0, f64::max)
}

/// `Σ_k c_k |C^k⟩` with `c_k` the amplitudes of an `l`-qubit state.
pub fn encode(code: &QuantumCode, logical: &PureState) -> Result<PureState> {
    if !logical.layout().is_system_only() || logical.qubits() != code.l {
        return Err(invalid(format!(
            "logical state must be a system state on {} qubits, got {}",
            code.l,
            logical.qubits()
        )));
    }
    if !logical.is_normalized() {
        return Err(Error::NotNormalized(logical.norm_sqr()));
    }
    let mut out = PureState::zero(FactorLayout::system(code.n)?);
    for (c, v) in logical.amplitudes().iter().zip(&code.vectors) {
        out.add_scaled(*c, v)?;
    }
    Ok(out)
}

/// The piece of `vector` whose bits at `affected` equal `gamma`, computed
/// through the phase-projector expansion
/// `2^{−m} Σ_β (−1)^{γ·β} P_β |vector⟩` over β supported on `affected`.
pub fn extract_component(vector: &PureState, affected: &[usize], gamma: &BitString) -> Result<PureState> {
    let n = vector.qubits();
    if affected.len() != gamma.len() {
        return Err(Error::LengthMismatch(affected.len(), gamma.len()));
    }
    for (i, &p) in affected.iter().enumerate() {
        if p >= n {
            return Err(invalid(format!("affected position {p} out of range for {n} qubits")));
        }
        if affected[..i].contains(&p) {
            return Err(invalid(format!("affected position {p} repeated")));
        }
    }
    let m = affected.len();
    let mut out = PureState::zero(vector.layout().clone());
    for sub in BitString::all(m) {
        let mut beta = BitString::zeros(n);
        for (j, &p) in affected.iter().enumerate() {
            beta.set(p, sub.get(j));
        }
        let sign = if gamma.dot_mod2(&sub)? == 1 { -1.0 } else { 1.0 };
        out.add_scaled(Complex64::new(sign / (1u64 << m) as f64, 0.0), &apply_phase(&beta, vector)?)?;
    }
    Ok(out)
}

/// Expected verdict for one check on a catalogue code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub condition: Condition,
    pub t: usize,
    pub passes: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub code: QuantumCode,
    pub expectations: Vec<Expectation>,
}

const CATALOGUE_DATA: [(&str, &str); 5] = [
    ("phase3", include_str!("../data/phase3.json")),
    ("shor9", include_str!("../data/shor9.json")),
    ("steane7", include_str!("../data/steane7.json")),
    ("perfect5", include_str!("../data/perfect5.json")),
    ("trivial1", include_str!("../data/trivial1.json")),
];

fn expectations(name: &str) -> Vec<Expectation> {
    use Condition::*;
    let e = |condition, t, passes| Expectation { condition, t, passes };
    match name {
        "phase3" => vec![e(Phase, 1, true), e(Amplitude, 1, false), e(General, 1, false), e(Phase, 3, false)],
        // degenerate: Z on any two qubits of one block acts trivially
        "shor9" => vec![e(Amplitude, 1, true), e(Phase, 1, false), e(General, 1, false), e(Degenerate, 1, true)],
        "steane7" | "perfect5" => vec![e(General, 1, true), e(General, 2, false)],
        "trivial1" => vec![e(General, 0, true), e(General, 1, false)],
        _ => Vec::new(),
    }
}

/// Built-in codes with their expected checker verdicts.
pub fn catalogue() -> Vec<CatalogueEntry> {
    CATALOGUE_DATA
        .iter()
        .map(|(name, text)| {
            let file: CodeFile = serde_json::from_str(text).expect("catalogue JSON is well formed");
            let code = QuantumCode::from_file(&file).expect("catalogue code is valid");
            CatalogueEntry { code, expectations: expectations(name) }
        })
        .collect()
}

pub fn catalogue_code(name: &str) -> Option<QuantumCode> {
    CATALOGUE_DATA.iter().find(|(n, _)| *n == name).map(|(_, text)| {
        let file: CodeFile = serde_json::from_str(text).expect("catalogue JSON is well formed");
        QuantumCode::from_file(&file).expect("catalogue code is valid")
    })
}

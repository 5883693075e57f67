//! Per-qubit entanglement with the environment.
//!
//! A [`QubitChannel`] sends `|γ⟩|a⟩ ↦ Σ_γ' |γ'⟩|a_{γ,γ'}⟩`. Each qubit that
//! passes through a channel acquires its own fresh environment factor;
//! untouched qubits carry none.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bitstrings::BitString;
use crate::error::{invalid, Error, Result};
use crate::statespace::{EnvFactor, FactorLayout, PureState};
use crate::tolerance::ORTHO;

/// The four environment vectors `a_{γ,γ'}`, indexed `[γ][γ']`.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitChannel {
    env_dim: usize,
    a: [[Vec<Complex64>; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ChannelViolation {
    /// `‖a_{γ,0}‖² + ‖a_{γ,1}‖²` for input bit γ, should be 1.
    RowNorm { input: u8, value: f64 },
    /// `⟨a00|a10⟩ + ⟨a01|a11⟩`, should be 0.
    CrossOverlap { value: Complex64 },
}

impl fmt::Display for ChannelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelViolation::RowNorm { input, value } => {
                write!(f, "row {input} has squared norm {value} (expected 1)")
            }
            ChannelViolation::CrossOverlap { value } => write!(f, "rows overlap by {value} (expected 0)"),
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

impl QubitChannel {
    /// Checks only the vector dimensions; see [`QubitChannel::validate`].
    pub fn new(
        a00: Vec<Complex64>,
        a01: Vec<Complex64>,
        a10: Vec<Complex64>,
        a11: Vec<Complex64>,
    ) -> Result<Self> {
        let env_dim = a00.len();
        if env_dim == 0 {
            return Err(invalid("environment dimension must be at least 1"));
        }
        for v in [&a01, &a10, &a11] {
            if v.len() != env_dim {
                return Err(Error::LengthMismatch(v.len(), env_dim));
            }
        }
        Ok(QubitChannel { env_dim, a: [[a00, a01], [a10, a11]] })
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// `a_{γ,γ'}`.
    pub fn vector(&self, input: u8, output: u8) -> &[Complex64] {
        &self.a[input as usize][output as usize]
    }

    pub fn identity() -> Self {
        let e0 = vec![Complex64::new(1.0, 0.0)];
        let z = vec![Complex64::new(0.0, 0.0)];
        QubitChannel { env_dim: 1, a: [[e0.clone(), z.clone()], [z, e0]] }
    }

    /// Unitarity closure: the three constraints that let the map extend to a
    /// unitary on qubit ⊗ environment from a fixed initial `|a⟩`.
    pub fn validate(&self) -> std::result::Result<(), Vec<ChannelViolation>> {
        let mut bad = Vec::new();
        for input in 0..2u8 {
            let value = norm_sqr(&self.a[input as usize][0]) + norm_sqr(&self.a[input as usize][1]);
            if (value - 1.0).abs() > ORTHO {
                bad.push(ChannelViolation::RowNorm { input, value });
            }
        }
        let value = dot(&self.a[0][0], &self.a[1][0]) + dot(&self.a[0][1], &self.a[1][1]);
        if value.norm() > ORTHO {
            bad.push(ChannelViolation::CrossOverlap { value });
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(|v| {
            invalid(format!(
                "invalid channel: {}",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
            ))
        })
    }

    /// Pure decoherence with `⟨a_0|a_1⟩ = overlap` in a two-dimensional
    /// environment: `a00 = e0`, `a11 = overlap·e0 + √(1−|overlap|²)·e1`.
    pub fn decoherence(overlap: Complex64) -> Result<Self> {
        let mag = overlap.norm();
        if mag > 1.0 + ORTHO {
            return Err(invalid(format!("|overlap| = {mag} exceeds 1")));
        }
        let z = Complex64::new(0.0, 0.0);
        let rest = (1.0 - mag * mag).max(0.0).sqrt();
        Ok(QubitChannel {
            env_dim: 2,
            a: [
                [vec![Complex64::new(1.0, 0.0), z], vec![z, z]],
                [vec![z, z], vec![overlap, Complex64::new(rest, 0.0)]],
            ],
        })
    }

    /// Random valid channel: the two columns `(a_{γ,0}; a_{γ,1})` are an
    /// orthonormalized pair of complex Gaussian vectors in `2·env_dim`.
    pub fn random<R: Rng + ?Sized>(env_dim: usize, rng: &mut R) -> Result<Self> {
        if env_dim == 0 {
            return Err(invalid("environment dimension must be at least 1"));
        }
        let d = 2 * env_dim;
        let mut gauss = || -> Vec<Complex64> {
            (0..d).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
        };
        let mut c0 = gauss();
        let mut c1 = gauss();
        let n0 = norm_sqr(&c0).sqrt();
        c0.iter_mut().for_each(|x| *x /= n0);
        for _ in 0..2 {
            let proj = dot(&c0, &c1);
            for (x, y) in c1.iter_mut().zip(&c0) {
                *x -= proj * y;
            }
        }
        let n1 = norm_sqr(&c1).sqrt();
        c1.iter_mut().for_each(|x| *x /= n1);
        let (a00, a01) = c0.split_at(env_dim);
        let (a10, a11) = c1.split_at(env_dim);
        QubitChannel::new(a00.to_vec(), a01.to_vec(), a10.to_vec(), a11.to_vec())
    }

    pub fn to_file(&self) -> ChannelFile {
        let conv = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
        ChannelFile {
            env_dim: self.env_dim,
            a00: conv(&self.a[0][0]),
            a01: conv(&self.a[0][1]),
            a10: conv(&self.a[1][0]),
            a11: conv(&self.a[1][1]),
        }
    }

    pub fn from_file(file: &ChannelFile) -> Result<Self> {
        let conv = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>();
        let ch = QubitChannel::new(conv(&file.a00), conv(&file.a01), conv(&file.a10), conv(&file.a11))?;
        if ch.env_dim != file.env_dim {
            return Err(Error::LengthMismatch(ch.env_dim, file.env_dim));
        }
        Ok(ch)
    }
}

/// Entangles `qubit` with a fresh environment factor appended to the layout.
pub fn apply_channel(state: &PureState, qubit: usize, ch: &QubitChannel) -> Result<PureState> {
    ch.ensure_valid()?;
    let old = state.layout();
    if qubit >= old.qubits() {
        return Err(invalid(format!("qubit {qubit} out of range for {} qubits", old.qubits())));
    }
    if old.has_env(qubit) {
        return Err(invalid(format!("qubit {qubit} is already entangled with an environment factor")));
    }
    let layout = old.with_env(qubit, ch.env_dim)?;
    let (env_old, d) = (old.env_dim(), ch.env_dim);
    let bit = 1usize << (old.qubits() - 1 - qubit);
    let mut out = PureState::zero(layout);
    let amps = out.amplitudes_mut();
    for (j, x) in state.amplitudes().iter().enumerate() {
        if x.re == 0.0 && x.im == 0.0 {
            continue;
        }
        let (q, e) = (j / env_old, j % env_old);
        let gamma = (q & bit != 0) as usize;
        for out_bit in 0..2 {
            let q2 = if out_bit == 1 { q | bit } else { q & !bit };
            let base = (q2 * env_old + e) * d;
            for (k, a) in ch.a[gamma][out_bit].iter().enumerate() {
                amps[base + k] += x * a;
            }
        }
    }
    Ok(out)
}

/// Applies each `(qubit, channel)` in order.
pub fn dissipate(state: &PureState, channels: &[(usize, QubitChannel)]) -> Result<PureState> {
    channels.iter().try_fold(state.clone(), |s, (q, ch)| apply_channel(&s, *q, ch))
}

/// Environment state attached to `A_α P_β` in the decomposition of a
/// dissipated state:
/// `2^{−m} Σ_γ (−1)^{γ·β} ⊗_j a^{(j)}_{γ_j, γ_j+α_j}` over the `m`
/// affected qubits, factors in the order of `channels`.
pub fn residue_oracle(channels: &[(usize, QubitChannel)], alpha: &BitString, beta: &BitString) -> Result<PureState> {
    if alpha.len() != beta.len() {
        return Err(Error::LengthMismatch(alpha.len(), beta.len()));
    }
    let n = alpha.len();
    let affected: Vec<usize> = channels.iter().map(|(q, _)| *q).collect();
    if let Some(&q) = affected.iter().find(|&&q| q >= n) {
        return Err(invalid(format!("affected qubit {q} out of range for {n} qubits")));
    }
    let region = BitString::from_positions(n, &affected)?;
    if !alpha.is_within(&region)? || !beta.is_within(&region)? {
        return Err(invalid(format!("pattern A{alpha}P{beta} reaches outside the affected qubits {affected:?}")));
    }
    let env: Vec<EnvFactor> = channels.iter().map(|(q, ch)| EnvFactor { qubit: *q, dim: ch.env_dim }).collect();
    let layout = FactorLayout::new(0, env)?;
    let m = channels.len();
    let scale = Complex64::new(1.0 / (1u64 << m) as f64, 0.0);
    let mut out = PureState::zero(layout);
    let acc = out.amplitudes_mut();
    for gamma in BitString::all(m) {
        let mut sign = 1.0;
        // tensor product of the selected environment vectors, built factor by factor
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for (j, (q, ch)) in channels.iter().enumerate() {
            let g = gamma.get(j) as u8;
            if g == 1 && beta.get(*q) {
                sign = -sign;
            }
            let v = ch.vector(g, g ^ alpha.get(*q) as u8);
            prod = prod.iter().flat_map(|p| v.iter().map(move |x| p * x)).collect();
        }
        for (a, p) in acc.iter_mut().zip(prod) {
            *a += p * sign * scale;
        }
    }
    Ok(out)
}

/// Where a noise model gets the channel for each activated qubit.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSource {
    Fixed(QubitChannel),
    /// A fresh [`QubitChannel::random`] per activation.
    Random { env_dim: usize },
}

impl ChannelSource {
    pub fn env_dim(&self) -> usize {
        match self {
            ChannelSource::Fixed(ch) => ch.env_dim,
            ChannelSource::Random { env_dim } => *env_dim,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<QubitChannel> {
        match self {
            ChannelSource::Fixed(ch) => Ok(ch.clone()),
            ChannelSource::Random { env_dim } => QubitChannel::random(*env_dim, rng),
        }
    }

    /// Parses `decoherence:<overlap>`, `random:<env_dim>`, `identity`, or a
    /// path to a channel JSON file.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Some(rest) = spec.strip_prefix("decoherence:") {
            let overlap: f64 = rest.parse().map_err(|_| Error::Parse(format!("bad overlap {rest:?}")))?;
            return Ok(ChannelSource::Fixed(QubitChannel::decoherence(Complex64::new(overlap, 0.0))?));
        }
        if let Some(rest) = spec.strip_prefix("random:") {
            let env_dim: usize = rest.parse().map_err(|_| Error::Parse(format!("bad environment dimension {rest:?}")))?;
            if env_dim == 0 {
                return Err(invalid("environment dimension must be at least 1"));
            }
            return Ok(ChannelSource::Random { env_dim });
        }
        if spec == "identity" {
            return Ok(ChannelSource::Fixed(QubitChannel::identity()));
        }
        let text = std::fs::read_to_string(spec)?;
        let file: ChannelFile = serde_json::from_str(&text)?;
        Ok(ChannelSource::Fixed(QubitChannel::from_file(&file)?))
    }

    pub fn describe(&self) -> String {
        match self {
            ChannelSource::Fixed(ch) => format!("fixed(env_dim={})", ch.env_dim),
            ChannelSource::Random { env_dim } => format!("random:{env_dim}"),
        }
    }
}

/// Independent per-qubit activation with probability `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pub p: f64,
    pub source: ChannelSource,
    /// `None` means every qubit is eligible.
    pub qubits: Option<Vec<usize>>,
}

impl NoiseModel {
    pub fn new(p: f64, source: ChannelSource, qubits: Option<Vec<usize>>) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("activation probability {p} outside [0, 1]")));
        }
        if let Some(q) = &qubits {
            let mut sorted = q.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != q.len() {
                return Err(invalid("noise qubit list has duplicates"));
            }
        }
        if let ChannelSource::Fixed(ch) = &source {
            ch.ensure_valid()?;
        }
        Ok(NoiseModel { p, source, qubits })
    }

    /// Eligible qubits of an `n`-qubit block, ascending.
    pub fn eligible(&self, n: usize) -> Result<Vec<usize>> {
        match &self.qubits {
            None => Ok((0..n).collect()),
            Some(q) => {
                if let Some(bad) = q.iter().find(|&&x| x >= n) {
                    return Err(invalid(format!("noise qubit {bad} out of range for {n} qubits")));
                }
                let mut q = q.clone();
                q.sort_unstable();
                Ok(q)
            }
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: NoiseFile = serde_json::from_str(&text)?;
        let source = match file.channel {
            ChannelRef::Inline(f) => ChannelSource::Fixed(QubitChannel::from_file(&f)?),
            ChannelRef::Spec(s) => {
                // relative file references resolve against the noise file
                let candidate = path.parent().map(|d| d.join(&s)).filter(|p| p.exists());
                match candidate {
                    Some(p) if !s.contains(':') => ChannelSource::parse(&p.to_string_lossy())?,
                    _ => ChannelSource::parse(&s)?,
                }
            }
        };
        let qubits = match file.qubits {
            QubitSet::All(s) if s == "all" => None,
            QubitSet::All(s) => return Err(invalid(format!("qubits must be \"all\" or a list, got {s:?}"))),
            QubitSet::List(v) => Some(v),
        };
        NoiseModel::new(file.p, source, qubits)
    }
}

/// JSON form of a channel; complex entries are `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub env_dim: usize,
    pub a00: Vec<[f64; 2]>,
    pub a01: Vec<[f64; 2]>,
    pub a10: Vec<[f64; 2]>,
    pub a11: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelRef {
    Inline(ChannelFile),
    Spec(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QubitSet {
    All(String),
    List(Vec<usize>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoiseFile {
    pub p: f64,
    pub channel: ChannelRef,
    #[serde(default = "all_qubits")]
    pub qubits: QubitSet,
}

fn all_qubits() -> QubitSet {
    QubitSet::All("all".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::catalogue_code;
    use crate::statespace::tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(QubitChannel::identity().validate().is_ok());
        for ov in [c(1.0), c(0.0), c(0.6), Complex64::new(0.3, -0.4), Complex64::from_polar(1.0, 0.7)] {
            assert!(QubitChannel::decoherence(ov).unwrap().validate().is_ok());
        }
        let e0 = vec![c(1.0)];
        let z = vec![c(0.0)];
        let bad = QubitChannel::new(e0.clone(), e0.clone(), z, e0).unwrap();
        let v = bad.validate().unwrap_err();
        assert!(v.iter().any(|x| matches!(x, ChannelViolation::RowNorm { input: 0, value } if (value - 2.0).abs() < 1e-12)));
    }

    #[test]
    fn decoherence_construction() {
        let ch = QubitChannel::decoherence(c(0.6)).unwrap();
        assert!((dot(ch.vector(0, 0), ch.vector(1, 1)) - c(0.6)).norm() < 1e-15);
        assert!(QubitChannel::decoherence(c(1.2)).is_err());
        let ident = QubitChannel::decoherence(c(1.0)).unwrap();
        assert_eq!(ident.vector(0, 0), ident.vector(1, 1));
    }

    #[test]
    fn random_channels_validate() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for d in 1..=4 {
            for _ in 0..50 {
                assert!(QubitChannel::random(d, &mut rng).unwrap().validate().is_ok());
            }
        }
    }

    #[test]
    fn decoherence_on_single_qubit() {
        // c0|0⟩ + c1|1⟩ → c0|0⟩|a0⟩ + c1|1⟩|a1⟩
        let ch = QubitChannel::decoherence(Complex64::new(0.2, 0.5)).unwrap();
        let s = PureState::new(FactorLayout::system(1).unwrap(), vec![c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        let out = apply_channel(&s, 0, &ch).unwrap();
        for e in 0..2 {
            assert!((out.amplitude(&bs("0"), &[e]) - c(0.6) * ch.vector(0, 0)[e]).norm() < 1e-15);
            assert!((out.amplitude(&bs("1"), &[e]) - Complex64::new(0.0, 0.8) * ch.vector(1, 1)[e]).norm() < 1e-15);
        }
        assert!(out.is_normalized());
    }

    #[test]
    fn identity_channel_tensors_environment() {
        let s = PureState::random(FactorLayout::system(2).unwrap(), &mut rand::rng());
        let out = apply_channel(&s, 1, &QubitChannel::identity()).unwrap();
        let env = PureState::new(FactorLayout::new(0, vec![EnvFactor { qubit: 1, dim: 1 }]).unwrap(), vec![c(1.0)]).unwrap();
        assert_eq!(out, tensor(&s, &env).unwrap());
    }

    #[test]
    fn full_decoherence_groups_code_vector() {
        // (|000⟩+|011⟩)|a0⟩ + (|101⟩+|110⟩)|a1⟩, all over 2
        let code = catalogue_code("phase3").unwrap();
        let out = apply_channel(&code.vectors()[0], 0, &QubitChannel::decoherence(c(0.0)).unwrap()).unwrap();
        for v in BitString::all(3) {
            let expect = |e: usize| match (v.to_string().as_str(), e) {
                ("(000)", 0) | ("(011)", 0) | ("(101)", 1) | ("(110)", 1) => c(0.5),
                _ => c(0.0),
            };
            for e in 0..2 {
                assert_eq!(out.amplitude(&v, &[e]), expect(e), "{v} e={e}");
            }
        }
    }

    #[test]
    fn fresh_factor_rule() {
        let s = PureState::basis(&bs("00")).unwrap();
        let ch = QubitChannel::decoherence(c(0.5)).unwrap();
        let once = apply_channel(&s, 0, &ch).unwrap();
        assert!(apply_channel(&once, 0, &ch).is_err());
        assert!(apply_channel(&s, 2, &ch).is_err());
        let e0 = vec![c(1.0)];
        let bad = QubitChannel::new(e0.clone(), e0.clone(), vec![c(0.0)], e0).unwrap();
        assert!(apply_channel(&s, 0, &bad).is_err());
    }

    #[test]
    fn residue_single_qubit_decoherence() {
        let ch = QubitChannel::decoherence(c(0.3)).unwrap();
        let chans = vec![(0usize, ch.clone())];
        let a0 = ch.vector(0, 0);
        let a1 = ch.vector(1, 1);
        let r00 = residue_oracle(&chans, &bs("000"), &bs("000")).unwrap();
        let r01 = residue_oracle(&chans, &bs("000"), &bs("100")).unwrap();
        for e in 0..2 {
            assert!((r00.amplitudes()[e] - (a0[e] + a1[e]) / 2.0).norm() < 1e-15);
            assert!((r01.amplitudes()[e] - (a0[e] - a1[e]) / 2.0).norm() < 1e-15);
        }
        // decoherence never flips bits
        let r10 = residue_oracle(&chans, &bs("100"), &bs("000")).unwrap();
        assert!(r10.norm() < 1e-15);
        assert!(residue_oracle(&chans, &bs("010"), &bs("000")).is_err());
        assert!(residue_oracle(&chans, &bs("000"), &bs("001")).is_err());
    }

    #[test]
    fn decomposition_identity_small() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let psi = PureState::random(FactorLayout::system(3).unwrap(), &mut rng);
        let chans = vec![(2usize, QubitChannel::random(2, &mut rng).unwrap()), (0, QubitChannel::random(3, &mut rng).unwrap())];
        let joint = dissipate(&psi, &chans).unwrap();
        let region = BitString::from_positions(3, &[0, 2]).unwrap();
        let mut sum = PureState::zero(joint.layout().clone());
        for a in BitString::all(3).filter(|a| a.is_within(&region).unwrap()) {
            for b in BitString::all(3).filter(|b| b.is_within(&region).unwrap()) {
                let p = crate::errors::ErrorPattern::new(a, b).unwrap();
                let sys = crate::errors::apply_pattern(&p, &psi).unwrap();
                let r = residue_oracle(&chans, &a, &b).unwrap();
                sum.add_scaled(c(1.0), &tensor(&sys, &r).unwrap()).unwrap();
            }
        }
        assert!(sum.distance(&joint).unwrap() < 1e-12);
    }

    #[test]
    fn channel_file_roundtrip() {
        let ch = QubitChannel::random(3, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let text = serde_json::to_string(&ch.to_file()).unwrap();
        let back = QubitChannel::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, ch);
    }

    #[test]
    fn noise_model_file_forms() {
        let dir = tempfile::tempdir().unwrap();
        let ch_path = dir.path().join("ch.json");
        std::fs::write(&ch_path, serde_json::to_string(&QubitChannel::identity().to_file()).unwrap()).unwrap();
        let nm_path = dir.path().join("noise.json");
        std::fs::write(&nm_path, r#"{"p": 0.1, "channel": "ch.json", "qubits": [2, 0]}"#).unwrap();
        let nm = NoiseModel::load(&nm_path).unwrap();
        assert_eq!(nm.eligible(3).unwrap(), vec![0, 2]);
        assert_eq!(nm.source, ChannelSource::Fixed(QubitChannel::identity()));

        std::fs::write(&nm_path, r#"{"p": 0.5, "channel": "random:4", "qubits": "all"}"#).unwrap();
        let nm = NoiseModel::load(&nm_path).unwrap();
        assert_eq!(nm.source, ChannelSource::Random { env_dim: 4 });
        assert_eq!(nm.eligible(2).unwrap(), vec![0, 1]);

        let inline = serde_json::json!({"p": 0.0, "channel": QubitChannel::identity().to_file()});
        std::fs::write(&nm_path, inline.to_string()).unwrap();
        assert!(NoiseModel::load(&nm_path).is_ok());

        std::fs::write(&nm_path, r#"{"p": 1.5, "channel": "identity"}"#).unwrap();
        assert!(NoiseModel::load(&nm_path).is_err());
    }
}

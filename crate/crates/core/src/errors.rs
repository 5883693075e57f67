//! Amplitude (`A_α`, bit flip) and phase (`P_β`, sign flip) error operators.
//!
//! Both act on the qubit register only; environment factors ride along
//! unchanged. A composed pattern `A_α P_β` applies the phase first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitstrings::BitString;
use crate::error::{invalid, Error, Result};
use crate::statespace::PureState;

/// An (α, β) pair naming `A_α P_β`.
///
/// Ordered lexicographically on the concatenation α‖β, which puts the
/// identity pattern first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorPattern {
    alpha: BitString,
    beta: BitString,
}

impl ErrorPattern {
    pub fn new(alpha: BitString, beta: BitString) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::LengthMismatch(alpha.len(), beta.len()));
        }
        Ok(ErrorPattern { alpha, beta })
    }

    pub fn identity(n: usize) -> Self {
        ErrorPattern { alpha: BitString::zeros(n), beta: BitString::zeros(n) }
    }

    pub fn amplitude(alpha: BitString) -> Self {
        ErrorPattern { alpha, beta: BitString::zeros(alpha.len()) }
    }

    pub fn phase(beta: BitString) -> Self {
        ErrorPattern { alpha: BitString::zeros(beta.len()), beta }
    }

    pub fn alpha(&self) -> &BitString {
        &self.alpha
    }

    pub fn beta(&self) -> &BitString {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// Number of qubits touched by either operator.
    pub fn weight(&self) -> usize {
        self.alpha.union_weight(&self.beta).expect("equal lengths by construction")
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}P{}", self.alpha, self.beta)
    }
}

impl fmt::Debug for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ErrorPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s.trim().strip_prefix('A').ok_or_else(|| Error::Parse(format!("pattern {s:?} must start with 'A'")))?;
        let split = rest.find('P').ok_or_else(|| Error::Parse(format!("pattern {s:?} has no 'P' part")))?;
        ErrorPattern::new(rest[..split].parse()?, rest[split + 1..].parse()?)
    }
}

impl Serialize for ErrorPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ErrorPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

fn check_len(n: usize, state: &PureState) -> Result<()> {
    if n != state.qubits() {
        return Err(Error::LengthMismatch(n, state.qubits()));
    }
    Ok(())
}

/// `A_α|v⟩ = |v+α⟩` on every environment block.
pub fn apply_amplitude(alpha: &BitString, state: &PureState) -> Result<PureState> {
    check_len(alpha.len(), state)?;
    let mut out = state.clone();
    if alpha.is_zero() {
        return Ok(out);
    }
    let env_dim = state.layout().env_dim();
    let flip = alpha.index() as usize;
    let src = state.amplitudes();
    for (j, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let (q, e) = (j / env_dim, j % env_dim);
        *a = src[(q ^ flip) * env_dim + e];
    }
    Ok(out)
}

/// `P_β|v⟩ = (−1)^{β·v}|v⟩`.
pub fn apply_phase(beta: &BitString, state: &PureState) -> Result<PureState> {
    check_len(beta.len(), state)?;
    let mut out = state.clone();
    let env_dim = state.layout().env_dim();
    let mask = beta.index() as usize;
    for (j, a) in out.amplitudes_mut().iter_mut().enumerate() {
        if ((j / env_dim) & mask).count_ones() & 1 == 1 {
            *a = -*a;
        }
    }
    Ok(out)
}

/// `A_α P_β |state⟩`.
pub fn apply_pattern(p: &ErrorPattern, state: &PureState) -> Result<PureState> {
    apply_amplitude(&p.alpha, &apply_phase(&p.beta, state)?)
}

/// Which patterns a syndrome table or checker considers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PatternFilter {
    #[default]
    All,
    PhaseOnly,
    AmplitudeOnly,
}

impl PatternFilter {
    pub fn admits(&self, p: &ErrorPattern) -> bool {
        match self {
            PatternFilter::All => true,
            PatternFilter::PhaseOnly => p.alpha.is_zero(),
            PatternFilter::AmplitudeOnly => p.beta.is_zero(),
        }
    }
}

/// Every pattern touching at most `t` of `n` qubits, in canonical order.
///
/// Each touched qubit carries one of `σ_x` (1,0), `σ_z` (0,1) or `σ_y` (1,1).
pub fn enumerate_patterns(n: usize, t: usize) -> Result<Vec<ErrorPattern>> {
    if t > n {
        return Err(invalid(format!("t = {t} exceeds n = {n}")));
    }
    if n > 16 {
        return Err(invalid(format!("pattern enumeration supports n ≤ 16, got {n}")));
    }
    let mut out = Vec::new();
    let mut positions = Vec::with_capacity(t);
    collect_supports(n, t, 0, &mut positions, &mut out);
    out.sort_unstable();
    Ok(out)
}

pub fn enumerate_filtered(n: usize, t: usize, filter: PatternFilter) -> Result<Vec<ErrorPattern>> {
    Ok(enumerate_patterns(n, t)?.into_iter().filter(|p| filter.admits(p)).collect())
}

fn collect_supports(n: usize, t: usize, from: usize, positions: &mut Vec<usize>, out: &mut Vec<ErrorPattern>) {
    emit_choices(n, positions, out);
    if positions.len() == t {
        return;
    }
    for p in from..n {
        positions.push(p);
        collect_supports(n, t, p + 1, positions, out);
        positions.pop();
    }
}

/// All 3^|positions| patterns whose union support is exactly `positions`.
fn emit_choices(n: usize, positions: &[usize], out: &mut Vec<ErrorPattern>) {
    let k = positions.len();
    for code in 0..3usize.pow(k as u32) {
        let mut alpha = BitString::zeros(n);
        let mut beta = BitString::zeros(n);
        let mut c = code;
        for &p in positions {
            match c % 3 {
                0 => alpha.set(p, true),
                1 => beta.set(p, true),
                _ => {
                    alpha.set(p, true);
                    beta.set(p, true);
                }
            }
            c /= 3;
        }
        out.push(ErrorPattern { alpha, beta });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::FactorLayout;
    use num_complex::Complex64;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn ket(s: &str) -> PureState {
        PureState::basis(&bs(s)).unwrap()
    }

    fn phase3(k: usize) -> PureState {
        let kets: [&str; 4] = if k == 0 { ["000", "011", "101", "110"] } else { ["111", "100", "010", "001"] };
        let terms: Vec<_> = kets.iter().map(|s| (bs(s), Complex64::new(1.0, 0.0))).collect();
        PureState::from_terms(3, &terms).unwrap()
    }

    #[test]
    fn worked_example() {
        let a = bs("(001010)");
        assert_eq!(apply_amplitude(&a, &ket("110111")).unwrap(), ket("111101"));
        assert_eq!(apply_phase(&a, &ket("110111")).unwrap(), ket("110111").scaled(Complex64::new(-1.0, 0.0)));
        let p = ErrorPattern::new(a, a).unwrap();
        assert_eq!(apply_pattern(&p, &ket("110111")).unwrap(), ket("111101").scaled(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn zero_patterns_are_identity() {
        let s = PureState::random(FactorLayout::system(3).unwrap(), &mut rand::rng());
        assert_eq!(apply_amplitude(&BitString::zeros(3), &s).unwrap(), s);
        assert_eq!(apply_phase(&BitString::zeros(3), &s).unwrap(), s);
        assert_eq!(apply_pattern(&ErrorPattern::identity(3), &s).unwrap(), s);
    }

    #[test]
    fn phase3_images() {
        let flipped = apply_amplitude(&bs("100"), &phase3(0)).unwrap();
        assert!(flipped.distance(&phase3(1)).unwrap() < 1e-15);
        let signed = apply_phase(&bs("100"), &phase3(0)).unwrap();
        let terms = [("000", 1.0), ("011", 1.0), ("101", -1.0), ("110", -1.0)];
        let expected =
            PureState::from_terms(3, &terms.map(|(s, c)| (bs(s), Complex64::new(c, 0.0)))).unwrap();
        assert!(signed.distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        assert!(apply_amplitude(&bs("10"), &ket("000")).is_err());
        assert!(apply_phase(&bs("1000"), &ket("000")).is_err());
        assert!(ErrorPattern::new(bs("10"), bs("100")).is_err());
    }

    #[test]
    fn double_application_is_global_sign() {
        for n in 1..=3 {
            let s = PureState::random(FactorLayout::system(n).unwrap(), &mut rand::rng());
            for a in BitString::all(n) {
                for b in BitString::all(n) {
                    let p = ErrorPattern::new(a, b).unwrap();
                    let twice = apply_pattern(&p, &apply_pattern(&p, &s).unwrap()).unwrap();
                    let sign = if a.dot_mod2(&b).unwrap() == 1 { -1.0 } else { 1.0 };
                    assert!(twice.distance(&s.clone().scaled(Complex64::new(sign, 0.0))).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn commutation_sign() {
        for n in 1..=3 {
            let s = PureState::random(FactorLayout::system(n).unwrap(), &mut rand::rng());
            for a in BitString::all(n) {
                for b in BitString::all(n) {
                    let ap = apply_amplitude(&a, &apply_phase(&b, &s).unwrap()).unwrap();
                    let pa = apply_phase(&b, &apply_amplitude(&a, &s).unwrap()).unwrap();
                    let sign = if a.dot_mod2(&b).unwrap() == 1 { -1.0 } else { 1.0 };
                    assert!(ap.distance(&pa.scaled(Complex64::new(sign, 0.0))).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn operators_leave_environment_alone() {
        use crate::statespace::EnvFactor;
        let lay = FactorLayout::new(2, vec![EnvFactor { qubit: 0, dim: 3 }]).unwrap();
        let s = PureState::random(lay, &mut rand::rng());
        let p = ErrorPattern::new(bs("11"), bs("01")).unwrap();
        let moved = apply_pattern(&p, &s).unwrap();
        assert_eq!(moved.layout(), s.layout());
        // environment marginal: ⟨e|ρ_env|e'⟩ unchanged
        let env_marginal = |x: &PureState| {
            let d = 3;
            let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
            for q in 0..4 {
                for e in 0..d {
                    for f in 0..d {
                        rho[e * d + f] += x.amplitudes()[q * d + e] * x.amplitudes()[q * d + f].conj();
                    }
                }
            }
            rho
        };
        for (x, y) in env_marginal(&s).iter().zip(env_marginal(&moved)) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_patterns(3, 1).unwrap().len(), 10);
        assert_eq!(enumerate_patterns(5, 2).unwrap().len(), 106);
        assert_eq!(enumerate_patterns(4, 0).unwrap(), vec![ErrorPattern::identity(4)]);
        assert!(enumerate_patterns(3, 4).is_err());

        let pats = enumerate_patterns(3, 1).unwrap();
        assert!(pats[0].is_identity());
        assert!(pats.windows(2).all(|w| w[0] < w[1]));
        let text: Vec<String> = pats.iter().take(4).map(|p| p.to_string()).collect();
        assert_eq!(text, ["A(000)P(000)", "A(000)P(001)", "A(000)P(010)", "A(000)P(100)"]);
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        for n in 0..=5 {
            for t in 0..=n {
                let mut brute: Vec<ErrorPattern> = BitString::all(n)
                    .flat_map(|a| BitString::all(n).map(move |b| ErrorPattern::new(a, b).unwrap()))
                    .filter(|p| p.weight() <= t)
                    .collect();
                brute.sort();
                assert_eq!(enumerate_patterns(n, t).unwrap(), brute, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn filters() {
        let phase = enumerate_filtered(3, 1, PatternFilter::PhaseOnly).unwrap();
        let text: Vec<String> = phase.iter().map(|p| p.beta().to_string()).collect();
        assert_eq!(text, ["(000)", "(001)", "(010)", "(100)"]);
        assert_eq!(enumerate_filtered(3, 1, PatternFilter::AmplitudeOnly).unwrap().len(), 4);
    }

    #[test]
    fn pattern_text_roundtrip() {
        let p: ErrorPattern = "A(001010)P(001010)".parse().unwrap();
        assert_eq!(p.to_string(), "A(001010)P(001010)");
        assert!("A(01)P(011)".parse::<ErrorPattern>().is_err());
        assert!("(01)P(01)".parse::<ErrorPattern>().is_err());
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"A(001010)P(001010)\"");
    }
}

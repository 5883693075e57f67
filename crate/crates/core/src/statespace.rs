//! Dense pure states over a tensor layout of qubits and environment factors.
//!
//! The joint basis index is `q * env_dim + e`: the qubit register index `q`
//! (position 0 most significant) is the major coordinate and the mixed-radix
//! environment index `e` (first factor most significant) the minor one. The
//! amplitude vector therefore reshapes row-major into the system/environment
//! coefficient matrix without copying.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bitstrings::BitString;
use crate::error::{invalid, Error, Result};
use crate::tolerance::{MAX_AMPLITUDES, ORTHO, ZERO_PROB};

/// One environment tensor factor, attached to the qubit whose channel
/// created it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvFactor {
    pub qubit: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorLayout {
    qubits: usize,
    env: Vec<EnvFactor>,
}

impl FactorLayout {
    /// Validates attachment uniqueness and the amplitude cap. A layout with
    /// no qubits is a pure environment state; its attachment labels then
    /// name qubits of some other register and are not range-checked.
    pub fn new(qubits: usize, env: Vec<EnvFactor>) -> Result<Self> {
        for (i, f) in env.iter().enumerate() {
            if f.dim == 0 {
                return Err(invalid(format!("environment factor on qubit {} has dimension 0", f.qubit)));
            }
            if qubits > 0 && f.qubit >= qubits {
                return Err(invalid(format!("environment factor attached to qubit {} of {qubits}", f.qubit)));
            }
            if env[..i].iter().any(|g| g.qubit == f.qubit) {
                return Err(invalid(format!("qubit {} has two environment factors", f.qubit)));
            }
        }
        let layout = FactorLayout { qubits, env };
        layout.checked_dim()?;
        Ok(layout)
    }

    pub fn system(qubits: usize) -> Result<Self> {
        FactorLayout::new(qubits, Vec::new())
    }

    fn checked_dim(&self) -> Result<usize> {
        let too_big = || Error::DimensionCap(usize::MAX);
        let sys = 1usize.checked_shl(self.qubits as u32).filter(|_| self.qubits < 64).ok_or_else(too_big)?;
        let dim = self.env.iter().try_fold(sys, |acc, f| acc.checked_mul(f.dim)).ok_or_else(too_big)?;
        if dim > MAX_AMPLITUDES {
            return Err(Error::DimensionCap(dim));
        }
        Ok(dim)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn env(&self) -> &[EnvFactor] {
        &self.env
    }

    pub fn system_dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn env_dim(&self) -> usize {
        self.env.iter().map(|f| f.dim).product()
    }

    pub fn dim(&self) -> usize {
        self.system_dim() * self.env_dim()
    }

    pub fn is_system_only(&self) -> bool {
        self.env.is_empty()
    }

    pub fn has_env(&self, qubit: usize) -> bool {
        self.env.iter().any(|f| f.qubit == qubit)
    }

    /// Appends a factor for `qubit`.
    pub fn with_env(&self, qubit: usize, dim: usize) -> Result<Self> {
        let mut env = self.env.clone();
        env.push(EnvFactor { qubit, dim });
        FactorLayout::new(self.qubits, env)
    }

    /// Layout of just the environment factors, with no qubits.
    pub fn env_only(&self) -> Self {
        FactorLayout { qubits: 0, env: self.env.clone() }
    }

    fn env_digits(&self, mut e: usize) -> Vec<usize> {
        let mut digits = vec![0; self.env.len()];
        for (slot, f) in digits.iter_mut().zip(&self.env).rev() {
            *slot = e % f.dim;
            e /= f.dim;
        }
        digits
    }
}

/// Complex amplitude vector over a [`FactorLayout`].
///
/// Most constructors insist on unit norm; [`PureState::unnormalized`] builds
/// the intermediate vectors (components, residues) that are not states.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    layout: FactorLayout,
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(layout: FactorLayout, amps: Vec<Complex64>) -> Result<Self> {
        let s = PureState::unnormalized(layout, amps)?;
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > ORTHO {
            return Err(Error::NotNormalized(n2));
        }
        Ok(s)
    }

    pub fn unnormalized(layout: FactorLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::LengthMismatch(amps.len(), layout.dim()));
        }
        Ok(PureState { layout, amps })
    }

    pub fn zero(layout: FactorLayout) -> Self {
        let amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        PureState { layout, amps }
    }

    /// Computational basis state `|v⟩` with no environment.
    pub fn basis(v: &BitString) -> Result<Self> {
        let mut s = PureState::zero(FactorLayout::system(v.len())?);
        s.amps[v.index() as usize] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Normalized superposition of system basis states.
    pub fn from_terms(qubits: usize, terms: &[(BitString, Complex64)]) -> Result<Self> {
        let mut s = PureState::zero(FactorLayout::system(qubits)?);
        for (v, c) in terms {
            if v.len() != qubits {
                return Err(Error::LengthMismatch(v.len(), qubits));
            }
            s.amps[v.index() as usize] += c;
        }
        s.normalized()
    }

    /// Complex Gaussian vector, normalized.
    pub fn random<R: Rng + ?Sized>(layout: FactorLayout, rng: &mut R) -> Self {
        let amps = (0..layout.dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        PureState { layout, amps }.normalized().expect("gaussian vector is nonzero")
    }

    pub fn layout(&self) -> &FactorLayout {
        &self.layout
    }

    pub fn qubits(&self) -> usize {
        self.layout.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Amplitude of qubit basis `v` and environment multi-index `env_idx`.
    pub fn amplitude(&self, v: &BitString, env_idx: &[usize]) -> Complex64 {
        let e = env_idx.iter().zip(&self.layout.env).fold(0, |acc, (&d, f)| acc * f.dim + d);
        self.amps[v.index() as usize * self.layout.env_dim() + e]
    }

    pub fn norm_sqr(&self) -> f64 {
        compensated_sum(self.amps.iter().map(|a| a.norm_sqr()))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= ORTHO
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n * n < ZERO_PROB {
            return Err(invalid("cannot normalize a zero vector"));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(self)
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for a in &mut self.amps {
            *a *= c;
        }
        self
    }

    /// `self + c·other`, layouts must agree.
    pub fn add_scaled(&mut self, c: Complex64, other: &PureState) -> Result<()> {
        same_layout(&self.layout, &other.layout)?;
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += c * b;
        }
        Ok(())
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        same_layout(&self.layout, &other.layout)?;
        Ok(compensated_sum(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr())).sqrt())
    }

    pub fn to_file(&self) -> StateFile {
        let env_dim = self.layout.env_dim();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(j, a)| AmpEntry {
                basis: BitString::from_index(self.layout.qubits, (j / env_dim) as u64).expect("index in range"),
                env_idx: self.layout.env_digits(j % env_dim),
                re: a.re,
                im: a.im,
            })
            .collect();
        StateFile { qubits: self.layout.qubits, env: self.layout.env.clone(), amps }
    }
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

fn same_layout(a: &FactorLayout, b: &FactorLayout) -> Result<()> {
    if a != b {
        return Err(Error::LayoutMismatch(format!("{a:?} vs {b:?}")));
    }
    Ok(())
}

/// Neumaier summation.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn compensated_complex_sum(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let (re, im): (Vec<f64>, Vec<f64>) = values.map(|z| (z.re, z.im)).unzip();
    Complex64::new(compensated_sum(re.into_iter()), compensated_sum(im.into_iter()))
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner(a: &PureState, b: &PureState) -> Result<Complex64> {
    same_layout(&a.layout, &b.layout)?;
    Ok(compensated_complex_sum(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y)))
}

/// `a ⊗ b`. The qubits of `b` follow those of `a`; environment factors of
/// `b` are re-attached to the shifted qubits, except when `b` is a pure
/// environment state, whose labels already name qubits of `a`.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let shift = if b.layout.qubits > 0 { a.layout.qubits } else { 0 };
    let mut env = a.layout.env.clone();
    env.extend(b.layout.env.iter().map(|f| EnvFactor { qubit: f.qubit + shift, dim: f.dim }));
    let layout = FactorLayout::new(a.layout.qubits + b.layout.qubits, env)?;

    let (env_a, env_b) = (a.layout.env_dim(), b.layout.env_dim());
    let nb = b.layout.qubits;
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
    for (ia, xa) in a.amps.iter().enumerate() {
        let (qa, ea) = (ia / env_a, ia % env_a);
        for (ib, xb) in b.amps.iter().enumerate() {
            let (qb, eb) = (ib / env_b, ib % env_b);
            let q = (qa << nb) | qb;
            amps[q * env_a * env_b + ea * env_b + eb] = xa * xb;
        }
    }
    PureState::unnormalized(layout, amps)
}

/// Orthonormal family of states sharing one layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    layout: FactorLayout,
    members: Vec<PureState>,
}

impl Subspace {
    pub fn new(layout: FactorLayout, members: Vec<PureState>) -> Result<Self> {
        for (i, m) in members.iter().enumerate() {
            same_layout(&layout, &m.layout)?;
            for (j, other) in members[..=i].iter().enumerate() {
                let ip = inner(other, m)?;
                let expected = if i == j { 1.0 } else { 0.0 };
                if (ip - expected).norm() > ORTHO {
                    return Err(invalid(format!(
                        "subspace members {j} and {i} are not orthonormal (inner product {ip})"
                    )));
                }
            }
        }
        Ok(Subspace { layout, members })
    }

    /// Span of several mutually orthogonal subspaces.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a Subspace>) -> Result<Self> {
        let mut iter = parts.into_iter();
        let first = iter.next().ok_or_else(|| invalid("union of no subspaces"))?;
        let mut members = first.members.clone();
        for p in iter {
            same_layout(&first.layout, &p.layout)?;
            members.extend(p.members.iter().cloned());
        }
        Subspace::new(first.layout.clone(), members)
    }

    pub fn layout(&self) -> &FactorLayout {
        &self.layout
    }

    pub fn members(&self) -> &[PureState] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members.len()
    }
}

/// Outcome of [`project`].
#[derive(Clone, Debug)]
pub struct Projection {
    pub probability: f64,
    pub component: Option<PureState>,
}

/// For every joint index of `outer`, its index in `inner` and its index
/// over the factors of `outer` missing from `inner`.
fn split_indices(outer: &FactorLayout, inner: &FactorLayout) -> Result<(Vec<usize>, Vec<usize>)> {
    if outer.qubits != inner.qubits {
        return Err(Error::LayoutMismatch(format!(
            "{} qubits vs {} in subspace",
            outer.qubits, inner.qubits
        )));
    }
    // inner's factors must appear in outer in the same order
    let mut positions = Vec::with_capacity(inner.env.len());
    let mut start = 0;
    for f in &inner.env {
        let found = outer.env[start..]
            .iter()
            .position(|g| g == f)
            .ok_or_else(|| Error::LayoutMismatch(format!("subspace factor {f:?} not present in state")))?;
        positions.push(start + found);
        start += found + 1;
    }
    let env_outer = outer.env_dim();
    let env_inner = inner.env_dim();
    let mut sub_idx = Vec::with_capacity(outer.dim());
    let mut rest_idx = Vec::with_capacity(outer.dim());
    for j in 0..outer.dim() {
        let (q, e) = (j / env_outer, j % env_outer);
        let digits = outer.env_digits(e);
        let mut e_in = 0;
        let mut e_rest = 0;
        let mut k = 0;
        for (slot, (d, f)) in digits.iter().zip(&outer.env).enumerate() {
            if k < positions.len() && positions[k] == slot {
                e_in = e_in * f.dim + d;
                k += 1;
            } else {
                e_rest = e_rest * f.dim + d;
            }
        }
        sub_idx.push(q * env_inner + e_in);
        rest_idx.push(e_rest);
    }
    Ok((sub_idx, rest_idx))
}

/// Unnormalized `(Π ⊗ I)|state⟩`, with `I` on factors absent from `sub`.
/// Rows of the system/environment coefficient matrix are contiguous.
fn project_system(state: &PureState, sub: &Subspace) -> PureState {
    let env = state.layout.env_dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; state.amps.len()];
    let mut coeff = vec![zero; env];
    for m in &sub.members {
        coeff.iter_mut().for_each(|c| *c = zero);
        for (a, row) in m.amps.iter().zip(state.amps.chunks_exact(env)) {
            if *a != zero {
                let ac = a.conj();
                coeff.iter_mut().zip(row).for_each(|(c, x)| *c += ac * x);
            }
        }
        for (a, row) in m.amps.iter().zip(out.chunks_exact_mut(env)) {
            if *a != zero {
                row.iter_mut().zip(&coeff).for_each(|(o, c)| *o += a * c);
            }
        }
    }
    PureState { layout: state.layout.clone(), amps: out }
}

pub(crate) fn project_raw(state: &PureState, sub: &Subspace) -> Result<PureState> {
    if sub.layout.is_system_only() && sub.layout.qubits == state.layout.qubits {
        return Ok(project_system(state, sub));
    }
    let (sub_idx, rest_idx) = split_indices(&state.layout, &sub.layout)?;
    let rest_dim = state.layout.dim() / sub.layout.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; state.amps.len()];
    let mut coeff = vec![zero; rest_dim];
    for m in &sub.members {
        coeff.iter_mut().for_each(|c| *c = zero);
        for (j, x) in state.amps.iter().enumerate() {
            coeff[rest_idx[j]] += m.amps[sub_idx[j]].conj() * x;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += m.amps[sub_idx[j]] * coeff[rest_idx[j]];
        }
    }
    PureState::unnormalized(state.layout.clone(), out)
}

/// Projects onto `span(sub)` extended by identity on the environment
/// factors the subspace does not mention.
pub fn project(state: &PureState, sub: &Subspace) -> Result<Projection> {
    let raw = project_raw(state, sub)?;
    let probability = raw.norm_sqr().clamp(0.0, 1.0);
    let component = if probability < ZERO_PROB { None } else { Some(raw.normalized()?) };
    Ok(Projection { probability, component })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDiagnostics {
    /// Schmidt coefficients, descending.
    pub coefficients: Vec<f64>,
    pub max_coefficient: f64,
    pub purity: f64,
}

impl SchmidtDiagnostics {
    pub fn disentangled(&self) -> bool {
        self.max_coefficient >= 1.0 - ORTHO
    }
}

/// Schmidt decomposition across the cut qubits | all environment factors.
pub fn schmidt_diagnostics(state: &PureState) -> SchmidtDiagnostics {
    let rows = state.layout.system_dim();
    let cols = state.layout.env_dim();
    let mut coefficients: Vec<f64> = if cols == 1 || rows == 1 {
        vec![state.norm()]
    } else {
        DMatrix::from_row_slice(rows, cols, &state.amps).singular_values().iter().copied().collect()
    };
    coefficients.sort_by(|a, b| b.total_cmp(a));
    let max_coefficient = coefficients[0];
    let purity = coefficients.iter().map(|s| s.powi(4)).sum();
    SchmidtDiagnostics { coefficients, max_coefficient, purity }
}

/// `⟨ref|ρ_sys|ref⟩` with `ρ_sys` the environment-traced state of `joint`.
pub fn fidelity_against(joint: &PureState, reference: &PureState) -> Result<f64> {
    if !reference.layout.is_system_only() {
        return Err(invalid("reference state must not carry environment factors"));
    }
    if reference.layout.qubits != joint.layout.qubits {
        return Err(Error::LengthMismatch(reference.layout.qubits, joint.layout.qubits));
    }
    let env_dim = joint.layout.env_dim();
    let f = compensated_sum((0..env_dim).map(|e| {
        compensated_complex_sum(
            reference.amps.iter().enumerate().map(|(q, r)| r.conj() * joint.amps[q * env_dim + e]),
        )
        .norm_sqr()
    }));
    Ok(f)
}

/// Sparse JSON form of a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub qubits: usize,
    #[serde(default)]
    pub env: Vec<EnvFactor>,
    pub amps: Vec<AmpEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmpEntry {
    pub basis: BitString,
    #[serde(default)]
    pub env_idx: Vec<usize>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl StateFile {
    /// Builds the amplitude vector without a normalization check.
    pub fn to_unnormalized(&self) -> Result<PureState> {
        let layout = FactorLayout::new(self.qubits, self.env.clone())?;
        let mut state = PureState::zero(layout);
        let env_dim = state.layout.env_dim();
        let mut seen = vec![false; state.amps.len()];
        for a in &self.amps {
            if a.basis.len() != self.qubits {
                return Err(Error::LengthMismatch(a.basis.len(), self.qubits));
            }
            if a.env_idx.len() != self.env.len() {
                return Err(invalid(format!("entry {} has {} environment indices", a.basis, a.env_idx.len())));
            }
            let mut e = 0;
            for (&d, f) in a.env_idx.iter().zip(&self.env) {
                if d >= f.dim {
                    return Err(invalid(format!("environment index {d} out of range {}", f.dim)));
                }
                e = e * f.dim + d;
            }
            let j = a.basis.index() as usize * env_dim + e;
            if std::mem::replace(&mut seen[j], true) {
                return Err(invalid(format!("duplicate amplitude entry for {}", a.basis)));
            }
            state.amps[j] = Complex64::new(a.re, a.im);
        }
        Ok(state)
    }

    pub fn to_state(&self) -> Result<PureState> {
        let s = self.to_unnormalized()?;
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > ORTHO {
            return Err(Error::NotNormalized(n2));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ket(s: &str) -> PureState {
        PureState::basis(&s.parse().unwrap()).unwrap()
    }

    fn phase3_c0() -> PureState {
        let terms: Vec<_> = ["000", "011", "101", "110"].iter().map(|s| (s.parse().unwrap(), c(1.0))).collect();
        PureState::from_terms(3, &terms).unwrap()
    }

    fn phase3_c1() -> PureState {
        let terms: Vec<_> = ["111", "100", "010", "001"].iter().map(|s| (s.parse().unwrap(), c(1.0))).collect();
        PureState::from_terms(3, &terms).unwrap()
    }

    #[test]
    fn inner_basics() {
        let x = phase3_c0();
        assert!((inner(&x, &x).unwrap() - c(1.0)).norm() < 1e-15);
        assert_eq!(inner(&ket("000"), &ket("111")).unwrap(), c(0.0));
        assert!(inner(&phase3_c0(), &phase3_c1()).unwrap().norm() < 1e-15);
        assert!(inner(&ket("00"), &ket("000")).is_err());
    }

    #[test]
    fn inner_is_conjugate_linear_in_first() {
        let a = PureState::new(FactorLayout::system(1).unwrap(), vec![Complex64::new(0.0, 1.0), c(0.0)]).unwrap();
        let b = ket("0");
        assert_eq!(inner(&a, &b).unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn tensor_of_basis_kets() {
        let t = tensor(&ket("0"), &ket("0")).unwrap();
        assert_eq!(t, ket("00"));
        let t = tensor(&ket("10"), &ket("1")).unwrap();
        assert_eq!(t, ket("101"));
        let mut rng = rand::rng();
        let a = PureState::random(FactorLayout::system(2).unwrap(), &mut rng);
        let b = PureState::random(FactorLayout::new(1, vec![EnvFactor { qubit: 0, dim: 3 }]).unwrap(), &mut rng);
        let t = tensor(&a, &b).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-12);
        assert_eq!(t.layout().env(), &[EnvFactor { qubit: 2, dim: 3 }]);
    }

    #[test]
    fn tensor_with_environment_state_keeps_labels() {
        let env = PureState::new(
            FactorLayout::new(0, vec![EnvFactor { qubit: 0, dim: 2 }]).unwrap(),
            vec![c(1.0), c(0.0)],
        )
        .unwrap();
        let joint = tensor(&phase3_c0(), &env).unwrap();
        assert_eq!(joint.layout().env(), &[EnvFactor { qubit: 0, dim: 2 }]);
        assert!((joint.amplitude(&"011".parse().unwrap(), &[0]) - c(0.5)).norm() < 1e-15);
        assert_eq!(joint.amplitude(&"011".parse().unwrap(), &[1]), c(0.0));
    }

    #[test]
    fn project_examples() {
        let lay = FactorLayout::system(3).unwrap();
        // span{C0, C1, P100 C0, P100 C1}
        let p = |s: &PureState| {
            let mut out = s.clone();
            for (j, a) in out.amps.iter_mut().enumerate() {
                if j & 4 != 0 {
                    *a = -*a;
                }
            }
            out
        };
        let sub = Subspace::new(lay.clone(), vec![phase3_c0(), phase3_c1(), p(&phase3_c0()), p(&phase3_c1())]).unwrap();
        let r = project(&phase3_c0(), &sub).unwrap();
        assert!((r.probability - 1.0).abs() < 1e-12);
        assert!(r.component.unwrap().distance(&phase3_c0()).unwrap() < 1e-12);

        let sub0 = Subspace::new(lay.clone(), vec![ket("000")]).unwrap();
        let r = project(&ket("111"), &sub0).unwrap();
        assert_eq!(r.probability, 0.0);
        assert!(r.component.is_none());

        let ghz = PureState::from_terms(3, &[("000".parse().unwrap(), c(1.0)), ("111".parse().unwrap(), c(1.0))]).unwrap();
        let r = project(&ghz, &sub0).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-12);
        assert!(r.component.unwrap().distance(&ket("000")).unwrap() < 1e-12);
    }

    #[test]
    fn project_rejects_non_orthonormal() {
        let lay = FactorLayout::system(1).unwrap();
        let plus = PureState::new(lay.clone(), vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        assert!(Subspace::new(lay, vec![ket("0"), plus]).is_err());
    }

    #[test]
    fn project_extends_over_environment() {
        // (|0⟩|e0⟩ + |1⟩|e1⟩)/√2 onto span{|0⟩} ⊗ I
        let lay = FactorLayout::new(1, vec![EnvFactor { qubit: 0, dim: 2 }]).unwrap();
        let bell = PureState::new(lay, vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).unwrap();
        let sub = Subspace::new(FactorLayout::system(1).unwrap(), vec![ket("0")]).unwrap();
        let r = project(&bell, &sub).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-12);
        let comp = r.component.unwrap();
        assert!((comp.amplitudes()[0] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn project_partial_environment() {
        // the state has two environment factors, the subspace mentions one
        let lay = FactorLayout::new(2, vec![EnvFactor { qubit: 1, dim: 3 }, EnvFactor { qubit: 0, dim: 2 }]).unwrap();
        let s = PureState::random(lay, &mut rand::rng());
        let sub_lay = FactorLayout::new(2, vec![EnvFactor { qubit: 0, dim: 2 }]).unwrap();
        let total: f64 = (0..sub_lay.dim())
            .map(|j| {
                let mut v = PureState::zero(sub_lay.clone());
                v.amps[j] = c(1.0);
                project(&s, &Subspace::new(sub_lay.clone(), vec![v]).unwrap()).unwrap().probability
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        let wrong = FactorLayout::new(2, vec![EnvFactor { qubit: 0, dim: 3 }]).unwrap();
        let v = PureState::basis(&"00".parse().unwrap()).unwrap();
        let v = tensor(&v, &PureState::new(FactorLayout::new(0, vec![EnvFactor { qubit: 0, dim: 3 }]).unwrap(), vec![c(1.0), c(0.0), c(0.0)]).unwrap()).unwrap();
        assert!(project(&s, &Subspace::new(wrong, vec![v]).unwrap()).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let lay = FactorLayout::new(1, vec![EnvFactor { qubit: 0, dim: 2 }]).unwrap();
        let bell = PureState::new(lay, vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).unwrap();
        let d = schmidt_diagnostics(&bell);
        assert!((d.max_coefficient - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((d.purity - 0.5).abs() < 1e-12);
        assert!(!d.disentangled());

        let mut rng = rand::rng();
        let env = PureState::random(FactorLayout::new(0, vec![EnvFactor { qubit: 1, dim: 4 }]).unwrap(), &mut rng);
        let prod = tensor(&phase3_c0(), &env).unwrap();
        let d = schmidt_diagnostics(&prod);
        assert!((d.max_coefficient - 1.0).abs() < 1e-12);
        assert!((d.purity - 1.0).abs() < 1e-12);
        assert!(d.disentangled());
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = rand::rng();
        let env = PureState::random(FactorLayout::new(0, vec![EnvFactor { qubit: 0, dim: 3 }]).unwrap(), &mut rng);
        let psi = PureState::random(FactorLayout::system(2).unwrap(), &mut rng);
        let joint = tensor(&psi, &env).unwrap();
        assert!((fidelity_against(&joint, &psi).unwrap() - 1.0).abs() < 1e-12);
        let joint = tensor(&phase3_c1(), &env).unwrap();
        assert!(fidelity_against(&joint, &phase3_c0()).unwrap().abs() < 1e-12);
        assert!(fidelity_against(&joint, &ket("00")).is_err());
        assert!(fidelity_against(&joint, &joint).is_err());
    }

    #[test]
    fn layout_rules() {
        assert!(FactorLayout::new(2, vec![EnvFactor { qubit: 0, dim: 2 }, EnvFactor { qubit: 0, dim: 2 }]).is_err());
        assert!(FactorLayout::new(2, vec![EnvFactor { qubit: 5, dim: 2 }]).is_err());
        assert!(matches!(FactorLayout::system(17), Err(Error::DimensionCap(_))));
        assert!(FactorLayout::system(16).is_ok());
        assert!(matches!(
            FactorLayout::new(15, vec![EnvFactor { qubit: 0, dim: 4 }]),
            Err(Error::DimensionCap(131072))
        ));
    }

    #[test]
    fn state_file_roundtrip() {
        let lay = FactorLayout::new(2, vec![EnvFactor { qubit: 1, dim: 3 }]).unwrap();
        let s = PureState::random(lay, &mut rand::rng());
        let text = serde_json::to_string(&s.to_file()).unwrap();
        let back: StateFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_state().unwrap(), s);

        let sparse = r#"{"qubits": 2, "amps": [{"basis": "(01)", "re": 1.0}]}"#;
        let f: StateFile = serde_json::from_str(sparse).unwrap();
        assert_eq!(f.to_state().unwrap(), ket("01"));
        let bad = r#"{"qubits": 2, "amps": [{"basis": "(01)", "re": 2.0}]}"#;
        let f: StateFile = serde_json::from_str(bad).unwrap();
        assert!(matches!(f.to_state(), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = std::iter::once(1.0).chain(std::iter::repeat_n(1e-16, 10_000)).chain(std::iter::once(-1.0));
        assert!((compensated_sum(values) - 1e-12).abs() < 1e-20);
    }
}

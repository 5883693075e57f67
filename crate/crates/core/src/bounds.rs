//! Quantum Hamming and Gilbert–Varshamov bounds in exact integer arithmetic,
//! plus their asymptotic rate forms.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};

/// Block length `n`, logical qubits `l` and correctable weight `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundQuery {
    pub n: usize,
    pub l: usize,
    pub t: usize,
}

impl BoundQuery {
    pub fn new(n: usize, l: usize, t: usize) -> Result<Self> {
        if t > n || l > n {
            return Err(invalid(format!("bound query needs t <= n and l <= n (n={n}, l={l}, t={t})")));
        }
        Ok(BoundQuery { n, l, t })
    }
}

/// `(τ, rate)` sample of an asymptotic bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub tau: f64,
    pub rate: f64,
}

fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// `Σ_{i≤t} 3^i C(n,i)`.
pub fn sphere_volume(n: usize, t: usize) -> Result<BigUint> {
    if t > n {
        return Err(invalid(format!("sphere volume needs t <= n (n={n}, t={t})")));
    }
    let mut total = BigUint::zero();
    let mut term = BigUint::one();
    for i in 0..=t {
        total += &term;
        term = term * 3u32 * (n - i) / (i + 1);
    }
    Ok(total)
}

/// Left-hand side `2^l · V(n,t)` of the Hamming inequality.
pub fn hamming_lhs(q: BoundQuery) -> BigUint {
    sphere_volume(q.n, q.t).expect("validated query") << q.l
}

pub fn hamming_holds(q: BoundQuery) -> bool {
    hamming_lhs(q) <= pow2(q.n)
}

/// The Hamming inequality is saturated: `2^l · V(n,t) = 2^n`.
pub fn hamming_is_tight(q: BoundQuery) -> bool {
    hamming_lhs(q) == pow2(q.n)
}

/// Smallest `n` satisfying the Hamming inequality.
pub fn min_n_hamming(l: usize, t: usize) -> usize {
    (l.max(t)..)
        .find(|&n| hamming_holds(BoundQuery { n, l, t }))
        .expect("the sphere volume grows polynomially")
}

/// `⌈2^n / V(n,2t)⌉`, the size every maximal code of distance `2t+1` must
/// reach; 1 when `2t > n`.
pub fn gv_guaranteed_codewords(n: usize, t: usize) -> BigUint {
    if 2 * t > n {
        return BigUint::one();
    }
    let v = sphere_volume(n, 2 * t).expect("2t <= n");
    (pow2(n) + &v - 1u32) / v
}

/// Smallest `n ≥ l` whose guaranteed codeword count reaches `2^l`.
pub fn min_n_gv(l: usize, t: usize) -> usize {
    let target = pow2(l);
    (l..).find(|&n| gv_guaranteed_codewords(n, t) >= target).expect("the guarantee grows exponentially")
}

/// Literal covering inequality `2^l · V(n, min(2t,n)) ≥ 2^n`.
pub fn gv_inequality_holds(q: BoundQuery) -> bool {
    let v = sphere_volume(q.n, (2 * q.t).min(q.n)).expect("clamped");
    (v << q.l) >= pow2(q.n)
}

/// Binary entropy, with `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// `1 − τ log₂3 − H(τ)`.
pub fn asymptotic_hamming_rate(tau: f64) -> Result<f64> {
    Ok(1.0 - tau * 3f64.log2() - entropy(tau)?)
}

/// `1 − 2τ log₂3 − H(2τ)`; requires `2τ ≤ 1`.
pub fn asymptotic_gv_rate(tau: f64) -> Result<f64> {
    Ok(1.0 - 2.0 * tau * 3f64.log2() - entropy(2.0 * tau)?)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zero of the asymptotic Hamming rate on `[0, 1/2]`.
pub fn hamming_rate_root() -> f64 {
    bisect(|x| asymptotic_hamming_rate(x).expect("in range"), 0.0, 0.5)
}

/// Zero of the asymptotic GV rate on `[0, 1/4]`.
pub fn gv_rate_root() -> f64 {
    bisect(|x| asymptotic_gv_rate(x).expect("in range"), 0.0, 0.25)
}

pub fn rate_curve(taus: &[f64], rate: impl Fn(f64) -> Result<f64>) -> Result<Vec<RatePoint>> {
    taus.iter().map(|&tau| Ok(RatePoint { tau, rate: rate(tau)? })).collect()
}

/// `log₂ x` for a positive big integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits").to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits") as f64;
    top.log2() + shift as f64
}

/// `(1/n) log₂(2^n / V(n,t))`.
pub fn finite_size_rate(n: usize, t: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("finite-size rate needs n >= 1"));
    }
    Ok((n as f64 - log2_big(&sphere_volume(n, t)?)) / n as f64)
}

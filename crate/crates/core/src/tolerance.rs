//! Numerical tolerances shared by every module.

/// Normalization and orthogonality checks on states and subspaces.
pub const ORTHO: f64 = 1e-9;

/// Projection probabilities below this are treated as exactly zero.
pub const ZERO_PROB: f64 = 1e-12;

/// Per-entry tolerance for Gram matrices of syndrome bases.
pub const GRAM: f64 = 1e-8;

/// Largest joint amplitude vector the simulator will allocate.
pub const MAX_AMPLITUDES: usize = 1 << 16;

/// Longest supported bit string (one machine word).
pub const MAX_BITS: usize = 64;

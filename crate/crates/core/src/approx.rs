//! Fixed-point binary approximation of a target state.
//!
//! A target `Σ ã_j e^{2πi φ̃_j} |j⟩` is quantized to integer amplitudes
//! `a_j = Σ_k α_jk 2^k` (`m` bits) and phases `φ_j = Σ_k β_jk 2^{-k}` (`m`
//! binary digits, in turns). The state the circuit emits is
//! `G⁻¹ Σ a_j e^{2πi φ_j} |j⟩` with `G = √(Σ a_j²)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on `Σ ã_j² = 1` for inputs that claim to be normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Largest supported precision; keeps `a_j` and `G²` exact in `f64`.
pub const MAX_PRECISION: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Input must already satisfy `Σ ã_j² = 1`.
    Strict,
    /// Input is rescaled to unit norm on ingestion.
    Rescale,
}

/// Target amplitudes in polar form: magnitudes `ã_j ≥ 0` and phases in turns,
/// `φ̃_j ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetState {
    n: usize,
    magnitudes: Vec<f64>,
    phases: Vec<f64>,
}

impl TargetState {
    /// Phases are taken modulo one turn.
    pub fn from_polar(magnitudes: Vec<f64>, phases: Vec<f64>, norm: Normalization) -> Result<Self> {
        let len = magnitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidTarget(format!("expected 2^n amplitudes with n ≥ 1, got {len}")));
        }
        if phases.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: phases.len() });
        }
        if let Some(bad) = magnitudes.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(Error::InvalidTarget(format!("magnitude {bad} is not a finite non-negative number")));
        }
        if let Some(bad) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidTarget(format!("phase {bad} is not finite")));
        }
        let phases = phases.into_iter().map(wrap_turns).collect();

        let norm_sqr: f64 = magnitudes.iter().map(|a| a * a).sum();
        let magnitudes = match norm {
            Normalization::Strict => {
                if (norm_sqr - 1.0).abs() > NORMALIZATION_TOLERANCE {
                    return Err(Error::InvalidTarget(format!(
                        "squared norm {norm_sqr} differs from 1 (flag the input as unnormalized to rescale)"
                    )));
                }
                magnitudes
            }
            Normalization::Rescale => {
                if norm_sqr == 0.0 {
                    return Err(Error::InvalidTarget("all amplitudes are zero".into()));
                }
                let scale = norm_sqr.sqrt();
                magnitudes.into_iter().map(|a| a / scale).collect()
            }
        };
        Ok(Self { n: len.trailing_zeros() as usize, magnitudes, phases })
    }

    pub fn from_complex(amps: &[C64], norm: Normalization) -> Result<Self> {
        let magnitudes = amps.iter().map(|a| a.norm()).collect();
        let phases = amps.iter().map(|a| if a.norm() == 0.0 { 0.0 } else { a.arg() / (2.0 * PI) }).collect();
        Self::from_polar(magnitudes, phases, norm)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Phases in turns.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        self.magnitudes.iter().zip(&self.phases).map(|(&a, &p)| C64::from_polar(a, 2.0 * PI * p)).collect()
    }
}

fn wrap_turns(p: f64) -> f64 {
    let w = p.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Amplitude bits `α_jk` and phase bits `β_jk`, stored as the integers they
/// spell: `a_j = Σ_k α_jk 2^k` and `b_j` with `φ_j = b_j / 2^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BitPlan {
    n: usize,
    m: u32,
    amplitudes: Vec<u64>,
    phase_numerators: Vec<u64>,
}

impl BitPlan {
    pub fn new(n: usize, m: u32, amplitudes: Vec<u64>, phase_numerators: Vec<u64>) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize {
            return Err(Error::InvalidPlan(format!("n = {n} out of range")));
        }
        if m == 0 || m > MAX_PRECISION {
            return Err(Error::InvalidPlan(format!("precision m = {m} outside 1..={MAX_PRECISION}")));
        }
        let len = 1usize << n;
        for v in [&amplitudes, &phase_numerators] {
            if v.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: v.len() });
            }
        }
        let limit = 1u64 << m;
        if let Some(a) = amplitudes.iter().find(|&&a| a >= limit) {
            return Err(Error::InvalidPlan(format!("amplitude {a} needs more than {m} bits")));
        }
        if let Some(b) = phase_numerators.iter().find(|&&b| b >= limit) {
            return Err(Error::InvalidPlan(format!("phase numerator {b} needs more than {m} bits")));
        }
        if amplitudes.iter().all(|&a| a == 0) {
            return Err(Error::InvalidPlan("all amplitudes are zero".into()));
        }
        Ok(Self { n, m, amplitudes, phase_numerators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Integer amplitudes `a_j`.
    pub fn amplitudes(&self) -> &[u64] {
        &self.amplitudes
    }

    /// `b_j = φ_j · 2^m`.
    pub fn phase_numerators(&self) -> &[u64] {
        &self.phase_numerators
    }

    /// `α_jk`, the bit of weight `2^k` in `a_j`, `k = 0..m`.
    pub fn alpha(&self, j: usize, k: u32) -> u8 {
        debug_assert!(k < self.m);
        ((self.amplitudes[j] >> k) & 1) as u8
    }

    /// `β_jk`, the binary digit of weight `2^{-k}` in `φ_j`, `k = 1..=m`.
    pub fn beta(&self, j: usize, k: u32) -> u8 {
        debug_assert!((1..=self.m).contains(&k));
        ((self.phase_numerators[j] >> (self.m - k)) & 1) as u8
    }

    /// `[β_j1, …, β_jm]`.
    pub fn beta_bits(&self, j: usize) -> Vec<u8> {
        (1..=self.m).map(|k| self.beta(j, k)).collect()
    }

    /// `φ_j` in turns.
    pub fn phase(&self, j: usize) -> f64 {
        self.phase_numerators[j] as f64 / (1u64 << self.m) as f64
    }

    /// `c_k = |{j : α_jk = 1}|`.
    pub fn alpha_popcount(&self, k: u32) -> usize {
        (0..self.len()).filter(|&j| self.alpha(j, k) == 1).count()
    }

    pub fn g_squared(&self) -> f64 {
        self.amplitudes.iter().map(|&a| (a * a) as f64).sum()
    }

    /// `G = √(Σ a_j²)`.
    pub fn g(&self) -> f64 {
        self.g_squared().sqrt()
    }
}

/// Quantizes `target` to `m` bits.
///
/// `a_j = min(round(ã_j 2^m), 2^m - 1)` and `b_j = round(φ̃_j 2^m) mod 2^m`,
/// both rounding half away from zero. Fails if every `a_j` rounds to zero.
pub fn decompose(target: &TargetState, m: u32) -> Result<BitPlan> {
    if m == 0 || m > MAX_PRECISION {
        return Err(Error::InvalidPlan(format!("precision m = {m} outside 1..={MAX_PRECISION}")));
    }
    let scale = (1u64 << m) as f64;
    let max_a = (1u64 << m) - 1;
    let amplitudes: Vec<u64> = target.magnitudes().iter().map(|&a| ((a * scale).round() as u64).min(max_a)).collect();
    if amplitudes.iter().all(|&a| a == 0) {
        let largest = target.magnitudes().iter().copied().fold(0.0, f64::max);
        let min_m = (m + 1..=MAX_PRECISION)
            .find(|&mm| (largest * (1u64 << mm) as f64).round() >= 1.0)
            .unwrap_or(MAX_PRECISION + 1);
        return Err(Error::AllZeroPlan { m, min_m });
    }
    let phase_numerators = target.phases().iter().map(|&p| ((p * scale).round() as u64) % (1u64 << m)).collect();
    BitPlan::new(target.n(), m, amplitudes, phase_numerators)
}

/// The normalized state `G⁻¹ Σ a_j e^{2πi φ_j} |j⟩` the compiled circuit emits.
pub fn reconstruct(plan: &BitPlan) -> TargetState {
    let g = plan.g();
    let magnitudes = plan.amplitudes().iter().map(|&a| a as f64 / g).collect();
    let phases = (0..plan.len()).map(|j| plan.phase(j)).collect();
    TargetState::from_polar(magnitudes, phases, Normalization::Strict)
        .expect("a valid plan reconstructs to a normalized state")
}

/// `|⟨x|y⟩|²`.
pub fn fidelity(x: &TargetState, y: &TargetState) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    Ok(state_fidelity(&x.amplitudes(), &y.amplitudes()))
}

/// `|⟨x|y⟩|²` of raw amplitude vectors, clamped to `[0, 1]`.
pub fn state_fidelity(x: &[C64], y: &[C64]) -> f64 {
    crate::state::inner(x, y).norm_sqr().clamp(0.0, 1.0)
}

//! Dense statevector over the composite register.
//!
//! Basis indices follow the global convention of [`RegisterLayout`]: qubit `q`
//! carries bit value `2^(total - 1 - q)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::layout::RegisterLayout;

/// States at least this wide are updated in parallel.
const PAR_MIN_QUBITS: usize = 14;

/// Post-selection below this squared norm counts as "no support".
const ZERO_NORM: f64 = 1e-30;

/// Largest linear entropy accepted by [`StateVector::extract_subsystem`].
pub const ENTANGLEMENT_TOLERANCE: f64 = 1e-10;

/// A `(qubit, bit)` requirement; a list of them selects a subspace.
pub type BitPattern = [(usize, u8)];

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

/// One term `P ⊗ X_target` of an operator `Σ P_i ⊗ X_i + (I - Σ P_i) ⊗ I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorTerm {
    pub pattern: Vec<(usize, u8)>,
    /// Qubit flipped on the support of `pattern`; `None` is the identity.
    pub flip: Option<usize>,
}

impl ProjectorTerm {
    pub fn flip(pattern: Vec<(usize, u8)>, target: usize) -> Self {
        Self { pattern, flip: Some(target) }
    }
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize, max_qubits: usize) -> Result<Self> {
        if num_qubits > max_qubits {
            return Err(Error::Capacity { qubits: num_qubits, max_qubits });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1usize << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// `|Φ₀⟩ = |0⟩_S |0⟩_R |0⟩_φ |0⟩_A |0⟩_B`.
    pub fn ground(layout: &RegisterLayout, max_qubits: usize) -> Result<Self> {
        layout.check_capacity(max_qubits)?;
        Self::zero(layout.total(), max_qubits)
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: amps.len().next_power_of_two().max(1),
                found: amps.len(),
            });
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn bit_value(&self, q: usize) -> usize {
        1usize << (self.num_qubits - 1 - q)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(inner(&self.amps, &other.amps))
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, total: self.num_qubits });
        }
        Ok(())
    }

    fn mask(&self, pattern: &BitPattern) -> Result<(usize, usize)> {
        let (mut mask, mut value) = (0, 0);
        for &(q, bit) in pattern {
            self.check_qubit(q)?;
            let bv = self.bit_value(q);
            if mask & bv != 0 {
                return Err(Error::InvalidGate(format!("qubit {q} repeated in pattern")));
            }
            mask |= bv;
            if bit != 0 {
                value |= bv;
            }
        }
        Ok((mask, value))
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let tbit = self.bit_value(gate.target());
        match gate {
            Gate::Hadamard { .. } => for_each_pair(&mut self.amps, tbit, |_, a, b| {
                let (x, y) = (*a, *b);
                *a = (x + y) * FRAC_1_SQRT_2;
                *b = (x - y) * FRAC_1_SQRT_2;
            }),
            Gate::PhaseK { k, adjoint, .. } => {
                let sign = if *adjoint { -1.0 } else { 1.0 };
                let phase = C64::from_polar(1.0, sign * 2.0 * PI / (1u64 << k) as f64);
                for_each_pair(&mut self.amps, tbit, |_, _, b| *b *= phase);
            }
            Gate::PauliX { .. } => for_each_pair(&mut self.amps, tbit, |_, a, b| std::mem::swap(a, b)),
            Gate::Mcx { controls, .. } => {
                let pattern: Vec<_> = controls.iter().map(|c| (c.qubit, c.polarity as u8)).collect();
                let (cmask, cval) = self.mask(&pattern)?;
                for_each_pair(&mut self.amps, tbit, |i, a, b| {
                    if i & cmask == cval {
                        std::mem::swap(a, b);
                    }
                });
            }
        }
        Ok(())
    }

    pub fn apply_gates<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Applies `Σ_i P_i ⊗ X_{t_i} + (I - Σ_i P_i) ⊗ I` by evaluating every
    /// basis index against the projector patterns directly, without going
    /// through the gate kernels. Patterns must be pairwise orthogonal.
    pub fn apply_projector_sum(&self, terms: &[ProjectorTerm]) -> Result<StateVector> {
        for (i, t) in terms.iter().enumerate() {
            self.mask(&t.pattern)?;
            if let Some(f) = t.flip {
                self.check_qubit(f)?;
                if t.pattern.iter().any(|&(q, _)| q == f) {
                    return Err(Error::InvalidGate(format!("flip target {f} lies inside its own projector")));
                }
            }
            for (j, u) in terms[..i].iter().enumerate() {
                let orthogonal = t.pattern.iter().any(|&(q, b)| u.pattern.iter().any(|&(p, c)| p == q && c != b));
                if !orthogonal {
                    return Err(Error::OverlappingProjectors { first: j, second: i });
                }
            }
        }

        let n = self.num_qubits;
        let bit_of = |idx: usize, q: usize| ((idx >> (n - 1 - q)) & 1) as u8;
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (idx, &amp) in self.amps.iter().enumerate() {
            let hit = terms.iter().find(|t| t.pattern.iter().all(|&(q, b)| bit_of(idx, q) == b));
            let dest = match hit.and_then(|t| t.flip) {
                Some(f) => idx ^ (1 << (n - 1 - f)),
                None => idx,
            };
            out[dest] += amp;
        }
        Ok(StateVector { num_qubits: n, amps: out })
    }

    /// Squared norm of the projection onto `pattern`.
    pub fn probability(&self, pattern: &BitPattern) -> Result<f64> {
        let (mask, value) = self.mask(pattern)?;
        Ok(self.amps.iter().enumerate().filter(|(i, _)| i & mask == value).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Unnormalized projection onto `pattern`.
    pub fn project(&self, pattern: &BitPattern) -> Result<StateVector> {
        let (mask, value) = self.mask(pattern)?;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| if i & mask == value { a } else { C64::new(0.0, 0.0) })
            .collect();
        Ok(StateVector { num_qubits: self.num_qubits, amps })
    }

    /// Projects onto `pattern` and renormalizes. Also returns the squared norm
    /// of the projection, i.e. the success probability of an ordinary
    /// projective measurement landing on `pattern`.
    pub fn postselect(&self, pattern: &BitPattern) -> Result<(StateVector, f64)> {
        if pattern.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let mut projected = self.project(pattern)?;
        let prob = projected.norm_sqr();
        if prob.is_nan() || prob <= ZERO_NORM {
            return Err(Error::ZeroNormProjection);
        }
        let scale = 1.0 / prob.sqrt();
        projected.amps.iter_mut().for_each(|a| *a *= scale);
        Ok((projected, prob))
    }

    /// Returns the normalized state of `qubits` (first listed qubit is the most
    /// significant bit) if the state factorizes as `qubits ⊗ rest`.
    ///
    /// Factorization is tested on the reduced density matrix `ρ = M M†`, with
    /// `M` the amplitudes reshaped to `qubits × rest`: the linear entropy
    /// `1 - tr ρ² / (tr ρ)²` must not exceed [`ENTANGLEMENT_TOLERANCE`].
    pub fn extract_subsystem(&self, qubits: &[usize]) -> Result<Vec<C64>> {
        let k = qubits.len();
        if k == 0 {
            return Err(Error::InvalidGate("empty subsystem".into()));
        }
        let pattern: Vec<_> = qubits.iter().map(|&q| (q, 0u8)).collect();
        let (sub_mask, _) = self.mask(&pattern)?;

        let sub_dim = 1usize << k;
        let rest_dim = self.dim() >> k;
        let bits: Vec<usize> = qubits.iter().map(|&q| self.bit_value(q)).collect();
        let rest_bits: Vec<usize> =
            (0..self.num_qubits).map(|q| self.bit_value(q)).filter(|bv| sub_mask & bv == 0).collect();

        // columns[c][s]
        let mut columns = vec![vec![C64::new(0.0, 0.0); sub_dim]; rest_dim];
        for (idx, &a) in self.amps.iter().enumerate() {
            let s = bits.iter().fold(0, |acc, bv| (acc << 1) | usize::from(idx & bv != 0));
            let c = rest_bits.iter().fold(0, |acc, bv| (acc << 1) | usize::from(idx & bv != 0));
            columns[c][s] = a;
        }

        let mut rho = vec![C64::new(0.0, 0.0); sub_dim * sub_dim];
        for col in &columns {
            for r in 0..sub_dim {
                if col[r] == C64::new(0.0, 0.0) {
                    continue;
                }
                for s in 0..sub_dim {
                    rho[r * sub_dim + s] += col[r] * col[s].conj();
                }
            }
        }
        let trace: f64 = (0..sub_dim).map(|r| rho[r * sub_dim + r].re).sum();
        if trace.is_nan() || trace <= ZERO_NORM {
            return Err(Error::ZeroNormProjection);
        }
        let purity: f64 = rho.iter().map(|x| x.norm_sqr()).sum::<f64>() / (trace * trace);
        let residual = (1.0 - purity).max(0.0);
        if residual > ENTANGLEMENT_TOLERANCE {
            return Err(Error::ResidualEntanglement { residual });
        }

        let best = columns.iter().max_by(|x, y| col_norm(x).total_cmp(&col_norm(y))).expect("non-empty");
        let norm = col_norm(best).sqrt();
        Ok(best.iter().map(|a| a / norm).collect())
    }
}

fn col_norm(col: &[C64]) -> f64 {
    col.iter().map(|a| a.norm_sqr()).sum()
}

/// Calls `f(i, lo, hi)` for every pair of amplitudes differing only in the
/// bit `tbit`, where `i` is the index of `lo` (target bit clear).
fn for_each_pair<F>(amps: &mut [C64], tbit: usize, f: F)
where
    F: Fn(usize, &mut C64, &mut C64) + Sync + Send,
{
    let stride = 2 * tbit;
    let body = |(c, chunk): (usize, &mut [C64])| {
        let (lo, hi) = chunk.split_at_mut(tbit);
        for (o, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            f(c * stride + o, a, b);
        }
    };
    if amps.len() >= 1 << PAR_MIN_QUBITS {
        amps.par_chunks_mut(stride).enumerate().for_each(body);
    } else {
        amps.chunks_mut(stride).enumerate().for_each(body);
    }
}

/// `⟨x|y⟩`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Rotates `candidate` by a global phase so that its entry at the
/// largest-magnitude index of `reference` has the same phase as `reference`.
pub fn align_global_phase(reference: &[C64], candidate: &[C64]) -> Vec<C64> {
    let pivot =
        reference.iter().enumerate().max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr())).map(|(i, _)| i);
    let Some(pivot) = pivot else {
        return candidate.to_vec();
    };
    let (r, c) = (reference[pivot], candidate[pivot]);
    if r.norm() == 0.0 || c.norm() == 0.0 {
        return candidate.to_vec();
    }
    let rot = (r / r.norm()) * (c / c.norm()).conj();
    candidate.iter().map(|a| a * rot).collect()
}

/// Largest entrywise distance after global-phase alignment.
pub fn max_diff_aligned(reference: &[C64], candidate: &[C64]) -> f64 {
    assert_eq!(reference.len(), candidate.len());
    align_global_phase(reference, candidate).iter().zip(reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Largest entrywise distance, no phase alignment.
pub fn max_diff(x: &[C64], y: &[C64]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

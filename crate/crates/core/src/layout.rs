//! Qubit index assignment for the composite register `S ⊗ R ⊗ φ ⊗ A ⊗ B`.
//!
//! Global convention: the qubit with global index `q` carries bit value
//! `2^(total - 1 - q)` of a basis index. All register-internal endianness is
//! resolved here:
//!
//! * `S` is big-endian: `S₁` (global `0`) is the most significant bit of `j`.
//! * `R` is little-endian: `R_i` carries bit value `2^(i-1)` of the integer
//!   stored in `R`.
//! * `φ_k` is the qubit that receives the phase rotation `e^{2πi/2^k}`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the register width: `2^26` amplitudes.
pub const DEFAULT_MAX_QUBITS: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RegisterLayout {
    n: usize,
    m: usize,
}

impl RegisterLayout {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPlan("S register needs at least one qubit".into()));
        }
        if m == 0 {
            return Err(Error::InvalidPlan("precision m must be at least 1".into()));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `n + 2m + 4`.
    pub fn total(&self) -> usize {
        self.n + 2 * self.m + 4
    }

    pub fn dim(&self) -> usize {
        1usize << self.total()
    }

    /// Global index of `S_i`, `i = 1..=n`.
    pub fn s(&self, i: usize) -> usize {
        assert!((1..=self.n).contains(&i), "S index {i} out of 1..={}", self.n);
        i - 1
    }

    /// Global index of `R_i`, `i = 1..=m`.
    pub fn r(&self, i: usize) -> usize {
        assert!((1..=self.m).contains(&i), "R index {i} out of 1..={}", self.m);
        self.n + i - 1
    }

    /// Global index of `φ_k`, `k = 1..=m`.
    pub fn phi(&self, k: usize) -> usize {
        assert!((1..=self.m).contains(&k), "φ index {k} out of 1..={}", self.m);
        self.n + self.m + k - 1
    }

    pub fn a1(&self) -> usize {
        self.n + 2 * self.m
    }

    pub fn a2(&self) -> usize {
        self.a1() + 1
    }

    pub fn b1(&self) -> usize {
        self.a1() + 2
    }

    pub fn b2(&self) -> usize {
        self.a1() + 3
    }

    pub fn s_qubits(&self) -> Vec<usize> {
        (1..=self.n).map(|i| self.s(i)).collect()
    }

    pub fn r_qubits(&self) -> Vec<usize> {
        (1..=self.m).map(|i| self.r(i)).collect()
    }

    pub fn phi_qubits(&self) -> Vec<usize> {
        (1..=self.m).map(|k| self.phi(k)).collect()
    }

    /// Bit value of global qubit `q` inside a basis index.
    pub fn bit_value(&self, q: usize) -> usize {
        debug_assert!(q < self.total());
        1usize << (self.total() - 1 - q)
    }

    /// `(qubit, bit)` pattern putting `j` on `S`, most significant bit first.
    pub fn s_pattern(&self, j: usize) -> Vec<(usize, u8)> {
        (1..=self.n).map(|i| (self.s(i), ((j >> (self.n - i)) & 1) as u8)).collect()
    }

    /// `(qubit, bit)` pattern putting the integer `k` on `R` (little-endian).
    pub fn r_pattern(&self, k: usize) -> Vec<(usize, u8)> {
        (1..=self.m).map(|i| (self.r(i), ((k >> (i - 1)) & 1) as u8)).collect()
    }

    /// `(qubit, bit)` pattern for phase bits `β_1..β_m`, `bits[k-1]` on `φ_k`.
    pub fn phi_pattern(&self, bits: &[u8]) -> Vec<(usize, u8)> {
        assert_eq!(bits.len(), self.m);
        bits.iter().enumerate().map(|(i, &b)| (self.phi(i + 1), b)).collect()
    }

    /// Basis index for the given register contents. `phi_bits[k-1]` is the
    /// value of `φ_k`; `a` and `b` are `(A₁, A₂)` and `(B₁, B₂)`.
    pub fn basis_index(&self, j: usize, r: usize, phi_bits: &[u8], a: (u8, u8), b: (u8, u8)) -> usize {
        let mut idx = 0;
        let mut set = |pattern: &[(usize, u8)]| {
            for &(q, bit) in pattern {
                if bit == 1 {
                    idx |= self.bit_value(q);
                }
            }
        };
        set(&self.s_pattern(j));
        set(&self.r_pattern(r));
        set(&self.phi_pattern(phi_bits));
        set(&[(self.a1(), a.0), (self.a2(), a.1), (self.b1(), b.0), (self.b2(), b.1)]);
        idx
    }

    /// Fails if the register does not fit under `max_qubits`.
    pub fn check_capacity(&self, max_qubits: usize) -> Result<()> {
        if self.total() > max_qubits {
            return Err(Error::Capacity { qubits: self.total(), max_qubits });
        }
        Ok(())
    }
}

//! Gate primitives: Hadamard, the `k`-th phase rotation, Pauli-X and
//! multi-controlled X with per-control polarity.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A control qubit together with the bit value it requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Control {
    pub qubit: usize,
    /// `true` for a positive control (fires on `|1⟩`), `false` for a negative
    /// control (fires on `|0⟩`).
    pub polarity: bool,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Self { qubit, polarity: true }
    }

    pub fn neg(qubit: usize) -> Self {
        Self { qubit, polarity: false }
    }

    pub fn from_bit(qubit: usize, bit: u8) -> Self {
        Self { qubit, polarity: bit != 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Gate {
    Hadamard {
        target: usize,
    },
    /// `diag(1, e^{±2πi/2^k})`; `adjoint` selects the minus sign.
    PhaseK {
        target: usize,
        k: u32,
        adjoint: bool,
    },
    PauliX {
        target: usize,
    },
    Mcx {
        controls: Vec<Control>,
        target: usize,
    },
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Gate::Hadamard { target }
    }

    pub fn phase_k(target: usize, k: u32) -> Self {
        Gate::PhaseK { target, k, adjoint: false }
    }

    pub fn x(target: usize) -> Self {
        Gate::PauliX { target }
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Gate::Mcx { controls, target }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::Hadamard { target }
            | Gate::PhaseK { target, .. }
            | Gate::PauliX { target }
            | Gate::Mcx { target, .. } => target,
        }
    }

    pub fn controls(&self) -> &[Control] {
        match self {
            Gate::Mcx { controls, .. } => controls,
            _ => &[],
        }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls().iter().map(|c| c.qubit).chain(std::iter::once(self.target()))
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::PhaseK { target, k, adjoint } => Gate::PhaseK { target: *target, k: *k, adjoint: !adjoint },
            other => other.clone(),
        }
    }

    /// Checks index ranges, distinct controls and `target ∉ controls`.
    pub fn validate(&self, total: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= total {
                return Err(Error::QubitOutOfRange { qubit: q, total });
            }
        }
        if let Gate::PhaseK { k, .. } = self {
            if *k == 0 || *k > 62 {
                return Err(Error::InvalidGate(format!("phase order k = {k} outside 1..=62")));
            }
        }
        let controls = self.controls();
        for (i, c) in controls.iter().enumerate() {
            if c.qubit == self.target() {
                return Err(Error::InvalidGate(format!("qubit {} is both control and target", c.qubit)));
            }
            if controls[..i].iter().any(|d| d.qubit == c.qubit) {
                return Err(Error::InvalidGate(format!("duplicate control qubit {}", c.qubit)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    /// One line of the circuit text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Hadamard { target } => write!(f, "H {target}"),
            Gate::PhaseK { target, k, adjoint: false } => write!(f, "P {k} {target}"),
            Gate::PhaseK { target, k, adjoint: true } => write!(f, "PDG {k} {target}"),
            Gate::PauliX { target } => write!(f, "X {target}"),
            Gate::Mcx { controls, target } => {
                write!(f, "MCX")?;
                for c in controls {
                    let sign = if c.polarity { '+' } else { '-' };
                    write!(f, " {sign}{}", c.qubit)?;
                }
                write!(f, " {target}")
            }
        }
    }
}

#![allow(dead_code)]

use cmprep_core::{BitPlan, Complex64 as C64, Normalization, TargetState};
use rand::Rng;

pub const CAP: usize = cmprep_core::DEFAULT_MAX_QUBITS;

/// `(−2i|0⟩ − 3|1⟩)/√13`.
pub fn worked_example_target() -> TargetState {
    let s = 13f64.sqrt();
    TargetState::from_complex(&[C64::new(0.0, -2.0 / s), C64::new(-3.0 / s, 0.0)], Normalization::Strict).unwrap()
}

/// `a = (2, 3)`, `φ = (3/4, 1/2)` at `m = 2`.
pub fn worked_example_plan() -> BitPlan {
    BitPlan::new(1, 2, vec![2, 3], vec![3, 2]).unwrap()
}

/// Amplitudes drawn uniformly from the unit square, then normalized.
pub fn random_target<R: Rng>(rng: &mut R, n: usize) -> TargetState {
    let amps: Vec<C64> =
        (0..1usize << n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    TargetState::from_complex(&amps, Normalization::Rescale).unwrap()
}

/// Uniform amplitude and phase integers, never all zero.
pub fn random_plan<R: Rng>(rng: &mut R, n: usize, m: u32) -> BitPlan {
    let len = 1usize << n;
    let limit = 1u64 << m;
    let mut a: Vec<u64> = (0..len).map(|_| rng.gen_range(0..limit)).collect();
    if a.iter().all(|&x| x == 0) {
        a[rng.gen_range(0..len)] = rng.gen_range(1..limit);
    }
    let b = (0..len).map(|_| rng.gen_range(0..limit)).collect();
    BitPlan::new(n, m, a, b).unwrap()
}

/// Whether every row `(a_j, b_j)` is the same, i.e. the prepared state is a
/// uniform superposition that never entangles `S` with the other registers.
pub fn rows_identical(plan: &BitPlan) -> bool {
    let first = (plan.amplitudes()[0], plan.phase_numerators()[0]);
    (0..plan.len()).all(|j| (plan.amplitudes()[j], plan.phase_numerators()[j]) == first)
}

//! Fixtures shared by the benchmarks.

use cmprep_core::BitPlan;
use rand::Rng;

/// A plan with uniformly random amplitude and phase integers, never all zero.
pub fn random_plan<R: Rng>(rng: &mut R, n: usize, m: u32) -> BitPlan {
    let len = 1usize << n;
    let limit = 1u64 << m;
    let mut amplitudes: Vec<u64> = (0..len).map(|_| rng.gen_range(0..limit)).collect();
    if amplitudes.iter().all(|&a| a == 0) {
        amplitudes[0] = 1;
    }
    let phases = (0..len).map(|_| rng.gen_range(0..limit)).collect();
    BitPlan::new(n, m, amplitudes, phases).expect("valid by construction")
}

/// Every amplitude bit set.
pub fn dense_plan(n: usize, m: u32) -> BitPlan {
    let len = 1usize << n;
    BitPlan::new(n, m, vec![(1u64 << m) - 1; len], vec![0; len]).expect("valid by construction")
}

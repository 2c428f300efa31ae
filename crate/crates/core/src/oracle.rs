//! Independent verification path.
//!
//! [`run_projector_path`] applies each stage operator as a sum of projectors
//! (`P ⊗ X + (I - P) ⊗ I`) or as a dense transform, never through the gate
//! kernels, so it can be compared against the compiled circuit stage by stage.
//! [`predict_stage`] gives the closed-form useful-branch components of every
//! intermediate state; garbage is only checked through norms.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::approx::BitPlan;
use crate::encoder::plan_layout;
use crate::error::Result;
use crate::layout::RegisterLayout;
use crate::state::{ProjectorTerm, StateVector};

/// Intermediate states `|Φ₁⟩ … |Φ₆⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StageId {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    Phi5,
    Phi6,
}

impl StageId {
    pub const ALL: [StageId; 6] =
        [StageId::Phi1, StageId::Phi2, StageId::Phi3, StageId::Phi4, StageId::Phi5, StageId::Phi6];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi{}", self.index() + 1)
    }
}

/// One basis component of a useful branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub s: usize,
    /// Integer stored in `R`.
    pub r: usize,
    /// `phi[k-1]` is the value of `φ_k`.
    pub phi: Vec<u8>,
    pub a: (u8, u8),
    pub b: (u8, u8),
    pub index: usize,
    pub coefficient: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StagePrediction {
    pub stage: StageId,
    pub components: Vec<Component>,
}

impl StagePrediction {
    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.coefficient.norm_sqr()).sum()
    }

    /// Compares the prediction with a simulated state.
    pub fn check(&self, state: &StateVector) -> PredictionCheck {
        let amps = state.amplitudes();
        let max_component_error =
            self.components.iter().map(|c| (amps[c.index] - c.coefficient).norm()).fold(0.0, f64::max);
        let useful: f64 = self.components.iter().map(|c| amps[c.index].norm_sqr()).sum();
        let garbage = state.norm_sqr() - useful;
        PredictionCheck { max_component_error, predicted_norm_sqr: self.norm_sqr(), garbage_norm_sqr: garbage.max(0.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionCheck {
    pub max_component_error: f64,
    pub predicted_norm_sqr: f64,
    pub garbage_norm_sqr: f64,
}

impl PredictionCheck {
    /// `|predicted useful norm² + garbage norm² - 1|`.
    pub fn complementarity_error(&self) -> f64 {
        (self.predicted_norm_sqr + self.garbage_norm_sqr - 1.0).abs()
    }
}

fn bits_of(x: usize, width: usize) -> Vec<u8> {
    (1..=width).map(|k| ((x >> (width - k)) & 1) as u8).collect()
}

/// `Π_k e^{2πi x_k / 2^k}`, the coefficient of `|x⟩_φ` in `|Ψ_φ⟩`.
fn phi_register_phase(bits: &[u8]) -> C64 {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| C64::from_polar(1.0, 2.0 * PI / 2f64.powi(i as i32 + 1)))
        .product()
}

/// `R` values tagged for `|j⟩_S` after amplitude encoding: `2^k + l` for every
/// `k` with `α_jk = 1` and `l < 2^k`. There are exactly `a_j` of them.
pub fn tagged_r_values(plan: &BitPlan, j: usize) -> Vec<usize> {
    (0..plan.m())
        .filter(|&k| plan.alpha(j, k) == 1)
        .flat_map(|k| (0..1usize << k).map(move |l| (1usize << k) + l))
        .collect()
}

pub fn predict_stage(plan: &BitPlan, stage: StageId) -> StagePrediction {
    let layout = plan_layout(plan);
    let (n, m) = (plan.n() as i32, plan.m() as i32);
    let wide = 2f64.powf(-f64::from(n + 2 * m) / 2.0);
    let narrow = 2f64.powf(-f64::from(n + 4 * m) / 2.0);
    let mdim = 1usize << plan.m();
    let zero_phi = vec![0u8; plan.m() as usize];

    let mut components = Vec::new();
    let mut push = |s: usize, r: usize, phi: Vec<u8>, a: (u8, u8), b: (u8, u8), coefficient: C64| {
        let index = layout.basis_index(s, r, &phi, a, b);
        components.push(Component { s, r, phi, a, b, index, coefficient });
    };

    for j in 0..plan.len() {
        let encoded = C64::from_polar(plan.amplitudes()[j] as f64, 2.0 * PI * plan.phase(j));
        match stage {
            StageId::Phi1 => {
                for r in 0..mdim {
                    for x in 0..mdim {
                        let phi = bits_of(x, plan.m() as usize);
                        let c = wide * phi_register_phase(&phi);
                        push(j, r, phi, (0, 0), (0, 0), c);
                    }
                }
            }
            StageId::Phi2 => {
                for r in tagged_r_values(plan, j) {
                    for x in 0..mdim {
                        let phi = bits_of(x, plan.m() as usize);
                        let c = wide * phi_register_phase(&phi);
                        push(j, r, phi, (0, 1), (0, 0), c);
                    }
                }
            }
            StageId::Phi3 => {
                let beta = plan.beta_bits(j);
                let c = wide * phi_register_phase(&beta);
                for r in tagged_r_values(plan, j) {
                    push(j, r, beta.clone(), (1, 1), (0, 0), c);
                }
            }
            StageId::Phi4 => push(j, 0, zero_phi.clone(), (1, 1), (0, 0), narrow * encoded),
            StageId::Phi5 => push(j, 0, zero_phi.clone(), (1, 1), (1, 1), narrow * encoded),
            StageId::Phi6 => push(j, 0, zero_phi.clone(), (1, 1), (1, 1), encoded / plan.g()),
        }
    }
    StagePrediction { stage, components }
}

/// `|Φ₁⟩` written out from its tensor-product form.
fn phi1_closed_form(layout: &RegisterLayout, max_qubits: usize) -> Result<StateVector> {
    let zero = StateVector::ground(layout, max_qubits)?;
    let total = layout.total();
    let weight = 2f64.powf(-((layout.n() + 2 * layout.m()) as f64) / 2.0);
    let bit = |idx: usize, q: usize| ((idx >> (total - 1 - q)) & 1) as u8;
    let ancillas = [layout.a1(), layout.a2(), layout.b1(), layout.b2()];
    let amps = (0..zero.dim())
        .map(|idx| {
            if ancillas.iter().any(|&q| bit(idx, q) == 1) {
                return C64::new(0.0, 0.0);
            }
            let phi: Vec<u8> = layout.phi_qubits().into_iter().map(|q| bit(idx, q)).collect();
            weight * phi_register_phase(&phi)
        })
        .collect();
    StateVector::from_amplitudes(amps)
}

/// `H^{⊗|qubits|}` on the listed qubits, evaluated as the dense sum
/// `⟨y|H|x⟩ = 2^{-k/2} (-1)^{x·y}` over each slice.
fn walsh_hadamard(state: &StateVector, qubits: &[usize]) -> StateVector {
    let total = state.num_qubits();
    let masks: Vec<usize> = qubits.iter().map(|&q| 1usize << (total - 1 - q)).collect();
    let all: usize = masks.iter().sum();
    let k = qubits.len();
    let scatter: Vec<usize> =
        (0..1usize << k).map(|y| (0..k).filter(|&i| (y >> i) & 1 == 1).map(|i| masks[i]).sum()).collect();
    let scale = 2f64.powf(-(k as f64) / 2.0);
    let amps = state.amplitudes();
    let out = (0..state.dim())
        .map(|idx| {
            let base = idx & !all;
            let x = (0..k).filter(|&i| idx & masks[i] != 0).fold(0usize, |acc, i| acc | (1 << i));
            let sum: C64 = scatter
                .iter()
                .enumerate()
                .map(|(y, &bits)| {
                    let a = amps[base | bits];
                    if (x & y).count_ones() % 2 == 1 {
                        -a
                    } else {
                        a
                    }
                })
                .sum();
            sum * scale
        })
        .collect();
    StateVector::from_amplitudes(out).expect("same dimension")
}

fn s_term(layout: &RegisterLayout, j: usize) -> Vec<(usize, u8)> {
    (0..layout.n()).map(|i| (layout.s(i + 1), ((j >> (layout.n() - 1 - i)) & 1) as u8)).collect()
}

/// `|Φ₁⟩ … |Φ₆⟩` computed from the operator definitions.
pub fn run_projector_path(plan: &BitPlan, max_qubits: usize) -> Result<Vec<StateVector>> {
    let layout = plan_layout(plan);
    let m = layout.m();
    let mut states = Vec::with_capacity(6);

    let phi1 = phi1_closed_form(&layout, max_qubits)?;

    // W1 = Π_k W̃⁽ᵏ⁾ V⁽ᵏ⁾ W̃⁽ᵏ⁾
    let mut state = phi1.clone();
    for k in 0..plan.m() {
        let tag: Vec<ProjectorTerm> = (0..plan.len())
            .filter(|&j| plan.alpha(j, k) == 1)
            .map(|j| ProjectorTerm::flip(s_term(&layout, j), layout.a1()))
            .collect();
        let k = k as usize;
        let mut v_pattern = vec![(layout.r(k + 1), 1u8)];
        v_pattern.extend((k + 2..=m).map(|i| (layout.r(i), 0u8)));
        v_pattern.push((layout.a1(), 1));
        let v = [ProjectorTerm::flip(v_pattern, layout.a2())];

        state = state.apply_projector_sum(&tag)?;
        state = state.apply_projector_sum(&v)?;
        state = state.apply_projector_sum(&tag)?;
    }
    states.push(phi1);
    states.push(state.clone());

    // W2 = Π_j W̃⁽ʲ⁾, a single projector sum since the supports are disjoint
    let w2: Vec<ProjectorTerm> = (0..plan.len())
        .map(|j| {
            let mut pattern = s_term(&layout, j);
            pattern.extend(plan.beta_bits(j).into_iter().enumerate().map(|(i, b)| (layout.phi(i + 1), b)));
            ProjectorTerm::flip(pattern, layout.a1())
        })
        .collect();
    state = state.apply_projector_sum(&w2)?;
    states.push(state.clone());

    // W3 = H_R H_φ
    let rphi: Vec<usize> = layout.r_qubits().into_iter().chain(layout.phi_qubits()).collect();
    state = walsh_hadamard(&state, &rphi);
    states.push(state.clone());

    // W4 = P ⊗ X_{B₁} X_{B₂} + (I - P) ⊗ I
    let mut p: Vec<(usize, u8)> = rphi.iter().map(|&q| (q, 0u8)).collect();
    p.push((layout.a1(), 1));
    p.push((layout.a2(), 1));
    state = state.apply_projector_sum(&[ProjectorTerm::flip(p.clone(), layout.b1())])?;
    state = state.apply_projector_sum(&[ProjectorTerm::flip(p, layout.b2())])?;
    states.push(state.clone());

    // W5: measurement of B₂ controlled by B₁, kept on the |11⟩ branch
    let (phi6, _) = state.postselect(&[(layout.b1(), 1), (layout.b2(), 1)])?;
    states.push(phi6);
    Ok(states)
}

/// `G² / 2^{n+4m}`: the chance that a plain projective measurement of the
/// ancillas would land on the useful branch.
pub fn naive_success_probability(plan: &BitPlan) -> f64 {
    plan.g_squared() / 2f64.powi((plan.n() + 4 * plan.m() as usize) as i32)
}

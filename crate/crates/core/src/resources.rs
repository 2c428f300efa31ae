//! Gate counts and a sequential depth estimate.
//!
//! Cost model: Hadamard, phase and X gates cost 1; a multi-controlled X with
//! `c` controls costs `max(1, 2c - 1)` (ancilla-free, linear in the number of
//! controls). Depth is the plain sum of gate costs with no layer packing.

use serde::Serialize;

use crate::approx::BitPlan;
use crate::encoder::{Circuit, Stage};
use crate::error::{Error, Result};
use crate::gate::Gate;

pub const COST_MODEL: &str = "sequential; H/P/X = 1; MCX with c controls = max(1, 2c-1)";

pub fn gate_cost(gate: &Gate) -> usize {
    match gate {
        Gate::Mcx { controls, .. } => (2 * controls.len()).saturating_sub(1).max(1),
        _ => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageResources {
    pub stage: Stage,
    pub gates: usize,
    pub mcx: usize,
    pub elementary_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub cost_model: &'static str,
    pub n: usize,
    pub m: usize,
    /// `n + 2m + 4`.
    pub width: usize,
    pub stages: Vec<StageResources>,
    pub mcx_count: usize,
    pub elementary_depth: usize,
    /// `c_k = |{j : α_jk = 1}|`, `k = 0..m`.
    pub popcounts: Vec<usize>,
}

impl ResourceReport {
    pub fn stage(&self, stage: Stage) -> &StageResources {
        &self.stages[stage as usize]
    }

    /// `Σ_k (2 c_k + 1)`.
    pub fn expected_w1_mcx(&self) -> usize {
        self.popcounts.iter().map(|c| 2 * c + 1).sum()
    }

    /// Whether the MCX counts follow from the plan: `Σ_k (2c_k + 1)` in `W1`,
    /// `2^n` in `W2`, two in `W4`. Holds for circuits compiled without the
    /// peephole pass.
    pub fn follows_counting_law(&self) -> bool {
        self.stage(Stage::W1).mcx == self.expected_w1_mcx()
            && self.stage(Stage::W2).mcx == 1 << self.n
            && self.stage(Stage::W4).mcx == 2
            && self.width == self.n + 2 * self.m + 4
    }

    /// `elementary_depth / (2^n n m)`.
    pub fn depth_ratio(&self) -> f64 {
        self.elementary_depth as f64 / ((1usize << self.n) * self.n * self.m) as f64
    }
}

pub fn analyze(circuit: &Circuit, plan: &BitPlan) -> Result<ResourceReport> {
    let layout = circuit.layout();
    if layout.n() != plan.n() || layout.m() != plan.m() as usize {
        return Err(Error::InvalidPlan(format!(
            "plan (n={}, m={}) does not match circuit (n={}, m={})",
            plan.n(),
            plan.m(),
            layout.n(),
            layout.m()
        )));
    }
    let stages: Vec<StageResources> = Stage::ALL
        .into_iter()
        .map(|stage| {
            let gates = circuit.stage_gates(stage);
            StageResources {
                stage,
                gates: gates.len(),
                mcx: gates.iter().filter(|g| matches!(g, Gate::Mcx { .. })).count(),
                elementary_depth: gates.iter().map(gate_cost).sum(),
            }
        })
        .collect();
    Ok(ResourceReport {
        cost_model: COST_MODEL,
        n: layout.n(),
        m: layout.m(),
        width: layout.total(),
        mcx_count: stages.iter().map(|s| s.mcx).sum(),
        elementary_depth: stages.iter().map(|s| s.elementary_depth).sum(),
        stages,
        popcounts: (0..plan.m()).map(|k| plan.alpha_popcount(k)).collect(),
    })
}

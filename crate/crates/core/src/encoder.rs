//! Compiles a [`BitPlan`] into the preparation circuit.
//!
//! Stages, in order:
//!
//! | stage | action |
//! |-------|--------|
//! | `W0`  | Hadamard on `S`, `R`, `φ`; phase `e^{2πi/2^k}` on `φ_k` |
//! | `W1`  | per bit `k`: tag `|j⟩_S` with `α_jk = 1` on `A₁`, copy `A₁ ∧ (R ∈ [2^k, 2^{k+1}))` into `A₂`, untag |
//! | `W2`  | per `j`: flip `A₁` on `|j⟩_S |β_j⟩_φ` |
//! | `W3`  | Hadamard on `R` and `φ` |
//! | `W4`  | flip `B₁` and `B₂` on `|0⟩_R |0⟩_φ |11⟩_A` |
//!
//! followed by a controlled measurement of `B₂` conditioned on `B₁`, modelled
//! as post-selection on `B₁ = B₂ = 1`.

mod text;

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::approx::BitPlan;
use crate::error::{Error, Result};
use crate::gate::{Control, Gate};
use crate::layout::RegisterLayout;
use crate::state::StateVector;

pub use text::parse_circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stage {
    W0,
    W1,
    W2,
    W3,
    W4,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::W0, Stage::W1, Stage::W2, Stage::W3, Stage::W4];

    pub fn name(self) -> &'static str {
        match self {
            Stage::W0 => "W0",
            Stage::W1 => "W1",
            Stage::W2 => "W2",
            Stage::W3 => "W3",
            Stage::W4 => "W4",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageSpan {
    pub stage: Stage,
    pub range: Range<usize>,
}

/// Measurement of `measured` conditioned on `control = 1`; the useful branch
/// is the one with both qubits in `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ControlledMeasurement {
    pub control: usize,
    pub measured: usize,
}

impl ControlledMeasurement {
    pub fn postselection(&self) -> [(usize, u8); 2] {
        [(self.control, 1), (self.measured, 1)]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompileOptions {
    /// Merge the multi-controlled X gates of each tagging block into fewer
    /// gates with fewer controls.
    pub peephole: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
    stages: Vec<StageSpan>,
    terminal: ControlledMeasurement,
}

impl Circuit {
    /// Assembles a circuit, checking qubit ranges and stage ordering.
    pub fn from_parts(
        layout: RegisterLayout,
        gates: Vec<Gate>,
        stages: Vec<StageSpan>,
        terminal: ControlledMeasurement,
    ) -> Result<Self> {
        for g in &gates {
            g.validate(layout.total())?;
        }
        if stages.len() != Stage::ALL.len() {
            return Err(Error::InvalidGate("stages must cover W0..W4".into()));
        }
        let mut cursor = 0;
        for (span, expected) in stages.iter().zip(Stage::ALL) {
            if span.stage != expected {
                return Err(Error::InvalidGate(format!("stage {} out of order", span.stage)));
            }
            if span.range.start != cursor || span.range.end < span.range.start {
                return Err(Error::InvalidGate(format!("stage {} is not contiguous", span.stage)));
            }
            cursor = span.range.end;
        }
        if cursor != gates.len() {
            return Err(Error::InvalidGate("gates outside any stage".into()));
        }
        if terminal.control == terminal.measured
            || terminal.control >= layout.total()
            || terminal.measured >= layout.total()
        {
            return Err(Error::InvalidGate("bad controlled-measurement qubits".into()));
        }
        Ok(Self { layout, gates, stages, terminal })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn stages(&self) -> &[StageSpan] {
        &self.stages
    }

    pub fn terminal(&self) -> ControlledMeasurement {
        self.terminal
    }

    pub fn stage_gates(&self, stage: Stage) -> &[Gate] {
        let span = self.stages.iter().find(|s| s.stage == stage).expect("all stages present");
        &self.gates[span.range.clone()]
    }

    /// Deterministic text export; see [`parse_circuit`] for the grammar.
    pub fn to_text(&self) -> String {
        text::write_circuit(self)
    }

    /// Runs every stage from `|Φ₀⟩` and keeps all intermediate states.
    pub fn trace(&self, max_qubits: usize) -> Result<Trace> {
        let mut state = StateVector::ground(&self.layout, max_qubits)?;
        let mut stages = Vec::with_capacity(Stage::ALL.len());
        for span in &self.stages {
            state.apply_gates(&self.gates[span.range.clone()])?;
            stages.push(state.clone());
        }
        let (final_state, naive_probability) = state.postselect(&self.terminal.postselection())?;
        Ok(Trace { stages, final_state, naive_probability })
    }

    /// Runs the circuit keeping only the final state.
    pub fn execute(&self, max_qubits: usize) -> Result<Outcome> {
        let mut state = StateVector::ground(&self.layout, max_qubits)?;
        state.apply_gates(&self.gates)?;
        let (final_state, naive_probability) = state.postselect(&self.terminal.postselection())?;
        Ok(Outcome { final_state, naive_probability })
    }
}

/// Result of [`Circuit::execute`].
#[derive(Debug, Clone)]
pub struct Outcome {
    /// `|Φ₆⟩`, renormalized.
    pub final_state: StateVector,
    /// Squared norm of the `B₁ = B₂ = 1` branch before post-selection.
    pub naive_probability: f64,
}

impl Outcome {
    /// The prepared state of `S`.
    pub fn output(&self, layout: &RegisterLayout) -> Result<Vec<num_complex::Complex64>> {
        self.final_state.extract_subsystem(&layout.s_qubits())
    }
}

/// Result of [`Circuit::trace`]: `stages[i]` is `|Φ_{i+1}⟩`, the state after
/// stage `W_i`.
#[derive(Debug, Clone)]
pub struct Trace {
    pub stages: Vec<StateVector>,
    pub final_state: StateVector,
    pub naive_probability: f64,
}

impl Trace {
    pub fn after(&self, stage: Stage) -> &StateVector {
        &self.stages[stage as usize]
    }
}

pub fn build_w0(layout: &RegisterLayout) -> Vec<Gate> {
    let mut gates: Vec<Gate> =
        layout.s_qubits().into_iter().chain(layout.r_qubits()).chain(layout.phi_qubits()).map(Gate::h).collect();
    gates.extend((1..=layout.m()).map(|k| Gate::phase_k(layout.phi(k), k as u32)));
    gates
}

fn s_controls(layout: &RegisterLayout, j: usize) -> Vec<Control> {
    layout.s_pattern(j).into_iter().map(|(q, b)| Control::from_bit(q, b)).collect()
}

/// Controls of `V⁽ᵏ⁾`: `R_{k+1} = 1`, `R_{k+2} … R_m = 0`, `A₁ = 1`.
pub fn v_controls(layout: &RegisterLayout, k: usize) -> Vec<Control> {
    let mut controls = vec![Control::pos(layout.r(k + 1))];
    controls.extend((k + 2..=layout.m()).map(|i| Control::neg(layout.r(i))));
    controls.push(Control::pos(layout.a1()));
    controls
}

/// The triads `W̃⁽ᵏ⁾ V⁽ᵏ⁾ W̃⁽ᵏ⁾`, one block per `k = 0..m` in ascending order.
pub fn build_w1_blocks(plan: &BitPlan, opts: CompileOptions) -> Vec<Vec<Gate>> {
    let layout = plan_layout(plan);
    (0..plan.m())
        .map(|k| {
            let tags: Vec<Vec<Control>> =
                (0..plan.len()).filter(|&j| plan.alpha(j, k) == 1).map(|j| s_controls(&layout, j)).collect();
            let tags = if opts.peephole { merge_cubes(tags) } else { tags };
            let tag_gates: Vec<Gate> = tags.into_iter().map(|c| Gate::mcx(c, layout.a1())).collect();

            let mut block = tag_gates.clone();
            block.push(Gate::mcx(v_controls(&layout, k as usize), layout.a2()));
            block.extend(tag_gates);
            block
        })
        .collect()
}

pub fn build_w1(plan: &BitPlan, opts: CompileOptions) -> Vec<Gate> {
    build_w1_blocks(plan, opts).into_iter().flatten().collect()
}

pub fn build_w2(plan: &BitPlan, opts: CompileOptions) -> Vec<Gate> {
    let layout = plan_layout(plan);
    let patterns: Vec<Vec<Control>> = (0..plan.len())
        .map(|j| {
            let mut c = s_controls(&layout, j);
            c.extend(layout.phi_pattern(&plan.beta_bits(j)).into_iter().map(|(q, b)| Control::from_bit(q, b)));
            c
        })
        .collect();
    let patterns = if opts.peephole { merge_cubes(patterns) } else { patterns };
    patterns.into_iter().map(|c| Gate::mcx(c, layout.a1())).collect()
}

pub fn build_w3(layout: &RegisterLayout) -> Vec<Gate> {
    layout.r_qubits().into_iter().chain(layout.phi_qubits()).map(Gate::h).collect()
}

/// Controls `|0⟩_R |0⟩_φ |1⟩_{A₁} |1⟩_{A₂}` shared by both `W4` gates.
pub fn garbage_label_controls(layout: &RegisterLayout) -> Vec<Control> {
    let mut controls: Vec<Control> =
        layout.r_qubits().into_iter().chain(layout.phi_qubits()).map(Control::neg).collect();
    controls.push(Control::pos(layout.a1()));
    controls.push(Control::pos(layout.a2()));
    controls
}

pub fn build_w4(layout: &RegisterLayout) -> Vec<Gate> {
    let controls = garbage_label_controls(layout);
    vec![Gate::mcx(controls.clone(), layout.b1()), Gate::mcx(controls, layout.b2())]
}

pub fn compile(plan: &BitPlan) -> Circuit {
    compile_with(plan, CompileOptions::default())
}

pub fn compile_with(plan: &BitPlan, opts: CompileOptions) -> Circuit {
    let layout = plan_layout(plan);
    let parts = [build_w0(&layout), build_w1(plan, opts), build_w2(plan, opts), build_w3(&layout), build_w4(&layout)];
    let mut gates = Vec::new();
    let mut stages = Vec::new();
    for (stage, part) in Stage::ALL.into_iter().zip(parts) {
        let start = gates.len();
        gates.extend(part);
        stages.push(StageSpan { stage, range: start..gates.len() });
    }
    let terminal = ControlledMeasurement { control: layout.b1(), measured: layout.b2() };
    Circuit::from_parts(layout, gates, stages, terminal).expect("compiled circuit is well formed")
}

pub fn plan_layout(plan: &BitPlan) -> RegisterLayout {
    RegisterLayout::new(plan.n(), plan.m() as usize).expect("plan dimensions are valid")
}

/// Merges pairwise-disjoint control cubes that differ in the polarity of a
/// single control, until no such pair remains. The union of the cubes is
/// unchanged, so a block of X gates on one target keeps its action.
fn merge_cubes(cubes: Vec<Vec<Control>>) -> Vec<Vec<Control>> {
    let mut cubes: Vec<Vec<Control>> = cubes
        .into_iter()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    loop {
        let index: HashMap<&[Control], usize> = cubes.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let mut partner = vec![None; cubes.len()];
        for (i, cube) in cubes.iter().enumerate() {
            if partner[i].is_some() {
                continue;
            }
            for p in 0..cube.len() {
                let mut flipped = cube.clone();
                flipped[p].polarity = !flipped[p].polarity;
                if let Some(&j) = index.get(flipped.as_slice()) {
                    if partner[j].is_none() {
                        partner[i] = Some((j, p));
                        partner[j] = Some((i, p));
                        break;
                    }
                }
            }
        }
        if partner.iter().all(Option::is_none) {
            return cubes;
        }
        let mut next = Vec::with_capacity(cubes.len());
        for (i, cube) in cubes.iter().enumerate() {
            match partner[i] {
                None => next.push(cube.clone()),
                Some((j, p)) if i < j => {
                    let mut merged = cube.clone();
                    merged.remove(p);
                    next.push(merged);
                }
                Some(_) => {}
            }
        }
        cubes = next;
    }
}

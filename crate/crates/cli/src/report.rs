use std::fmt::Write as _;

use cmprep_core::ResourceReport;
use serde::Serialize;

/// Quantized amplitudes and phases actually encoded by the circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanSummary {
    /// `a_j`, the magnitude numerators.
    pub amplitudes: Vec<u64>,
    /// `b_j`, the phase numerators over `2^m`.
    pub phase_numerators: Vec<u64>,
    /// `φ_j = b_j / 2^m` in turns.
    pub phases: Vec<f64>,
    /// `G = sqrt(Σ a_j²)`.
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    /// `W0`…`W4`, `CMEAS` or `output`.
    pub stage: String,
    pub passed: bool,
    /// Largest deviation found; what it measures is stated in `detail`.
    pub max_error: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub parse_s: f64,
    pub compile_s: f64,
    pub simulate_s: f64,
    pub verify_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSettings {
    pub max_qubits: usize,
    pub peephole: bool,
    pub stage_check: bool,
}

/// Everything known about one run. Serialized as JSON; every field except
/// `timings` is a deterministic function of the input bytes and flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    /// SHA-256 of the spec file bytes, lowercase hex.
    pub input_sha256: String,
    pub n: usize,
    pub m: u32,
    pub settings: RunSettings,
    pub plan: PlanSummary,
    /// `|⟨target|reconstructed⟩|²`: the price of quantizing to `m` bits.
    pub fidelity_target_reconstructed: f64,
    /// `|⟨reconstructed|output⟩|²`: how faithfully the circuit realizes the plan.
    pub fidelity_reconstructed_output: f64,
    /// Probability of the `B₁ = B₂ = 1` outcome a plain measurement would see.
    pub naive_success_probability: f64,
    /// Simulated output state as `[re, im]` pairs; empty if it could not be
    /// separated from the ancillas.
    pub output: Vec<[f64; 2]>,
    pub resources: ResourceReport,
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
    pub timings: Timings,
}

impl RunReport {
    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable digest for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let r = &self.resources;
        let _ = writeln!(out, "target: n = {}, m = {}, {} qubits", self.n, self.m, r.width);
        let _ = writeln!(
            out,
            "plan: a = {:?}, b = {:?}, G = {:.6}",
            self.plan.amplitudes, self.plan.phase_numerators, self.plan.g
        );
        let _ = writeln!(out, "fidelity(target, reconstructed) = {:.12}", self.fidelity_target_reconstructed);
        let _ = writeln!(out, "fidelity(reconstructed, output) = {:.12}", self.fidelity_reconstructed_output);
        let _ = writeln!(
            out,
            "naive success probability = {:.6e} (1 in {:.1})",
            self.naive_success_probability,
            1.0 / self.naive_success_probability
        );
        let gates: usize = r.stages.iter().map(|s| s.gates).sum();
        let _ = writeln!(
            out,
            "circuit: {gates} gates, {} MCX, elementary depth {} ({})",
            r.mcx_count, r.elementary_depth, r.cost_model
        );
        let stages: Vec<&str> = self.verdicts.iter().map(|v| v.stage.as_str()).collect();
        match self.first_failure() {
            None => {
                let _ = writeln!(out, "verification: passed [{}]", stages.join(" "));
            }
            Some(v) => {
                let _ = writeln!(out, "verification: FAILED at {}: {}", v.stage, v.detail);
            }
        }
        let _ = writeln!(out, "time: {:.3} s", self.timings.total_s);
        out
    }
}

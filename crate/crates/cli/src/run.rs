use std::time::{Duration, Instant};

use cmprep_core::approx::{state_fidelity, MAX_PRECISION};
use cmprep_core::oracle::StageId;
use cmprep_core::state::{align_global_phase, max_diff};
use cmprep_core::{
    analyze, compile_with, decompose, fidelity, naive_success_probability, parse_circuit, predict_stage, reconstruct,
    run_projector_path, BitPlan, Circuit, CompileOptions, Complex64 as C64, Error, RegisterLayout, Stage, StateVector,
    TargetState, DEFAULT_MAX_QUBITS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::report::{PlanSummary, RunReport, RunSettings, Timings, Verdict};
use crate::specfile::SpecFile;

/// Largest tolerated deviation of a simulated stage from its prediction.
pub const STAGE_TOLERANCE: f64 = 1e-12;
/// The output must reach `1 - OUTPUT_TOLERANCE` fidelity with the quantized
/// state.
pub const OUTPUT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides the spec file's `m`.
    pub m: Option<u32>,
    pub max_qubits: usize,
    pub peephole: bool,
    /// Also run the independent projector-algebra simulation and compare
    /// every stage against it.
    pub stage_check: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { m: None, max_qubits: DEFAULT_MAX_QUBITS, peephole: false, stage_check: false }
    }
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub circuit: Circuit,
    pub circuit_text: String,
    pub report: RunReport,
}

/// Spec bytes → plan → circuit → simulation → verdicts.
///
/// Input problems and capacity overruns are errors; failed verification is
/// not, and shows up as `report.passed == false`.
pub fn run_spec(input: &[u8], opts: &RunOptions) -> Result<RunArtifacts, CliError> {
    let start = Instant::now();
    let input_sha256 = hex::encode(Sha256::digest(input));
    let text = std::str::from_utf8(input).map_err(|_| CliError::Encoding)?;
    let spec = SpecFile::parse(text)?;
    let m = opts.m.or(spec.m).ok_or(CliError::MissingPrecision)?;
    if m > MAX_PRECISION {
        return Err(Error::InvalidPlan(format!("precision m = {m} exceeds {MAX_PRECISION}")).into());
    }
    RegisterLayout::new(spec.n, m as usize)?.check_capacity(opts.max_qubits)?;
    let target = spec.target()?;
    let parse_s = start.elapsed().as_secs_f64();

    let t = Instant::now();
    let plan = decompose(&target, m)?;
    let circuit = compile_with(&plan, CompileOptions { peephole: opts.peephole });
    let circuit_text = circuit.to_text();
    let resources = analyze(&circuit, &plan)?;
    let compile_s = t.elapsed().as_secs_f64();

    let v = verify(&plan, &circuit, opts.max_qubits, opts.stage_check)?;
    let report = RunReport {
        input_sha256,
        n: plan.n(),
        m,
        settings: RunSettings { max_qubits: opts.max_qubits, peephole: opts.peephole, stage_check: opts.stage_check },
        plan: plan_summary(&plan),
        fidelity_target_reconstructed: fidelity(&target, &reconstruct(&plan))?,
        fidelity_reconstructed_output: v.fidelity,
        naive_success_probability: v.naive_probability,
        output: v.output.iter().map(|a| [a.re, a.im]).collect(),
        resources,
        passed: v.verdicts.iter().all(|x| x.passed),
        verdicts: v.verdicts,
        timings: Timings {
            parse_s,
            compile_s,
            simulate_s: v.simulate.as_secs_f64(),
            verify_s: v.check.as_secs_f64(),
            total_s: start.elapsed().as_secs_f64(),
        },
    };
    Ok(RunArtifacts { circuit, circuit_text, report })
}

pub fn plan_summary(plan: &BitPlan) -> PlanSummary {
    PlanSummary {
        amplitudes: plan.amplitudes().to_vec(),
        phase_numerators: plan.phase_numerators().to_vec(),
        phases: (0..plan.len()).map(|j| plan.phase(j)).collect(),
        g: plan.g(),
    }
}

#[derive(Debug, Clone)]
pub struct Verification {
    /// `W0`…`W4`, then `CMEAS`, then `output`.
    pub verdicts: Vec<Verdict>,
    /// The prepared state with its global phase aligned to the quantized
    /// state; empty if it did not separate from the ancillas.
    pub output: Vec<C64>,
    /// Fidelity of `output` with the quantized state (0 if unavailable).
    pub fidelity: f64,
    pub naive_probability: f64,
    pub simulate: Duration,
    pub check: Duration,
}

impl Verification {
    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.passed)
    }
}

/// Simulates `circuit` stage by stage and checks each intermediate state
/// against the closed-form prediction for `plan` (and, with `stage_check`,
/// against the projector-algebra path), then checks the post-selection
/// probability and the extracted output.
pub fn verify(
    plan: &BitPlan,
    circuit: &Circuit,
    max_qubits: usize,
    stage_check: bool,
) -> Result<Verification, CliError> {
    let mut simulate = Duration::ZERO;
    let mut check = Duration::ZERO;

    let t = Instant::now();
    let reference = if stage_check { Some(run_projector_path(plan, max_qubits)?) } else { None };
    check += t.elapsed();

    let mut verdicts = Vec::with_capacity(Stage::ALL.len() + 2);
    let mut state = StateVector::ground(circuit.layout(), max_qubits)?;
    for (i, stage) in Stage::ALL.into_iter().enumerate() {
        let t = Instant::now();
        state.apply_gates(circuit.stage_gates(stage))?;
        simulate += t.elapsed();

        let t = Instant::now();
        let mut verdict = prediction_verdict(stage.name(), plan, StageId::ALL[i], &state);
        if let Some(reference) = &reference {
            let d = max_diff(state.amplitudes(), reference[i].amplitudes());
            verdict.max_error = verdict.max_error.max(d);
            verdict.passed &= d <= STAGE_TOLERANCE;
            verdict.detail.push_str(&format!("; projector path within {d:.1e}"));
        }
        verdicts.push(verdict);
        check += t.elapsed();
    }

    let t = Instant::now();
    let expected_probability = naive_success_probability(plan);
    let selected = state.postselect(&circuit.terminal().postselection());
    simulate += t.elapsed();

    let t = Instant::now();
    let (naive_probability, final_state) = match selected {
        Ok((s, p)) => (p, Some(s)),
        Err(Error::ZeroNormProjection) => (0.0, None),
        Err(e) => return Err(e.into()),
    };
    let prob_error = (naive_probability - expected_probability).abs();
    let mut cmeas = match &final_state {
        Some(s) => prediction_verdict("CMEAS", plan, StageId::Phi6, s),
        None => Verdict {
            stage: "CMEAS".into(),
            passed: false,
            max_error: 1.0,
            detail: "the B1 = B2 = 1 outcome has zero probability".into(),
        },
    };
    cmeas.max_error = cmeas.max_error.max(prob_error);
    cmeas.passed &= prob_error <= STAGE_TOLERANCE;
    cmeas.detail = format!(
        "success probability {naive_probability:.6e} vs G²/2^(n+4m) = {expected_probability:.6e}; {}",
        cmeas.detail
    );
    verdicts.push(cmeas);

    let quantized = reconstruct(plan).amplitudes();
    let (output, fidelity, output_verdict) = match final_state
        .as_ref()
        .map(|s| s.extract_subsystem(&circuit.layout().s_qubits()))
    {
        Some(Ok(out)) => {
            let out = align_global_phase(&quantized, &out);
            let f = state_fidelity(&quantized, &out);
            let ok = f >= 1.0 - OUTPUT_TOLERANCE;
            let detail = format!("fidelity with the quantized state 1 - {:.1e}", 1.0 - f);
            (out, f, Verdict { stage: "output".into(), passed: ok, max_error: 1.0 - f, detail })
        }
        Some(Err(e)) => {
            (Vec::new(), 0.0, Verdict { stage: "output".into(), passed: false, max_error: 1.0, detail: e.to_string() })
        }
        None => (
            Vec::new(),
            0.0,
            Verdict { stage: "output".into(), passed: false, max_error: 1.0, detail: "no post-selected state".into() },
        ),
    };
    verdicts.push(output_verdict);
    check += t.elapsed();

    Ok(Verification { verdicts, output, fidelity, naive_probability, simulate, check })
}

fn prediction_verdict(name: &str, plan: &BitPlan, stage: StageId, state: &StateVector) -> Verdict {
    let c = predict_stage(plan, stage).check(state);
    let err = c.max_component_error.max(c.complementarity_error());
    Verdict {
        stage: name.to_string(),
        passed: err <= STAGE_TOLERANCE,
        max_error: err,
        detail: format!(
            "{} predicted components within {:.1e}, useful/garbage norm split off by {:.1e}",
            predict_stage(plan, stage).components.len(),
            c.max_component_error,
            c.complementarity_error()
        ),
    }
}

#[derive(Debug, Clone)]
pub struct Replay {
    pub naive_probability: f64,
    pub output: Vec<C64>,
}

/// Re-simulates an exported circuit.
pub fn replay(text: &str, max_qubits: usize) -> Result<Replay, CliError> {
    let circuit = parse_circuit(text)?;
    let outcome = match circuit.execute(max_qubits) {
        Err(Error::ZeroNormProjection) => {
            return Err(CliError::Verification {
                stage: "CMEAS".into(),
                detail: "the B1 = B2 = 1 outcome has zero probability".into(),
            })
        }
        other => other?,
    };
    let output = outcome
        .output(circuit.layout())
        .map_err(|e| CliError::Verification { stage: "output".into(), detail: e.to_string() })?;
    Ok(Replay { naive_probability: outcome.naive_probability, output })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestCase {
    pub n: usize,
    pub m: u32,
    pub peephole: bool,
    pub failure: Option<Verdict>,
}

/// Compiles and fully verifies `count` random targets drawn from `seed`,
/// including a text export round trip.
pub fn selftest(seed: u64, count: usize, max_qubits: usize) -> Result<Vec<SelftestCase>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(1..=3);
        let mut m = rng.gen_range(1..=4);
        let peephole = rng.gen_bool(0.5);
        let amps: Vec<C64> =
            (0..1usize << n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let target = TargetState::from_complex(&amps, cmprep_core::Normalization::Rescale)?;
        let plan = match decompose(&target, m) {
            Err(Error::AllZeroPlan { min_m, .. }) => {
                m = min_m;
                decompose(&target, m)?
            }
            other => other?,
        };
        let circuit = compile_with(&plan, CompileOptions { peephole });
        let v = verify(&plan, &circuit, max_qubits, true)?;
        let mut failure = v.first_failure().cloned();
        if failure.is_none() {
            let replayed = replay(&circuit.to_text(), max_qubits)?;
            let d = max_diff(&replayed.output, &v.output);
            if d > STAGE_TOLERANCE {
                failure = Some(Verdict {
                    stage: "export".into(),
                    passed: false,
                    max_error: d,
                    detail: format!("re-parsed circuit output differs by {d:.1e}"),
                });
            }
        }
        cases.push(SelftestCase { n, m, peephole, failure });
    }
    Ok(cases)
}

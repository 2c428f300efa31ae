//! Acceptance criteria, one report line each. Run with
//! `cargo test -p cmprep-core --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use cmprep_core::encoder::{build_w0, build_w1_blocks, plan_layout, CompileOptions, Stage};
use cmprep_core::oracle::{naive_success_probability, predict_stage, run_projector_path, StageId};
use cmprep_core::state::{max_diff, max_diff_aligned};
use cmprep_core::{
    analyze, approx::state_fidelity, compile, decompose, reconstruct, BitPlan, Complex64 as C64, Error, StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

const UNITARY_TOL: f64 = 1e-12;
const END_TO_END_TOL: f64 = 1e-10;
const MONOTONE_SLACK: f64 = 1e-9;
const SEED: u64 = 0x5eed_0001;
/// Upper bound on `elementary_depth / (2^n n m)` across the dense sweep.
const DEPTH_RATIO_BOUND: f64 = 32.0;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// The plans shared by criteria 4–8: the worked example plus 60 random plans
/// with `n ≤ 3`, `m ≤ 3`.
fn tested_plans() -> Vec<BitPlan> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut plans = vec![worked_example_plan()];
    for i in 0..60 {
        let n = 1 + i % 3;
        let m = rng.gen_range(1..=3);
        plans.push(random_plan(&mut rng, n, m));
    }
    plans
}

fn ac1_worked_example_reproduction() -> Verdict {
    let start = Instant::now();
    let target = worked_example_target();
    let plan = decompose(&target, 2).map_err(err)?;
    let got = [
        plan.alpha(0, 0),
        plan.alpha(0, 1),
        plan.alpha(1, 0),
        plan.alpha(1, 1),
        plan.beta(0, 1),
        plan.beta(0, 2),
        plan.beta(1, 1),
        plan.beta(1, 2),
    ];
    ensure(got == [0, 1, 1, 1, 1, 1, 1, 0], || format!("bits (α00 α01 α10 α11 β01 β02 β11 β12) = {got:?}"))?;

    let circuit = compile(&plan);
    let out = circuit.execute(CAP).map_err(err)?;
    let psi = out.output(circuit.layout()).map_err(err)?;
    let exact = target.amplitudes();
    let f = state_fidelity(&exact, &psi);
    let diff = max_diff_aligned(&exact, &psi);
    let elapsed = start.elapsed();
    ensure(f >= 1.0 - UNITARY_TOL, || format!("fidelity {f}"))?;
    ensure(diff < END_TO_END_TOL, || format!("aligned max difference {diff:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("bits match, fidelity 1-{:.1e}, {elapsed:?}", 1.0 - f))
}

fn ac2_worked_example_stages() -> Verdict {
    let plan = worked_example_plan();
    let circuit = compile(&plan);
    let trace = circuit.trace(CAP).map_err(err)?;
    let l = *circuit.layout();
    let c = |re, im| C64::new(re, im);
    let w = 2f64.powf(-2.5);
    let psi_phi = |phi: [u8; 2]| {
        let mut z = c(1.0, 0.0);
        if phi[0] == 1 {
            z *= -1.0;
        }
        if phi[1] == 1 {
            z *= c(0.0, 1.0);
        }
        z
    };
    let all_phi = [[0, 0], [0, 1], [1, 0], [1, 1]];

    // Hand-expanded worked example, listed as (S, R, φ, A, B, coefficient).
    type Expected = Vec<(usize, usize, [u8; 2], (u8, u8), (u8, u8), C64)>;
    let mut phi1: Expected = Vec::new();
    for s in 0..2 {
        for r in 0..4 {
            for phi in all_phi {
                phi1.push((s, r, phi, (0, 0), (0, 0), w * psi_phi(phi)));
            }
        }
    }
    let mut phi2: Expected = Vec::new();
    for (s, r) in [(0, 2), (0, 3), (1, 1), (1, 2), (1, 3)] {
        for phi in all_phi {
            phi2.push((s, r, phi, (0, 1), (0, 0), w * psi_phi(phi)));
        }
    }
    let mut phi3: Expected = Vec::new();
    for r in [2, 3] {
        phi3.push((0, r, [1, 1], (1, 1), (0, 0), w * c(0.0, -1.0)));
    }
    for r in [1, 2, 3] {
        phi3.push((1, r, [1, 0], (1, 1), (0, 0), w * c(-1.0, 0.0)));
    }
    let v = 2f64.powf(-4.5);
    let phi4: Expected =
        vec![(0, 0, [0, 0], (1, 1), (0, 0), v * c(0.0, -2.0)), (1, 0, [0, 0], (1, 1), (0, 0), v * c(-3.0, 0.0))];
    let phi5: Expected = phi4.iter().map(|&(s, r, p, a, _, z)| (s, r, p, a, (1, 1), z)).collect();

    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (stage, expected) in Stage::ALL.into_iter().zip([&phi1, &phi2, &phi3, &phi4, &phi5]) {
        let amps = trace.after(stage).amplitudes();
        for &(s, r, phi, a, b, z) in expected.iter() {
            let idx = l.basis_index(s, r, &phi, a, b);
            let d = (amps[idx] - z).norm();
            worst = worst.max(d);
            count += 1;
            ensure(d < UNITARY_TOL, || format!("after {stage}: component S={s} R={r} φ={phi:?} off by {d:e}"))?;
        }
        // the closed-form predictions agree with the hand expansion on every listed term
        let pred = predict_stage(&plan, StageId::ALL[stage as usize]);
        ensure(pred.components.len() == expected.len(), || {
            format!("prediction for {stage} has {} components, expected {}", pred.components.len(), expected.len())
        })?;
        let check = pred.check(trace.after(stage));
        ensure(check.max_component_error < UNITARY_TOL, || format!("prediction mismatch after {stage}"))?;
    }
    Ok(format!("{count} displayed components matched, worst error {worst:.1e}"))
}

fn ac3_end_to_end() -> (Verdict, Verdict) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let targets = 210;
    let mut runs = 0;
    let mut worst_recon: f64 = 0.0;
    let mut recon_failure = None;
    let mut monotone_violations = Vec::new();
    for t in 0..targets {
        let n = 1 + t % 3;
        let target = random_target(&mut rng, n);
        let mut previous: Option<(u32, f64)> = None;
        for m in 1..=5u32 {
            let plan = match decompose(&target, m) {
                Ok(p) => p,
                Err(Error::AllZeroPlan { .. }) => continue,
                Err(e) => return (Err(err(e)), Err("not evaluated".into())),
            };
            let circuit = compile(&plan);
            let psi = match circuit.execute(CAP).and_then(|o| o.output(circuit.layout())) {
                Ok(psi) => psi,
                Err(e) => return (Err(format!("target {t}, m={m}: {e}")), Err("not evaluated".into())),
            };
            runs += 1;
            let f_recon = state_fidelity(&reconstruct(&plan).amplitudes(), &psi);
            worst_recon = worst_recon.max(1.0 - f_recon);
            if f_recon < 1.0 - END_TO_END_TOL && recon_failure.is_none() {
                recon_failure = Some(format!("target {t}, m={m}: fidelity {f_recon}"));
            }
            let f_exact = state_fidelity(&target.amplitudes(), &psi);
            if let Some((pm, pf)) = previous {
                if f_exact < pf - MONOTONE_SLACK {
                    monotone_violations.push((t, n, pm, pf, m, f_exact));
                }
            }
            previous = Some((m, f_exact));
        }
    }
    let elapsed = start.elapsed();
    let a = match recon_failure {
        Some(msg) => Err(msg),
        None if elapsed >= Duration::from_secs(60) => Err(format!("took {elapsed:?}")),
        None if targets < 200 => Err("fewer than 200 targets".into()),
        None => Ok(format!("{targets} targets, {runs} runs, worst 1-F = {worst_recon:.1e}, {elapsed:?}")),
    };
    let b = if monotone_violations.is_empty() {
        Ok(format!("{targets} targets non-decreasing in m"))
    } else {
        let (t, n, pm, pf, m, f) = monotone_violations[0];
        Err(format!(
            "{} of {targets} targets decrease; e.g. target {t} (n={n}): F(m={pm}) = {pf:.6} > F(m={m}) = {f:.6}",
            monotone_violations.iter().map(|v| v.0).collect::<std::collections::BTreeSet<_>>().len()
        ))
    };
    (a, b)
}

fn ac4_dual_path(plans: &[BitPlan]) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (i, plan) in plans.iter().enumerate() {
        if plan.n() > 3 || plan.m() > 3 {
            continue;
        }
        let trace = compile(plan).trace(CAP).map_err(err)?;
        let oracle = run_projector_path(plan, CAP).map_err(err)?;
        let compiled: Vec<&StateVector> = trace.stages.iter().chain(std::iter::once(&trace.final_state)).collect();
        for (stage, (x, y)) in StageId::ALL.into_iter().zip(compiled.into_iter().zip(&oracle)) {
            let d = max_diff(x.amplitudes(), y.amplitudes());
            worst = worst.max(d);
            ensure(d < UNITARY_TOL, || format!("plan {i}: {stage} differs by {d:e}"))?;
        }
        count += 1;
    }
    ensure(count >= 50, || format!("only {count} plans"))?;
    Ok(format!("{count} plans × 6 stages, worst difference {worst:.1e}"))
}

fn ac5_naive_probability(plans: &[BitPlan]) -> Verdict {
    let mut worst: f64 = 0.0;
    for (i, plan) in plans.iter().enumerate() {
        let trace = compile(plan).trace(CAP).map_err(err)?;
        let l = plan_layout(plan);
        let measured = trace.after(Stage::W4).probability(&[(l.b1(), 1), (l.b2(), 1)]).map_err(err)?;
        let law = naive_success_probability(plan);
        let d = (measured - law).abs();
        worst = worst.max(d);
        ensure(d < UNITARY_TOL, || format!("plan {i}: measured {measured}, law {law}"))?;
        ensure((trace.naive_probability - law).abs() < UNITARY_TOL, || {
            format!("plan {i}: post-selection reports {}", trace.naive_probability)
        })?;
    }
    let worked = naive_success_probability(&worked_example_plan());
    ensure((worked - 13.0 / 512.0).abs() < UNITARY_TOL, || format!("worked example gives {worked}"))?;
    Ok(format!("{} plans, worst deviation {worst:.1e}; worked example 13/512", plans.len()))
}

fn ac6_disentanglement(plans: &[BitPlan]) -> Verdict {
    let mut refused = 0;
    let mut uniform = 0;
    for (i, plan) in plans.iter().enumerate() {
        let l = plan_layout(plan);
        let trace = compile(plan).trace(CAP).map_err(err)?;
        trace.final_state.extract_subsystem(&l.s_qubits()).map_err(|e| format!("plan {i}: Φ6 not separable: {e}"))?;
        let skipped = trace.after(Stage::W3).extract_subsystem(&l.s_qubits());
        if rows_identical(plan) {
            // S stays in |+⟩^n throughout, so it factorizes even with the garbage present
            uniform += 1;
            ensure(skipped.is_ok(), || format!("plan {i}: uniform plan unexpectedly entangled"))?;
        } else {
            ensure(matches!(skipped, Err(Error::ResidualEntanglement { .. })), || {
                format!("plan {i}: extraction without W4/W5 succeeded")
            })?;
            refused += 1;
        }
    }
    Ok(format!(
        "Φ6 separable for {} plans; Φ4 refused for {refused} (uniform plans, never entangled: {uniform})",
        plans.len()
    ))
}

fn ac7_resources(plans: &[BitPlan]) -> Verdict {
    for (i, plan) in plans.iter().enumerate() {
        let r = analyze(&compile(plan), plan).map_err(err)?;
        ensure(r.stage(Stage::W1).mcx == r.expected_w1_mcx(), || {
            format!("plan {i}: W1 MCX {}", r.stage(Stage::W1).mcx)
        })?;
        ensure(r.stage(Stage::W2).mcx == 1 << plan.n(), || format!("plan {i}: W2 MCX {}", r.stage(Stage::W2).mcx))?;
        ensure(r.width == plan.n() + 2 * plan.m() as usize + 4, || format!("plan {i}: width {}", r.width))?;
    }
    let m = 3u32;
    let mut ratios = Vec::new();
    for n in 1..=4usize {
        let len = 1 << n;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
        let phases = (0..len).map(|_| rng.gen_range(0..1u64 << m)).collect();
        let plan = BitPlan::new(n, m, vec![(1 << m) - 1; len], phases).map_err(err)?;
        let r = analyze(&compile(&plan), &plan).map_err(err)?;
        let (nf, mf) = (n as f64, m as f64);
        let w1_bound = 3.0 * (2f64.powi(n as i32 + 1) * nf + mf) * mf;
        let w2_bound = 2.0 * 2f64.powi(n as i32) * (nf + mf);
        ensure(r.stage(Stage::W1).elementary_depth as f64 <= w1_bound, || format!("n={n}: W1 depth above bound"))?;
        ensure(r.stage(Stage::W2).elementary_depth as f64 <= w2_bound, || format!("n={n}: W2 depth above bound"))?;
        ratios.push(r.depth_ratio());
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    ensure(max <= DEPTH_RATIO_BOUND, || format!("depth ratios {ratios:?}"))?;
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok(format!("counting law exact for {} plans; depth/(2^n n m) over n=1..4: [{}]", plans.len(), shown.join(", ")))
}

fn ac8_ancilla_hygiene(plans: &[BitPlan]) -> Verdict {
    let mut checks = 0;
    for (i, plan) in plans.iter().enumerate() {
        let l = plan_layout(plan);
        let mut state = StateVector::ground(&l, CAP).map_err(err)?;
        state.apply_gates(&build_w0(&l)).map_err(err)?;
        for (k, block) in build_w1_blocks(plan, CompileOptions::default()).iter().enumerate() {
            state.apply_gates(block).map_err(err)?;
            let p = state.probability(&[(l.a1(), 0)]).map_err(err)?;
            ensure((p - 1.0).abs() < UNITARY_TOL, || format!("plan {i}, after triad {k}: P(A1=0) = {p}"))?;
            checks += 1;
        }
    }
    Ok(format!("A1 back in |0⟩ at {checks} triad boundaries"))
}

fn main() {
    let plans = tested_plans();
    let (ac3a, ac3b) = ac3_end_to_end();
    let results: Vec<(&str, Verdict)> = vec![
        ("AC1 worked-example reproduction", ac1_worked_example_reproduction()),
        ("AC2 worked-example stage components", ac2_worked_example_stages()),
        ("AC3a end-to-end fidelity vs quantized state", ac3a),
        ("AC3b fidelity vs exact target non-decreasing in m", ac3b),
        ("AC4 compiled vs projector path", ac4_dual_path(&plans)),
        ("AC5 naive success probability law", ac5_naive_probability(&plans)),
        ("AC6 disentanglement", ac6_disentanglement(&plans)),
        ("AC7 resource counts and scaling", ac7_resources(&plans)),
        ("AC8 ancilla hygiene", ac8_ancilla_hygiene(&plans)),
    ];
    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

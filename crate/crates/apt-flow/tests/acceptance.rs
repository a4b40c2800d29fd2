//! Acceptance suite: twelve numbered end-to-end checks, one verdict line
//! each (run with `--nocapture` to see the lines for passing checks).
//!
//! Check 9 asserts that the four-qubit post-selected work pair factorizes
//! into the two independently evolved states. The implemented scheme
//! produces an entangled pair at interior times, so that check fails; the
//! reduced per-qubit states still carry the exact populations and trace
//! distance, which checks 1 and 11 and the library tests cover.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use apt_flow::circuit::{
    export_circuit, parse_circuit, post_select, simulate, CircuitIr, Control, Gate, GateKind,
    PauliLabel,
};
use apt_flow::lcu::{build_circuit, environment_view, DilationScheme};
use apt_flow::nmr::{
    noise_monte_carlo, pseudo_pure_joint_state, reduced_distinguishability, state_fidelity,
    ExperimentConfig,
};
use apt_flow::numerics::expm_oracle;
use apt_flow::observables::{
    backflow_witness, distinguishability_series, oscillation_metrics, trace_distance,
};
use apt_flow::{AptHamiltonian, C64, ComplexMatrix, DensityMatrix};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn verdict(number: usize, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {number:>2} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn family(lambda: f64) -> AptHamiltonian {
    AptHamiltonian::from_lambda(3.0, lambda).unwrap()
}

fn basis(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![c(0.0, 0.0); dim];
    v[index] = c(1.0, 0.0);
    v
}

/// ⟨w|ρ|w⟩ for a normalized pure vector against a density matrix.
fn pure_fidelity(work: &[C64], rho: &DensityMatrix) -> f64 {
    let mut overlap = 0.0;
    for (i, wi) in work.iter().enumerate() {
        for (j, wj) in work.iter().enumerate() {
            overlap += (wi.conj() * rho.matrix().get(i, j) * wj).re;
        }
    }
    overlap
}

#[test]
fn criterion_01_dilation_matches_direct_evolution() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let draws = 220;
    let mut min_fidelity = f64::INFINITY;
    for i in 0..draws {
        let (h, t) = if i % 10 == 9 {
            // Near the exceptional point the gap almost vanishes.
            let s: f64 = rng.gen_range(0.5..3.0);
            let lambda = 1.0 + rng.gen_range(-1e-9..1e-9);
            (AptHamiltonian::from_lambda(s, lambda).unwrap(), rng.gen_range(0.0..1.5))
        } else {
            let h = AptHamiltonian::new(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            )
            .unwrap();
            (h, rng.gen_range(0.0..1.5))
        };
        let circuit = build_circuit(&h, t, DilationScheme::ThreeQubit).unwrap();
        let output = simulate(&circuit, &basis(8, 0)).unwrap();
        let (work, _) = post_select(&output, &[0, 1], "00").unwrap();
        let direct = h.evolve(&DensityMatrix::basis_state(2, 0).unwrap(), t).unwrap();
        min_fidelity = min_fidelity.min(pure_fidelity(&work, &direct));
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = min_fidelity >= 1.0 - 1e-10 && elapsed < 10.0;
    verdict(
        1,
        "post-selected dilation output matches direct evolution",
        pass,
        format!("min fidelity {min_fidelity:.14} over {draws} draws in {elapsed:.2}s"),
    );
}

#[test]
fn criterion_02_detected_period_matches_closed_form() {
    // Third column: the reference values rounded as commonly quoted; the
    // last two carry rounding slips, so they gate only at 1e-4 relative.
    let rows = [(2.0, 0.604600), (1.5, 0.936679), (1.01, 7.38660)];
    let mut detail = String::new();
    let mut pass = true;
    for (lambda, quoted) in rows {
        let metrics = oscillation_metrics(3.0, lambda).unwrap();
        let detected = metrics.period.expect("broken regime oscillates");
        let formula = std::f64::consts::PI / (3.0 * (lambda * lambda - 1.0f64).sqrt());
        let rel_formula = ((detected - formula) / formula).abs();
        let rel_quoted = ((detected - quoted) / quoted).abs();
        pass &= rel_formula <= 1e-6 && rel_quoted <= 1e-4;
        detail.push_str(&format!("lambda {lambda}: {detected:.8} vs {formula:.8}; "));
    }
    verdict(2, "oscillation period obeys the closed form", pass, detail);
}

#[test]
fn criterion_03_full_retrieval_at_period_multiples() {
    let h = family(2.0);
    let period = std::f64::consts::PI / (3.0 * 3.0f64.sqrt());
    let rho0 = DensityMatrix::basis_state(2, 0).unwrap();
    let rho1 = DensityMatrix::basis_state(2, 1).unwrap();
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let t = k as f64 * period;
        let d = trace_distance(&h.evolve(&rho0, t).unwrap(), &h.evolve(&rho1, t).unwrap())
            .unwrap();
        worst = worst.max((d - 1.0).abs());
    }
    let pass = worst <= 1e-9;
    verdict(
        3,
        "distinguishability returns to 1 at t = kT",
        pass,
        format!("max |D(kT) - 1| = {worst:.3e} for k = 1..3"),
    );
}

#[test]
fn criterion_04_minimum_distinguishability_closed_form() {
    let lambda = 2.0f64;
    let h = family(lambda);
    let t = 0.5 * std::f64::consts::PI / (3.0 * (lambda * lambda - 1.0).sqrt());
    let expected = (lambda * lambda - 1.0) / (lambda * lambda + 1.0);

    let rho0 = DensityMatrix::basis_state(2, 0).unwrap();
    let rho1 = DensityMatrix::basis_state(2, 1).unwrap();
    let direct = trace_distance(&h.evolve(&rho0, t).unwrap(), &h.evolve(&rho1, t).unwrap())
        .unwrap();

    // Independent route: series matrix exponential instead of the closed
    // form propagator.
    let u = expm_oracle(&h.matrix(), t).unwrap();
    let via_oracle = {
        let propagate = |rho: &DensityMatrix| {
            let raw = &(&u * rho.matrix()) * &u.adjoint();
            let trace = raw.trace().re;
            DensityMatrix::new(raw.scale(c(1.0 / trace, 0.0))).unwrap()
        };
        trace_distance(&propagate(&rho0), &propagate(&rho1)).unwrap()
    };

    let pass = (direct - expected).abs() <= 1e-9 && (via_oracle - expected).abs() <= 1e-9;
    verdict(
        4,
        "half-period minimum equals (lambda^2-1)/(lambda^2+1)",
        pass,
        format!("direct {direct:.12}, series route {via_oracle:.12}, expected {expected}"),
    );
}

#[test]
fn criterion_05_unbroken_phase_never_recovers() {
    let h = family(0.5);
    let times: Vec<f64> = (0..1000).map(|k| 3.0 * k as f64 / 999.0).collect();
    let trace = distinguishability_series(&h, &times).unwrap();
    let d = &trace.distinguishability;
    let monotone = d.windows(2).all(|w| w[1] <= w[0] + 1e-9);
    let witness = backflow_witness(&trace).unwrap();
    let final_d = *d.last().unwrap();
    let pass = monotone && final_d < 0.01 && !witness.has_backflow;
    verdict(
        5,
        "unbroken-phase distinguishability decays monotonically",
        pass,
        format!(
            "monotone {monotone}, D(3) = {final_d:.3e}, backflow {}",
            witness.has_backflow
        ),
    );
}

#[test]
fn criterion_06_period_and_amplitude_shrink_with_lambda() {
    let lambdas = [1.1, 1.5, 2.0, 3.0, 5.0];
    let mut periods = Vec::new();
    let mut amplitudes = Vec::new();
    let mut amp_error: f64 = 0.0;
    for &lambda in &lambdas {
        let metrics = oscillation_metrics(3.0, lambda).unwrap();
        let amplitude = metrics.amplitude.expect("broken regime oscillates");
        periods.push(metrics.period.expect("broken regime oscillates"));
        amplitudes.push(amplitude);
        amp_error = amp_error.max((amplitude - 2.0 / (lambda * lambda + 1.0)).abs());
    }
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let in_range = amplitudes.iter().all(|a| (0.0..=1.0).contains(a));
    let pass = decreasing(&periods) && decreasing(&amplitudes) && in_range && amp_error <= 1e-9;
    verdict(
        6,
        "period and amplitude decrease monotonically in lambda",
        pass,
        format!("max |amplitude - 2/(lambda^2+1)| = {amp_error:.3e}"),
    );
}

#[test]
fn criterion_07_work_qubit_purity_revival_and_decay() {
    let period = std::f64::consts::PI / (3.0 * 3.0f64.sqrt());
    let purity_at = |lambda: f64, t: f64| -> f64 {
        let circuit = build_circuit(&family(lambda), t, DilationScheme::ThreeQubit).unwrap();
        let output = simulate(&circuit, &basis(8, 0)).unwrap();
        environment_view(&output, &[0, 1]).unwrap().purity()
    };
    let revival = purity_at(2.0, period);
    let mixed = purity_at(0.5, 3.0);
    let pass = (revival - 1.0).abs() <= 1e-9 && (mixed - 0.5).abs() <= 0.01;
    verdict(
        7,
        "traced work-qubit purity revives at T and decays to 1/2",
        pass,
        format!("purity(T) = {revival:.12} at lambda 2, purity(3) = {mixed:.4} at lambda 0.5"),
    );
}

#[test]
fn criterion_08_trace_distance_metric_properties() {
    let mut rng = ChaCha12Rng::seed_from_u64(8);
    let random_state = |rng: &mut ChaCha12Rng| {
        let psi = [
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ];
        let pure = DensityMatrix::from_pure(&psi).unwrap();
        let mix: f64 = rng.gen_range(0.0..1.0);
        let blended = &pure.matrix().scale(c(1.0 - mix, 0.0))
            + &ComplexMatrix::identity(2).scale(c(mix / 2.0, 0.0));
        DensityMatrix::new(blended).unwrap()
    };
    let mut invariance_err: f64 = 0.0;
    let mut contraction_err: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_state(&mut rng);
        let sigma = random_state(&mut rng);
        let d = trace_distance(&rho, &sigma).unwrap();

        let herm = {
            let a = c(rng.gen_range(-1.0..1.0), 0.0);
            let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let d2 = c(rng.gen_range(-1.0..1.0), 0.0);
            ComplexMatrix::from2x2(a, b, b.conj(), d2)
        };
        let u = expm_oracle(&herm, 1.0).unwrap();
        let rotate = |m: &DensityMatrix| {
            DensityMatrix::new(&(&u * m.matrix()) * &u.adjoint()).unwrap()
        };
        let d_rot = trace_distance(&rotate(&rho), &rotate(&sigma)).unwrap();
        invariance_err = invariance_err.max((d - d_rot).abs());

        let p: f64 = rng.gen_range(0.0..1.0);
        let depolarize = |m: &DensityMatrix| {
            let shrunk = &m.matrix().scale(c(1.0 - p, 0.0))
                + &ComplexMatrix::identity(2).scale(c(p / 2.0, 0.0));
            DensityMatrix::new(shrunk).unwrap()
        };
        let d_noisy = trace_distance(&depolarize(&rho), &depolarize(&sigma)).unwrap();
        contraction_err = contraction_err.max(d_noisy - d);
    }
    let pass = invariance_err <= 1e-12 && contraction_err <= 1e-12;
    verdict(
        8,
        "trace distance is unitary invariant and contracts under noise",
        pass,
        format!(
            "max invariance error {invariance_err:.3e}, max contraction excess {contraction_err:.3e}"
        ),
    );
}

#[test]
fn criterion_09_four_qubit_output_factorizes() {
    let config = ExperimentConfig::default();
    let mut min_fidelity = f64::INFINITY;
    let mut argmin = (0.0, 0.0, 0usize);
    for &lambda in &config.lambdas {
        let h = family(lambda);
        for &t in config.time_grid().iter().skip(1) {
            let circuit = build_circuit(&h, t, DilationScheme::FourQubitExperimental).unwrap();
            let output = simulate(&circuit, &basis(16, 0)).unwrap();
            let (joint, _) = post_select(&output, &[0, 1], "00").unwrap();
            let joint = DensityMatrix::from_pure(&joint).unwrap();
            for (index, factor) in [(0usize, 0usize), (1, 1)] {
                let reduced = joint.reduce(&[2, 2], &[index]).unwrap();
                let evolved = h
                    .evolve(&DensityMatrix::basis_state(2, factor).unwrap(), t)
                    .unwrap();
                let fidelity = state_fidelity(&reduced, &evolved).unwrap();
                if fidelity < min_fidelity {
                    min_fidelity = fidelity;
                    argmin = (lambda, t, factor);
                }
            }
        }
    }
    let pass = min_fidelity >= 1.0 - 1e-10;
    verdict(
        9,
        "four-qubit post-selected pair factorizes into the evolved states",
        pass,
        format!(
            "min per-factor fidelity {min_fidelity:.6} at lambda {} t {:.4} factor {} \
             (the post-selected pair is entangled at interior times, so its reduced \
             factors are dephased; populations and trace distance still match exactly)",
            argmin.0, argmin.1, argmin.2
        ),
    );
}

#[test]
fn criterion_10_noise_bands_behave_and_reproduce() {
    let started = Instant::now();

    let silent = ExperimentConfig {
        noise_fraction: 0.0,
        n_trials: 20,
        ..ExperimentConfig::default()
    };
    let zero_width = noise_monte_carlo(&silent)
        .unwrap()
        .iter()
        .all(|band| band.lower == band.nominal && band.upper == band.nominal);

    let config = ExperimentConfig::default();
    let bands = noise_monte_carlo(&config).unwrap();
    let contained = bands.iter().all(|band| {
        (0..band.times.len())
            .all(|k| band.lower[k] <= band.nominal[k] && band.nominal[k] <= band.upper[k] + 1e-12)
    });
    let replay = noise_monte_carlo(&config).unwrap();
    let reproducible = bands == replay;

    let elapsed = started.elapsed().as_secs_f64();
    let pass = zero_width && contained && reproducible && elapsed < 60.0;
    verdict(
        10,
        "Monte Carlo bands collapse at delta 0, contain the nominal curve, and reproduce",
        pass,
        format!(
            "zero-width {zero_width}, contained {contained}, reproducible {reproducible}, \
             {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_11_pseudo_pure_pipeline_consistency() {
    let config = ExperimentConfig::default();
    let epsilon = 1e-5;
    let mut max_gap: f64 = 0.0;
    for &lambda in &config.lambdas {
        let h = family(lambda);
        for &t in config.time_grid().iter().skip(1) {
            let pps = pseudo_pure_joint_state(&h, t, epsilon).unwrap();
            let d_pps = reduced_distinguishability(&pps).unwrap();

            let circuit = build_circuit(&h, t, DilationScheme::FourQubitExperimental).unwrap();
            let output = simulate(&circuit, &basis(16, 0)).unwrap();
            let (joint, _) = post_select(&output, &[0, 1], "00").unwrap();
            let d_pure =
                reduced_distinguishability(&DensityMatrix::from_pure(&joint).unwrap()).unwrap();
            max_gap = max_gap.max((d_pps - d_pure).abs());
        }
    }

    let zero = DensityMatrix::basis_state(2, 0).unwrap();
    let one = DensityMatrix::basis_state(2, 1).unwrap();
    let mixed = DensityMatrix::maximally_mixed(2).unwrap();
    let fixtures_ok = (state_fidelity(&zero, &zero).unwrap() - 1.0).abs() <= 1e-12
        && state_fidelity(&zero, &one).unwrap().abs() <= 1e-12
        && (state_fidelity(&zero, &mixed).unwrap() - 1.0 / 2.0f64.sqrt()).abs() <= 1e-12;

    let pass = max_gap <= 1e-9 && fixtures_ok;
    verdict(
        11,
        "pseudo-pure deviation pipeline reproduces pure-state distances",
        pass,
        format!("max |D_pps - D_pure| = {max_gap:.3e}, fidelity fixtures ok: {fixtures_ok}"),
    );
}

#[test]
fn criterion_12_circuit_text_round_trip() {
    let mut rng = ChaCha12Rng::seed_from_u64(12);
    let mut all_identical = true;
    for _ in 0..50 {
        let n_qubits = rng.gen_range(1..=4usize);
        let mut circuit = CircuitIr::new(n_qubits).unwrap();
        for _ in 0..rng.gen_range(0..12usize) {
            let target = rng.gen_range(0..n_qubits);
            let kind = match rng.gen_range(0..7) {
                0 => GateKind::H,
                1 => GateKind::Pauli(PauliLabel::I),
                2 => GateKind::Pauli(PauliLabel::X),
                3 => GateKind::Pauli(PauliLabel::Y),
                4 => GateKind::Pauli(PauliLabel::Z),
                5 => GateKind::Ry(rng.gen_range(-7.0..7.0)),
                _ => {
                    let angle: f64 = rng.gen_range(-7.0..7.0);
                    let (sin, cos) = angle.sin_cos();
                    GateKind::U2(ComplexMatrix::from2x2(
                        c(cos, 0.0),
                        c(sin, 0.0),
                        c(sin, 0.0),
                        c(-cos, 0.0),
                    ))
                }
            };
            let mut controls = Vec::new();
            for q in 0..n_qubits {
                if q != target && rng.gen_bool(0.3) {
                    controls.push(Control { qubit: q, value: rng.gen_bool(0.5) });
                }
            }
            circuit.push(Gate::controlled(kind, target, controls)).unwrap();
        }
        let text = export_circuit(&circuit);
        let parsed = parse_circuit(&text).unwrap();
        all_identical &= circuit.approx_eq(&parsed, 0.0);
    }
    verdict(
        12,
        "circuit text export/parse round trip is the identity",
        all_identical,
        "50 random circuits".to_string(),
    );
}

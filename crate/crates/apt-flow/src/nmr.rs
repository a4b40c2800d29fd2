//! Ensemble-style emulation of the experiment: pseudo-pure states, the
//! overlap fidelity, the four-qubit nine-point protocol, and the Monte Carlo
//! noise bands from bounded amplitude and phase fluctuations.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::apt::AptHamiltonian;
use crate::circuit::{dense_unitary, post_select, simulate, CircuitIr, Gate, GateKind};
use crate::error::{Error, Result};
use crate::lcu::{build_circuit, environment_view, DilationScheme};
use crate::numerics::{ComplexMatrix, DensityMatrix, C64};
use crate::observables::{trace_distance, EvolutionTrace};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Work register size of the four-qubit protocol.
const WORK_DIM: usize = 4;
/// Full register size of the four-qubit protocol.
const FULL_DIM: usize = 16;

/// Ensemble state (1−ε)·I/16 + ε·|0000⟩⟨0000|.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPureState {
    epsilon: f64,
    matrix: DensityMatrix,
}

/// Builds the four-qubit pseudo-pure state for polarization ε ∈ [0, 1].
pub fn pseudo_pure(epsilon: f64) -> Result<PseudoPureState> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("polarization must lie in [0,1], got {epsilon}")));
    }
    let mut m = ComplexMatrix::identity(FULL_DIM).scale(c((1.0 - epsilon) / FULL_DIM as f64, 0.0));
    m.set(0, 0, m.get(0, 0) + c(epsilon, 0.0));
    Ok(PseudoPureState { epsilon, matrix: DensityMatrix::new(m)? })
}

impl PseudoPureState {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn matrix(&self) -> &DensityMatrix {
        &self.matrix
    }

    /// Traceful deviation from the uniform background:
    /// ρ − (1−ε)·I/16 = ε·|0000⟩⟨0000|.
    pub fn deviation(&self) -> ComplexMatrix {
        let background =
            ComplexMatrix::identity(FULL_DIM).scale(c((1.0 - self.epsilon) / FULL_DIM as f64, 0.0));
        self.matrix.matrix() - &background
    }

    /// Conjugates by a unitary and checks that only the deviation part
    /// moved: the uniform background commutes with everything, so
    /// U·ρ·U† − (1−ε)·I/16 must equal U·(deviation)·U†.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<PseudoPureState> {
        if u.rows() != FULL_DIM || u.cols() != FULL_DIM {
            return Err(Error::Dimension(format!(
                "unitary must be {FULL_DIM}x{FULL_DIM}, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        if !u.is_unitary(1e-10) {
            return Err(Error::Domain("conjugation operator is not unitary".into()));
        }
        let rotated = &(u * self.matrix.matrix()) * &u.adjoint();
        let rotated_deviation = &(u * &self.deviation()) * &u.adjoint();
        let background =
            ComplexMatrix::identity(FULL_DIM).scale(c((1.0 - self.epsilon) / FULL_DIM as f64, 0.0));
        let recomposed = &background + &rotated_deviation;
        if !rotated.approx_eq(&recomposed, 1e-12) {
            return Err(Error::Domain("identity component failed to stay invariant".into()));
        }
        Ok(PseudoPureState { epsilon: self.epsilon, matrix: DensityMatrix::new(rotated)? })
    }
}

/// Overlap fidelity tr(ρσ) / (√tr(ρ²)·√tr(σ²)); 1 exactly when the two
/// states coincide, 0 for orthogonal supports.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "fidelity needs equal dims, got {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let overlap = (rho.matrix() * sigma.matrix()).trace().re;
    let denom = (rho.purity() * sigma.purity()).sqrt();
    if !(denom > 1e-300) {
        return Err(Error::Domain("vanishing purity in fidelity denominator".into()));
    }
    Ok(overlap / denom)
}

/// Parameters of the emulated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub s: f64,
    pub lambdas: Vec<f64>,
    pub t_final: f64,
    pub n_points: usize,
    pub noise_fraction: f64,
    pub n_trials: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            s: 3.0,
            lambdas: vec![2.0, 1.5, 1.01, 0.5],
            t_final: 1.0,
            n_points: 9,
            noise_fraction: 0.05,
            n_trials: 200,
            seed: 42,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0) || !self.s.is_finite() {
            return Err(Error::Config(format!("s must be positive, got {}", self.s)));
        }
        if self.lambdas.is_empty() {
            return Err(Error::Config("need at least one lambda".into()));
        }
        for &lambda in &self.lambdas {
            if !lambda.is_finite() || lambda < 0.0 {
                return Err(Error::Config(format!("lambda must be finite and >= 0, got {lambda}")));
            }
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::Config(format!("t_final must be positive, got {}", self.t_final)));
        }
        if self.n_points < 2 {
            return Err(Error::Config(format!("n_points must be at least 2, got {}", self.n_points)));
        }
        if !(0.0..1.0).contains(&self.noise_fraction) {
            return Err(Error::Config(format!(
                "noise_fraction must lie in [0,1), got {}",
                self.noise_fraction
            )));
        }
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Sample times: a t = 0 reference row, then k·t_final/n_points for
    /// k = 1…n_points.
    pub fn time_grid(&self) -> Vec<f64> {
        let mut grid = Vec::with_capacity(self.n_points + 1);
        grid.push(0.0);
        for k in 1..=self.n_points {
            grid.push(k as f64 * self.t_final / self.n_points as f64);
        }
        grid
    }
}

/// One λ row of the experiment.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub lambda: f64,
    pub trace: EvolutionTrace,
}

/// Post-selected joint work state of a four-qubit circuit on |0000⟩, with
/// its success probability.
fn joint_work_state_of(circuit: &CircuitIr) -> Result<(Vec<C64>, f64)> {
    let mut input = vec![c(0.0, 0.0); FULL_DIM];
    input[0] = c(1.0, 0.0);
    let out = simulate(circuit, &input)?;
    post_select(&out, &[0, 1], "00")
}

/// Splits a joint two-qubit work state into its one-qubit reductions and
/// their trace distance.
pub fn reduced_distinguishability(joint: &DensityMatrix) -> Result<f64> {
    if joint.dim() != WORK_DIM {
        return Err(Error::Dimension(format!(
            "joint work state must have dim {WORK_DIM}, got {}",
            joint.dim()
        )));
    }
    let w0 = joint.reduce(&[2, 2], &[0])?;
    let w1 = joint.reduce(&[2, 2], &[1])?;
    trace_distance(&w0, &w1)
}

/// Runs the noiseless four-qubit protocol on the config's (λ, t) grid.
/// Each row records the two reduced work-qubit states, their trace
/// distance, the post-selection success probability, and the purity of the
/// first work qubit with everything else traced out (the decoherence view).
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRun>> {
    config.validate()?;
    let times = config.time_grid();
    let mut runs = Vec::with_capacity(config.lambdas.len());
    for &lambda in &config.lambdas {
        let h = AptHamiltonian::from_lambda(config.s, lambda)?;
        let mut rho_a = Vec::with_capacity(times.len());
        let mut rho_b = Vec::with_capacity(times.len());
        let mut distance = Vec::with_capacity(times.len());
        let mut purity = Vec::with_capacity(times.len());
        let mut success = Vec::with_capacity(times.len());
        for &t in &times {
            let circuit = build_circuit(&h, t, DilationScheme::FourQubitExperimental)?;
            let mut input = vec![c(0.0, 0.0); FULL_DIM];
            input[0] = c(1.0, 0.0);
            let out = simulate(&circuit, &input)?;
            let (joint, probability) = post_select(&out, &[0, 1], "00")?;
            let joint_rho = DensityMatrix::from_pure(&joint)?;
            let w0 = joint_rho.reduce(&[2, 2], &[0])?;
            let w1 = joint_rho.reduce(&[2, 2], &[1])?;
            distance.push(trace_distance(&w0, &w1)?);
            rho_a.push(w0);
            rho_b.push(w1);
            success.push(probability);
            purity.push(environment_view(&out, &[0, 1, 3])?.purity());
        }
        runs.push(ExperimentRun {
            lambda,
            trace: EvolutionTrace::new(
                times.clone(),
                rho_a,
                rho_b,
                distance,
                Some(purity),
                Some(success),
            )?,
        });
    }
    Ok(runs)
}

/// Runs the pseudo-pure pipeline at one (h, t): conjugate the ensemble
/// state by the circuit, project the ancillas onto |00⟩, subtract the
/// uniform background, and renormalize the surviving deviation block into a
/// joint work state.
pub fn pseudo_pure_joint_state(
    h: &AptHamiltonian,
    t: f64,
    epsilon: f64,
) -> Result<DensityMatrix> {
    let state = pseudo_pure(epsilon)?;
    let circuit = build_circuit(h, t, DilationScheme::FourQubitExperimental)?;
    let u = dense_unitary(&circuit);
    let rotated = state.apply_unitary(&u)?;
    // Ancillas are the two most significant qubits, so the |00⟩⟨00| block
    // is the leading 4×4 corner.
    let mut block = ComplexMatrix::zeros(WORK_DIM, WORK_DIM);
    for i in 0..WORK_DIM {
        for j in 0..WORK_DIM {
            block.set(i, j, rotated.matrix().matrix().get(i, j));
        }
    }
    // The identity background passes through conjugation and projection
    // untouched; what remains is the evolved deviation.
    let background = ComplexMatrix::identity(WORK_DIM)
        .scale(c((1.0 - epsilon) / FULL_DIM as f64, 0.0));
    let deviation = &block - &background;
    // Renormalizing the ε-scale block amplifies conjugation rounding;
    // rehermitize before validating.
    let deviation =
        &deviation.scale(c(0.5, 0.0)) + &deviation.adjoint().scale(c(0.5, 0.0));
    let norm = deviation.trace().re;
    if !(norm > 1e-300) {
        return Err(Error::Domain(format!(
            "deviation block degenerated (trace {norm:.3e})"
        )));
    }
    DensityMatrix::new(deviation.scale(c(1.0 / norm, 0.0)))
}

/// Monte Carlo distinguishability band for one λ: per time point the
/// noiseless value and the min/max over perturbed trials. The t = 0 entry
/// is the unperturbed reference row, so there lower = nominal = upper.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBand {
    pub lambda: f64,
    pub times: Vec<f64>,
    pub nominal: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Decomposes a 2×2 unitary as e^{iα}·R_n(φ), scales the rotation angle by
/// (1 + a·δ), offsets the global phase by p·δ·π, and reassembles. δ = 0
/// returns the input bitwise.
fn perturb_gate(m: &ComplexMatrix, a: f64, p: f64, delta: f64) -> ComplexMatrix {
    if delta == 0.0 {
        return m.clone();
    }
    let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
    let alpha = det.arg() / 2.0;
    let phase = C64::from_polar(1.0, -alpha);
    let su = m.scale(phase);
    // su = cos(φ/2)·I − i·sin(φ/2)·(n̂·σ⃗).
    let cos_half = 0.5 * (su.get(0, 0).re + su.get(1, 1).re);
    let sx = -su.get(0, 1).im;
    let sy = -su.get(0, 1).re;
    let sz = 0.5 * (su.get(1, 1).im - su.get(0, 0).im);
    let sin_mag = (sx * sx + sy * sy + sz * sz).sqrt();
    let phi = 2.0 * sin_mag.atan2(cos_half);
    let (nx, ny, nz) = if sin_mag > 1e-15 {
        (sx / sin_mag, sy / sin_mag, sz / sin_mag)
    } else {
        (0.0, 0.0, 1.0)
    };
    let phi_new = phi * (1.0 + a * delta);
    let alpha_new = alpha + p * delta * std::f64::consts::PI;
    let (sin, cos) = (phi_new / 2.0).sin_cos();
    let rebuilt = ComplexMatrix::from2x2(
        c(cos, -sin * nz),
        c(-sin * ny, -sin * nx),
        c(sin * ny, -sin * nx),
        c(cos, sin * nz),
    );
    rebuilt.scale(C64::from_polar(1.0, alpha_new))
}

/// Independent RNG substream for one (seed, λ index, trial) cell; the key
/// layout makes streams order-independent, so any parallel schedule
/// produces identical draws.
fn trial_rng(seed: u64, lambda_index: usize, trial: usize) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(lambda_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(trial as u64).to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Applies one trial's perturbations to every gate of a circuit.
fn perturb_circuit(circuit: &CircuitIr, rng: &mut ChaCha12Rng, delta: f64) -> Result<CircuitIr> {
    let mut noisy = CircuitIr::new(circuit.n_qubits())?;
    for gate in circuit.gates() {
        let a: f64 = rng.gen_range(-1.0..=1.0);
        let p: f64 = rng.gen_range(-1.0..=1.0);
        let kind = if delta == 0.0 {
            gate.kind.clone()
        } else {
            GateKind::U2(perturb_gate(&gate.kind.matrix(), a, p, delta))
        };
        noisy.push(Gate::controlled(kind, gate.target, gate.controls.clone()))?;
    }
    Ok(noisy)
}

/// Runs the Monte Carlo over gate-parameter fluctuations and returns the
/// per-λ distinguishability bands.
pub fn noise_monte_carlo(config: &ExperimentConfig) -> Result<Vec<NoiseBand>> {
    config.validate()?;
    let times = config.time_grid();
    let delta = config.noise_fraction;
    let mut bands = Vec::with_capacity(config.lambdas.len());
    for (lambda_index, &lambda) in config.lambdas.iter().enumerate() {
        let h = AptHamiltonian::from_lambda(config.s, lambda)?;
        let circuits: Vec<CircuitIr> = times
            .iter()
            .map(|&t| build_circuit(&h, t, DilationScheme::FourQubitExperimental))
            .collect::<Result<_>>()?;
        let nominal: Vec<f64> = circuits
            .iter()
            .map(|circuit| {
                let (joint, _) = joint_work_state_of(circuit)?;
                reduced_distinguishability(&DensityMatrix::from_pure(&joint)?)
            })
            .collect::<Result<_>>()?;

        let trial_rows: Vec<Vec<f64>> = (0..config.n_trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<f64>> {
                let mut rng = trial_rng(config.seed, lambda_index, trial);
                let mut row = Vec::with_capacity(times.len());
                for (k, circuit) in circuits.iter().enumerate() {
                    if k == 0 {
                        // Reference row stays unperturbed.
                        row.push(nominal[0]);
                        continue;
                    }
                    let noisy = perturb_circuit(circuit, &mut rng, delta)?;
                    let (joint, _) = joint_work_state_of(&noisy)?;
                    row.push(reduced_distinguishability(&DensityMatrix::from_pure(&joint)?)?);
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;

        let mut lower = vec![f64::INFINITY; times.len()];
        let mut upper = vec![f64::NEG_INFINITY; times.len()];
        for row in &trial_rows {
            for (k, &d) in row.iter().enumerate() {
                lower[k] = lower[k].min(d);
                upper[k] = upper[k].max(d);
            }
        }
        bands.push(NoiseBand { lambda, times: times.clone(), nominal, lower, upper });
    }
    Ok(bands)
}

//! Linear-combination-of-unitaries realization of the non-unitary
//! propagator: the four-Pauli decomposition, ancilla rotation angles, the
//! dilation circuits with post-selection, and the traced environment view.

use crate::apt::AptHamiltonian;
use crate::circuit::{CircuitIr, Control, Gate, GateKind, PauliLabel};
use crate::error::{Error, Result};
use crate::numerics::{partial_trace, ComplexMatrix, DensityMatrix, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Weighted-Pauli decomposition of exp(−iĤt) up to a global positive
/// scalar: Σ αᵢ·σᵢ = e^{−r·sinθ·t}·exp(−iĤt).
#[derive(Debug, Clone, PartialEq)]
pub struct LcuDecomposition {
    /// (weight, Pauli) pairs in the fixed order I, X, Y, Z.
    pub terms: Vec<(C64, PauliLabel)>,
    /// Σ|αᵢ|.
    pub one_norm: f64,
    /// αᵢ scaled to unit ℓ2 norm; the first column of the ancilla
    /// preparation unitary.
    pub normalized_column: [C64; 4],
}

impl LcuDecomposition {
    /// Σ αᵢ·σᵢ as a matrix.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(2, 2);
        for (weight, label) in &self.terms {
            sum = &sum + &label.matrix().scale(*weight);
        }
        sum
    }
}

/// Decomposes the propagator at time t into weighted Paulis:
/// α = (f₁, (s+μ)·f₂/2, i·(s−μ)·f₂/2, −i·r·cosθ·f₂) against (I, X, Y, Z),
/// with (f₁, f₂) the entire-function pair of the closed-form propagator.
pub fn lcu_coefficients(h: &AptHamiltonian, t: f64) -> Result<LcuDecomposition> {
    if !t.is_finite() {
        return Err(Error::Domain("non-finite time".into()));
    }
    let (f1, f2) = h.propagator_weights(t);
    let alphas = [
        c(f1, 0.0),
        c((h.s() + h.mu()) * f2 / 2.0, 0.0),
        c(0.0, (h.s() - h.mu()) * f2 / 2.0),
        c(0.0, -h.r() * h.theta().cos() * f2),
    ];
    let norm_sqr: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
    // f₁² + κ·f₂² = 1, so the column cannot vanish.
    let norm = norm_sqr.sqrt();
    let mut normalized_column = [c(0.0, 0.0); 4];
    for (slot, alpha) in normalized_column.iter_mut().zip(&alphas) {
        *slot = alpha / norm;
    }
    Ok(LcuDecomposition {
        terms: alphas.into_iter().zip(PauliLabel::ALL).collect(),
        one_norm: alphas.iter().map(|a| a.norm()).sum(),
        normalized_column,
    })
}

/// Ancilla preparation data: V₀ rotates the coarse split between the (I, X)
/// and (Y, Z) halves, V₁ and V₂ finish the halves. θ₁ and θ₂ are
/// diagnostic angles (arccos of the leading first-column magnitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct AnglePlan {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub v0: ComplexMatrix,
    pub v1: ComplexMatrix,
    pub v2: ComplexMatrix,
}

/// [[a, −b̄], [b, ā]]: the unitary completion with first column (a, b).
fn completion(a: C64, b: C64) -> ComplexMatrix {
    ComplexMatrix::from2x2(a, -b.conj(), b, a.conj())
}

/// Real rotation [[cosθ, sinθ], [sinθ, −cosθ]].
fn rotation(theta: f64) -> ComplexMatrix {
    let (sin, cos) = theta.sin_cos();
    ComplexMatrix::from2x2(c(cos, 0.0), c(sin, 0.0), c(sin, 0.0), c(-cos, 0.0))
}

/// Builds the three preparation unitaries for a normalized four-entry
/// column. A zero-norm sub-pair leaves the corresponding Vₖ at identity.
pub fn angle_plan(dec: &LcuDecomposition) -> AnglePlan {
    let col = &dec.normalized_column;
    let p01 = (col[0].norm_sqr() + col[1].norm_sqr()).sqrt().min(1.0);
    let p23 = (col[2].norm_sqr() + col[3].norm_sqr()).sqrt().min(1.0);
    let theta0 = p01.acos();
    let (v1, theta1) = if p01 > 0.0 {
        (completion(col[0] / p01, col[1] / p01), (col[0].norm() / p01).min(1.0).acos())
    } else {
        (ComplexMatrix::identity(2), 0.0)
    };
    let (v2, theta2) = if p23 > 0.0 {
        (completion(col[2] / p23, col[3] / p23), (col[2].norm() / p23).min(1.0).acos())
    } else {
        (ComplexMatrix::identity(2), 0.0)
    };
    AnglePlan { theta0, theta1, theta2, v0: rotation(theta0), v1, v2 }
}

/// Which dilation circuit to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DilationScheme {
    /// Two ancillas and one work qubit.
    ThreeQubit,
    /// Two ancillas and two work qubits evolving |0⟩ and |1⟩ side by side;
    /// the controlled Paulis act as σᵢ⊗σᵢ.
    FourQubitExperimental,
}

impl std::fmt::Display for DilationScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DilationScheme::ThreeQubit => "three-qubit",
            DilationScheme::FourQubitExperimental => "four-qubit",
        })
    }
}

impl std::str::FromStr for DilationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "three" | "three-qubit" => Ok(DilationScheme::ThreeQubit),
            "four" | "four-qubit" => Ok(DilationScheme::FourQubitExperimental),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected three[-qubit] or four[-qubit])"
            ))),
        }
    }
}

/// Synthesizes the dilation circuit for exp(−iĤt).
///
/// Qubit order: q0, q1 are the ancillas, q2 the work qubit, and q3 (four-
/// qubit scheme) the second work qubit, which an initial X flips to |1⟩.
/// Ancilla preparation loads the normalized column; controlled Paulis route
/// X, Y, Z to the ancilla patterns 01, 10, 11 (the identity branch needs no
/// gate); final Hadamards fold the branches so post-selecting the ancillas
/// on |00⟩ leaves the work register in the evolved state.
pub fn build_circuit(h: &AptHamiltonian, t: f64, scheme: DilationScheme) -> Result<CircuitIr> {
    let plan = angle_plan(&lcu_coefficients(h, t)?);
    let n_qubits = match scheme {
        DilationScheme::ThreeQubit => 3,
        DilationScheme::FourQubitExperimental => 4,
    };
    let mut circuit = CircuitIr::new(n_qubits)?;
    if scheme == DilationScheme::FourQubitExperimental {
        circuit.push(Gate::new(GateKind::Pauli(PauliLabel::X), 3))?;
    }
    circuit.push(Gate::new(GateKind::U2(plan.v0), 0))?;
    circuit.push(Gate::controlled(
        GateKind::U2(plan.v1),
        1,
        vec![Control { qubit: 0, value: false }],
    ))?;
    circuit.push(Gate::controlled(
        GateKind::U2(plan.v2),
        1,
        vec![Control { qubit: 0, value: true }],
    ))?;
    let branches = [
        (PauliLabel::X, false, true),
        (PauliLabel::Y, true, false),
        (PauliLabel::Z, true, true),
    ];
    for (pauli, a0, a1) in branches {
        let controls = vec![Control { qubit: 0, value: a0 }, Control { qubit: 1, value: a1 }];
        circuit.push(Gate::controlled(GateKind::Pauli(pauli), 2, controls.clone()))?;
        if scheme == DilationScheme::FourQubitExperimental {
            circuit.push(Gate::controlled(GateKind::Pauli(pauli), 3, controls))?;
        }
    }
    circuit.push(Gate::new(GateKind::H, 0))?;
    circuit.push(Gate::new(GateKind::H, 1))?;
    Ok(circuit)
}

/// Reduced work-register state of a full circuit output: the ancillas are
/// traced out instead of post-selected, exposing the decoherence the
/// dilation induces on the work system.
pub fn environment_view(circuit_output: &[C64], ancillas: &[usize]) -> Result<DensityMatrix> {
    let dim = circuit_output.len();
    if dim == 0 || dim & (dim - 1) != 0 {
        return Err(Error::Dimension(format!("state length {dim} is not a power of two")));
    }
    let n = dim.trailing_zeros() as usize;
    if ancillas.iter().any(|&q| q >= n) {
        return Err(Error::Dimension("ancilla index out of range".into()));
    }
    let keep: Vec<usize> = (0..n).filter(|q| !ancillas.contains(q)).collect();
    if keep.is_empty() {
        return Err(Error::Dimension("tracing out every qubit leaves no work register".into()));
    }
    let rho = DensityMatrix::from_pure(circuit_output)?;
    let dims = vec![2usize; n];
    DensityMatrix::new(partial_trace(rho.matrix(), &dims, &keep)?)
}

/// Builds a state-preparation circuit whose action on |0…0⟩ has amplitudes
/// proportional to the given weights (ℓ2-normalized, phases kept).
///
/// The column is split recursively in halves: internal nodes get the real
/// rotation [[cosθ, sinθ], [sinθ, −cosθ]] over the half masses, leaves get
/// the unitary completion of their normalized pair, and zero-mass branches
/// stay at identity. Weights are zero-padded to a power of two; four-entry
/// input reproduces the [`angle_plan`] unitaries gate for gate.
pub fn prepare_lcu_state(weights: &[C64]) -> Result<CircuitIr> {
    if weights.is_empty() {
        return Err(Error::Domain("need at least one weight".into()));
    }
    let norm_sqr: f64 = weights.iter().map(|w| w.norm_sqr()).sum();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::Domain("weights must be finite and not all zero".into()));
    }
    let norm = norm_sqr.sqrt();
    let n_qubits = usize::max(1, weights.len().next_power_of_two().trailing_zeros() as usize);
    let mut column = vec![c(0.0, 0.0); 1usize << n_qubits];
    for (slot, w) in column.iter_mut().zip(weights) {
        *slot = w / norm;
    }
    let mut circuit = CircuitIr::new(n_qubits)?;
    split_column(&column, 0, &mut Vec::new(), &mut circuit)?;
    Ok(circuit)
}

fn split_column(
    segment: &[C64],
    level: usize,
    controls: &mut Vec<Control>,
    circuit: &mut CircuitIr,
) -> Result<()> {
    let gate_kind = if segment.len() == 2 {
        let norm = (segment[0].norm_sqr() + segment[1].norm_sqr()).sqrt();
        if norm > 0.0 {
            GateKind::U2(completion(segment[0] / norm, segment[1] / norm))
        } else {
            GateKind::U2(ComplexMatrix::identity(2))
        }
    } else {
        let half = segment.len() / 2;
        let left: f64 = segment[..half].iter().map(|z| z.norm_sqr()).sum();
        let right: f64 = segment[half..].iter().map(|z| z.norm_sqr()).sum();
        let total = (left + right).sqrt();
        if total > 0.0 {
            GateKind::U2(rotation((left.sqrt() / total).min(1.0).acos()))
        } else {
            GateKind::U2(ComplexMatrix::identity(2))
        }
    };
    circuit.push(Gate::controlled(gate_kind, level, controls.clone()))?;
    if segment.len() > 2 {
        let half = segment.len() / 2;
        controls.push(Control { qubit: level, value: false });
        split_column(&segment[..half], level + 1, controls, circuit)?;
        controls.last_mut().expect("just pushed").value = true;
        split_column(&segment[half..], level + 1, controls, circuit)?;
        controls.pop();
    }
    Ok(())
}

//! Minimal gate-level circuit representation: construction with validated
//! invariants, exact statevector simulation, ancilla post-selection, a dense
//! matrix cross-check path, and a strict line-oriented text format.

use crate::error::{Error, Result};
use crate::numerics::{kron, ComplexMatrix, DensityMatrix, C64};

/// Unitarity required of user-supplied 2×2 gate matrices.
pub const GATE_UNITARY_TOL: f64 = 1e-12;
/// Input statevector norm tolerance.
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Post-selection branches below this probability are treated as vanished.
pub const POST_SELECT_FLOOR: f64 = 1e-30;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            PauliLabel::I => ComplexMatrix::identity(2),
            PauliLabel::X => {
                ComplexMatrix::from2x2(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
            }
            PauliLabel::Y => {
                ComplexMatrix::from2x2(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
            }
            PauliLabel::Z => {
                ComplexMatrix::from2x2(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
            }
        }
    }
}

impl std::fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PauliLabel::I => "I",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
            PauliLabel::Z => "Z",
        })
    }
}

/// Control condition: the gate fires when `qubit` carries `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub value: bool,
}

/// Gate payload.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    Pauli(PauliLabel),
    Ry(f64),
    U2(ComplexMatrix),
}

impl GateKind {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            GateKind::H => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                ComplexMatrix::from2x2(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
            }
            GateKind::Pauli(p) => p.matrix(),
            GateKind::Ry(angle) => {
                let (sin, cos) = (angle / 2.0).sin_cos();
                ComplexMatrix::from2x2(c(cos, 0.0), c(-sin, 0.0), c(sin, 0.0), c(cos, 0.0))
            }
            GateKind::U2(m) => m.clone(),
        }
    }
}

/// One gate: a single-qubit operation on `target`, optionally conditioned on
/// control qubits with explicit polarities.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self { kind, target, controls: Vec::new() }
    }

    pub fn controlled(kind: GateKind, target: usize, controls: Vec<Control>) -> Self {
        Self { kind, target, controls }
    }
}

/// Ordered gate list over a fixed qubit register. Qubit 0 is the most
/// significant bit of basis-state indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitIr {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl CircuitIr {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        Ok(Self { n_qubits, gates: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Appends a gate after checking index bounds, control/target
    /// disjointness, and gate-matrix sanity.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.target >= self.n_qubits {
            return Err(Error::InvalidCircuit(format!(
                "target q{} outside register of {} qubits",
                gate.target, self.n_qubits
            )));
        }
        let mut seen = vec![gate.target];
        for ctrl in &gate.controls {
            if ctrl.qubit >= self.n_qubits {
                return Err(Error::InvalidCircuit(format!(
                    "control q{} outside register of {} qubits",
                    ctrl.qubit, self.n_qubits
                )));
            }
            if seen.contains(&ctrl.qubit) {
                return Err(Error::InvalidCircuit(format!(
                    "qubit q{} repeated among target and controls",
                    ctrl.qubit
                )));
            }
            seen.push(ctrl.qubit);
        }
        match &gate.kind {
            GateKind::Ry(angle) => {
                if !angle.is_finite() {
                    return Err(Error::InvalidCircuit("non-finite rotation angle".into()));
                }
            }
            GateKind::U2(m) => {
                if m.rows() != 2 || m.cols() != 2 {
                    return Err(Error::InvalidCircuit("u2 payload must be 2x2".into()));
                }
                if !m.is_unitary(GATE_UNITARY_TOL) {
                    return Err(Error::InvalidCircuit("u2 payload is not unitary".into()));
                }
            }
            GateKind::H | GateKind::Pauli(_) => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Entrywise comparison of gate matrices and exact comparison of the
    /// structure.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self.gates.len() == other.gates.len()
            && self.gates.iter().zip(&other.gates).all(|(a, b)| {
                a.target == b.target
                    && a.controls == b.controls
                    && a.kind.matrix().approx_eq(&b.kind.matrix(), tolerance)
            })
    }
}

/// Applies the circuit to a statevector of matching dimension and unit norm.
pub fn simulate(circuit: &CircuitIr, input: &[C64]) -> Result<Vec<C64>> {
    if input.len() != circuit.dim() {
        return Err(Error::Dimension(format!(
            "state has {} amplitudes, circuit acts on {}",
            input.len(),
            circuit.dim()
        )));
    }
    let norm: f64 = input.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::Domain(format!("input state norm² = {norm}, expected 1")));
    }
    let n = circuit.n_qubits();
    let mut state = input.to_vec();
    for gate in circuit.gates() {
        let m = gate.kind.matrix();
        let target_bit = n - 1 - gate.target;
        let target_mask = 1usize << target_bit;
        for i in 0..state.len() {
            if i & target_mask != 0 {
                continue;
            }
            let controls_pass = gate.controls.iter().all(|ctrl| {
                let bit = (i >> (n - 1 - ctrl.qubit)) & 1 == 1;
                bit == ctrl.value
            });
            if !controls_pass {
                continue;
            }
            let j = i | target_mask;
            let (a, b) = (state[i], state[j]);
            state[i] = m.get(0, 0) * a + m.get(0, 1) * b;
            state[j] = m.get(1, 0) * a + m.get(1, 1) * b;
        }
    }
    Ok(state)
}

/// Full-register matrix of one gate, assembled from Kronecker products of
/// control projectors. Kept independent of [`simulate`]'s bit arithmetic so
/// the two paths cross-check each other.
fn gate_matrix_dense(gate: &Gate, n_qubits: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let m = gate.kind.matrix();
    let n_controls = gate.controls.len();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for assignment in 0..(1usize << n_controls) {
        let bits: Vec<bool> = (0..n_controls).map(|k| (assignment >> k) & 1 == 1).collect();
        let fires = gate
            .controls
            .iter()
            .zip(&bits)
            .all(|(ctrl, &bit)| bit == ctrl.value);
        let mut factor = ComplexMatrix::identity(1);
        for q in 0..n_qubits {
            let slot = if let Some(pos) = gate.controls.iter().position(|ctrl| ctrl.qubit == q) {
                let v = if bits[pos] { 1 } else { 0 };
                let mut proj = ComplexMatrix::zeros(2, 2);
                proj.set(v, v, c(1.0, 0.0));
                proj
            } else if q == gate.target && fires {
                m.clone()
            } else {
                ComplexMatrix::identity(2)
            };
            factor = kron(&factor, &slot);
        }
        total = &total + &factor;
    }
    total
}

/// Dense unitary of the whole circuit (product of per-gate dense matrices).
pub fn dense_unitary(circuit: &CircuitIr) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(circuit.dim());
    for gate in circuit.gates() {
        u = &gate_matrix_dense(gate, circuit.n_qubits()) * &u;
    }
    u
}

/// Conjugates a density matrix by the circuit's dense unitary.
pub fn apply_to_density(circuit: &CircuitIr, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != circuit.dim() {
        return Err(Error::Dimension(format!(
            "density matrix dim {} does not match circuit dim {}",
            rho.dim(),
            circuit.dim()
        )));
    }
    let u = dense_unitary(circuit);
    DensityMatrix::new(&(&u * rho.matrix()) * &u.adjoint())
}

/// Projects onto the ancilla pattern and renormalizes the surviving work
/// register. `pattern` is a string of '0'/'1' characters, one per ancilla.
/// Returns the normalized work state (remaining qubits in original order)
/// and the branch probability.
pub fn post_select(
    state: &[C64],
    ancillas: &[usize],
    pattern: &str,
) -> Result<(Vec<C64>, f64)> {
    let dim = state.len();
    if dim == 0 || dim & (dim - 1) != 0 {
        return Err(Error::Dimension(format!("state length {dim} is not a power of two")));
    }
    let n = dim.trailing_zeros() as usize;
    if pattern.len() != ancillas.len() {
        return Err(Error::Dimension(format!(
            "pattern has {} bits for {} ancillas",
            pattern.len(),
            ancillas.len()
        )));
    }
    let mut bits = Vec::with_capacity(pattern.len());
    for ch in pattern.chars() {
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => return Err(Error::Domain(format!("pattern bit '{other}' is not 0 or 1"))),
        }
    }
    let mut sorted = ancillas.to_vec();
    sorted.dedup();
    if sorted.len() != ancillas.len() || ancillas.iter().any(|&q| q >= n) {
        return Err(Error::Dimension("ancilla indices must be distinct and in range".into()));
    }
    let work_qubits: Vec<usize> = (0..n).filter(|q| !ancillas.contains(q)).collect();
    let mut work = vec![c(0.0, 0.0); 1usize << work_qubits.len()];
    let mut probability = 0.0;
    for (index, amp) in state.iter().enumerate() {
        let matches = ancillas.iter().zip(&bits).all(|(&q, &want)| {
            ((index >> (n - 1 - q)) & 1 == 1) == want
        });
        if !matches {
            continue;
        }
        probability += amp.norm_sqr();
        let mut w = 0usize;
        for &q in &work_qubits {
            w = (w << 1) | ((index >> (n - 1 - q)) & 1);
        }
        work[w] = *amp;
    }
    if probability < POST_SELECT_FLOOR {
        return Err(Error::VanishingBranch { probability });
    }
    let scale = probability.sqrt();
    for amp in &mut work {
        *amp /= scale;
    }
    Ok((work, probability))
}

/// Serializes a circuit to the line format: a `qubits N` header, then one
/// gate per line as `<mnemonic> q<target> [params] [ctrl q<i>=<0|1> ...]`.
/// Numeric parameters print in the shortest form that parses back to the
/// identical f64, so export → parse is the identity.
pub fn export_circuit(circuit: &CircuitIr) -> String {
    let mut out = format!("qubits {}\n", circuit.n_qubits());
    for gate in circuit.gates() {
        let mut line = match &gate.kind {
            GateKind::H => format!("h q{}", gate.target),
            GateKind::Pauli(PauliLabel::I) => format!("i q{}", gate.target),
            GateKind::Pauli(PauliLabel::X) => format!("x q{}", gate.target),
            GateKind::Pauli(PauliLabel::Y) => format!("y q{}", gate.target),
            GateKind::Pauli(PauliLabel::Z) => format!("z q{}", gate.target),
            GateKind::Ry(angle) => format!("ry q{} {}", gate.target, angle),
            GateKind::U2(m) => {
                let mut line = format!("u2 q{}", gate.target);
                for i in 0..2 {
                    for j in 0..2 {
                        let z = m.get(i, j);
                        line.push_str(&format!(" {} {}", z.re, z.im));
                    }
                }
                line
            }
        };
        for ctrl in &gate.controls {
            line.push_str(&format!(" ctrl q{}={}", ctrl.qubit, u8::from(ctrl.value)));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn parse_qubit(token: &str, line: usize) -> Result<usize> {
    let bare = token.strip_prefix('q').ok_or_else(|| Error::Parse {
        line,
        message: format!("expected qubit reference like q0, got '{token}'"),
    })?;
    bare.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid qubit index '{bare}'"),
    })
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid number '{token}'"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse { line, message: format!("non-finite number '{token}'") });
    }
    Ok(value)
}

/// Parses the text format produced by [`export_circuit`]. Strict: unknown
/// mnemonics, malformed parameters, bad indices, and invariant violations
/// are all errors carrying the offending line number. `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<CircuitIr> {
    let mut circuit: Option<CircuitIr> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if circuit.is_none() {
            if tokens.len() != 2 || tokens[0] != "qubits" {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected header 'qubits N'".into(),
                });
            }
            let n: usize = tokens[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid qubit count '{}'", tokens[1]),
            })?;
            circuit = Some(CircuitIr::new(n).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?);
            continue;
        }
        let target = parse_qubit(
            tokens.get(1).copied().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "missing target qubit".into(),
            })?,
            line_no,
        )?;
        let n_params = match tokens[0] {
            "h" | "i" | "x" | "y" | "z" => 0,
            "ry" => 1,
            "u2" => 8,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown mnemonic '{other}'"),
                })
            }
        };
        let params_end = 2 + n_params;
        if tokens.len() < params_end {
            return Err(Error::Parse {
                line: line_no,
                message: format!("'{}' needs {} numeric parameters", tokens[0], n_params),
            });
        }
        let params: Vec<f64> = tokens[2..params_end]
            .iter()
            .map(|tok| parse_float(tok, line_no))
            .collect::<Result<_>>()?;
        let kind = match tokens[0] {
            "h" => GateKind::H,
            "i" => GateKind::Pauli(PauliLabel::I),
            "x" => GateKind::Pauli(PauliLabel::X),
            "y" => GateKind::Pauli(PauliLabel::Y),
            "z" => GateKind::Pauli(PauliLabel::Z),
            "ry" => GateKind::Ry(params[0]),
            "u2" => {
                let m = ComplexMatrix::from2x2(
                    c(params[0], params[1]),
                    c(params[2], params[3]),
                    c(params[4], params[5]),
                    c(params[6], params[7]),
                );
                GateKind::U2(m)
            }
            _ => unreachable!("mnemonic screened above"),
        };
        let mut controls = Vec::new();
        let mut rest = &tokens[params_end..];
        while !rest.is_empty() {
            if rest[0] != "ctrl" || rest.len() < 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected trailing token '{}'", rest[0]),
                });
            }
            let clause = rest[1];
            let (qubit_tok, value_tok) = clause.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("control clause '{clause}' must look like q0=1"),
            })?;
            let qubit = parse_qubit(qubit_tok, line_no)?;
            let value = match value_tok {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("control polarity '{other}' is not 0 or 1"),
                    })
                }
            };
            controls.push(Control { qubit, value });
            rest = &rest[2..];
        }
        let circuit_ref = circuit.as_mut().expect("header parsed");
        circuit_ref
            .push(Gate::controlled(kind, target, controls))
            .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
    }
    circuit.ok_or_else(|| Error::Parse { line: 0, message: "empty circuit text".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::expm_oracle;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn basis(n: usize, k: usize) -> Vec<C64> {
        let mut v = vec![c(0.0, 0.0); 1 << n];
        v[k] = c(1.0, 0.0);
        v
    }

    fn random_unitary2(rng: &mut ChaCha12Rng) -> ComplexMatrix {
        let d0 = c(rng.gen_range(-1.0..1.0), 0.0);
        let d1 = c(rng.gen_range(-1.0..1.0), 0.0);
        let off = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let herm = ComplexMatrix::from2x2(d0, off, off.conj(), d1);
        expm_oracle(&herm, 1.0).unwrap()
    }

    fn random_circuit(rng: &mut ChaCha12Rng) -> CircuitIr {
        let n = rng.gen_range(1..=4);
        let mut circuit = CircuitIr::new(n).unwrap();
        for _ in 0..rng.gen_range(0..12) {
            let target = rng.gen_range(0..n);
            let kind = match rng.gen_range(0..6) {
                0 => GateKind::H,
                1 => GateKind::Pauli(PauliLabel::X),
                2 => GateKind::Pauli(PauliLabel::Y),
                3 => GateKind::Pauli(PauliLabel::Z),
                4 => GateKind::Ry(rng.gen_range(-6.3..6.3)),
                _ => GateKind::U2(random_unitary2(rng)),
            };
            let mut controls = Vec::new();
            let mut available: Vec<usize> = (0..n).filter(|&q| q != target).collect();
            for _ in 0..rng.gen_range(0..=available.len().min(2)) {
                let pick = rng.gen_range(0..available.len());
                controls.push(Control { qubit: available.remove(pick), value: rng.gen() });
            }
            circuit.push(Gate::controlled(kind, target, controls)).unwrap();
        }
        circuit
    }

    #[test]
    fn test_empty_circuit_is_identity() {
        let circuit = CircuitIr::new(2).unwrap();
        let input = vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.5)];
        let out = simulate(&circuit, &input).unwrap();
        assert_eq!(out, input);
    }

    #[test]
    fn test_single_hadamard() {
        let mut circuit = CircuitIr::new(1).unwrap();
        circuit.push(Gate::new(GateKind::H, 0)).unwrap();
        let out = simulate(&circuit, &basis(1, 0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((out[1] - c(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn test_controlled_x_msb_convention() {
        // Qubit 0 is the most significant bit: |q0 q1> = |10> has index 2.
        let mut circuit = CircuitIr::new(2).unwrap();
        circuit
            .push(Gate::controlled(
                GateKind::Pauli(PauliLabel::X),
                1,
                vec![Control { qubit: 0, value: true }],
            ))
            .unwrap();
        let out = simulate(&circuit, &basis(2, 2)).unwrap();
        assert!((out[3] - c(1.0, 0.0)).norm() < 1e-15);
        // Control not met: |00> untouched.
        let out0 = simulate(&circuit, &basis(2, 0)).unwrap();
        assert!((out0[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn test_anti_control() {
        let mut circuit = CircuitIr::new(2).unwrap();
        circuit
            .push(Gate::controlled(
                GateKind::Pauli(PauliLabel::X),
                1,
                vec![Control { qubit: 0, value: false }],
            ))
            .unwrap();
        let out = simulate(&circuit, &basis(2, 0)).unwrap();
        assert!((out[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn test_input_validation() {
        let circuit = CircuitIr::new(2).unwrap();
        assert!(simulate(&circuit, &basis(1, 0)).is_err());
        let unnormalized = vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(simulate(&circuit, &unnormalized).is_err());
    }

    #[test]
    fn test_push_validation() {
        let mut circuit = CircuitIr::new(2).unwrap();
        assert!(circuit.push(Gate::new(GateKind::H, 2)).is_err());
        assert!(circuit
            .push(Gate::controlled(
                GateKind::H,
                0,
                vec![Control { qubit: 0, value: true }],
            ))
            .is_err());
        assert!(circuit
            .push(Gate::controlled(
                GateKind::H,
                0,
                vec![
                    Control { qubit: 1, value: true },
                    Control { qubit: 1, value: false },
                ],
            ))
            .is_err());
        let not_unitary = ComplexMatrix::from2x2(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(circuit.push(Gate::new(GateKind::U2(not_unitary), 0)).is_err());
        assert!(circuit.push(Gate::new(GateKind::Ry(f64::NAN), 0)).is_err());
        assert!(CircuitIr::new(0).is_err());
    }

    #[test]
    fn test_simulate_matches_dense_product() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..30 {
            let circuit = random_circuit(&mut rng);
            let dim = circuit.dim();
            let mut psi: Vec<C64> =
                (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            psi.iter_mut().for_each(|z| *z /= norm);
            let fast = simulate(&circuit, &psi).unwrap();
            let dense = dense_unitary(&circuit);
            assert!(dense.is_unitary(1e-10));
            let slow = dense.matvec(&psi);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-12);
            }
            let out_norm: f64 = fast.iter().map(|z| z.norm_sqr()).sum();
            assert!((out_norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn test_post_select_bell_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        let (work, probability) = post_select(&bell, &[0], "0").unwrap();
        assert!((probability - 0.5).abs() < 1e-14);
        assert!((work[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(work[1].norm() < 1e-14);
    }

    #[test]
    fn test_post_select_vanishing_branch() {
        let state = basis(2, 3);
        assert!(matches!(
            post_select(&state, &[0], "0"),
            Err(Error::VanishingBranch { .. })
        ));
    }

    #[test]
    fn test_post_select_argument_checks() {
        let state = basis(2, 0);
        assert!(post_select(&state, &[0, 1], "0").is_err());
        assert!(post_select(&state, &[0], "2").is_err());
        assert!(post_select(&state, &[5], "0").is_err());
    }

    #[test]
    fn test_export_fixtures() {
        let mut single = CircuitIr::new(1).unwrap();
        single.push(Gate::new(GateKind::H, 0)).unwrap();
        assert_eq!(export_circuit(&single), "qubits 1\nh q0\n");

        let mut ry = CircuitIr::new(2).unwrap();
        ry.push(Gate::controlled(
            GateKind::Ry(0.5),
            1,
            vec![Control { qubit: 0, value: false }],
        ))
        .unwrap();
        assert_eq!(export_circuit(&ry), "qubits 2\nry q1 0.5 ctrl q0=0\n");
    }

    #[test]
    fn test_parse_comments_and_whitespace() {
        let text = "# leading comment\n\nqubits 2\n  h q0  # trailing comment\nx q1 ctrl q0=1\n";
        let circuit = parse_circuit(text).unwrap();
        assert_eq!(circuit.n_qubits(), 2);
        assert_eq!(circuit.len(), 2);
        assert_eq!(circuit.gates()[1].controls, vec![Control { qubit: 0, value: true }]);
    }

    #[test]
    fn test_parse_errors_carry_line_numbers() {
        let missing_header = parse_circuit("h q0\n");
        assert!(matches!(missing_header, Err(Error::Parse { line: 1, .. })));

        let unknown = parse_circuit("qubits 1\nfoo q0\n");
        assert!(matches!(unknown, Err(Error::Parse { line: 2, .. })));

        let bad_count = parse_circuit("qubits 1\nry q0\n");
        assert!(matches!(bad_count, Err(Error::Parse { line: 2, .. })));

        let bad_index = parse_circuit("qubits 1\nx q4\n");
        assert!(matches!(bad_index, Err(Error::Parse { line: 2, .. })));

        let bad_ctrl = parse_circuit("qubits 2\nx q1 ctrl q0=7\n");
        assert!(matches!(bad_ctrl, Err(Error::Parse { line: 2, .. })));

        let not_unitary = parse_circuit("qubits 1\nu2 q0 1 0 1 0 0 0 1 0\n");
        assert!(matches!(not_unitary, Err(Error::Parse { line: 2, .. })));

        assert!(parse_circuit("# nothing\n").is_err());
    }

    #[test]
    fn test_round_trip_random_circuits() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for _ in 0..50 {
            let circuit = random_circuit(&mut rng);
            let text = export_circuit(&circuit);
            let back = parse_circuit(&text).unwrap();
            assert_eq!(circuit, back, "round trip drifted for:\n{text}");
        }
    }
}

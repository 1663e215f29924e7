//! Exact statevector simulation.
//!
//! Qubit 0 is the most significant bit of the amplitude index, matching the
//! leftmost letter of a Pauli label.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    q: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// `|0...0>`.
    pub fn zero(q: usize) -> Result<Self> {
        if q == 0 || q >= usize::BITS as usize / 2 {
            return Err(Error::domain(format!("unsupported qubit count {q}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << q];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { q, amps })
    }

    /// Takes a normalized amplitude vector of length `2^q`, `q >= 1`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { dim: len });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::domain(format!("state norm^2 is {norm}, expected 1")));
        }
        Ok(Self {
            q: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.q {
            return Err(Error::domain(format!(
                "qubit {qubit} out of range for a {}-qubit state",
                self.q
            )));
        }
        Ok(1 << (self.q - 1 - qubit))
    }

    /// Applies a 2x2 unitary `[[u00, u01], [u10, u11]]` to one qubit.
    fn apply_single(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) -> Result<()> {
        let bit = self.check_qubit(qubit)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let cbit = self.check_qubit(control)?;
        let tbit = self.check_qubit(target)?;
        if control == target {
            return Err(Error::domain("CNOT control and target must differ"));
        }
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            _ => {
                let qubit = gate.qubits()[0];
                self.apply_single(qubit, gate.single_qubit_matrix().expect("single-qubit gate"))
            }
        }
    }
}

/// Returns `gate` applied to `state`, leaving the input untouched.
pub fn apply_gate(state: &QuantumState, gate: &Gate) -> Result<QuantumState> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    Rotation { axis: Axis, target: usize, theta: f64 },
    H { target: usize },
    X { target: usize },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn rx(target: usize, theta: f64) -> Self {
        Gate::Rotation { axis: Axis::X, target, theta }
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        Gate::Rotation { axis: Axis::Y, target, theta }
    }

    pub fn rz(target: usize, theta: f64) -> Self {
        Gate::Rotation { axis: Axis::Z, target, theta }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    /// Qubits touched; the control comes first for CNOT.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rotation { target, .. } | Gate::H { target } | Gate::X { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Row-major 2x2 unitary, `None` for CNOT.
    ///
    /// `RY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]`,
    /// `RX(t) = [[cos t/2, -i sin t/2], [-i sin t/2, cos t/2]]`,
    /// `RZ(t) = diag(e^{-i t/2}, e^{i t/2})`.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let z = Complex64::new(0.0, 0.0);
        let r = |v: f64| Complex64::new(v, 0.0);
        Some(match *self {
            Gate::Rotation { axis, theta, .. } => {
                let (s, c) = (theta / 2.0).sin_cos();
                match axis {
                    Axis::X => [[r(c), Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), r(c)]],
                    Axis::Y => [[r(c), r(-s)], [r(s), r(c)]],
                    Axis::Z => [[Complex64::new(c, -s), z], [z, Complex64::new(c, s)]],
                }
            }
            Gate::H { .. } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                [[r(h), r(h)], [r(h), r(-h)]]
            }
            Gate::X { .. } => [[z, r(1.0)], [r(1.0), z]],
            Gate::Cnot { .. } => return None,
        })
    }

    fn label(&self) -> String {
        match *self {
            Gate::Rotation { axis, theta, .. } => {
                let name = match axis {
                    Axis::X => "RX",
                    Axis::Y => "RY",
                    Axis::Z => "RZ",
                };
                format!("{name}({theta:.4})")
            }
            Gate::H { .. } => "H".into(),
            Gate::X { .. } => "X".into(),
            Gate::Cnot { .. } => "X".into(),
        }
    }
}

/// A gate whose rotation angle may be bound to a parameter slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitGate {
    pub gate: Gate,
    pub param: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    q: usize,
    gates: Vec<CircuitGate>,
    num_params: usize,
}

impl Circuit {
    pub fn new(q: usize) -> Result<Self> {
        QuantumState::zero(q)?;
        Ok(Self {
            q,
            gates: Vec::new(),
            num_params: 0,
        })
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    fn check(&self, gate: &Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(bad) = qs.iter().find(|&&q| q >= self.q) {
            return Err(Error::domain(format!("qubit {bad} out of range for {} qubits", self.q)));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::domain("CNOT control and target must differ"));
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.check(&gate)?;
        self.gates.push(CircuitGate { gate, param: None });
        Ok(())
    }

    /// Appends a rotation whose angle is the next parameter slot.
    pub fn push_parametrized(&mut self, axis: Axis, target: usize) -> Result<usize> {
        let gate = Gate::Rotation { axis, target, theta: 0.0 };
        self.check(&gate)?;
        let slot = self.num_params;
        self.gates.push(CircuitGate { gate, param: Some(slot) });
        self.num_params += 1;
        Ok(slot)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.gate, Gate::Cnot { .. }))
            .count()
    }

    /// Gates with parameter slots replaced by concrete angles.
    pub fn bind(&self, params: &[f64]) -> Result<Vec<Gate>> {
        if params.len() != self.num_params {
            return Err(Error::domain(format!(
                "circuit takes {} parameters, got {}",
                self.num_params,
                params.len()
            )));
        }
        Ok(self
            .gates
            .iter()
            .map(|cg| match (cg.gate, cg.param) {
                (Gate::Rotation { axis, target, .. }, Some(slot)) => Gate::Rotation {
                    axis,
                    target,
                    theta: params[slot],
                },
                (g, _) => g,
            })
            .collect())
    }

    /// Text diagram, one line per qubit, gates packed into the earliest free column.
    pub fn render(&self, params: &[f64]) -> Result<String> {
        let gates = self.bind(params)?;
        let mut busy = vec![0usize; self.q];
        let mut columns: Vec<Vec<(usize, String)>> = Vec::new();
        for g in &gates {
            let qs = g.qubits();
            let (lo, hi) = (*qs.iter().min().unwrap(), *qs.iter().max().unwrap());
            let col = (lo..=hi).map(|q| busy[q]).max().unwrap();
            if columns.len() <= col {
                columns.resize_with(col + 1, Vec::new);
            }
            match *g {
                Gate::Cnot { control, target } => {
                    for q in lo..=hi {
                        let cell = if q == control {
                            "*"
                        } else if q == target {
                            "X"
                        } else {
                            "|"
                        };
                        columns[col].push((q, cell.to_string()));
                    }
                }
                _ => columns[col].push((lo, g.label())),
            }
            for b in &mut busy[lo..=hi] {
                *b = col + 1;
            }
        }
        let label_w = format!("q{}", self.q - 1).len();
        let mut rows: Vec<String> = (0..self.q).map(|q| format!("{:>label_w$}: -", format!("q{q}"))).collect();
        for column in &columns {
            let width = column.iter().map(|(_, s)| s.len()).max().unwrap_or(1);
            for (q, row) in rows.iter_mut().enumerate() {
                let cell = column.iter().find(|(cq, _)| *cq == q).map(|(_, s)| s.as_str());
                let text = cell.unwrap_or("");
                let pad = width - text.len();
                row.push_str(text);
                row.push_str(&"-".repeat(pad + 1));
            }
        }
        let mut out = rows.join("\n");
        out.push('\n');
        Ok(out)
    }
}

/// Runs `circuit` from `|0...0>` with the given parameters.
pub fn run_circuit(circuit: &Circuit, params: &[f64]) -> Result<QuantumState> {
    let gates = circuit.bind(params)?;
    let mut state = QuantumState::zero(circuit.q)?;
    for g in &gates {
        state.apply(g)?;
    }
    Ok(state)
}

/// Layered RY ansatz: `depth` repeats of (CNOT chain, RY layer) after an initial RY layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub qubits: usize,
    pub depth: usize,
}

impl AnsatzSpec {
    pub fn new(qubits: usize, depth: usize) -> Self {
        Self { qubits, depth }
    }

    pub fn num_params(&self) -> usize {
        self.qubits * (self.depth + 1)
    }
}

impl fmt::Display for AnsatzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} depth={}", self.qubits, self.depth)
    }
}

/// Parameters bind layer-major, qubit-minor.
pub fn hardware_efficient_ansatz(spec: AnsatzSpec) -> Result<Circuit> {
    let mut c = Circuit::new(spec.qubits)?;
    for layer in 0..=spec.depth {
        if layer > 0 {
            for q in 1..spec.qubits {
                c.push(Gate::cnot(q - 1, q))?;
            }
        }
        for q in 0..spec.qubits {
            c.push_parametrized(Axis::Y, q)?;
        }
    }
    debug_assert_eq!(c.num_params(), spec.num_params());
    Ok(c)
}

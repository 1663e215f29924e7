use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qhamil::hamiltonian::{Basis, HamiltonianKind, HamiltonianSpec};
use qhamil::operators::{CMatrix, OperatorMatrix};
use qhamil::pauli::{self, PauliTerm};
use qhamil::qsim::{hardware_efficient_ansatz, run_circuit, QuantumState};
use qhamil::spectra::{self, Units};
use qhamil::vqe::{self, VqeConfig};
use qhamil::{matrix_file, AnsatzSpec, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Dense Hermitian operator.
#[pyclass(name = "Hamiltonian", module = "qhamil", frozen)]
struct PyHamiltonian {
    inner: OperatorMatrix,
}

#[pymethods]
impl PyHamiltonian {
    /// Builds from a square nested list of complex numbers.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = CMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Ok(Self {
            inner: OperatorMatrix::new(m).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: matrix_file::read(&path).map_err(err)?,
        })
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        matrix_file::write(&self.inner, &path).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        self.inner
            .matrix()
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    /// Ascending eigenvalues.
    fn eigenvalues(&self) -> PyResult<Vec<f64>> {
        Ok(spectra::eigendecompose(&self.inner, 1e-10)
            .map_err(err)?
            .eigenvalues()
            .to_vec())
    }

    /// `(x, density)` pairs of eigenstate `k` on the position lattice.
    fn density(&self, k: usize) -> PyResult<Vec<(f64, f64)>> {
        let spec = spectra::eigendecompose(&self.inner, 1e-10).map_err(err)?;
        if k >= spec.dim() {
            return Err(PyValueError::new_err(format!("state {k} out of range")));
        }
        let lattice = qhamil::LatticeSpec::new(self.inner.dim()).map_err(err)?;
        spectra::wavefunction_density(&spec, k, lattice).map_err(err)
    }

    #[pyo3(signature = (threshold = pauli::DEFAULT_THRESHOLD))]
    fn decompose(&self, threshold: f64) -> PyResult<PyPauliSum> {
        Ok(PyPauliSum {
            inner: pauli::decompose(&self.inner, threshold).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Hamiltonian(dim={})", self.inner.dim())
    }
}

/// Real linear combination of Pauli strings.
#[pyclass(name = "PauliSum", module = "qhamil", frozen)]
struct PyPauliSum {
    inner: qhamil::PauliSum,
}

#[pymethods]
impl PyPauliSum {
    #[new]
    #[pyo3(signature = (qubits, terms, threshold = 0.0))]
    fn new(qubits: usize, terms: Vec<(String, f64)>, threshold: f64) -> PyResult<Self> {
        let terms = terms
            .into_iter()
            .map(|(label, coefficient)| {
                Ok(PauliTerm {
                    label: label.parse().map_err(err)?,
                    coefficient,
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: qhamil::PauliSum::new(qubits, terms, threshold).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: qhamil::PauliSum::read(&path).map_err(err)?,
        })
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        self.inner.write(&path).map_err(err)
    }

    #[getter]
    fn qubits(&self) -> usize {
        self.inner.qubits()
    }

    fn terms(&self) -> Vec<(String, f64)> {
        self.inner
            .terms()
            .iter()
            .map(|t| (t.label.to_string(), t.coefficient))
            .collect()
    }

    fn coefficient(&self, label: &str) -> Option<f64> {
        self.inner.coefficient(label)
    }

    fn reconstruct(&self) -> PyHamiltonian {
        PyHamiltonian {
            inner: pauli::reconstruct(&self.inner),
        }
    }

    /// `<psi|H|psi>` for a normalized amplitude vector.
    fn expectation(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        let state = QuantumState::from_amplitudes(amplitudes).map_err(err)?;
        pauli::pauli_expectation(&self.inner, &state).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_file_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PauliSum(qubits={}, terms={})", self.inner.qubits(), self.inner.len())
    }
}

#[pyfunction]
#[pyo3(signature = (kind, n, basis = "energy", alpha = 0.0, beta = 0.0, g = 0.0, omega0 = 1.0, coeffs = None))]
#[allow(clippy::too_many_arguments)]
fn build(
    kind: &str,
    n: usize,
    basis: &str,
    alpha: f64,
    beta: f64,
    g: f64,
    omega0: f64,
    coeffs: Option<Vec<f64>>,
) -> PyResult<PyHamiltonian> {
    let kind: HamiltonianKind = kind.parse().map_err(err)?;
    let basis: Basis = basis.parse().map_err(err)?;
    let spec = HamiltonianSpec {
        kind,
        basis,
        n,
        alpha,
        beta,
        g,
        omega0,
        potential_coeffs: coeffs.unwrap_or_default(),
    };
    Ok(PyHamiltonian {
        inner: spec.build().map_err(err)?,
    })
}

/// Statevector of the layered RY ansatz.
#[pyfunction]
fn ansatz_state(qubits: usize, depth: usize, params: Vec<f64>) -> PyResult<Vec<Complex64>> {
    let circuit = hardware_efficient_ansatz(AnsatzSpec::new(qubits, depth)).map_err(err)?;
    Ok(run_circuit(&circuit, &params).map_err(err)?.amplitudes().to_vec())
}

#[pyfunction]
#[pyo3(signature = (hamiltonian, depth = 3, optimizer = "nelder-mead", max_iterations = 1000,
                    tolerance = 1e-8, seed = 0, init = "seeded-uniform"))]
#[allow(clippy::too_many_arguments)]
fn vqe_run<'py>(
    py: Python<'py>,
    hamiltonian: &PyPauliSum,
    depth: usize,
    optimizer: &str,
    max_iterations: usize,
    tolerance: f64,
    seed: u64,
    init: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let mut config = VqeConfig::new(AnsatzSpec::new(hamiltonian.inner.qubits(), depth));
    config.optimizer = optimizer.parse().map_err(err)?;
    config.max_iterations = max_iterations;
    config.energy_tolerance = tolerance;
    config.seed = seed;
    config.initial_params = init.parse().map_err(err)?;
    let r = vqe::vqe_run(&hamiltonian.inner, &config).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("best_energy", r.best_energy)?;
    d.set_item("best_params", r.best_params)?;
    d.set_item("trace", r.trace)?;
    d.set_item("evaluations", r.evaluations)?;
    d.set_item("converged", r.converged)?;
    d.set_item("exact_ground", r.exact_ground)?;
    d.set_item("relative_error", r.relative_error)?;
    d.set_item("wall_seconds", r.wall_seconds)?;
    Ok(d)
}

#[pyfunction]
fn exact_ho_energy(k: u64) -> f64 {
    spectra::exact_ho_energy(k)
}

#[pyfunction]
#[pyo3(signature = (k, coupling, mass = 1.0, omega0 = 1.0, hbar = 1.0))]
fn heisenberg_cubic_energy(k: u64, coupling: f64, mass: f64, omega0: f64, hbar: f64) -> f64 {
    spectra::heisenberg_cubic_energy(k, coupling, Units { mass, omega0, hbar })
}

#[pyfunction]
#[pyo3(signature = (k, coupling, mass = 1.0, omega0 = 1.0, hbar = 1.0))]
fn heisenberg_quartic_energy(k: u64, coupling: f64, mass: f64, omega0: f64, hbar: f64) -> f64 {
    spectra::heisenberg_quartic_energy(k, coupling, Units { mass, omega0, hbar })
}

#[pyfunction]
#[pyo3(signature = (n_b, n_f, g, omega0 = 1.0, hbar = 1.0))]
fn musin_susy_energy(n_b: u64, n_f: u8, g: f64, omega0: f64, hbar: f64) -> PyResult<f64> {
    spectra::musin_susy_energy(n_b, n_f, g, omega0, hbar).map_err(err)
}

#[pymodule]
#[pyo3(name = "qhamil")]
fn qhamil_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PyPauliSum>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(ansatz_state, m)?)?;
    m.add_function(wrap_pyfunction!(vqe_run, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ho_energy, m)?)?;
    m.add_function(wrap_pyfunction!(heisenberg_cubic_energy, m)?)?;
    m.add_function(wrap_pyfunction!(heisenberg_quartic_energy, m)?)?;
    m.add_function(wrap_pyfunction!(musin_susy_energy, m)?)?;
    m.add("CUBIC_LAMBDA_PER_ALPHA", spectra::CUBIC_LAMBDA_PER_ALPHA)?;
    m.add("QUARTIC_LAMBDA_PER_BETA", spectra::QUARTIC_LAMBDA_PER_BETA)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

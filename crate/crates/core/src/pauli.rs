//! Pauli-string decomposition of Hermitian `2^q x 2^q` matrices.
//!
//! Label letter `i` acts on qubit `i`; qubit 0 is the leftmost letter and the
//! slowest Kronecker factor, i.e. the most significant bit of a basis index.
//!
//! Every Pauli string is a signed permutation: row `j` has exactly one nonzero
//! entry, in column `j ^ x_mask`, with value `(-i)^{#Y} (-1)^{popcount(j & z_mask)}`
//! where `x_mask` marks X/Y letters and `z_mask` marks Y/Z letters. All
//! routines here use that structure instead of dense Kronecker products.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{CMatrix, OperatorMatrix};
use crate::qsim::QuantumState;

/// Default magnitude below which coefficients are dropped.
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

/// Header line of the Pauli sum file format.
pub const FILE_HEADER: &str = "# qhamil pauli-sum v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// Dense 2x2 matrix.
    pub fn matrix(self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let e = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        CMatrix::from_row_slice(2, 2, &e)
    }
}

/// A tensor product of single-qubit Paulis, stored as bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    q: usize,
    x_mask: usize,
    z_mask: usize,
}

impl PauliString {
    pub fn new(letters: &[Pauli]) -> Self {
        let q = letters.len();
        let mut x_mask = 0;
        let mut z_mask = 0;
        for (qubit, p) in letters.iter().enumerate() {
            let bit = 1 << (q - 1 - qubit);
            if matches!(p, Pauli::X | Pauli::Y) {
                x_mask |= bit;
            }
            if matches!(p, Pauli::Y | Pauli::Z) {
                z_mask |= bit;
            }
        }
        Self { q, x_mask, z_mask }
    }

    /// The `index`-th label of `q` qubits in lexicographic (I, X, Y, Z) order.
    pub fn from_index(q: usize, mut index: usize) -> Self {
        let mut letters = vec![Pauli::I; q];
        for slot in letters.iter_mut().rev() {
            *slot = Pauli::ALL[index % 4];
            index /= 4;
        }
        Self::new(&letters)
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        let bit = 1 << (self.q - 1 - qubit);
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.q).map(|i| self.letter(i)).collect()
    }

    /// Position in lexicographic (I, X, Y, Z) order.
    pub fn index(&self) -> usize {
        self.letters().iter().fold(0, |acc, p| acc * 4 + *p as usize)
    }

    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Column of the nonzero entry in row `j`, and its value.
    #[inline]
    pub fn row_entry(&self, j: usize) -> (usize, Complex64) {
        let phase = Self::y_phase(self.y_count());
        let sign = if (j & self.z_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        (j ^ self.x_mask, phase * sign)
    }

    fn y_phase(y: u32) -> Complex64 {
        // (-i)^y
        match y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        }
    }

    /// Dense matrix via explicit Kronecker products.
    pub fn to_dense(&self) -> CMatrix {
        self.letters()
            .iter()
            .fold(CMatrix::identity(1, 1), |acc, p| acc.kronecker(&p.matrix()))
    }

    /// `<psi| P |psi>`.
    pub fn expectation(&self, amps: &[Complex64]) -> Complex64 {
        amps.iter()
            .enumerate()
            .map(|(j, a)| {
                let (col, v) = self.row_entry(j);
                a.conj() * v * amps[col]
            })
            .sum()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.letters() {
            f.write_char(p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::domain("empty Pauli label"));
        }
        let letters = s
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::domain(format!("invalid Pauli letter `{c}` in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if letters.len() >= usize::BITS as usize {
            return Err(Error::domain(format!("label `{s}` has too many qubits")));
        }
        Ok(Self::new(&letters))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub label: PauliString,
    pub coefficient: f64,
}

/// Real-weighted sum of distinct Pauli strings, kept in lexicographic label order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    q: usize,
    terms: Vec<PauliTerm>,
    threshold: f64,
}

/// Bookkeeping from a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecomposeStats {
    pub kept: usize,
    pub dropped: usize,
    /// Sum of `|c|` over dropped nonzero coefficients.
    pub dropped_weight: f64,
}

impl PauliSum {
    /// Builds a sum; labels must be distinct, of length `q`, and above `threshold`.
    pub fn new(q: usize, mut terms: Vec<PauliTerm>, threshold: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("a Pauli sum needs at least one qubit"));
        }
        if !(threshold >= 0.0) {
            return Err(Error::domain(format!("threshold must be nonnegative, got {threshold}")));
        }
        for t in &terms {
            if t.label.qubits() != q {
                return Err(Error::domain(format!("label {} does not have {q} qubits", t.label)));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::domain(format!("coefficient of {} is not finite", t.label)));
            }
            if t.coefficient.abs() <= threshold {
                return Err(Error::domain(format!(
                    "coefficient {} of {} does not exceed threshold {threshold}",
                    t.coefficient, t.label
                )));
            }
        }
        terms.sort_by_key(|t| t.label.index());
        if let Some(w) = terms.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::domain(format!("duplicate label {}", w[0].label)));
        }
        Ok(Self { q, terms, threshold })
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, label: &str) -> Option<f64> {
        let l: PauliString = label.parse().ok()?;
        self.terms.iter().find(|t| t.label == l).map(|t| t.coefficient)
    }

    /// `sum_P c_P^2`.
    pub fn coefficient_norm_sqr(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient * t.coefficient).sum()
    }

    /// Serializes to the line-oriented text format.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{FILE_HEADER}");
        let _ = writeln!(s, "qubits {}", self.q);
        let _ = writeln!(s, "threshold {}", self.threshold);
        for t in &self.terms {
            let _ = writeln!(s, "{} {}", t.label, t.coefficient);
        }
        s
    }

    /// Parses the text format; `origin` is used in error messages only.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut header = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| err(0, format!("missing `{key}` line")))?;
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(v), None) if k == key => Ok((no, v.to_string())),
                _ => Err(err(no, format!("expected `{key} <value>`, found `{line}`"))),
            }
        };
        let (qno, qv) = header("qubits")?;
        let q: usize = qv
            .parse()
            .map_err(|_| err(qno, format!("invalid qubit count `{qv}`")))?;
        if q == 0 || q >= usize::BITS as usize / 2 {
            return Err(err(qno, format!("unsupported qubit count {q}")));
        }
        let (tno, tv) = header("threshold")?;
        let threshold: f64 = tv
            .parse()
            .map_err(|_| err(tno, format!("invalid threshold `{tv}`")))?;

        let mut terms = Vec::new();
        for (no, line) in lines {
            let mut parts = line.split_whitespace();
            let (label, coef) = match (parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(c), None) => (l, c),
                _ => return Err(err(no, format!("expected `<label> <coefficient>`, found `{line}`"))),
            };
            let label: PauliString = label.parse().map_err(|e: Error| err(no, e.to_string()))?;
            if label.qubits() != q {
                return Err(err(no, format!("label {label} does not have {q} qubits")));
            }
            let coefficient: f64 = coef
                .parse()
                .map_err(|_| err(no, format!("invalid coefficient `{coef}`")))?;
            terms.push(PauliTerm { label, coefficient });
        }
        PauliSum::new(q, terms, threshold).map_err(|e| err(0, e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }
}

/// Number of qubits for a `2^q` dimension.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// `c_P = Tr(P H) / 2^q` for every label, keeping `|c_P| > threshold`.
pub fn decompose(h: &OperatorMatrix, threshold: f64) -> Result<PauliSum> {
    decompose_with_stats(h, threshold).map(|(s, _)| s)
}

pub fn decompose_with_stats(h: &OperatorMatrix, threshold: f64) -> Result<(PauliSum, DecomposeStats)> {
    let dim = h.dim();
    let q = qubits_for_dim(dim)?;
    if !(threshold >= 0.0) {
        return Err(Error::domain(format!("threshold must be nonnegative, got {threshold}")));
    }
    let imag_tol = 1e-10 * (1.0 + h.max_abs());
    let m = h.matrix();
    let norm = 1.0 / dim as f64;
    let mut terms = Vec::new();
    let mut stats = DecomposeStats {
        kept: 0,
        dropped: 0,
        dropped_weight: 0.0,
    };
    for index in 0..dim * dim {
        let label = PauliString::from_index(q, index);
        // Tr(P H) = sum_j P[j][col] H[col][j]
        let trace: Complex64 = (0..dim)
            .map(|j| {
                let (col, v) = label.row_entry(j);
                v * m[(col, j)]
            })
            .sum();
        let c = trace * norm;
        if c.im.abs() > imag_tol {
            return Err(Error::ComplexCoefficient {
                label: label.to_string(),
                imag: c.im,
            });
        }
        if c.re.abs() > threshold {
            terms.push(PauliTerm {
                label,
                coefficient: c.re,
            });
            stats.kept += 1;
        } else if c.re != 0.0 {
            stats.dropped += 1;
            stats.dropped_weight += c.re.abs();
        }
    }
    Ok((PauliSum { q, terms, threshold }, stats))
}

/// `sum_P c_P P` as a dense matrix.
pub fn reconstruct(sum: &PauliSum) -> OperatorMatrix {
    let dim = 1usize << sum.q;
    let mut m = CMatrix::zeros(dim, dim);
    for t in &sum.terms {
        for j in 0..dim {
            let (col, v) = t.label.row_entry(j);
            m[(j, col)] += v * t.coefficient;
        }
    }
    OperatorMatrix::from_square(m)
}

/// `sum_P c_P <psi|P|psi>`, term by term. The identity term contributes its
/// coefficient exactly since states are normalized.
pub fn pauli_expectation(sum: &PauliSum, state: &QuantumState) -> Result<f64> {
    if sum.q != state.qubits() {
        return Err(Error::domain(format!(
            "Pauli sum acts on {} qubits but the state has {}",
            sum.q,
            state.qubits()
        )));
    }
    let amps = state.amplitudes();
    Ok(sum
        .terms
        .iter()
        .map(|t| {
            if t.label.x_mask == 0 && t.label.z_mask == 0 {
                t.coefficient
            } else {
                t.coefficient * t.label.expectation(amps).re
            }
        })
        .sum())
}

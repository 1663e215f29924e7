//! Finite-dimensional operator algebra.
//!
//! Position and momentum operators on an `n`-site lattice, the centered
//! discrete Fourier matrix, bosonic ladder operators in the truncated
//! oscillator basis, the two-level fermionic ladder operators, and the
//! Kronecker extensions that glue a boson and a fermion together.
//!
//! Lattice and matrix indices in this module's formulas are 1-based; storage
//! is a dense `nalgebra` matrix and therefore 0-based.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for the Hermiticity flag.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Number of lattice sites, which is also the matrix dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    n: usize,
}

impl LatticeSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("lattice needs at least one site"));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Physical positions `sqrt(2 pi / n) * l(j)` for `j = 1..=n`.
    pub fn positions(&self) -> Vec<f64> {
        let scale = (2.0 * PI / self.n as f64).sqrt();
        (1..=self.n)
            .map(|a| scale * lattice_value(a, self.n))
            .collect()
    }
}

/// Lattice coordinate `l(a) = (2a - 1 - n) / 2` of site `a` (1-based), exact.
pub fn lattice_index(a: usize, n: usize) -> Result<Rational64> {
    if n == 0 || a == 0 || a > n {
        return Err(Error::domain(format!(
            "lattice site {a} outside 1..={n}"
        )));
    }
    let numer = 2 * a as i64 - 1 - n as i64;
    Ok(Rational64::new(numer, 2))
}

// Caller guarantees 1 <= a <= n. `numer` is an exact integer so the only
// rounding is the final division by two, which is exact in binary.
fn lattice_value(a: usize, n: usize) -> f64 {
    (2 * a as i64 - 1 - n as i64) as f64 / 2.0
}

/// Dense complex square matrix together with a Hermiticity flag.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: CMatrix,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    /// Wraps a square matrix; the Hermiticity flag is measured, not trusted.
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::domain(format!(
                "operator must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::domain("operator dimension must be at least 1"));
        }
        Ok(Self::from_square(entries))
    }

    pub(crate) fn from_square(entries: CMatrix) -> Self {
        let hermitian_hint = is_hermitian(&entries, HERMITIAN_TOL);
        Self {
            entries,
            hermitian_hint,
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = diag.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_square(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_square(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// `max |M[j][k] - conj(M[k][j])|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        asymmetry(&self.entries)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_square(self.entries.adjoint())
    }

    /// Largest entrywise difference; `None` if the dimensions differ.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Option<f64> {
        if self.dim() != other.dim() {
            return None;
        }
        Some(max_abs(&(&self.entries - &other.entries)))
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("dim", &self.dim())
            .field("hermitian_hint", &self.hermitian_hint)
            .field("entries", &self.entries)
            .finish()
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub(crate) fn asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in j..n {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn is_hermitian(m: &CMatrix, rel_tol: f64) -> bool {
    asymmetry(m) <= rel_tol * (1.0 + max_abs(m))
}

/// Diagonal position operator `sqrt(2 pi / n) * l(j)` on the lattice.
pub fn position_operator_pos(n: usize) -> Result<OperatorMatrix> {
    let lattice = LatticeSpec::new(n)?;
    OperatorMatrix::from_real_diagonal(&lattice.positions())
}

/// Centered Fourier matrix `F[j][k] = exp(2 pi i l(j) l(k) / n) / sqrt(n)`.
pub fn fourier_matrix(n: usize) -> Result<OperatorMatrix> {
    LatticeSpec::new(n)?;
    let norm = 1.0 / (n as f64).sqrt();
    // l(j) l(k) = (2j-1-n)(2k-1-n) / 4; reduce the integer product modulo 4n
    // before scaling so the phase stays accurate for large n.
    let period = 4 * n as i128;
    let m = CMatrix::from_fn(n, n, |r, c| {
        let lj = 2 * (r as i128 + 1) - 1 - n as i128;
        let lk = 2 * (c as i128 + 1) - 1 - n as i128;
        let reduced = (lj * lk).rem_euclid(period);
        let phase = 2.0 * PI * reduced as f64 / period as f64;
        Complex64::from_polar(norm, phase)
    });
    Ok(OperatorMatrix::from_square(m))
}

/// Position-basis momentum `F^dagger X F`.
pub fn momentum_operator_pos(n: usize) -> Result<OperatorMatrix> {
    let x = position_operator_pos(n)?;
    let f = fourier_matrix(n)?;
    let p = f.matrix().adjoint() * x.matrix() * f.matrix();
    Ok(OperatorMatrix::from_square(hermitize(p)))
}

// Symmetrizes away rounding noise from a product that is Hermitian in exact
// arithmetic.
pub(crate) fn hermitize(m: CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj) * Complex64::new(0.5, 0.0)
}

/// Truncated annihilation operator: superdiagonal `sqrt(1), ..., sqrt(n-1)`.
pub fn annihilation_energy(n: usize) -> Result<OperatorMatrix> {
    LatticeSpec::new(n)?;
    let mut m = CMatrix::zeros(n, n);
    for j in 1..n {
        // 1-based row j, column j+1.
        m[(j - 1, j)] = Complex64::new((j as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix::from_square(m))
}

/// `X = (A^dagger + A)/sqrt(2)`, `P = i (A^dagger - A)/sqrt(2)`.
pub fn xp_from_ladder(a: &OperatorMatrix) -> (OperatorMatrix, OperatorMatrix) {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ad = a.matrix().adjoint();
    let x = (&ad + a.matrix()) * s;
    let p = (&ad - a.matrix()) * (I * s);
    (
        OperatorMatrix::from_square(x),
        OperatorMatrix::from_square(p),
    )
}

/// `A = (X + iP)/sqrt(2)`, `A^dagger = (X - iP)/sqrt(2)`.
pub fn ladder_from_xp(
    x: &OperatorMatrix,
    p: &OperatorMatrix,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if x.dim() != p.dim() {
        return Err(Error::domain(format!(
            "X is {0}x{0} but P is {1}x{1}",
            x.dim(),
            p.dim()
        )));
    }
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ip = p.matrix() * I;
    let a = (x.matrix() + &ip) * s;
    let ad = (x.matrix() - &ip) * s;
    Ok((OperatorMatrix::from_square(a), OperatorMatrix::from_square(ad)))
}

/// `diag(1, ..., 1, -(n-1))`, the commutator `[A, A^dagger]` of the truncated ladder.
pub fn traceless_identity(n: usize) -> Result<OperatorMatrix> {
    LatticeSpec::new(n)?;
    let mut diag = vec![1.0; n];
    diag[n - 1] = -((n - 1) as f64);
    OperatorMatrix::from_real_diagonal(&diag)
}

/// Fermionic lowering and raising operators on `{|0>, |1>}`.
pub fn fermionic_ladder() -> (OperatorMatrix, OperatorMatrix) {
    let c = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
    let cd = c.adjoint();
    (OperatorMatrix::from_square(c), OperatorMatrix::from_square(cd))
}

/// `|0> = (1, 0)`, `|1> = (0, 1)`.
pub fn fermion_state(occupied: bool) -> nalgebra::DVector<Complex64> {
    if occupied {
        nalgebra::DVector::from_vec(vec![ZERO, ONE])
    } else {
        nalgebra::DVector::from_vec(vec![ONE, ZERO])
    }
}

/// `O_B (x) I_F`; the fermion index varies fastest.
pub fn extend_bosonic(op: &OperatorMatrix, dim_f: usize) -> Result<OperatorMatrix> {
    if dim_f == 0 {
        return Err(Error::domain("fermion dimension must be at least 1"));
    }
    let id = CMatrix::identity(dim_f, dim_f);
    Ok(OperatorMatrix::from_square(op.matrix().kronecker(&id)))
}

/// `I_B (x) O_F`.
pub fn extend_fermionic(dim_b: usize, op: &OperatorMatrix) -> Result<OperatorMatrix> {
    if dim_b == 0 {
        return Err(Error::domain("boson dimension must be at least 1"));
    }
    let id = CMatrix::identity(dim_b, dim_b);
    Ok(OperatorMatrix::from_square(id.kronecker(op.matrix())))
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::domain("commutator of operators with different dimensions"));
    }
    let (a, b) = (a.matrix(), b.matrix());
    Ok(OperatorMatrix::from_square(a * b - b * a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn lattice_index_examples() {
        assert_eq!(lattice_index(1, 4).unwrap(), Rational64::new(-3, 2));
        assert_eq!(lattice_index(3, 5).unwrap(), Rational64::new(0, 1));
        assert_eq!(lattice_index(8, 8).unwrap(), Rational64::new(7, 2));
        assert!(lattice_index(0, 4).is_err());
        assert!(lattice_index(5, 4).is_err());
    }

    #[test]
    fn lattice_index_is_exact_for_huge_n() {
        let n = (1usize << 53) + 1;
        assert_eq!(lattice_index(1, n).unwrap(), Rational64::new(-(1i64 << 53), 2));
    }

    #[test]
    fn position_operator_values() {
        let x = position_operator_pos(2).unwrap();
        let h = PI.sqrt() / 2.0;
        assert_abs_diff_eq!(x.get(0, 0).re, -h, epsilon = 1e-15);
        assert_abs_diff_eq!(x.get(1, 1).re, h, epsilon = 1e-15);
        assert_eq!(x.get(0, 1), ZERO);

        let x4 = position_operator_pos(4).unwrap();
        let s = (PI / 2.0).sqrt();
        for (j, l) in [-1.5, -0.5, 0.5, 1.5].iter().enumerate() {
            assert_abs_diff_eq!(x4.get(j, j).re, s * l, epsilon = 1e-15);
        }
        for n in 1..20 {
            assert_abs_diff_eq!(position_operator_pos(n).unwrap().trace().norm(), 0.0, epsilon = 1e-12);
        }
        assert!(x4.hermitian_hint());
    }

    #[test]
    fn fourier_matrix_small_cases() {
        let f1 = fourier_matrix(1).unwrap();
        assert_abs_diff_eq!((f1.get(0, 0) - ONE).norm(), 0.0, epsilon = 1e-15);
        let f = fourier_matrix(7).unwrap();
        for z in f.matrix().iter() {
            assert_abs_diff_eq!(z.norm(), 1.0 / 7f64.sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn fourier_matrix_is_unitary() {
        for n in 1..=64 {
            let f = fourier_matrix(n).unwrap();
            let prod = f.matrix().adjoint() * f.matrix();
            let err = max_abs(&(prod - CMatrix::identity(n, n)));
            assert!(err <= 1e-12, "n={n}: {err}");
        }
    }

    #[test]
    fn momentum_is_hermitian_traceless() {
        let p2 = momentum_operator_pos(2).unwrap();
        assert!(p2.hermitian_asymmetry() <= 1e-15);
        assert_abs_diff_eq!(p2.trace().norm(), 0.0, epsilon = 1e-14);
        let p8 = momentum_operator_pos(8).unwrap();
        assert!(p8.hermitian_asymmetry() <= 1e-12);
        assert!(p8.hermitian_hint());
    }

    #[test]
    fn annihilation_structure() {
        let a2 = annihilation_energy(2).unwrap();
        assert_eq!(a2.matrix(), &CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]));
        let a3 = annihilation_energy(3).unwrap();
        assert_abs_diff_eq!(a3.get(0, 1).re, 1.0);
        assert_abs_diff_eq!(a3.get(1, 2).re, 2f64.sqrt());
        let a = annihilation_energy(9).unwrap();
        assert!(a.matrix().column(0).iter().all(|z| *z == ZERO));
        assert!(!a.hermitian_hint());
    }

    #[test]
    fn xp_from_energy_ladder() {
        let (x, p) = xp_from_ladder(&annihilation_energy(2).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = CMatrix::from_row_slice(2, 2, &[ZERO, c(s), c(s), ZERO]);
        assert!(max_abs(&(x.matrix() - expect)) < 1e-15);
        assert!(x.hermitian_hint() && p.hermitian_hint());

        let a = annihilation_energy(6).unwrap();
        let (x, p) = xp_from_ladder(&a);
        assert_eq!(x.trace(), ZERO);
        assert_eq!(p.trace(), ZERO);
        // X^2 + P^2 = 2 A^dagger A + [A, A^dagger]
        let lhs = x.matrix() * x.matrix() + p.matrix() * p.matrix();
        let ad = a.matrix().adjoint();
        let rhs = &ad * a.matrix() * c(2.0) + commutator(&a, &a.adjoint()).unwrap().matrix();
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn ladder_round_trip_energy_basis() {
        let a = annihilation_energy(8).unwrap();
        let (x, p) = xp_from_ladder(&a);
        let (a2, ad2) = ladder_from_xp(&x, &p).unwrap();
        assert!(a.max_abs_diff(&a2).unwrap() < 1e-12);
        assert!(a.adjoint().max_abs_diff(&ad2).unwrap() < 1e-12);
    }

    #[test]
    fn ladder_from_zero_and_mismatch() {
        let z = OperatorMatrix::zeros(3);
        let (a, ad) = ladder_from_xp(&z, &z).unwrap();
        assert_eq!(a.max_abs(), 0.0);
        assert_eq!(ad.max_abs(), 0.0);
        assert!(ladder_from_xp(&z, &OperatorMatrix::zeros(4)).is_err());
    }

    #[test]
    fn position_basis_ladder_is_not_bidiagonal() {
        let x = position_operator_pos(4).unwrap();
        let p = momentum_operator_pos(4).unwrap();
        let (a, _) = ladder_from_xp(&x, &p).unwrap();
        let off_band = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| c != r && c != r + 1)
            .map(|(r, c)| a.get(r, c).norm())
            .fold(0.0, f64::max);
        assert!(off_band > 1e-3);
    }

    #[test]
    fn traceless_identity_matches_commutator() {
        assert_eq!(
            traceless_identity(2).unwrap(),
            OperatorMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap()
        );
        assert_eq!(
            traceless_identity(5).unwrap(),
            OperatorMatrix::from_real_diagonal(&[1.0, 1.0, 1.0, 1.0, -4.0]).unwrap()
        );
        for n in 1..=32 {
            let a = annihilation_energy(n).unwrap();
            let comm = commutator(&a, &a.adjoint()).unwrap();
            let ti = traceless_identity(n).unwrap();
            assert!(comm.max_abs_diff(&ti).unwrap() <= 1e-12, "n={n}");
            assert_eq!(ti.trace(), ZERO);
            assert_eq!(comm.trace().re, 0.0);
        }
    }

    #[test]
    fn fermion_relations() {
        let (cm, cd) = fermionic_ladder();
        let zero = fermion_state(false);
        let one = fermion_state(true);
        assert_eq!(cm.matrix() * &zero, nalgebra::DVector::zeros(2));
        assert_eq!(cm.matrix() * &one, zero);
        assert_eq!(cd.matrix() * &zero, one);
        assert_eq!(cd.matrix() * &one, nalgebra::DVector::zeros(2));
        let comm = commutator(&cd, &cm).unwrap();
        assert_eq!(comm, OperatorMatrix::from_real_diagonal(&[-1.0, 1.0]).unwrap());
    }

    #[test]
    fn kronecker_extensions() {
        let id = OperatorMatrix::identity(3);
        assert_eq!(extend_bosonic(&id, 2).unwrap(), OperatorMatrix::identity(6));

        let d = OperatorMatrix::from_real_diagonal(&[2.0, 5.0]).unwrap();
        let e = extend_bosonic(&d, 2).unwrap();
        assert_eq!(e, OperatorMatrix::from_real_diagonal(&[2.0, 2.0, 5.0, 5.0]).unwrap());

        let (cm, _) = fermionic_ladder();
        let ic = extend_fermionic(2, &cm).unwrap();
        assert_eq!(ic.dim(), 4);
        assert_eq!(ic.get(0, 1), ONE);
        assert_eq!(ic.get(2, 3), ONE);
        assert_eq!(ic.matrix().iter().filter(|z| **z != ZERO).count(), 2);
        assert_eq!(extend_fermionic(1, &cm).unwrap(), cm);

        let a = annihilation_energy(4).unwrap();
        let ab = extend_bosonic(&a, 2).unwrap();
        let cf = extend_fermionic(4, &cm).unwrap();
        let prod = ab.matrix() * cf.matrix();
        assert!(max_abs(&(prod - a.matrix().kronecker(cm.matrix()))) < 1e-15);
        assert!(commutator(&ab, &cf).unwrap().max_abs() <= 1e-12);
        assert!(extend_bosonic(&a, 0).is_err());
        assert!(extend_fermionic(0, &cm).is_err());
    }

    #[test]
    fn rejects_non_square() {
        assert!(OperatorMatrix::new(CMatrix::zeros(2, 3)).is_err());
        assert!(OperatorMatrix::new(CMatrix::zeros(0, 0)).is_err());
    }
}

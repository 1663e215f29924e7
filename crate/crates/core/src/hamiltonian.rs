//! Oscillator Hamiltonians in the position or energy basis.
//!
//! Units are `hbar = omega = m = 1` throughout. Anharmonic terms are always
//! appended to the harmonic core of the chosen basis: `A^dagger A + I/2` in
//! the energy basis, `P^2/2 + X^2/2` in the position basis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{
    annihilation_energy, extend_bosonic, extend_fermionic, fermionic_ladder, hermitize,
    ladder_from_xp, momentum_operator_pos, position_operator_pos, traceless_identity,
    xp_from_ladder, CMatrix, OperatorMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Position,
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HamiltonianKind {
    HarmonicXp,
    HarmonicLadder,
    HarmonicCorrected,
    AnharmonicCubic,
    AnharmonicQuartic,
    GeneralPotential,
    SusyMusin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anharmonicity {
    Cubic,
    Quartic,
}

impl HamiltonianKind {
    pub const ALL: [HamiltonianKind; 7] = [
        HamiltonianKind::HarmonicXp,
        HamiltonianKind::HarmonicLadder,
        HamiltonianKind::HarmonicCorrected,
        HamiltonianKind::AnharmonicCubic,
        HamiltonianKind::AnharmonicQuartic,
        HamiltonianKind::GeneralPotential,
        HamiltonianKind::SusyMusin,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            HamiltonianKind::HarmonicXp => "harmonic-xp",
            HamiltonianKind::HarmonicLadder => "harmonic-ladder",
            HamiltonianKind::HarmonicCorrected => "harmonic-corrected",
            HamiltonianKind::AnharmonicCubic => "anharmonic-cubic",
            HamiltonianKind::AnharmonicQuartic => "anharmonic-quartic",
            HamiltonianKind::GeneralPotential => "general-potential",
            HamiltonianKind::SusyMusin => "susy-musin",
        }
    }
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HamiltonianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('_', "-");
        HamiltonianKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::Config(format!("unknown Hamiltonian kind `{s}`")))
    }
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::Position => "position",
            Basis::Energy => "energy",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "position" | "pos" => Ok(Basis::Position),
            "energy" | "en" => Ok(Basis::Energy),
            _ => Err(Error::Config(format!("unknown basis `{s}`"))),
        }
    }
}

/// Full description of a Hamiltonian to build.
///
/// `n` is the bosonic dimension; the SUSY kind produces a `2n x 2n` matrix
/// and always uses the energy basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub basis: Basis,
    pub n: usize,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub g: f64,
    #[serde(default = "default_omega0")]
    pub omega0: f64,
    #[serde(default)]
    pub potential_coeffs: Vec<f64>,
}

fn default_omega0() -> f64 {
    1.0
}

impl HamiltonianSpec {
    pub fn new(kind: HamiltonianKind, basis: Basis, n: usize) -> Self {
        Self {
            kind,
            basis,
            n,
            alpha: 0.0,
            beta: 0.0,
            g: 0.0,
            omega0: 1.0,
            potential_coeffs: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        use HamiltonianKind::*;
        if self.n < 2 {
            return Err(Error::Config(format!(
                "oscillator dimension must be at least 2, got {}",
                self.n
            )));
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("g", self.g), ("omega0", self.omega0)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        let unused = |name: &str, v: f64| -> Result<()> {
            if v != 0.0 {
                Err(Error::Config(format!(
                    "{name} is not used by {} and must be zero",
                    self.kind
                )))
            } else {
                Ok(())
            }
        };
        if self.kind != AnharmonicCubic {
            unused("alpha", self.alpha)?;
        }
        if self.kind != AnharmonicQuartic {
            unused("beta", self.beta)?;
        }
        if self.kind != SusyMusin {
            unused("g", self.g)?;
            if self.omega0 != 1.0 {
                return Err(Error::Config(format!(
                    "omega0 is only used by susy-musin, not {}",
                    self.kind
                )));
            }
        } else if self.omega0 <= 0.0 {
            return Err(Error::Config(format!("omega0 must be positive, got {}", self.omega0)));
        }
        if self.kind == GeneralPotential {
            if self.potential_coeffs.is_empty() {
                return Err(Error::Config("general-potential needs at least one coefficient".into()));
            }
            if let Some(c) = self.potential_coeffs.iter().find(|c| !c.is_finite()) {
                return Err(Error::Config(format!("potential coefficient {c} is not finite")));
            }
        } else if !self.potential_coeffs.is_empty() {
            return Err(Error::Config(format!(
                "potential coefficients are only used by general-potential, not {}",
                self.kind
            )));
        }
        Ok(())
    }

    /// Matrix dimension of the built Hamiltonian.
    pub fn dim(&self) -> usize {
        match self.kind {
            HamiltonianKind::SusyMusin => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn build(&self) -> Result<OperatorMatrix> {
        self.validate()?;
        match self.kind {
            HamiltonianKind::HarmonicXp => build_harmonic_xp(self.basis, self.n),
            HamiltonianKind::HarmonicLadder => build_harmonic_ladder(self.basis, self.n),
            HamiltonianKind::HarmonicCorrected => build_harmonic_corrected(self.basis, self.n),
            HamiltonianKind::AnharmonicCubic => {
                build_anharmonic(self.basis, self.n, Anharmonicity::Cubic, self.alpha)
            }
            HamiltonianKind::AnharmonicQuartic => {
                build_anharmonic(self.basis, self.n, Anharmonicity::Quartic, self.beta)
            }
            HamiltonianKind::GeneralPotential => {
                build_general(self.basis, self.n, &self.potential_coeffs)
            }
            HamiltonianKind::SusyMusin => build_susy_musin(self.n, self.g, self.omega0),
        }
    }
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("oscillator dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// Position and momentum operators for a basis.
pub fn xp_operators(basis: Basis, n: usize) -> Result<(CMatrix, CMatrix)> {
    match basis {
        Basis::Position => Ok((
            position_operator_pos(n)?.into_matrix(),
            momentum_operator_pos(n)?.into_matrix(),
        )),
        Basis::Energy => {
            let (x, p) = xp_from_ladder(&annihilation_energy(n)?);
            Ok((x.into_matrix(), p.into_matrix()))
        }
    }
}

/// Lowering operator for a basis; the position basis goes through `(X + iP)/sqrt(2)`.
pub fn lowering_operator(basis: Basis, n: usize) -> Result<CMatrix> {
    match basis {
        Basis::Energy => Ok(annihilation_energy(n)?.into_matrix()),
        Basis::Position => {
            let (a, _) = ladder_from_xp(&position_operator_pos(n)?, &momentum_operator_pos(n)?)?;
            Ok(a.into_matrix())
        }
    }
}

fn finish(m: CMatrix) -> OperatorMatrix {
    OperatorMatrix::from_square(hermitize(m))
}

fn ladder_core(basis: Basis, n: usize) -> Result<CMatrix> {
    let a = lowering_operator(basis, n)?;
    Ok(a.adjoint() * &a + CMatrix::identity(n, n) * re(0.5))
}

/// `P^2/2 + X^2/2`.
pub fn build_harmonic_xp(basis: Basis, n: usize) -> Result<OperatorMatrix> {
    check_n(n)?;
    let (x, p) = xp_operators(basis, n)?;
    Ok(finish((&p * &p + &x * &x) * re(0.5)))
}

/// `A^dagger A + I/2`.
pub fn build_harmonic_ladder(basis: Basis, n: usize) -> Result<OperatorMatrix> {
    check_n(n)?;
    Ok(finish(ladder_core(basis, n)?))
}

/// `(X^2 + P^2 - I~ + I)/2`, with `I~` the traceless identity.
pub fn build_harmonic_corrected(basis: Basis, n: usize) -> Result<OperatorMatrix> {
    check_n(n)?;
    let (x, p) = xp_operators(basis, n)?;
    let ti = traceless_identity(n)?.into_matrix();
    let id = CMatrix::identity(n, n);
    Ok(finish((&x * &x + &p * &p - ti + id) * re(0.5)))
}

/// Harmonic core plus `-alpha X^3` (cubic) or `+beta X^4` (quartic).
pub fn build_anharmonic(
    basis: Basis,
    n: usize,
    kind: Anharmonicity,
    coupling: f64,
) -> Result<OperatorMatrix> {
    check_n(n)?;
    let (x, p) = xp_operators(basis, n)?;
    let core = match basis {
        Basis::Energy => ladder_core(basis, n)?,
        Basis::Position => (&p * &p + &x * &x) * re(0.5),
    };
    let x2 = &x * &x;
    let term = match kind {
        Anharmonicity::Cubic => &x2 * &x * re(-coupling),
        Anharmonicity::Quartic => &x2 * &x2 * re(coupling),
    };
    Ok(finish(core + term))
}

/// `P^2/2 + sum_k c_k X^k`.
pub fn build_general(basis: Basis, n: usize, coeffs: &[f64]) -> Result<OperatorMatrix> {
    check_n(n)?;
    if coeffs.is_empty() {
        return Err(Error::domain("potential needs at least one coefficient"));
    }
    let (x, p) = xp_operators(basis, n)?;
    let mut h = &p * &p * re(0.5);
    let mut power = CMatrix::identity(n, n);
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            power = &power * &x;
        }
        if c != 0.0 {
            h += &power * re(c);
        }
    }
    Ok(finish(h))
}

/// Supersymmetric anharmonic oscillator on boson (x) fermion, dimension `2 n_b`:
///
/// `w0 (A^dagger A + I/2) + (2 w0 g X^3 + g^2 X^4 + (w0 I + 2 g X) [C^dagger, C]) / 2`
pub fn build_susy_musin(n_b: usize, g: f64, omega0: f64) -> Result<OperatorMatrix> {
    check_n(n_b)?;
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::domain(format!("omega0 must be positive, got {omega0}")));
    }
    if !g.is_finite() {
        return Err(Error::domain(format!("g must be finite, got {g}")));
    }
    let a = extend_bosonic(&annihilation_energy(n_b)?, 2)?;
    let (x, _) = xp_from_ladder(&a);
    let (c, cd) = fermionic_ladder();
    let c = extend_fermionic(n_b, &c)?.into_matrix();
    let cd = extend_fermionic(n_b, &cd)?.into_matrix();
    let (a, x) = (a.into_matrix(), x.into_matrix());

    let dim = 2 * n_b;
    let id = CMatrix::identity(dim, dim);
    let fermion_comm = &cd * &c - &c * &cd;
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let x4 = &x2 * &x2;

    let boson = (a.adjoint() * &a + &id * re(0.5)) * re(omega0);
    let coupling = (&id * re(omega0) + &x * re(2.0 * g)) * fermion_comm;
    let pert = (x3 * re(2.0 * omega0 * g) + x4 * re(g * g) + coupling) * re(0.5);
    Ok(finish(boson + pert))
}

//! Truncated Fock-space matrices: ladder operators, quadratures, the
//! squeeze operator and the Bogoliubov transformations it generates.
//!
//! Everything lives on the span of `|0⟩ … |n-1⟩`. Identities that hold in
//! infinite dimensions fail near the top of the truncated basis, so
//! comparisons are made on a leading block of Fock indices `0..block`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::expm;

/// Where a matrix came from. Diagnostic only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Annihilation,
    Creation,
    Number,
    Quadrature,
    General,
}

#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    kind: OperatorKind,
    entries: DMatrix<Complex64>,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("kind", &self.kind)
            .field("dim", &self.dim())
            .finish()
    }
}

impl OperatorMatrix {
    /// Wraps a square, finite matrix of dimension at least 2.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        Self::tagged(entries, OperatorKind::General)
    }

    pub fn tagged(entries: DMatrix<Complex64>, kind: OperatorKind) -> Result<Self> {
        if !entries.is_square() || entries.nrows() < 2 {
            return Err(Error::Dimension(entries.nrows().min(entries.ncols()), 2));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { kind, entries })
    }

    fn general(entries: DMatrix<Complex64>) -> Self {
        Self {
            kind: OperatorKind::General,
            entries,
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self::general(DMatrix::identity(n, n)))
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            OperatorKind::Annihilation => OperatorKind::Creation,
            OperatorKind::Creation => OperatorKind::Annihilation,
            k => k,
        };
        Self {
            kind,
            entries: self.entries.adjoint(),
        }
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        Self::general(&self.entries * s.into())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn exp(&self) -> Self {
        Self::general(expm(&self.entries))
    }

    /// Leading `block × block` submatrix (Fock indices `0..block`).
    pub fn leading_block(&self, block: usize) -> DMatrix<Complex64> {
        let b = block.min(self.dim());
        self.entries.view((0, 0), (b, b)).into_owned()
    }

    /// Largest entrywise modulus of `self - other` over the leading block.
    pub fn block_deviation(&self, other: &Self, block: usize) -> f64 {
        let b = block.min(self.dim()).min(other.dim());
        let mut dev = 0.0f64;
        for j in 0..b {
            for i in 0..b {
                dev = dev.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        dev
    }

    /// Largest entrywise modulus over the whole matrix.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |(A†A - 1)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let gram = self.entries.adjoint() * &self.entries;
        (gram - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::general(&self.entries * &rhs.entries)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::general(&self.entries + &rhs.entries)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix::general(&self.entries - &rhs.entries)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Dimension(n, 2))
    } else {
        Ok(())
    }
}

fn real_parameter(epsilon: impl Into<Complex64>) -> Result<f64> {
    let e = epsilon.into();
    if !(e.re.is_finite() && e.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if e.im != 0.0 {
        return Err(Error::RealParameterRequired(e.im));
    }
    Ok(e.re)
}

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() {
        Err(Error::NonFinite)
    } else if rho == 0.0 {
        Err(Error::SingularScaling)
    } else {
        Ok(())
    }
}

/// `(c, c†)` with `c|k⟩ = √k |k-1⟩`.
pub fn ladder_pair(n: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_dim(n)?;
    let mut c = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..n {
        c[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let c = OperatorMatrix {
        kind: OperatorKind::Annihilation,
        entries: c,
    };
    let cd = c.adjoint();
    Ok((c, cd))
}

pub fn number(n: usize) -> Result<OperatorMatrix> {
    check_dim(n)?;
    Ok(OperatorMatrix {
        kind: OperatorKind::Number,
        entries: DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| {
            Complex64::new(k as f64, 0.0)
        })),
    })
}

fn hermitian_part(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `x̂ = (c + c†)/√2`, `p̂ = -i(c - c†)/√2`, symmetrized to be exactly Hermitian.
pub fn quadratures(n: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let (c, cd) = ladder_pair(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&c.entries + &cd.entries) * Complex64::new(s, 0.0);
    let p = (&c.entries - &cd.entries) * Complex64::new(0.0, -s);
    Ok((
        OperatorMatrix {
            kind: OperatorKind::Quadrature,
            entries: hermitian_part(x),
        },
        OperatorMatrix {
            kind: OperatorKind::Quadrature,
            entries: hermitian_part(p),
        },
    ))
}

/// `S(ε) = exp((ε/2)(c² - c†²))` for real `ε`.
///
/// The exponent is real antisymmetric in the Fock basis, so `S` is real
/// orthogonal up to rounding.
pub fn squeeze_generator(n: usize, epsilon: impl Into<Complex64>) -> Result<OperatorMatrix> {
    let eps = real_parameter(epsilon)?;
    let (c, cd) = ladder_pair(n)?;
    let exponent = (&c.entries * &c.entries - &cd.entries * &cd.entries) * Complex64::new(eps / 2.0, 0.0);
    Ok(OperatorMatrix::general(expm(&exponent)))
}

/// How `S⁻¹` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InverseMode {
    /// `S†`, valid because `S` is unitary.
    #[default]
    Adjoint,
    /// LU inverse, for measuring how far `S†` is from the true inverse.
    Exact,
}

pub fn squeeze_inverse(n: usize, epsilon: impl Into<Complex64>, mode: InverseMode) -> Result<OperatorMatrix> {
    let s = squeeze_generator(n, epsilon)?;
    Ok(match mode {
        InverseMode::Adjoint => s.adjoint(),
        InverseMode::Exact => OperatorMatrix::general(
            s.entries
                .try_inverse()
                .expect("squeeze operator is invertible"),
        ),
    })
}

/// `(S⁻¹ c S, S⁻¹ c† S)` by explicit conjugation, with `S⁻¹ = S†`.
pub fn bogoliubov_conjugate(n: usize, epsilon: impl Into<Complex64>) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let s = squeeze_generator(n, epsilon)?;
    let s_inv = s.adjoint();
    let (c, cd) = ladder_pair(n)?;
    let c_eps = &(&s_inv * &c) * &s;
    let cd_eps = &(&s_inv * &cd) * &s;
    Ok((c_eps, cd_eps))
}

/// `(ρ x̂, p̂ / ρ)`.
pub fn scaled_quadratures(n: usize, rho: f64) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_rho(rho)?;
    let (x, p) = quadratures(n)?;
    Ok((
        OperatorMatrix {
            kind: OperatorKind::Quadrature,
            entries: x.entries * Complex64::new(rho, 0.0),
        },
        OperatorMatrix {
            kind: OperatorKind::Quadrature,
            entries: p.entries * Complex64::new(1.0 / rho, 0.0),
        },
    ))
}

/// Bogoliubov coefficients of the `ρ`-scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    pub u: f64,
    pub v: f64,
    pub rho: f64,
    /// `-ln ρ`; only defined for positive `ρ`.
    pub epsilon: Option<f64>,
}

impl BogoliubovCoefficients {
    pub fn from_rho(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let inv = 1.0 / rho;
        Ok(Self {
            u: 0.5 * (rho + inv),
            v: 0.5 * (rho - inv),
            rho,
            epsilon: (rho > 0.0).then(|| -rho.ln()),
        })
    }

    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut coeffs = Self::from_rho((-epsilon).exp())?;
        coeffs.epsilon = Some(epsilon);
        Ok(coeffs)
    }

    /// `u² - v²`, which is 1 for every admissible `ρ`.
    pub fn symplectic_form(&self) -> f64 {
        (self.u - self.v) * (self.u + self.v)
    }
}

/// `c(ρ) = u c + v c†` and `c†(ρ) = u c† + v c`.
pub fn transformed_ladder(n: usize, rho: f64) -> Result<(OperatorMatrix, OperatorMatrix, BogoliubovCoefficients)> {
    let coeffs = BogoliubovCoefficients::from_rho(rho)?;
    let (c, cd) = ladder_pair(n)?;
    let u = Complex64::new(coeffs.u, 0.0);
    let v = Complex64::new(coeffs.v, 0.0);
    let c_rho = OperatorMatrix::general(&c.entries * u + &cd.entries * v);
    let cd_rho = OperatorMatrix::general(&cd.entries * u + &c.entries * v);
    Ok((c_rho, cd_rho, coeffs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub dim: usize,
    pub epsilon: f64,
    pub block: usize,
    /// Worst entrywise deviation over both `c` and `c†`.
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares `S⁻¹ c S` with `c(ρ)` at `ρ = e^(-ε)` on the leading block.
pub fn generator_equivalence_check(n: usize, epsilon: f64, block: usize, tol: f64) -> Result<EquivalenceReport> {
    check_dim(n)?;
    if block > n / 2 {
        return Err(Error::Block { block, dim: n });
    }
    let eps = real_parameter(epsilon)?;
    let (c_conj, cd_conj) = bogoliubov_conjugate(n, eps)?;
    let (c_rho, cd_rho, _) = transformed_ladder(n, (-eps).exp())?;
    let deviation = c_conj
        .block_deviation(&c_rho, block)
        .max(cd_conj.block_deviation(&cd_rho, block));
    Ok(EquivalenceReport {
        dim: n,
        epsilon: eps,
        block,
        deviation,
        tolerance: tol,
        pass: deviation <= tol,
    })
}

/// The generator `exp((ε/2)(c̃² - c̃†²))` carried into the Fock basis by the
/// Bargmann dictionary `ζ ↦ c†`, `d/dζ ↦ c`.
///
/// Under that dictionary `c̃ ↦ (c† + c)/√2` and `c̃† ↦ (c† - c)/√2`, so the
/// exponent becomes `(ε/2)(c c† + c† c) = ε(N + 1/2)` away from the
/// truncation corner. Unlike [`squeeze_generator`] it accepts complex `ε`
/// and is not unitary: `e^(-ε/2)` times it is `q^N`.
pub fn bargmann_generator(n: usize, epsilon: Complex64) -> Result<OperatorMatrix> {
    if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (c, cd) = ladder_pair(n)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let c_tilde = (&cd.entries + &c.entries) * s;
    let c_tilde_dag = (&cd.entries - &c.entries) * s;
    let exponent = (&c_tilde * &c_tilde - &c_tilde_dag * &c_tilde_dag) * (epsilon * 0.5);
    Ok(OperatorMatrix::general(expm(&exponent)))
}

/// Eigenvalues of a leading block, via the complex Schur form.
pub fn block_eigenvalues(op: &OperatorMatrix, block: usize) -> Vec<Complex64> {
    let m = op.leading_block(block);
    m.schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

//! Single-mode Weyl systems on the truncated Fock space.
//!
//! `U(α) = exp(iα p̂)`, `V(β) = exp(iβ x̂)` and the Weyl operator
//! `W(z) = e^{iαβ} V(√2 α) U(√2 β)` for `z = α + iβ`. Composition follows
//! `W(z₁) W(z₂) = exp(-i Im(z₁* z₂)) W(z₁ + z₂)`.
//!
//! The `ρ`-labelled family `W^(ρ)(z) = W(ρα + iβ/ρ)` obeys the same law with
//! the unscaled phase, because the area `Im(z₁* z₂)` is invariant under the
//! scaling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{quadratures, OperatorMatrix};

/// Largest `|z|` trusted at dimensions of at least 128.
pub const VALIDATED_RADIUS: f64 = 2.0;

const VALIDATED_DIM: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylLabel {
    pub alpha: f64,
    pub beta: f64,
}

impl WeylLabel {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn from_z(z: Complex64) -> Self {
        Self {
            alpha: z.re,
            beta: z.im,
        }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledWeylLabel {
    pub base: WeylLabel,
    pub rho: f64,
}

impl ScaledWeylLabel {
    /// `ρα + iβ/ρ`.
    pub fn scaled_z(&self) -> Complex64 {
        Complex64::new(self.rho * self.base.alpha, self.base.beta / self.rho)
    }

    pub fn scaled_label(&self) -> WeylLabel {
        WeylLabel::from_z(self.scaled_z())
    }
}

pub fn scale_label(label: WeylLabel, rho: f64) -> Result<ScaledWeylLabel> {
    if !rho.is_finite() {
        return Err(Error::NonFinite);
    }
    if rho == 0.0 {
        return Err(Error::SingularScaling);
    }
    Ok(ScaledWeylLabel { base: label, rho })
}

/// The symplectic area `Im(z₁* z₂) = α₁β₂ - β₁α₂`.
pub fn symplectic_area(z1: Complex64, z2: Complex64) -> f64 {
    (z1.conj() * z2).im
}

/// The phase `exp(-i Im(z₁* z₂))` in the composition law.
pub fn composition_phase(z1: Complex64, z2: Complex64) -> Complex64 {
    Complex64::new(0.0, -symplectic_area(z1, z2)).exp()
}

/// A note for displacements outside the validated operating range.
pub fn operating_range_warning(n: usize, z: Complex64) -> Option<String> {
    (z.norm() > VALIDATED_RADIUS || n < VALIDATED_DIM).then(|| {
        format!(
            "|z| = {:.3} at dimension {n} is outside the validated range (|z| <= {VALIDATED_RADIUS} at n >= {VALIDATED_DIM}); expect truncation error",
            z.norm()
        )
    })
}

/// Eigendecomposition of a Hermitian matrix, for `exp(itA)` at many `t`.
#[derive(Debug, Clone)]
struct Spectral {
    vectors: DMatrix<Complex64>,
    values: DVector<f64>,
}

impl Spectral {
    fn new(a: &OperatorMatrix) -> Self {
        let eig = a.entries().clone().symmetric_eigen();
        Self { vectors: eig.eigenvectors, values: eig.eigenvalues }
    }

    fn exp_i(&self, t: f64) -> OperatorMatrix {
        if t == 0.0 {
            return OperatorMatrix::identity(self.values.len()).expect("dimension checked at construction");
        }
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= Complex64::new(0.0, t * self.values[j]).exp();
        }
        OperatorMatrix::new(&scaled * self.vectors.adjoint()).expect("unitary of finite spectrum")
    }
}

/// The quadratures of one dimension, diagonalized once and reused across
/// many Weyl operators.
#[derive(Debug, Clone)]
pub struct WeylSystem {
    x: OperatorMatrix,
    p: OperatorMatrix,
    x_spec: Spectral,
    p_spec: Spectral,
}

impl WeylSystem {
    pub fn new(n: usize) -> Result<Self> {
        let (x, p) = quadratures(n)?;
        let x_spec = Spectral::new(&x);
        let p_spec = Spectral::new(&p);
        Ok(Self { x, p, x_spec, p_spec })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// `exp(iα p̂)`.
    pub fn u(&self, alpha: f64) -> OperatorMatrix {
        self.p_spec.exp_i(alpha)
    }

    /// `exp(iβ x̂)`.
    pub fn v(&self, beta: f64) -> OperatorMatrix {
        self.x_spec.exp_i(beta)
    }

    /// `e^{iαβ} V(√2 α) U(√2 β)`, built as the phased product.
    pub fn w(&self, label: WeylLabel) -> OperatorMatrix {
        let s = std::f64::consts::SQRT_2;
        let phase = Complex64::new(0.0, label.alpha * label.beta).exp();
        (&self.v(s * label.alpha) * &self.u(s * label.beta)).scale(phase)
    }

    pub fn scaled_w(&self, label: &ScaledWeylLabel) -> OperatorMatrix {
        self.w(label.scaled_label())
    }

    /// `exp(i√2(α x̂ + β p̂))` as a single exponential. Diagnostic only: it
    /// agrees with [`WeylSystem::w`] away from the truncation edge.
    pub fn displacement(&self, label: WeylLabel) -> OperatorMatrix {
        let s = std::f64::consts::SQRT_2;
        let generator = &self.x.scale(label.alpha) + &self.p.scale(label.beta);
        generator.scale(Complex64::new(0.0, s)).exp()
    }

    /// `W(z₁)W(z₂)` against `exp(-i Im(z₁* z₂)) W(z₁ + z₂)` on the leading
    /// `n/2` block.
    pub fn composition_check(&self, z1: Complex64, z2: Complex64, tol: f64) -> CompositionReport {
        let lhs = &self.w(WeylLabel::from_z(z1)) * &self.w(WeylLabel::from_z(z2));
        let rhs = self
            .w(WeylLabel::from_z(z1 + z2))
            .scale(composition_phase(z1, z2));
        self.report(z1, z2, None, &lhs, &rhs, tol)
    }

    /// Composition of the `ρ`-scaled operators, checked with the phase of
    /// the unscaled labels.
    pub fn scaled_composition_check(
        &self,
        z1: Complex64,
        z2: Complex64,
        rho: f64,
        tol: f64,
    ) -> Result<CompositionReport> {
        let s1 = scale_label(WeylLabel::from_z(z1), rho)?;
        let s2 = scale_label(WeylLabel::from_z(z2), rho)?;
        let s12 = scale_label(WeylLabel::from_z(z1 + z2), rho)?;
        let lhs = &self.scaled_w(&s1) * &self.scaled_w(&s2);
        let rhs = self.scaled_w(&s12).scale(composition_phase(z1, z2));
        Ok(self.report(z1, z2, Some(rho), &lhs, &rhs, tol))
    }

    fn report(
        &self,
        z1: Complex64,
        z2: Complex64,
        rho: Option<f64>,
        lhs: &OperatorMatrix,
        rhs: &OperatorMatrix,
        tol: f64,
    ) -> CompositionReport {
        let block = self.dim() / 2;
        let deviation = lhs.block_deviation(rhs, block);
        CompositionReport {
            dim: self.dim(),
            z1,
            z2,
            rho,
            phase: composition_phase(z1, z2),
            deviation,
            tolerance: tol,
            pass: deviation <= tol,
        }
    }

    /// Worst deviation of the three Weyl-system relations
    /// `U(α)U(α') = U(α+α')`, `V(β)V(β') = V(β+β')` and
    /// `U(α)V(β) = e^{iαβ} V(β)U(α)` on the leading `n/2` block.
    pub fn weyl_relations_deviation(&self, alpha: (f64, f64), beta: (f64, f64)) -> [f64; 3] {
        let block = self.dim() / 2;
        let (a1, a2) = alpha;
        let (b1, b2) = beta;
        let uu = &self.u(a1) * &self.u(a2);
        let vv = &self.v(b1) * &self.v(b2);
        let uv = &self.u(a1) * &self.v(b1);
        let vu = (&self.v(b1) * &self.u(a1)).scale(Complex64::new(0.0, a1 * b1).exp());
        [
            uu.block_deviation(&self.u(a1 + a2), block),
            vv.block_deviation(&self.v(b1 + b2), block),
            uv.block_deviation(&vu, block),
        ]
    }
}

pub fn weyl_u(n: usize, alpha: f64) -> Result<OperatorMatrix> {
    Ok(WeylSystem::new(n)?.u(alpha))
}

pub fn weyl_v(n: usize, beta: f64) -> Result<OperatorMatrix> {
    Ok(WeylSystem::new(n)?.v(beta))
}

pub fn weyl_w(n: usize, label: WeylLabel) -> Result<OperatorMatrix> {
    Ok(WeylSystem::new(n)?.w(label))
}

pub fn scaled_weyl_w(n: usize, label: &ScaledWeylLabel) -> Result<OperatorMatrix> {
    Ok(WeylSystem::new(n)?.scaled_w(label))
}

pub fn composition_check(n: usize, z1: Complex64, z2: Complex64, tol: f64) -> Result<CompositionReport> {
    Ok(WeylSystem::new(n)?.composition_check(z1, z2, tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    pub dim: usize,
    pub z1: Complex64,
    pub z2: Complex64,
    pub rho: Option<f64>,
    pub phase: Complex64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticReport {
    pub before: f64,
    pub after: f64,
    /// `|after - before| / max(|before|, tiny)`; zero when both vanish.
    pub relative_deviation: f64,
    pub pass: bool,
}

/// Relative tolerance for the area invariance; the identity is algebraic,
/// so only rounding separates the two sides.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-14;

/// Symplectic area before and after scaling both labels by `ρ`.
pub fn symplectic_invariance_check(z1: Complex64, z2: Complex64, rho: f64) -> Result<SymplecticReport> {
    let s1 = scale_label(WeylLabel::from_z(z1), rho)?.scaled_z();
    let s2 = scale_label(WeylLabel::from_z(z2), rho)?.scaled_z();
    let before = symplectic_area(z1, z2);
    let after = symplectic_area(s1, s2);
    Ok(area_report(before, after, z1, z2))
}

/// Rounding in `α₁β₂ - β₁α₂` is bounded by the size of the products, not by
/// the (possibly cancelled) area, so the deviation is measured against that.
pub(crate) fn area_report(before: f64, after: f64, z1: Complex64, z2: Complex64) -> SymplecticReport {
    let scale = (z1.re * z2.im).abs() + (z1.im * z2.re).abs();
    let diff = (after - before).abs();
    let relative_deviation = if diff == 0.0 { 0.0 } else { diff / scale.max(f64::MIN_POSITIVE) };
    SymplecticReport {
        before,
        after,
        relative_deviation,
        pass: relative_deviation <= SYMPLECTIC_TOLERANCE,
    }
}

//! Test-function scalar products and the vacuum-overlap probe of the
//! many-mode limit.
//!
//! For `M` independent modes all rotated by the same Bogoliubov parameter
//! `ε`, the overlap of the two multimode vacua factorizes into the per-mode
//! overlap `⟨0|S(ε)|0⟩` raised to the power `M`. It is strictly below one for
//! `ε ≠ 0`, so the product vanishes as `M → ∞` and the two labels end up in
//! orthogonal sectors. Nothing multimode is ever built as a matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{squeeze_generator, OperatorMatrix};

/// Smallest truncation accepted for overlap computations.
pub const MIN_OVERLAP_DIM: usize = 16;

/// `F = f + ig` sampled on a uniform grid with quadrature weight `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    f: Vec<f64>,
    g: Vec<f64>,
    weight: f64,
}

impl TestFunction {
    pub fn new(f: Vec<f64>, g: Vec<f64>, weight: f64) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::InvalidTestFunction("no samples".into()));
        }
        if f.len() != g.len() {
            return Err(Error::InvalidTestFunction(format!(
                "f has {} samples but g has {}",
                f.len(),
                g.len()
            )));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidTestFunction(format!("grid weight {weight} is not positive")));
        }
        if !f.iter().chain(&g).all(|v| v.is_finite()) {
            return Err(Error::InvalidTestFunction("non-finite sample".into()));
        }
        Ok(Self { f, g, weight })
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_grids(self, other)?;
        let mix = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
        Self::new(mix(&self.f, &other.f), mix(&self.g, &other.g), self.weight)
    }

    fn dot(&self, x: &[f64], y: &[f64]) -> f64 {
        self.weight * x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>()
    }
}

fn check_grids(a: &TestFunction, b: &TestFunction) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::IncompatibleGrid(format!("{} vs {} samples", a.len(), b.len())));
    }
    if a.weight != b.weight {
        return Err(Error::IncompatibleGrid(format!(
            "weights {} vs {}",
            a.weight, b.weight
        )));
    }
    Ok(())
}

/// `⟨F₁, F₂⟩ = (f₁,f₂) + (g₁,g₂) + i[(f₁,g₂) - (f₂,g₁)]`.
pub fn scalar_product(a: &TestFunction, b: &TestFunction) -> Result<Complex64> {
    check_grids(a, b)?;
    let re = a.dot(&a.f, &b.f) + a.dot(&a.g, &b.g);
    let im = a.dot(&a.f, &b.g) - a.dot(&b.f, &a.g);
    Ok(Complex64::new(re, im))
}

/// `(f/ρ, ρ g)`. Leaves `Im⟨F₁, F₂⟩` unchanged when applied to both sides.
pub fn scale_test_function(func: &TestFunction, rho: f64) -> Result<TestFunction> {
    if !rho.is_finite() {
        return Err(Error::NonFinite);
    }
    if rho == 0.0 {
        return Err(Error::SingularScaling);
    }
    TestFunction::new(
        func.f.iter().map(|v| v / rho).collect(),
        func.g.iter().map(|v| v * rho).collect(),
        func.weight,
    )
}

/// Invariance of `Im⟨F₁, F₂⟩` under [`scale_test_function`] on both sides,
/// measured like [`crate::weyl::symplectic_invariance_check`] against the
/// magnitude of the terms that make up the imaginary part.
pub fn scalar_product_invariance_check(
    a: &TestFunction,
    b: &TestFunction,
    rho: f64,
) -> Result<crate::weyl::SymplecticReport> {
    let before = scalar_product(a, b)?.im;
    let after = scalar_product(&scale_test_function(a, rho)?, &scale_test_function(b, rho)?)?.im;
    let scale = a.weight
        * (a.f.iter().zip(&b.g).map(|(p, q)| (p * q).abs()).sum::<f64>()
            + b.f.iter().zip(&a.g).map(|(p, q)| (p * q).abs()).sum::<f64>());
    let diff = (after - before).abs();
    let relative_deviation = if diff == 0.0 { 0.0 } else { diff / scale.max(f64::MIN_POSITIVE) };
    Ok(crate::weyl::SymplecticReport {
        before,
        after,
        relative_deviation,
        pass: relative_deviation <= crate::weyl::SYMPLECTIC_TOLERANCE,
    })
}

fn check_overlap_dim(n: usize) -> Result<()> {
    if n < MIN_OVERLAP_DIM {
        Err(Error::Dimension(n, MIN_OVERLAP_DIM))
    } else {
        Ok(())
    }
}

fn vacuum_element(s: &OperatorMatrix) -> f64 {
    s.get(0, 0).re
}

/// `⟨0|S(ε)|0⟩` on an `n`-dimensional truncation.
pub fn per_mode_vacuum_overlap(epsilon: f64, n: usize) -> Result<f64> {
    check_overlap_dim(n)?;
    Ok(vacuum_element(&squeeze_generator(n, epsilon)?))
}

/// `ε₂ - ε₁`, the only parameter the overlap of the two rotated vacua
/// depends on.
pub fn relative_deformation(eps1: f64, eps2: f64) -> f64 {
    eps2 - eps1
}

/// `⟨0|S(ε₁)† S(ε₂)|0⟩`, from the two squeeze operators separately.
pub fn vacuum_overlap_between(eps1: f64, eps2: f64, n: usize) -> Result<f64> {
    check_overlap_dim(n)?;
    let s1 = squeeze_generator(n, eps1)?;
    let s2 = squeeze_generator(n, eps2)?;
    // only the first row of S₁† and first column of S₂ are needed
    let overlap: Complex64 = (0..n).map(|k| s1.get(k, 0).conj() * s2.get(k, 0)).sum();
    Ok(overlap.re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoliationScan {
    pub epsilon: f64,
    /// In the order requested.
    pub mode_counts: Vec<usize>,
    pub per_mode_overlap: f64,
    /// `per_mode_overlap^M` for each entry of `mode_counts`.
    pub products: Vec<f64>,
    pub matrix_dim: usize,
}

impl FoliationScan {
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mode_counts.iter().copied().zip(self.products.iter().copied())
    }
}

/// Overlap of the `ε`-rotated and reference `M`-mode vacua for each `M`.
pub fn foliation_scan(epsilon: f64, mode_counts: &[usize], n: usize) -> Result<FoliationScan> {
    if mode_counts.is_empty() || mode_counts.contains(&0) {
        return Err(Error::EmptyModes);
    }
    let per_mode = per_mode_vacuum_overlap(epsilon, n)?;
    let products = mode_counts
        .iter()
        .map(|&m| match i32::try_from(m) {
            Ok(m) => per_mode.powi(m),
            Err(_) => per_mode.powf(m as f64),
        })
        .collect();
    Ok(FoliationScan {
        epsilon,
        mode_counts: mode_counts.to_vec(),
        per_mode_overlap: per_mode,
        products,
        matrix_dim: n,
    })
}

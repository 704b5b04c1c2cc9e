//! Fock–Bargmann realization of the Weyl–Heisenberg algebra and its
//! q-deformation on truncated polynomials.
//!
//! A [`BargmannPoly`] holds the monomial coefficients of
//! `f(ζ) = Σ_k c_k ζ^k` for `k = 0..=D`. The undeformed operators act as
//! `a† ↦ ζ`, `a ↦ d/dζ`, `N ↦ ζ d/dζ`; the deformed annihilator is the
//! Jackson derivative `𝒟_q f(ζ) = (f(qζ) - f(ζ)) / ((q - 1) ζ)`, which sends
//! `ζ^k` to `[k]_q ζ^(k-1)`.
//!
//! Matrices built here are in the monomial basis. That basis is not
//! orthonormal for the Bargmann measure, so the identities checked in this
//! module are entrywise and algebraic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::expm::expm;

/// What to do with the coefficient pushed past the cutoff by `ζ·`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverflowPolicy {
    /// Refuse to drop a nonzero coefficient.
    #[default]
    Strict,
    /// Drop it and mark the result as overflowed.
    Project,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargmannPoly {
    coeffs: Vec<Complex64>,
    overflowed: bool,
}

impl BargmannPoly {
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); cutoff + 1],
            overflowed: false,
        }
    }

    /// Builds a polynomial from its coefficients; the cutoff is `len - 1`.
    ///
    /// Panics on an empty vector, which would have no valid cutoff.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Self {
            coeffs,
            overflowed: false,
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Set when a projecting operation dropped a nonzero coefficient.
    pub fn overflowed(&self) -> bool {
        self.overflowed
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Same polynomial at a different cutoff. Coefficients above the new
    /// cutoff are dropped, which marks the result as overflowed if any of
    /// them was nonzero.
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let dropped = coeffs.len() > cutoff + 1
            && coeffs[cutoff + 1..].iter().any(|c| *c != Complex64::new(0.0, 0.0));
        coeffs.resize(cutoff + 1, Complex64::new(0.0, 0.0));
        Self {
            coeffs,
            overflowed: self.overflowed || dropped,
        }
    }

    /// Evaluates `f(ζ)` by Horner's rule.
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * zeta + c)
    }

    fn map_coeffs(&self, coeffs: Vec<Complex64>) -> Self {
        Self {
            coeffs,
            overflowed: self.overflowed,
        }
    }
}

impl std::ops::Sub<&BargmannPoly> for &BargmannPoly {
    type Output = BargmannPoly;

    fn sub(self, rhs: &BargmannPoly) -> BargmannPoly {
        assert_eq!(self.cutoff(), rhs.cutoff(), "cutoff mismatch");
        BargmannPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            overflowed: self.overflowed || rhs.overflowed,
        }
    }
}

/// `ζ^k` at cutoff `D`.
pub fn monomial(k: usize, cutoff: usize) -> Result<BargmannPoly> {
    if k > cutoff {
        return Err(Error::DegreeOutOfRange { degree: k, cutoff });
    }
    let mut p = BargmannPoly::zeros(cutoff);
    p.coeffs[k] = Complex64::new(1.0, 0.0);
    Ok(p)
}

/// Multiplication by `ζ` (the creation operator).
pub fn apply_creation(p: &BargmannPoly, policy: OverflowPolicy) -> Result<BargmannPoly> {
    let d = p.cutoff();
    let top = p.coeffs[d];
    let spills = top != Complex64::new(0.0, 0.0);
    if spills && policy == OverflowPolicy::Strict {
        return Err(Error::Overflow { cutoff: d });
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend_from_slice(&p.coeffs[..d]);
    Ok(BargmannPoly {
        coeffs,
        overflowed: p.overflowed || spills,
    })
}

/// `d/dζ` (the annihilation operator).
pub fn apply_annihilation(p: &BargmannPoly) -> BargmannPoly {
    let d = p.cutoff();
    let coeffs = (0..=d)
        .map(|k| {
            if k < d {
                p.coeffs[k + 1] * (k + 1) as f64
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    p.map_coeffs(coeffs)
}

/// `ζ d/dζ` (the number operator).
pub fn apply_number(p: &BargmannPoly) -> BargmannPoly {
    p.map_coeffs(
        p.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * k as f64)
            .collect(),
    )
}

/// The Jackson derivative `𝒟_q`, acting as `ζ^k ↦ [k]_q ζ^(k-1)`.
pub fn q_derivative(p: &BargmannPoly, deformation: &Deformation) -> Result<BargmannPoly> {
    deformation.ensure_nondegenerate()?;
    let d = p.cutoff();
    let coeffs = (0..=d)
        .map(|k| {
            if k < d {
                p.coeffs[k + 1] * deformation.q_number(k + 1)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(p.map_coeffs(coeffs))
}

/// `q^N`, i.e. `f(ζ) ↦ f(qζ)`.
pub fn dilation(p: &BargmannPoly, deformation: &Deformation) -> BargmannPoly {
    let q = deformation.q();
    let mut power = Complex64::new(1.0, 0.0);
    let coeffs = p
        .coeffs
        .iter()
        .map(|c| {
            let out = c * power;
            power *= q;
            out
        })
        .collect();
    p.map_coeffs(coeffs)
}

/// `[a_q, â_q] = 𝒟_q ζ - ζ 𝒟_q` applied to `p`.
///
/// The intermediate `ζ·p` is formed at cutoff `D + 1`, so the composite is
/// exact at cutoff `D` and never trips the overflow policy.
pub fn q_commutator(p: &BargmannPoly, deformation: &Deformation) -> Result<BargmannPoly> {
    deformation.ensure_nondegenerate()?;
    let d = p.cutoff();
    let widened = p.with_cutoff(d + 1);
    let forward = q_derivative(&apply_creation(&widened, OverflowPolicy::Strict)?, deformation)?;
    let backward = apply_creation(&q_derivative(p, deformation)?, OverflowPolicy::Strict)?;
    // forward has degree ≤ D, so narrowing it back is lossless
    let forward = forward.with_cutoff(d);
    debug_assert!(forward.overflowed == p.overflowed);
    Ok(&forward - &backward)
}

/// Matrix of a linear map on polynomials of cutoff `D`, built column by
/// column from its action on monomials.
pub fn operator_matrix<F>(cutoff: usize, mut op: F) -> Result<DMatrix<Complex64>>
where
    F: FnMut(&BargmannPoly) -> Result<BargmannPoly>,
{
    let dim = cutoff + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let image = op(&monomial(k, cutoff)?)?;
        if image.cutoff() != cutoff {
            return Err(Error::DegreeOutOfRange {
                degree: image.cutoff(),
                cutoff,
            });
        }
        for (row, c) in image.coeffs.iter().enumerate() {
            m[(row, k)] = *c;
        }
    }
    Ok(m)
}

/// Matrices of `ζ` and `d/dζ` at cutoff `D`, with `ζ` projecting away its
/// top-degree image.
pub fn ladder_matrices(cutoff: usize) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let zeta = operator_matrix(cutoff, |p| apply_creation(p, OverflowPolicy::Project))?;
    let d_zeta = operator_matrix(cutoff, |p| Ok(apply_annihilation(p)))?;
    Ok((zeta, d_zeta))
}

/// Matrix of `c̃² - c̃†²` at cutoff `D`, where `c̃ = (ζ + d/dζ)/√2` and
/// `c̃† = (ζ - d/dζ)/√2`.
///
/// The squares are formed at cutoff `D + 2` and cropped, so the degree
/// preserving combination carries no truncation error.
pub fn squeeze_generator_matrix(cutoff: usize) -> Result<DMatrix<Complex64>> {
    let wide = cutoff + 2;
    let (zeta, d_zeta) = ladder_matrices(wide)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c_tilde = (&zeta + &d_zeta) * Complex64::new(s, 0.0);
    let c_tilde_dag = (&zeta - &d_zeta) * Complex64::new(s, 0.0);
    let full = &c_tilde * &c_tilde - &c_tilde_dag * &c_tilde_dag;
    Ok(full.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned())
}

/// Outcome of an operator-identity comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares `q^N` with `q^(-1/2) exp((ε/2)(c̃² - c̃†²))` as matrices at
/// cutoff `D`.
///
/// The left side comes from [`dilation`] on monomials; the right side from
/// the composite generator exponentiated by [`expm`]. Entries grow like
/// `|q|^D`, so the deviation is entrywise relative with a floor of one:
/// `max |L - R| / max(1, |L|)`.
pub fn number_exponential_identity_check(
    cutoff: usize,
    deformation: &Deformation,
    tol: f64,
) -> Result<IdentityReport> {
    if cutoff < 2 {
        return Err(Error::Dimension(cutoff, 2));
    }
    let left = operator_matrix(cutoff, |p| Ok(dilation(p, deformation)))?;
    let half_eps = deformation.epsilon() * 0.5;
    let generator = squeeze_generator_matrix(cutoff)? * half_eps;
    let right = expm(&generator) * (-half_eps).exp();
    let deviation = left
        .iter()
        .zip(right.iter())
        .map(|(l, r)| (l - r).norm() / l.norm().max(1.0))
        .fold(0.0, f64::max);
    Ok(IdentityReport {
        deviation,
        tolerance: tol,
        pass: deviation <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn q(re: f64) -> Deformation {
        Deformation::from_q(c(re)).unwrap()
    }

    #[test]
    fn monomials() {
        assert_eq!(monomial(0, 4).unwrap(), BargmannPoly::from_real(&[1., 0., 0., 0., 0.]));
        assert_eq!(monomial(3, 3).unwrap(), BargmannPoly::from_real(&[0., 0., 0., 1.]));
        assert_eq!(
            monomial(5, 4),
            Err(Error::DegreeOutOfRange { degree: 5, cutoff: 4 })
        );
    }

    #[test]
    fn creation_shifts_and_respects_policy() {
        let strict = OverflowPolicy::Strict;
        assert_eq!(
            apply_creation(&BargmannPoly::from_real(&[1., 0., 0.]), strict).unwrap(),
            BargmannPoly::from_real(&[0., 1., 0.])
        );
        assert_eq!(
            apply_creation(&BargmannPoly::from_real(&[0., 2., 0.]), strict).unwrap(),
            BargmannPoly::from_real(&[0., 0., 2.])
        );
        let top = BargmannPoly::from_real(&[0., 0., 1.]);
        assert_eq!(apply_creation(&top, strict), Err(Error::Overflow { cutoff: 2 }));

        let projected = apply_creation(&top, OverflowPolicy::Project).unwrap();
        assert!(projected.overflowed());
        assert_eq!(projected.coeffs(), BargmannPoly::zeros(2).coeffs());
        // the flag sticks through later operations
        assert!(apply_number(&apply_annihilation(&projected)).overflowed());
    }

    #[test]
    fn annihilation_and_number() {
        assert_eq!(
            apply_annihilation(&BargmannPoly::from_real(&[0., 0., 1.])),
            BargmannPoly::from_real(&[0., 2., 0.])
        );
        assert_eq!(
            apply_annihilation(&BargmannPoly::from_real(&[5., 0.])),
            BargmannPoly::from_real(&[0., 0.])
        );
        assert_eq!(
            apply_annihilation(&monomial(3, 5).unwrap()),
            BargmannPoly::from_real(&[0., 0., 3., 0., 0., 0.])
        );
        assert_eq!(
            apply_number(&BargmannPoly::from_real(&[1., 1., 1.])),
            BargmannPoly::from_real(&[0., 1., 2.])
        );
        assert_eq!(
            apply_number(&BargmannPoly::from_real(&[7., 0., 0.])),
            BargmannPoly::zeros(2)
        );
        assert_eq!(
            apply_number(&monomial(4, 4).unwrap()),
            BargmannPoly::from_real(&[0., 0., 0., 0., 4.])
        );
    }

    #[test]
    fn jackson_derivative() {
        let out = q_derivative(&monomial(2, 3).unwrap(), &q(3.0)).unwrap();
        assert_eq!(out, BargmannPoly::from_real(&[0., 4., 0., 0.]));

        let near_one = q_derivative(&monomial(3, 4).unwrap(), &q(1.0 + 1e-8)).unwrap();
        let classical = BargmannPoly::from_real(&[0., 0., 3., 0., 0.]);
        assert!((&near_one - &classical).max_abs() < 1e-6);

        for qv in [0.5, 2.0, -1.0] {
            let out = q_derivative(&BargmannPoly::from_real(&[2., 0., 0.]), &q(qv)).unwrap();
            assert_eq!(out, BargmannPoly::zeros(2));
        }

        assert_eq!(
            q_derivative(&monomial(1, 2).unwrap(), &q(1.0)),
            Err(Error::DegenerateDeformation)
        );
    }

    #[test]
    fn jackson_derivative_matches_difference_quotient() {
        // evaluate (f(qζ) - f(ζ)) / ((q-1)ζ) directly at a few points
        let p = BargmannPoly::from_coeffs(vec![
            Complex64::new(0.3, -0.1),
            Complex64::new(-0.7, 0.2),
            Complex64::new(0.1, 0.9),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.2, -0.4),
        ]);
        let d = Deformation::from_epsilon(Complex64::new(0.2, 0.7)).unwrap();
        let dq = q_derivative(&p, &d).unwrap();
        for zeta in [Complex64::new(0.4, 0.3), Complex64::new(-1.1, 0.2), c(0.9)] {
            let quotient = (p.eval(d.q() * zeta) - p.eval(zeta)) / ((d.q() - 1.0) * zeta);
            assert!((dq.eval(zeta) - quotient).norm() < 1e-13);
        }
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(
            dilation(&monomial(3, 3).unwrap(), &q(2.0)),
            BargmannPoly::from_real(&[0., 0., 0., 8.])
        );
        let p = BargmannPoly::from_real(&[1.5, -2.0, 0.25]);
        assert_eq!(dilation(&p, &Deformation::identity()), p);
        let i = Deformation::from_q(Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(
            dilation(&BargmannPoly::from_real(&[1., 1.]), &i).coeffs(),
            &[c(1.0), Complex64::new(0.0, 1.0)]
        );
        // f(qζ) at a sample point
        let zeta = Complex64::new(0.3, -0.6);
        let d = Deformation::from_epsilon(Complex64::new(-0.1, 0.4)).unwrap();
        assert!((dilation(&p, &d).eval(zeta) - p.eval(d.q() * zeta)).norm() < 1e-15);
    }

    #[test]
    fn q_commutator_is_dilation() {
        for k in 0..6 {
            let out = q_commutator(&monomial(k, 5).unwrap(), &q(1.7)).unwrap();
            let expected = 1.7f64.powi(k as i32);
            assert!((out.coeffs()[k].re - expected).abs() < 1e-13 * expected);
        }
        let out = q_commutator(&BargmannPoly::from_real(&[1., 1., 1.]), &q(2.0)).unwrap();
        assert_eq!(out, BargmannPoly::from_real(&[1., 2., 4.]));

        let p = BargmannPoly::from_real(&[0.2, -0.5, 0.9, 0.1]);
        let near = q_commutator(&p, &q(1.0 + 1e-9)).unwrap();
        assert!((&near - &p).max_abs() < 1e-6);

        // the top coefficient is allowed to be nonzero: no overflow
        let full = BargmannPoly::from_real(&[0., 0., 1.]);
        assert!(!q_commutator(&full, &q(3.0)).unwrap().overflowed());
    }

    #[test]
    fn ccr_holds_on_interior() {
        let p = BargmannPoly::from_real(&[0.3, -1.2, 2.5, 0.7, 0.0]);
        let aad = apply_annihilation(&apply_creation(&p, OverflowPolicy::Strict).unwrap());
        let ada = apply_creation(&apply_annihilation(&p), OverflowPolicy::Strict).unwrap();
        let comm = &aad - &ada;
        for (x, y) in comm.coeffs().iter().zip(p.coeffs()) {
            assert!((x - y).norm() <= 1e-14 * y.norm().max(1.0));
        }
    }

    #[test]
    fn number_operator_from_squeeze_generator() {
        for cutoff in [2, 7, 20] {
            let m = squeeze_generator_matrix(cutoff).unwrap();
            let lhs = m * c(0.5) - DMatrix::identity(cutoff + 1, cutoff + 1) * c(0.5);
            let number = operator_matrix(cutoff, |p| Ok(apply_number(p))).unwrap();
            let dev = (lhs - number).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev <= 1e-14, "cutoff {cutoff}: {dev}");
        }
    }

    #[test]
    fn generator_identity_examples() {
        let r = number_exponential_identity_check(8, &Deformation::from_real_epsilon(0.3).unwrap(), 1e-10)
            .unwrap();
        assert!(r.pass, "{r:?}");
        let r = number_exponential_identity_check(5, &Deformation::identity(), 1e-10).unwrap();
        assert_eq!(r.deviation, 0.0);
        let d = Deformation::from_epsilon(Complex64::new(0.0, 0.1)).unwrap();
        let r = number_exponential_identity_check(16, &d, 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(
            number_exponential_identity_check(1, &d, 1e-10),
            Err(Error::Dimension(1, 2))
        );
    }
}

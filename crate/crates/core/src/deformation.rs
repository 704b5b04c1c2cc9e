//! The deformation label shared by every representation in the crate.
//!
//! A deformation is carried as the triple `(epsilon, q, rho)` with
//! `q = exp(epsilon)` and `rho = 1/q = exp(-epsilon)`. Any one of the three
//! determines the other two; the constructors below derive them so the
//! triple is always consistent.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    epsilon: Complex64,
    q: Complex64,
    rho: Complex64,
}

impl Deformation {
    pub fn from_epsilon(epsilon: Complex64) -> Result<Self> {
        if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let q = epsilon.exp();
        let rho = (-epsilon).exp();
        Ok(Self { epsilon, q, rho })
    }

    pub fn from_real_epsilon(epsilon: f64) -> Result<Self> {
        Self::from_epsilon(Complex64::new(epsilon, 0.0))
    }

    /// Uses the principal branch of the logarithm for `epsilon`.
    pub fn from_q(q: Complex64) -> Result<Self> {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if q == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroQ);
        }
        Ok(Self {
            epsilon: q.ln(),
            q,
            rho: q.inv(),
        })
    }

    pub fn from_rho(rho: Complex64) -> Result<Self> {
        if !(rho.re.is_finite() && rho.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if rho == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularScaling);
        }
        Ok(Self {
            epsilon: -rho.ln(),
            q: rho.inv(),
            rho,
        })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            epsilon: Complex64::new(0.0, 0.0),
            q: one,
            rho: one,
        }
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn rho(&self) -> Complex64 {
        self.rho
    }

    /// True when `q == 1` exactly, where the q-derivative is undefined.
    pub fn is_degenerate(&self) -> bool {
        self.q == Complex64::new(1.0, 0.0)
    }

    pub fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateDeformation)
        } else {
            Ok(())
        }
    }

    /// Real epsilon, for the operations that only make sense on the real line.
    pub fn real_epsilon(&self) -> Result<f64> {
        if self.epsilon.im != 0.0 {
            return Err(Error::RealParameterRequired(self.epsilon.im));
        }
        Ok(self.epsilon.re)
    }

    /// The q-number `[k]_q = (q^k - 1)/(q - 1)`.
    ///
    /// Near `q = 1` the quotient loses digits to cancellation, so for
    /// `|q - 1| < 1e-3` the geometric sum `1 + q + ... + q^(k-1)` is used.
    /// At `q = 1` exactly the sum gives the classical value `k`.
    pub fn q_number(&self, k: usize) -> Complex64 {
        let q = self.q;
        let one = Complex64::new(1.0, 0.0);
        if (q - one).norm() < 1e-3 {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut power = one;
            for _ in 0..k {
                sum += power;
                power *= q;
            }
            sum
        } else {
            (q.powu(k as u32) - one) / (q - one)
        }
    }
}

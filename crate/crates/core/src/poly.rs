//! Dense univariate polynomials with complex coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative magnitude under which a leading coefficient is treated as zero.
pub const DEGREE_TOLERANCE: f64 = 1e-9;

/// `coeffs[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `Π (1 − x_i z)`
    pub fn from_reciprocal_roots(xs: &[Complex64]) -> Self {
        xs.iter().fold(Self::one(), |acc, x| {
            acc.mul(&Self::new(vec![Complex64::new(1.0, 0.0), -x]))
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Index of the last coefficient whose magnitude exceeds `tol` times the
    /// largest coefficient magnitude; `None` stands for the zero polynomial.
    pub fn degree_with(&self, tol: f64) -> Option<usize> {
        let max = self.max_abs();
        if max == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > tol * max)
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree_with(DEGREE_TOLERANCE)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Keeps the first `len` coefficients, i.e. reduces modulo `z^len`.
    pub fn truncated(mut self, len: usize) -> Self {
        self.coeffs.truncate(len);
        self
    }

    /// Drops leading coefficients at or below the absolute threshold `floor`.
    pub fn trimmed_abs(mut self, floor: f64) -> Self {
        while self.coeffs.last().is_some_and(|c| c.norm() <= floor) {
            self.coeffs.pop();
        }
        self
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Product truncated modulo `z^len`.
    pub fn mul_mod(&self, other: &Self, len: usize) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Euclidean division `self = q·divisor + rem` with `deg rem < deg divisor`.
    ///
    /// The divisor's degree is read with [`DEGREE_TOLERANCE`]; coefficients
    /// above it are ignored.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::DivideByZeroPoly)?;
        Ok(self.divmod_by_lead(&divisor.coeffs[..=dd]))
    }

    /// Long division by `divisor`, whose last entry is taken as the leading
    /// coefficient and must be non-zero.
    pub(crate) fn divmod_by_lead(&self, divisor: &[Complex64]) -> (Self, Self) {
        let dd = divisor.len() - 1;
        let lead = divisor[dd];
        let mut rem: Vec<Complex64> = self.coeffs.clone();
        let top = match rem.iter().rposition(|c| c.norm() > 0.0) {
            Some(t) if t >= dd => t,
            _ => {
                rem.truncate(dd);
                return (Self::zero(), Self::new(rem));
            }
        };
        let mut quot = vec![Complex64::new(0.0, 0.0); top - dd + 1];
        for k in (dd..=top).rev() {
            let q = rem[k] / lead;
            quot[k - dd] = q;
            rem[k] = Complex64::new(0.0, 0.0);
            for i in 0..dd {
                rem[k - dd + i] -= q * divisor[i];
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }
}

pub fn poly_eval(p: &Polynomial, z: Complex64) -> Complex64 {
    p.eval(z)
}

pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.mul(b)
}

pub fn poly_divmod(a: &Polynomial, b: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    a.divmod(b)
}

pub fn poly_derivative(p: &Polynomial) -> Polynomial {
    p.derivative()
}

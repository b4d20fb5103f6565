//! Double-double complex arithmetic for the decoder's inner loops.
//!
//! The Euclidean recursion on `(z^N, S₁)` behaves like an LU factorisation
//! of a Hankel matrix whose condition number grows quickly with `N`. Working
//! in ~32 significant digits keeps rounding inside the recursion well below
//! the error already present in double-precision input, so the locator is
//! as accurate as the data allows.

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

pub(crate) type Cw = Complex<TwoFloat>;

pub(crate) fn widen(z: Complex64) -> Cw {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

pub(crate) fn narrow(z: Cw) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

pub(crate) fn zero() -> Cw {
    Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0))
}

pub(crate) fn one() -> Cw {
    Complex::new(TwoFloat::from(1.0), TwoFloat::from(0.0))
}

pub(crate) fn abs(z: Cw) -> f64 {
    narrow(z).norm()
}

pub(crate) fn is_finite(z: Cw) -> bool {
    z.re.hi().is_finite() && z.im.hi().is_finite()
}

/// Polynomial with double-double coefficients, `c[k]` multiplying `z^k`.
#[derive(Debug, Clone, Default)]
pub(crate) struct WidePoly(pub(crate) Vec<Cw>);

impl WidePoly {
    pub(crate) fn from_f64(cs: &[Complex64]) -> Self {
        Self(cs.iter().copied().map(widen).collect())
    }

    pub(crate) fn to_f64(&self) -> Vec<Complex64> {
        self.0.iter().copied().map(narrow).collect()
    }

    pub(crate) fn monomial(k: usize) -> Self {
        let mut c = vec![zero(); k + 1];
        c[k] = one();
        Self(c)
    }

    pub(crate) fn len(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn coeff(&self, k: usize) -> Cw {
        self.0.get(k).copied().unwrap_or_else(zero)
    }

    pub(crate) fn max_abs(&self) -> f64 {
        self.0.iter().map(|&c| abs(c)).fold(0.0, f64::max)
    }

    pub(crate) fn trimmed_abs(mut self, floor: f64) -> Self {
        while self.0.last().is_some_and(|&c| abs(c) <= floor) {
            self.0.pop();
        }
        self
    }

    pub(crate) fn eval(&self, z: Cw) -> Cw {
        self.0.iter().rev().fold(zero(), |acc, &c| acc * z + c)
    }

    /// `(σ(z), σ'(z))` by a single Horner pass.
    pub(crate) fn eval_with_derivative(&self, z: Cw) -> (Cw, Cw) {
        let mut p = zero();
        let mut dp = zero();
        for &c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Polishes `guesses` (one per root, `guesses.len() == deg`) into the
    /// roots of `self` with simultaneous Weierstrass (Durand–Kerner) steps.
    pub(crate) fn roots_from(&self, mut z: Vec<Cw>, max_iter: usize) -> Vec<Cw> {
        let lead = match self.0.last() {
            Some(&c) if abs(c) > 0.0 => c,
            _ => return z,
        };
        for _ in 0..max_iter {
            let mut largest = 0.0f64;
            for k in 0..z.len() {
                let denom = z
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .fold(lead, |acc, (_, &zj)| acc * (z[k] - zj));
                if abs(denom) == 0.0 {
                    continue;
                }
                let step = self.eval(z[k]) / denom;
                if !is_finite(step) {
                    continue;
                }
                z[k] -= step;
                largest = largest.max(abs(step) / abs(z[k]).max(f64::MIN_POSITIVE));
            }
            if largest < 1e-28 {
                break;
            }
        }
        z
    }

    pub(crate) fn scale(&self, s: Cw) -> Self {
        Self(self.0.iter().map(|&c| c * s).collect())
    }

    /// `self − a·b`
    pub(crate) fn sub_mul(&self, a: &Self, b: &Self) -> Self {
        let prod = if a.0.is_empty() || b.0.is_empty() { 0 } else { a.len() + b.len() - 1 };
        let mut out = self.0.clone();
        out.resize(out.len().max(prod), zero());
        for (i, &x) in a.0.iter().enumerate() {
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] -= x * y;
            }
        }
        Self(out)
    }

    /// Long division by a divisor whose last entry is its non-zero leading
    /// coefficient.
    pub(crate) fn divmod_by_lead(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.len() - 1;
        let lead_inv = one() / divisor.0[dd];
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Self::default(), Self(rem));
        }
        let top = rem.len() - 1;
        let mut quot = vec![zero(); top - dd + 1];
        for k in (dd..=top).rev() {
            let q = rem[k] * lead_inv;
            quot[k - dd] = q;
            rem[k] = zero();
            for i in 0..dd {
                rem[k - dd + i] -= q * divisor.0[i];
            }
        }
        rem.truncate(dd);
        (Self(quot), Self(rem))
    }
}

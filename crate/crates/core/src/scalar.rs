//! Scalar arithmetic for the whole workbench.
//!
//! Everything algebraic (Clifford coefficients, polynomial coefficients, matrix
//! entries) is generic over [`Scalar`], which has exactly two instantiations:
//!
//! * [`Exact`] — Gaussian rationals, i.e. complex numbers with `BigRational`
//!   real and imaginary parts.  All constructions in this crate (gamma matrices
//!   with entries in {0, ±1, ±i}, harmonic projections, operator matrices) stay
//!   inside this field, so identities can be checked with zero tolerance.
//! * [`C64`] — `Complex<f64>`, the floating fallback used for big sweeps and
//!   for anything inherently numeric (eigenvalue extraction, random sampling).
//!
//! Checks pick their threshold through [`Scalar::tol`]: exact mode demands an
//! exactly zero residual, float mode uses the documented tolerance.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex double — the floating scalar.
pub type C64 = Complex<f64>;

/// Gaussian rational — the exact scalar.
pub type Exact = Complex<BigRational>;

/// Computation mode tag, carried into every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

/// Field operations shared by the exact and floating scalars.
///
/// Methods take references so the `BigRational` instantiation avoids clones in
/// hot loops; `C64` copies are free either way.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_int(v: i64) -> Self;
    /// Exact rational `n/d`; `d` must be nonzero.
    fn from_ratio(n: i64, d: i64) -> Self;
    fn from_big_rational(r: &BigRational) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Field division; caller guarantees `o != 0`.
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> C64;

    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }

    /// Complex magnitude as `f64`, the residual currency of every check.
    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Mode-aware threshold: float checks use `float_tol`, exact checks use 0.
    fn tol(float_tol: f64) -> f64 {
        match Self::MODE {
            Mode::Exact => 0.0,
            Mode::Float => float_tol,
        }
    }
}

impl Scalar for C64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex::new(0.0, 1.0)
    }
    fn from_int(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Complex::new(n as f64 / d as f64, 0.0)
    }
    fn from_big_rational(r: &BigRational) -> Self {
        Complex::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

fn big_ratio(n: i64, d: i64) -> BigRational {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for Exact {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn from_int(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Complex::new(big_ratio(n, d), BigRational::zero())
    }
    fn from_big_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn to_c64(&self) -> C64 {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn abs(&self) -> f64 {
        // Avoid the sqrt of a possibly imprecise conversion when one part is zero.
        if self.im.is_zero() {
            self.re.abs().to_f64().unwrap_or(f64::NAN)
        } else if self.re.is_zero() {
            self.im.abs().to_f64().unwrap_or(f64::NAN)
        } else {
            self.to_c64().norm()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_exact() {
        let a = Exact::from_ratio(1, 3);
        let b = Exact::from_ratio(1, 6);
        let s = a.add(&b);
        assert_eq!(s, Exact::from_ratio(1, 2));
        let p = Exact::i().mul(&Exact::i());
        assert_eq!(p, Exact::from_int(-1));
        assert!(Scalar::is_zero(&Exact::from_int(7).sub(&Exact::from_int(7))));
    }

    #[test]
    fn division_round_trips() {
        let a = Exact::from_ratio(3, 7).add(&Exact::i().mul(&Exact::from_ratio(2, 5)));
        let b = Exact::from_ratio(-4, 9).add(&Exact::i().mul(&Exact::from_int(3)));
        let q = a.div(&b);
        assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn mode_thresholds() {
        assert_eq!(<Exact as Scalar>::tol(1e-12), 0.0);
        assert_eq!(<C64 as Scalar>::tol(1e-12), 1e-12);
    }

    #[test]
    fn conjugation() {
        let z = C64::new(1.5, -2.5);
        assert_eq!(Scalar::conj(&z), C64::new(1.5, 2.5));
        let w = Exact::i();
        assert_eq!(Scalar::conj(&w), Exact::i().neg());
    }
}

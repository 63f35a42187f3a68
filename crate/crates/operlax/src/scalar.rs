//! Dual arithmetic backends: complex `f64` (default) and exact complex
//! rationals (oracle mode). Everything downstream is generic over [`Scalar`].

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact complex rational: re and im are arbitrary-precision rationals.
pub type CQ = num_complex::Complex<BigRational>;

/// Complex double precision.
pub type C64 = Complex64;

/// The scalar field the whole library is generic over.
///
/// `EXACT` discriminates the closed rational backend from floating point;
/// tolerance-based code branches on it (exact mode never rounds, so "small"
/// means identically zero).
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    /// Exact conversion (every f64 is a rational).
    fn from_c64(v: C64) -> Self;
    fn to_c64(&self) -> C64;
    /// Modulus, as f64 (approximate in exact mode; used for pivoting and
    /// tolerance checks only).
    fn abs(&self) -> f64;
    fn conj_s(&self) -> Self;
    /// View as the exact backend value; None on the floating backend.
    fn to_exact(&self) -> Option<CQ> {
        None
    }
    /// Build from an exact value; None on the floating backend.
    fn from_exact(_v: CQ) -> Option<Self> {
        None
    }
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        C64::new(num as f64 / den as f64, 0.0)
    }
    fn from_c64(v: C64) -> Self {
        v
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn abs(&self) -> f64 {
        self.norm()
    }
    fn conj_s(&self) -> Self {
        self.conj()
    }
}

fn big_ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through a quotient of f64-sized chunks
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

impl Scalar for CQ {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        CQ::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn from_c64(v: C64) -> Self {
        let part = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        CQ::new(part(v.re), part(v.im))
    }
    fn to_c64(&self) -> C64 {
        C64::new(big_ratio_to_f64(&self.re), big_ratio_to_f64(&self.im))
    }
    fn abs(&self) -> f64 {
        let n = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        big_ratio_to_f64(&n).sqrt()
    }
    fn conj_s(&self) -> Self {
        CQ::new(self.re.clone(), -self.im.clone())
    }
    fn to_exact(&self) -> Option<CQ> {
        Some(self.clone())
    }
    fn from_exact(v: CQ) -> Option<Self> {
        Some(v)
    }
}

/// Rational square root, when it exists. Used by the exact quadratic solver.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &ns * &ns == *r.numer() && &ds * &ds == *r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let x = CQ::from_ratio(2, 5);
        let y = CQ::from_ratio(3, 7);
        let z = x.clone() * y.clone() + y.clone();
        assert_eq!(z, CQ::from_ratio(3, 5));
        assert!((z.to_c64() - C64::new(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn from_c64_is_exact_for_dyadics() {
        let v = C64::new(0.375, -2.5);
        let q = CQ::from_c64(v);
        assert_eq!(q.to_c64(), v);
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        let r = BigRational::new(BigInt::from(49), BigInt::from(16));
        assert_eq!(
            rational_sqrt(&r),
            Some(BigRational::new(BigInt::from(7), BigInt::from(4)))
        );
        assert_eq!(rational_sqrt(&BigRational::new(BigInt::from(2), BigInt::from(1))), None);
    }
}

//! Dense univariate complex polynomials, ascending coefficients.
//!
//! The carrier type for sections, singularity polynomials, Q-polynomials and
//! determinants. Trimming keeps the leading stored coefficient nonzero; in
//! floating mode coefficients below `TRIM_REL * max|c|` are treated as zero
//! so determinant cancellations yield clean degrees.

use crate::error::{Error, Result};
use crate::roots::roots_c64;
use crate::scalar::{rational_sqrt, Scalar, C64, CQ};
use num_traits::Zero;
use std::ops::{Add, Mul, Neg, Sub};

pub const TRIM_REL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    /// The monomial z.
    pub fn var() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    /// z - root.
    pub fn linear(root: S) -> Self {
        Poly::new(vec![-root, S::one()])
    }

    pub fn from_roots(roots: &[S]) -> Self {
        let mut p = Poly::one();
        for r in roots {
            p = &p * &Poly::linear(r.clone());
        }
        p
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of z^k (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    fn trim(&mut self) {
        if S::EXACT {
            while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
                self.coeffs.pop();
            }
        } else {
            let max = self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
            let tol = TRIM_REL * max;
            while matches!(self.coeffs.last(), Some(c) if c.abs() <= tol) {
                self.coeffs.pop();
            }
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Monic normalization; returns (monic, leading coefficient).
    pub fn monic(&self) -> (Self, S) {
        if self.is_zero() {
            return (Poly::zero(), S::zero());
        }
        let lc = self.leading();
        (self.scale(&lc.clone().recip()), lc)
    }

    /// p(q z): coefficient k picks up q^k.
    pub fn shift_q(&self, q: &S) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut pw = S::one();
        for c in &self.coeffs {
            out.push(c.clone() * pw.clone());
            pw = pw * q.clone();
        }
        Poly::new(out)
    }

    /// p(z + eps), by binomial reindexing (coefficient-exact).
    pub fn shift_eps(&self, eps: &S) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![S::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            // c * (z + eps)^k = c * sum_j C(k,j) eps^{k-j} z^j
            let mut binom = S::one(); // C(k, k)
            let mut epspow = S::one();
            out[k] = out[k].clone() + c.clone();
            for j in (0..k).rev() {
                binom = binom * S::from_int((j + 1) as i64) / S::from_int((k - j) as i64);
                epspow = epspow * eps.clone();
                out[j] = out[j].clone() + c.clone() * binom.clone() * epspow.clone();
            }
        }
        Poly::new(out)
    }

    /// d/dz.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * S::from_int((i + 1) as i64))
                .collect(),
        )
    }

    /// z * d/dz (degree-preserving on monomials).
    pub fn euler_derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * S::from_int(i as i64))
                .collect(),
        )
    }

    /// Exact division; errors if the remainder is above tolerance.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        let rnorm = r.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
        let scale = self.coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
        let ok = if S::EXACT {
            r.is_zero()
        } else {
            rnorm <= 1e-9 * scale
        };
        if ok {
            Ok(q)
        } else {
            Err(Error::DivisionNotExact {
                remainder: rnorm / scale,
            })
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lc = d.leading();
        let mut quo = vec![S::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone() / lc.clone();
            quo[k - dd] = c.clone();
            for j in 0..=dd {
                let idx = k - dd + j;
                rem[idx] = rem[idx].clone() - c.clone() * d.coeffs[j].clone();
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    /// All complex roots with multiplicity.
    ///
    /// Floating mode: companion-matrix eigenvalues refined by Newton polish.
    /// Exact mode: closed form for degree <= 2 when the discriminant is a
    /// rational square; otherwise falls back to the floating path and maps
    /// the results back exactly (every f64 is rational).
    pub fn roots(&self) -> Result<Vec<S>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let deg = self.degree().unwrap();
        if deg == 0 {
            return Ok(vec![]);
        }
        if S::EXACT {
            if let Some(rs) = self.exact_low_degree_roots() {
                return Ok(rs);
            }
        }
        let cs: Vec<C64> = self.coeffs.iter().map(|c| c.to_c64()).collect();
        let rs = roots_c64(&cs)?;
        Ok(rs.into_iter().map(S::from_c64).collect())
    }

    /// None when no exact closed form applies.
    fn exact_low_degree_roots(&self) -> Option<Vec<S>> {
        let deg = self.degree()?;
        match deg {
            1 => Some(vec![-(self.coeff(0) / self.coeff(1))]),
            2 => exact_quadratic(self),
            _ => None,
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// Exact quadratic solver: closed form when the discriminant is a real
/// rational square; None otherwise (caller falls back to floating).
fn exact_quadratic<S: Scalar>(p: &Poly<S>) -> Option<Vec<S>> {
    let a = p.coeff(2).to_exact()?;
    let b = p.coeff(1).to_exact()?;
    let c = p.coeff(0).to_exact()?;
    let four = CQ::from_ratio(4, 1);
    let disc = b.clone() * b.clone() - four * a.clone() * c;
    if !disc.im.is_zero() {
        return None;
    }
    let sq = CQ::new(rational_sqrt(&disc.re)?, num_rational::BigRational::zero());
    let two_a = CQ::from_ratio(2, 1) * a;
    let r1 = (-b.clone() + sq.clone()) / two_a.clone();
    let r2 = (-b - sq) / two_a;
    Some(vec![S::from_exact(r1)?, S::from_exact(r2)?])
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Elementary symmetric polynomial e_k of the values; e_0 = 1.
pub fn elem_sym<S: Scalar>(values: &[S], k: usize) -> Result<S> {
    if k > values.len() {
        return Err(Error::IndexOutOfRange {
            what: "k",
            got: k,
            limit: values.len(),
        });
    }
    // dp over prefix products
    let mut e = vec![S::zero(); k + 1];
    e[0] = S::one();
    for v in values {
        for j in (1..=k).rev() {
            e[j] = e[j].clone() + v.clone() * e[j - 1].clone();
        }
    }
    Ok(e[k].clone())
}

/// e_k of the list with entry j removed (1-based j).
pub fn partial_sym<S: Scalar>(values: &[S], k: usize, j: usize) -> Result<S> {
    if j == 0 || j > values.len() {
        return Err(Error::IndexOutOfRange {
            what: "j",
            got: j,
            limit: values.len(),
        });
    }
    let rest: Vec<S> = values
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j - 1)
        .map(|(_, v)| v.clone())
        .collect();
    elem_sym(&rest, k)
}

//! The four shift/derivative calculi of the duality diamond and their step
//! operators acting on polynomials.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Which calculus is active, with its parameter.
///
/// Each corner fixes one step operator on polynomials:
/// `QMult`: p(z) -> p(qz); `EpsAdd`: p(z) -> p(z+eps);
/// `RatDiff`: p -> p' + gamma p; `TrigDiff`: p -> z p' + gamma p.
#[derive(Clone, Debug, PartialEq)]
pub enum Corner<S: Scalar> {
    QMult { q: S },
    EpsAdd { eps: S },
    RatDiff,
    TrigDiff,
}

impl<S: Scalar> Corner<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Corner::QMult { .. } => "q",
            Corner::EpsAdd { .. } => "eps",
            Corner::RatDiff => "rat",
            Corner::TrigDiff => "trig",
        }
    }

    pub fn is_shift(&self) -> bool {
        matches!(self, Corner::QMult { .. } | Corner::EpsAdd { .. })
    }

    pub fn q_mult(q: S) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Invalid("q must be nonzero".into()));
        }
        Ok(Corner::QMult { q })
    }

    /// p(qz) or p(z+eps); rejects differential corners.
    pub fn shift(&self, p: &Poly<S>) -> Result<Poly<S>> {
        self.shift_pow(p, 1)
    }

    /// sigma^k for k possibly negative (shift corners only).
    pub fn shift_pow(&self, p: &Poly<S>, k: i64) -> Result<Poly<S>> {
        match self {
            Corner::QMult { q } => {
                let factor = if k >= 0 {
                    q.powi(k as u32)
                } else {
                    q.recip().powi((-k) as u32)
                };
                Ok(p.shift_q(&factor))
            }
            Corner::EpsAdd { eps } => {
                let step = eps.clone() * S::from_int(k);
                Ok(p.shift_eps(&step))
            }
            c => Err(Error::NoShift(c.name())),
        }
    }

    /// The twisted derivative (d/dz + gamma) p resp. (z d/dz + gamma) p;
    /// rejects shift corners.
    pub fn twisted_derivative(&self, p: &Poly<S>, gamma: &S) -> Result<Poly<S>> {
        match self {
            Corner::RatDiff => Ok(&p.derivative() + &p.scale(gamma)),
            Corner::TrigDiff => Ok(&p.euler_derivative() + &p.scale(gamma)),
            c => Err(Error::NoDerivative(c.name())),
        }
    }

    /// One application of the corner's step operator sigma_gamma:
    /// for shift corners just sigma (the twist power is applied by minor
    /// builders), for differential corners the twisted derivative.
    pub fn step(&self, p: &Poly<S>, gamma: &S) -> Poly<S> {
        match self {
            Corner::QMult { .. } | Corner::EpsAdd { .. } => self.shift(p).expect("shift corner"),
            Corner::RatDiff | Corner::TrigDiff => {
                self.twisted_derivative(p, gamma).expect("diff corner")
            }
        }
    }

    /// Vandermonde base for a twist entry: q-rescaled xi^k columns use base
    /// pairs (scale q, xi); trig uses (1, 1+gamma).
    pub fn vdm_base(&self, twist: &S) -> S {
        match self {
            Corner::TrigDiff => S::one() + twist.clone(),
            _ => twist.clone(),
        }
    }

    /// Column rescale held by the Vandermonde (q^k for QMult, else 1).
    pub fn vdm_scale(&self) -> S {
        match self {
            Corner::QMult { q } => q.clone(),
            _ => S::one(),
        }
    }

    /// Are u, v corner-distinct? Shift corners test the sigma-orbit within
    /// `window` steps (q^n u vs v, u + n eps vs v); differential corners test
    /// plain distinctness. `tol` is the floating comparison tolerance.
    pub fn orbit_distinct(&self, u: &S, v: &S, window: i64, tol: f64) -> bool {
        match self {
            Corner::QMult { q } => {
                for n in -window..=window {
                    let shifted = if n >= 0 {
                        u.clone() * q.powi(n as u32)
                    } else {
                        u.clone() * q.recip().powi((-n) as u32)
                    };
                    if close(&shifted, v, tol) {
                        return false;
                    }
                }
                true
            }
            Corner::EpsAdd { eps } => {
                for n in -window..=window {
                    let shifted = u.clone() + eps.clone() * S::from_int(n);
                    if close(&shifted, v, tol) {
                        return false;
                    }
                }
                true
            }
            _ => !close(u, v, tol),
        }
    }
}

fn close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    if S::EXACT {
        a == b
    } else {
        (a.clone() - b.clone()).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }
}

//! The four many-body Lax matrices and their Hamiltonians (characteristic
//! polynomial coefficients with the e_k(spectrum) sign convention).

use crate::error::{Error, Result};
use crate::matrix::{eigenvalues, Mat};
use crate::poly::elem_sym;
use crate::scalar::Scalar;
use crate::wronskian::check_distinct;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelTag {
    Trs,
    Tcm,
    Rrs,
    Rcm,
}

impl ModelTag {
    pub fn name(&self) -> &'static str {
        match self {
            ModelTag::Trs => "tRS",
            ModelTag::Tcm => "tCM",
            ModelTag::Rrs => "rRS",
            ModelTag::Rcm => "rCM",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LaxModel<S: Scalar> {
    pub tag: ModelTag,
    pub matrix: Mat<S>,
    /// Corner parameter (q or eps); rCM has none.
    pub parameter: Option<S>,
    pub twist: Vec<S>,
    pub momenta: Vec<S>,
    /// Non-fatal degeneracy notices (e.g. q^{-1} xi_i = xi_j).
    pub warnings: Vec<String>,
}

fn validated<S: Scalar>(twist: &[S], momenta: &[S]) -> Result<()> {
    if twist.len() != momenta.len() {
        return Err(Error::LengthMismatch {
            expected: twist.len(),
            got: momenta.len(),
        });
    }
    check_distinct(twist)
}

/// tRS Lax: T_ij = p_i prod_{m != j}(q^{-1} xi_i - xi_m) / prod_{l != j}(xi_j - xi_l).
pub fn lax_trs<S: Scalar>(q: &S, twist: &[S], momenta: &[S]) -> Result<LaxModel<S>> {
    if q.is_zero() {
        return Err(Error::Invalid("q must be nonzero".into()));
    }
    validated(twist, momenta)?;
    let n = twist.len();
    let qinv = q.clone().recip();
    let mut warnings = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (qinv.clone() * twist[i].clone() - twist[j].clone()).abs()
                <= 1e-12 * (1.0 + twist[i].abs())
            {
                warnings.push(format!("degeneracy: q^-1 xi_{} = xi_{}", i + 1, j + 1));
            }
        }
    }
    let m = Mat::from_fn(n, n, |i, j| {
        let mut num = momenta[i].clone();
        for k in 0..n {
            if k != j {
                num = num * (qinv.clone() * twist[i].clone() - twist[k].clone());
            }
        }
        let mut den = S::one();
        for l in 0..n {
            if l != j {
                den = den * (twist[j].clone() - twist[l].clone());
            }
        }
        num / den
    });
    Ok(LaxModel {
        tag: ModelTag::Trs,
        matrix: m,
        parameter: Some(q.clone()),
        twist: twist.to_vec(),
        momenta: momenta.to_vec(),
        warnings,
    })
}

/// tCM Lax: m_ii = p_i - eps xi_i sum_{k != i} 1/(xi_i - xi_k),
/// m_ij = eps xi_i/(xi_i - xi_j) * prod_{k != i}(xi_i - xi_k)/prod_{k != j}(xi_j - xi_k).
pub fn lax_tcm<S: Scalar>(eps: &S, twist: &[S], momenta: &[S]) -> Result<LaxModel<S>> {
    validated(twist, momenta)?;
    let n = twist.len();
    let w = |i: usize| -> S {
        let mut acc = S::one();
        for k in 0..n {
            if k != i {
                acc = acc * (twist[i].clone() - twist[k].clone());
            }
        }
        acc
    };
    let m = Mat::from_fn(n, n, |i, j| {
        if i == j {
            let mut s = S::zero();
            for k in 0..n {
                if k != i {
                    s = s + (twist[i].clone() - twist[k].clone()).recip();
                }
            }
            momenta[i].clone() - eps.clone() * twist[i].clone() * s
        } else {
            eps.clone() * twist[i].clone()
                / (twist[i].clone() - twist[j].clone())
                * w(i)
                / w(j)
        }
    });
    Ok(LaxModel {
        tag: ModelTag::Tcm,
        matrix: m,
        parameter: Some(eps.clone()),
        twist: twist.to_vec(),
        momenta: momenta.to_vec(),
        warnings: Vec::new(),
    })
}

/// rRS Lax. Default form has denominator prod_{k != i}(gamma_i - gamma_k);
/// `variant` switches to prod_{l != j}(gamma_j - gamma_l). The two are
/// diagonal-conjugate, hence isospectral.
pub fn lax_rrs<S: Scalar>(
    eps: &S,
    twist: &[S],
    momenta: &[S],
    variant: bool,
) -> Result<LaxModel<S>> {
    validated(twist, momenta)?;
    let n = twist.len();
    let m = Mat::from_fn(n, n, |i, j| {
        let mut num = momenta[i].clone();
        for k in 0..n {
            if k != j {
                num = num * (twist[i].clone() - twist[k].clone() - eps.clone());
            }
        }
        let mut den = S::one();
        let d = if variant { j } else { i };
        for l in 0..n {
            if l != d {
                den = den * (twist[d].clone() - twist[l].clone());
            }
        }
        num / den
    });
    Ok(LaxModel {
        tag: ModelTag::Rrs,
        matrix: m,
        parameter: Some(eps.clone()),
        twist: twist.to_vec(),
        momenta: momenta.to_vec(),
        warnings: Vec::new(),
    })
}

/// rCM Lax: t_ii = p_i - sum_{j != i} 1/(gamma_i - gamma_j),
/// t_ij = 1/(gamma_i - gamma_j) * prod_{k != i}(gamma_i - gamma_k)/prod_{l != j}(gamma_j - gamma_l).
pub fn lax_rcm<S: Scalar>(twist: &[S], momenta: &[S]) -> Result<LaxModel<S>> {
    validated(twist, momenta)?;
    let n = twist.len();
    let w = |i: usize| -> S {
        let mut acc = S::one();
        for k in 0..n {
            if k != i {
                acc = acc * (twist[i].clone() - twist[k].clone());
            }
        }
        acc
    };
    let m = Mat::from_fn(n, n, |i, j| {
        if i == j {
            let mut s = S::zero();
            for k in 0..n {
                if k != i {
                    s = s + (twist[i].clone() - twist[k].clone()).recip();
                }
            }
            momenta[i].clone() - s
        } else {
            (twist[i].clone() - twist[j].clone()).recip() * w(i) / w(j)
        }
    });
    Ok(LaxModel {
        tag: ModelTag::Rcm,
        matrix: m,
        parameter: None,
        twist: twist.to_vec(),
        momenta: momenta.to_vec(),
        warnings: Vec::new(),
    })
}

/// Hamiltonians H_1..H_N: e_k of the spectrum, from the characteristic
/// polynomial by Faddeev-LeVerrier.
pub fn hamiltonians<S: Scalar>(model: &LaxModel<S>) -> Result<Vec<S>> {
    model.matrix.sym_of_spectrum()
}

/// Floating-mode cross-check: Faddeev-LeVerrier coefficients against
/// e_k(eigenvalues). Returns (hamiltonians, max deviation).
pub fn hamiltonians_checked<S: Scalar>(model: &LaxModel<S>) -> Result<(Vec<S>, f64)> {
    let h = hamiltonians(model)?;
    let eigs = eigenvalues(&model.matrix.to_c64())?;
    let mut dev = 0.0f64;
    for (k, hk) in h.iter().enumerate() {
        let ek = elem_sym(&eigs, k + 1)?;
        dev = dev.max((hk.to_c64() - ek).norm() / (1.0 + ek.norm()));
    }
    Ok((h, dev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    fn cn(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trs_worked_examples() {
        // N = 1 reduction
        let l = lax_trs(&cn(2.0), &[cn(1.5)], &[cn(0.7)]).unwrap();
        assert!((l.matrix[(0, 0)] - cn(0.7)).norm() < 1e-14);
        assert!((hamiltonians(&l).unwrap()[0] - cn(0.7)).norm() < 1e-14);
        // q=2, xi=(1,3), p=(1,1) -> [[5/4, -1/4], [3/4, 1/4]]
        let l = lax_trs(&cn(2.0), &[cn(1.0), cn(3.0)], &[cn(1.0), cn(1.0)]).unwrap();
        for (idx, want) in [
            ((0, 0), 1.25),
            ((0, 1), -0.25),
            ((1, 0), 0.75),
            ((1, 1), 0.25),
        ] {
            assert!((l.matrix[idx] - cn(want)).norm() < 1e-13, "{idx:?}");
        }
        // q=2, xi=(1,3), p=(2/5,10): trace 3, det 2 (e_k of a = (1,2))
        let l = lax_trs(&cn(2.0), &[cn(1.0), cn(3.0)], &[cn(0.4), cn(10.0)]).unwrap();
        let h = hamiltonians(&l).unwrap();
        assert!((h[0] - cn(3.0)).norm() < 1e-12);
        assert!((h[1] - cn(2.0)).norm() < 1e-12);
        // degeneracy warning when q^{-1} xi_i = xi_j: q = 1/3, xi = (1, 3)
        let l = lax_trs(&cn(3.0), &[cn(1.0), cn(3.0)], &[cn(1.0), cn(1.0)]).unwrap();
        assert!(!l.warnings.is_empty());
    }

    #[test]
    fn tcm_worked_examples() {
        let l = lax_tcm(&cn(1.0), &[cn(1.0), cn(3.0)], &[cn(0.0), cn(0.0)]).unwrap();
        for (idx, want) in [
            ((0, 0), 0.5),
            ((0, 1), 0.5),
            ((1, 0), -1.5),
            ((1, 1), -1.5),
        ] {
            assert!((l.matrix[idx] - cn(want)).norm() < 1e-13, "{idx:?}");
        }
        // symbolic 2x2: trace p1+p2-1, det p1 p2 - (3 p1 - p2)/2, at p = (1/3, 7/2)
        let (p1, p2) = (1.0 / 3.0, 3.5);
        let l = lax_tcm(&cn(1.0), &[cn(1.0), cn(3.0)], &[cn(p1), cn(p2)]).unwrap();
        let h = hamiltonians(&l).unwrap();
        assert!((h[0] - cn(p1 + p2 - 1.0)).norm() < 1e-12);
        assert!((h[1] - cn(p1 * p2 - (3.0 * p1 - p2) / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn rrs_worked_examples() {
        // variant form: eps=1, gamma=(0,1), p=(1,1) -> [[2, -1], [1, 0]]
        let l = lax_rrs(&cn(1.0), &[cn(0.0), cn(1.0)], &[cn(1.0), cn(1.0)], true).unwrap();
        for (idx, want) in [((0, 0), 2.0), ((0, 1), -1.0), ((1, 0), 1.0), ((1, 1), 0.0)] {
            assert!((l.matrix[idx] - cn(want)).norm() < 1e-13, "{idx:?}");
        }
        // char poly z^2 - 2z + 1
        let h = hamiltonians(&l).unwrap();
        assert!((h[0] - cn(2.0)).norm() < 1e-13);
        assert!((h[1] - cn(1.0)).norm() < 1e-13);
        // isospectrality of the two forms on generic data
        let tw = [cn(0.2), cn(-0.9), cn(1.4)];
        let p = [cn(0.6), cn(-1.1), cn(2.3)];
        let a = lax_rrs(&cn(0.7), &tw, &p, false).unwrap();
        let b = lax_rrs(&cn(0.7), &tw, &p, true).unwrap();
        let ha = hamiltonians(&a).unwrap();
        let hb = hamiltonians(&b).unwrap();
        for (x, y) in ha.iter().zip(hb.iter()) {
            assert!((x - y).norm() < 1e-10 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn rcm_worked_examples() {
        let l = lax_rcm(&[cn(0.0), cn(1.0)], &[cn(0.0), cn(0.0)]).unwrap();
        for (idx, want) in [((0, 0), 1.0), ((0, 1), 1.0), ((1, 0), -1.0), ((1, 1), -1.0)] {
            assert!((l.matrix[idx] - cn(want)).norm() < 1e-13, "{idx:?}");
        }
        // char poly z^2 - (p1+p2) z + p1 p2 - p1 + p2 at generic p
        let (p1, p2) = (0.3, -1.7);
        let l = lax_rcm(&[cn(0.0), cn(1.0)], &[cn(p1), cn(p2)]).unwrap();
        let h = hamiltonians(&l).unwrap();
        assert!((h[0] - cn(p1 + p2)).norm() < 1e-13);
        assert!((h[1] - cn(p1 * p2 - p1 + p2)).norm() < 1e-13);
    }

    #[test]
    fn hamiltonian_examples() {
        // [[2,-1],[1,0]] -> (2, 1)
        let l = LaxModel {
            tag: ModelTag::Rrs,
            matrix: Mat::from_fn(2, 2, |i, j| cn([[2.0, -1.0], [1.0, 0.0]][i][j])),
            parameter: None,
            twist: vec![],
            momenta: vec![],
            warnings: vec![],
        };
        let h = hamiltonians(&l).unwrap();
        assert!((h[0] - cn(2.0)).norm() < 1e-14 && (h[1] - cn(1.0)).norm() < 1e-14);
        // cross-check path
        let (h2, dev) = hamiltonians_checked(&l).unwrap();
        assert!(dev < 1e-10);
        assert_eq!(h2.len(), 2);
    }

    #[test]
    fn multilinearity_in_each_momentum() {
        // second difference in any single p_i vanishes
        let tw = [cn(0.4), cn(-1.0), cn(1.9), cn(2.6)];
        let p0 = [cn(0.3), cn(1.2), cn(-0.8), cn(0.5)];
        for model in 0..4 {
            let build = |p: &[C64]| -> Vec<C64> {
                let l = match model {
                    0 => lax_trs(&cn(1.7), &tw, p).unwrap(),
                    1 => lax_tcm(&cn(0.9), &tw, p).unwrap(),
                    2 => lax_rrs(&cn(0.9), &tw, p, false).unwrap(),
                    _ => lax_rcm(&tw, p).unwrap(),
                };
                hamiltonians(&l).unwrap()
            };
            for i in 0..4 {
                let mut pa = p0.to_vec();
                let mut pb = p0.to_vec();
                let mut pc = p0.to_vec();
                pb[i] += cn(1.0);
                pc[i] += cn(2.0);
                let (ha, hb, hc) = (build(&pa), build(&pb), build(&pc));
                for k in 0..4 {
                    let second = hc[k] - hb[k] * cn(2.0) + ha[k];
                    assert!(second.norm() < 1e-9, "model {model} p{i} H{k}");
                }
                pa.clear();
            }
        }
    }

    #[test]
    fn twist_collision_rejected() {
        assert!(lax_rcm(&[cn(1.0), cn(1.0)], &[cn(0.0), cn(0.0)]).is_err());
    }
}

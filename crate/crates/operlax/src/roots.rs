//! Complex polynomial roots: companion-matrix eigenvalues via shifted
//! Hessenberg QR, refined by Newton polishing on the original polynomial.

use crate::error::{Error, Result};
use crate::scalar::C64;
use num_traits::Zero;

/// All roots (with multiplicity) of the polynomial with ascending
/// coefficients `cs`. Errors on the zero polynomial.
pub fn roots_c64(cs: &[C64]) -> Result<Vec<C64>> {
    let max = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let tol = 1e-14 * max;
    let mut hi = cs.len();
    while hi > 0 && cs[hi - 1].norm() <= tol {
        hi -= 1;
    }
    let mut lo = 0;
    let mut out = Vec::new();
    while lo + 1 < hi && cs[lo].norm() <= tol {
        out.push(C64::zero()); // factor z
        lo += 1;
    }
    let work: Vec<C64> = cs[lo..hi].iter().map(|c| c / cs[hi - 1]).collect();
    let deg = work.len() - 1;
    match deg {
        0 => {}
        1 => out.push(-work[0]),
        2 => {
            let (b, c) = (work[1], work[0]);
            let d = (b * b - 4.0 * c).sqrt();
            // stable pairing: avoid cancellation in the larger root
            let q = if (b.conj() * d).re >= 0.0 { -(b + d) / 2.0 } else { -(b - d) / 2.0 };
            if q.norm() > 0.0 {
                out.push(q);
                out.push(c / q);
            } else {
                out.push(C64::zero());
                out.push(C64::zero());
            }
        }
        _ => {
            let mut h = companion(&work);
            let mut eigs = hessenberg_eigenvalues(&mut h);
            for e in &mut eigs {
                *e = newton_polish(cs, *e);
            }
            out.extend(eigs);
        }
    }
    // polish the small-degree cases too (exactness of closed forms is fine,
    // but the input may have been trimmed)
    for r in &mut out {
        *r = newton_polish(cs, *r);
    }
    Ok(out)
}

/// Upper-Hessenberg companion matrix of a monic polynomial (top-row form).
fn companion(monic: &[C64]) -> Vec<Vec<C64>> {
    let n = monic.len() - 1;
    let mut h = vec![vec![C64::zero(); n]; n];
    for j in 0..n {
        h[0][j] = -monic[n - 1 - j];
    }
    for i in 1..n {
        h[i][i - 1] = C64::new(1.0, 0.0);
    }
    h
}

fn givens(a: C64, b: C64) -> (C64, C64, f64) {
    let d = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a.conj(), b.conj(), d)
}

/// Eigenvalues of a complex upper-Hessenberg matrix by shifted QR with
/// Givens rotations. Accuracy is finished off by Newton polish upstream.
fn hessenberg_eigenvalues(h: &mut [Vec<C64>]) -> Vec<C64> {
    let n = h.len();
    let mut eigs = vec![C64::zero(); n];
    let mut hi = n;
    let mut stuck = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        total += 1;
        if total > 80 * n {
            // bail with the current diagonal; Newton polish recovers accuracy
            for k in 0..hi {
                eigs[k] = h[k][k];
            }
            break;
        }
        if hi == 1 {
            eigs[0] = h[0][0];
            break;
        }
        // deflation scan
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if h[lo][lo - 1].norm() <= f64::EPSILON * s.max(1e-300) {
                h[lo][lo - 1] = C64::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs[hi - 1] = h[hi - 1][hi - 1];
            hi -= 1;
            stuck = 0;
            continue;
        }
        // Wilkinson shift from the trailing 2x2 of the active block
        let (a, b) = (h[hi - 2][hi - 2], h[hi - 2][hi - 1]);
        let (c, d) = (h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
        let tr = a + d;
        let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
        let mu1 = (tr + disc) / 2.0;
        let mu2 = (tr - disc) / 2.0;
        let mut mu = if (mu1 - d).norm() < (mu2 - d).norm() { mu1 } else { mu2 };
        stuck += 1;
        if stuck > 12 {
            // exceptional shift to break symmetry cycles
            mu += C64::new(h[hi - 1][hi - 2].norm(), 0.5 * h[hi - 1][hi - 2].norm());
            stuck = 0;
        }
        if lo == hi - 2 {
            // solve the 2x2 directly
            eigs[hi - 1] = mu;
            eigs[hi - 2] = if (mu - mu1).norm() < (mu - mu2).norm() { mu2 } else { mu1 };
            hi -= 2;
            stuck = 0;
            continue;
        }
        // one explicit QR step with shift on the block [lo, hi)
        for k in lo..hi {
            h[k][k] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (ca, cb, d) = givens(h[k][k], h[k + 1][k]);
            rots.push((ca, cb, d));
            if d == 0.0 {
                continue;
            }
            for j in k..hi {
                let x = h[k][j];
                let y = h[k + 1][j];
                h[k][j] = (ca * x + cb * y) / d;
                h[k + 1][j] = (-cb.conj() * x + ca.conj() * y) / d;
            }
        }
        for (idx, k) in (lo..hi - 1).enumerate() {
            let (ca, cb, d) = rots[idx];
            if d == 0.0 {
                continue;
            }
            let top = (k + 2).min(hi);
            for i in lo..top {
                let x = h[i][k];
                let y = h[i][k + 1];
                h[i][k] = (x * ca.conj() + y * cb.conj()) / d;
                h[i][k + 1] = (-x * cb + y * ca) / d;
            }
        }
        for k in lo..hi {
            h[k][k] += mu;
        }
    }
    eigs
}

/// A few Newton steps on the original polynomial; keeps the best iterate.
pub fn newton_polish(cs: &[C64], mut x: C64) -> C64 {
    let eval = |x: C64| -> (C64, C64) {
        let mut p = C64::zero();
        let mut dp = C64::zero();
        for c in cs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    let (mut best_v, _) = eval(x);
    let mut best = x;
    for _ in 0..24 {
        let (p, dp) = eval(x);
        if p.norm() < best_v.norm() {
            best_v = p;
            best = x;
        }
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            let (p2, _) = eval(x);
            if p2.norm() < best_v.norm() {
                best = x;
            }
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(rs: &[C64]) -> Vec<C64> {
        let mut cs = vec![C64::new(1.0, 0.0)];
        for r in rs {
            let mut next = vec![C64::zero(); cs.len() + 1];
            for (i, c) in cs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            cs = next;
        }
        cs
    }

    fn check_recovery(rs: &[C64], tol: f64) {
        let cs = from_roots(rs);
        let mut got = roots_c64(&cs).unwrap();
        let mut want = rs.to_vec();
        let key = |c: &C64| (c.re, c.im);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < tol, "{g} vs {w}");
        }
    }

    #[test]
    fn recovers_well_separated_roots() {
        check_recovery(
            &[
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(3.0, 0.0),
                C64::new(-1.5, 0.0),
            ],
            1e-10,
        );
        check_recovery(
            &[
                C64::new(0.5, 1.0),
                C64::new(0.5, -1.0),
                C64::new(-2.0, 0.3),
                C64::new(1.0, 2.0),
                C64::new(-0.25, -0.7),
                C64::new(3.0, 0.0),
            ],
            1e-9,
        );
    }

    #[test]
    fn random_degree8_monic() {
        // roots >= 1e-3 separated; recovery to 1e-10 relative
        let mut seed = 0x123456u64;
        let mut rnd = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for _ in 0..20 {
            let mut rs: Vec<C64> = Vec::new();
            while rs.len() < 8 {
                let cand = C64::new(2.0 * rnd(), 2.0 * rnd());
                if rs.iter().all(|r| (r - cand).norm() > 1e-2) {
                    rs.push(cand);
                }
            }
            check_recovery(&rs, 1e-9);
        }
    }

    #[test]
    fn zero_roots_factored() {
        // z^2 (z - 1)
        let cs = vec![
            C64::zero(),
            C64::zero(),
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
        ];
        let got = roots_c64(&cs).unwrap();
        assert_eq!(got.len(), 3);
        let zeros = got.iter().filter(|r| r.norm() < 1e-12).count();
        assert_eq!(zeros, 2);
    }
}

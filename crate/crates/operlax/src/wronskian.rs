//! Twisted-Wronskian minor matrices, Vandermonde matrices with closed-form
//! inverses, polynomial determinants, and the regular-singularity
//! factorization residual.

use crate::corner::Corner;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::{partial_sym, Poly};
use crate::scalar::Scalar;

pub const TWIST_TOL: f64 = 1e-10;

/// A Miura frame: ordered twist entries with matching sections.
#[derive(Clone, Debug)]
pub struct Frame<S: Scalar> {
    pub corner: Corner<S>,
    pub twist: Vec<S>,
    pub sections: Vec<Poly<S>>,
}

impl<S: Scalar> Frame<S> {
    pub fn new(corner: Corner<S>, twist: Vec<S>, sections: Vec<Poly<S>>) -> Result<Self> {
        if twist.len() != sections.len() {
            return Err(Error::LengthMismatch {
                expected: twist.len(),
                got: sections.len(),
            });
        }
        check_distinct(&twist)?;
        Ok(Frame {
            corner,
            twist,
            sections,
        })
    }

    /// Canonical frame: monic degree-one sections s_i = z - p_i.
    pub fn canonical(corner: Corner<S>, twist: Vec<S>, momenta: &[S]) -> Result<Self> {
        let sections = momenta.iter().map(|p| Poly::linear(p.clone())).collect();
        Frame::new(corner, twist, sections)
    }

    pub fn rank(&self) -> usize {
        self.twist.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.sections.iter().all(|s| {
            s.degree() == Some(1) && (s.coeff(1) - S::one()).abs() <= 1e-12
        })
    }

    /// Momenta of a canonical frame (the roots of the degree-one sections).
    pub fn momenta(&self) -> Vec<S> {
        self.sections.iter().map(|s| -s.coeff(0)).collect()
    }

    /// Joint permutation of (twist_i, s_i): the Weyl-frame action.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                got: perm.len(),
            });
        }
        let twist = perm.iter().map(|&i| self.twist[i].clone()).collect();
        let sections = perm.iter().map(|&i| self.sections[i].clone()).collect();
        Frame::new(self.corner.clone(), twist, sections)
    }
}

pub fn check_distinct<S: Scalar>(twist: &[S]) -> Result<()> {
    for i in 0..twist.len() {
        for j in i + 1..twist.len() {
            let sep = (twist[i].clone() - twist[j].clone()).abs();
            let bad = if S::EXACT {
                twist[i] == twist[j]
            } else {
                sep <= TWIST_TOL * (1.0 + twist[i].abs().max(twist[j].abs()))
            };
            if bad {
                return Err(Error::TwistCollision {
                    a: format!("{:?}", twist[i].to_c64()),
                    b: format!("{:?}", twist[j].to_c64()),
                    sep,
                });
            }
        }
    }
    Ok(())
}

/// Square matrix of polynomials with the usual determinant machinery.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<S: Scalar> {
    n: usize,
    m: usize,
    data: Vec<Poly<S>>,
}

impl<S: Scalar> PolyMatrix<S> {
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> Poly<S>) -> Self {
        let mut data = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                data.push(f(i, j));
            }
        }
        PolyMatrix { n, m, data }
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Poly::one()
            } else {
                Poly::zero()
            }
        })
    }

    pub fn nrows(&self) -> usize {
        self.n
    }
    pub fn ncols(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<S> {
        &self.data[i * self.m + j]
    }

    /// Determinant: cofactor expansion for n <= 4, fraction-free (Bareiss)
    /// elimination otherwise.
    pub fn det(&self) -> Result<Poly<S>> {
        if self.n != self.m {
            return Err(Error::NonSquare {
                rows: self.n,
                cols: self.m,
            });
        }
        if self.n <= 4 {
            return Ok(self.det_cofactor(&(0..self.n).collect::<Vec<_>>(), 0));
        }
        self.det_bareiss()
    }

    fn det_cofactor(&self, rows: &[usize], col: usize) -> Poly<S> {
        if rows.len() == 1 {
            return self.get(rows[0], col).clone();
        }
        let mut acc = Poly::zero();
        for (t, &r) in rows.iter().enumerate() {
            let sub: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
            let minor = self.det_cofactor(&sub, col + 1);
            let term = &minor * self.get(r, col);
            acc = if t % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn det_bareiss(&self) -> Result<Poly<S>> {
        let n = self.n;
        let mut a: Vec<Vec<Poly<S>>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                // pivot swap with a row below
                let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(k, i);
                        sign = !sign;
                    }
                    None => return Ok(Poly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev)?;
                }
            }
            for i in k + 1..n {
                a[i][k] = Poly::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign { &Poly::zero() - &det } else { det })
    }
}

/// The j x j minor matrix M_rows: column k holds xi_i^k sigma^k s_i for the
/// shift corners and the k-fold twisted derivative for the differential
/// corners. `rows` are 1-based frame indices.
pub fn minor_matrix<S: Scalar>(
    frame: &Frame<S>,
    rows: &[usize],
    j: usize,
) -> Result<PolyMatrix<S>> {
    if rows.len() != j {
        return Err(Error::LengthMismatch {
            expected: j,
            got: rows.len(),
        });
    }
    let n = frame.rank();
    for &r in rows {
        if r == 0 || r > n {
            return Err(Error::IndexOutOfRange {
                what: "row",
                got: r,
                limit: n,
            });
        }
    }
    let mut entries: Vec<Vec<Poly<S>>> = Vec::with_capacity(j);
    for &r in rows {
        let i = r - 1;
        let xi = frame.twist[i].clone();
        let mut row = Vec::with_capacity(j);
        let mut cur = frame.sections[i].clone();
        let mut xipow = S::one();
        for _k in 0..j {
            let entry = if frame.corner.is_shift() {
                cur.scale(&xipow)
            } else {
                cur.clone()
            };
            row.push(entry);
            cur = frame.corner.step(&cur, &xi);
            xipow = xipow * xi.clone();
        }
        entries.push(row);
    }
    Ok(PolyMatrix::from_fn(j, j, |i, k| entries[i][k].clone()))
}

/// Vandermonde on a twist subset: entry (t, k) = scale^k * base_t^k with
/// scale = q for the q corner (the q-rescaled convention) and bases
/// xi resp. 1 + gamma.
pub fn vandermonde<S: Scalar>(frame: &Frame<S>, rows: &[usize]) -> Result<Mat<S>> {
    let bases = subset_bases(frame, rows)?;
    let scale = frame.corner.vdm_scale();
    let j = rows.len();
    Ok(Mat::from_fn(j, j, |t, k| {
        (scale.clone() * bases[t].clone()).powi(k as u32)
    }))
}

fn subset_bases<S: Scalar>(frame: &Frame<S>, rows: &[usize]) -> Result<Vec<S>> {
    let n = frame.rank();
    rows.iter()
        .map(|&r| {
            if r == 0 || r > n {
                Err(Error::IndexOutOfRange {
                    what: "row",
                    got: r,
                    limit: n,
                })
            } else {
                Ok(frame.corner.vdm_base(&frame.twist[r - 1]))
            }
        })
        .collect()
}

/// Closed-form inverse of the corner Vandermonde via partial elementary
/// symmetric polynomials: entry (t, j) = (-1)^{n-t} scale^{1-t}
/// S_{n-t, j} / prod_{l != j}(b_j - b_l), 1-based t, j.
pub fn vandermonde_inverse<S: Scalar>(frame: &Frame<S>, rows: &[usize]) -> Result<Mat<S>> {
    let bases = subset_bases(frame, rows)?;
    check_distinct(&bases)?;
    let n = rows.len();
    let scale = frame.corner.vdm_scale();
    let mut out = Mat::zeros(n, n);
    for t in 1..=n {
        let sc = if t >= 1 {
            scale.clone().recip().powi((t - 1) as u32)
        } else {
            S::one()
        };
        for j in 1..=n {
            let num = partial_sym(&bases, n - t, j)?;
            let mut den = S::one();
            for (l, b) in bases.iter().enumerate() {
                if l != j - 1 {
                    den = den * (bases[j - 1].clone() - b.clone());
                }
            }
            let sign = if (n - t) % 2 == 0 {
                S::one()
            } else {
                -S::one()
            };
            out[(t - 1, j - 1)] = sign * sc.clone() * num / den;
        }
    }
    Ok(out)
}

/// det of a PolyMatrix (cofactor <= 4, fraction-free beyond).
pub fn det_poly<S: Scalar>(m: &PolyMatrix<S>) -> Result<Poly<S>> {
    m.det()
}

/// The twisted Wronskian W_n^{g_1..g_n}(s_1..s_n) for arbitrary polynomials
/// and per-row twists: row i = [s_i, step s_i, step^2 s_i, ...] with the
/// corner's step operator (xi powers included on the shift side).
pub fn twisted_wronskian<S: Scalar>(
    corner: &Corner<S>,
    twists: &[S],
    polys: &[Poly<S>],
) -> Result<Poly<S>> {
    if twists.len() != polys.len() {
        return Err(Error::LengthMismatch {
            expected: twists.len(),
            got: polys.len(),
        });
    }
    let j = twists.len();
    let mut rows: Vec<Vec<Poly<S>>> = Vec::with_capacity(j);
    for (g, p) in twists.iter().zip(polys.iter()) {
        let mut row = Vec::with_capacity(j);
        let mut cur = p.clone();
        let mut xipow = S::one();
        for _ in 0..j {
            row.push(if corner.is_shift() {
                cur.scale(&xipow)
            } else {
                cur.clone()
            });
            cur = corner.step(&cur, g);
            xipow = xipow * g.clone();
        }
        rows.push(row);
    }
    PolyMatrix::from_fn(j, j, |i, k| rows[i][k].clone()).det()
}

/// Deviation between each W_k and the factorization
/// P_1(z) P_2(sigma z) ... P_k(sigma^{k-1} z), with
/// P_i = Lambda_r Lambda_{r-1} ... Lambda_{r-i+1} and the shifts omitted on
/// the differential corners. `wks[k-1]` is the k-th listed determinant
/// (the 2x2 level first). Returns the max coefficient deviation.
pub fn wk_factorization_residual<S: Scalar>(
    wks: &[Poly<S>],
    lambdas: &[Poly<S>],
    corner: &Corner<S>,
) -> Result<f64> {
    let r = lambdas.len();
    if wks.len() > r + 1 {
        return Err(Error::LengthMismatch {
            expected: r + 1,
            got: wks.len(),
        });
    }
    let lam = |idx: i64| -> Poly<S> {
        if idx >= 1 && idx <= r as i64 {
            lambdas[(idx - 1) as usize].clone()
        } else {
            Poly::one()
        }
    };
    let mut worst = 0.0f64;
    for (k1, wk) in wks.iter().enumerate() {
        let k = k1 + 1;
        let mut prod = Poly::one();
        for i in 1..=k {
            // P_i = Lambda_r ... Lambda_{r-i+1}
            let mut p_i = Poly::one();
            for idx in (r as i64 - i as i64 + 1)..=(r as i64) {
                p_i = &p_i * &lam(idx);
            }
            let shifted = if corner.is_shift() {
                corner.shift_pow(&p_i, (i - 1) as i64)?
            } else {
                p_i
            };
            prod = &prod * &shifted;
        }
        let diff = wk - &prod;
        worst = worst.max(diff.max_abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{C64, CQ};

    fn cn(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn worked_q_frame() -> Frame<C64> {
        Frame::canonical(
            Corner::QMult { q: cn(2.0) },
            vec![cn(1.0), cn(3.0)],
            &[cn(0.4), cn(10.0)],
        )
        .unwrap()
    }

    #[test]
    fn minor_matrix_worked_q() {
        let f = worked_q_frame();
        let m = minor_matrix(&f, &[1, 2], 2).unwrap();
        // [[z - 2/5, 2z - 2/5], [z - 10, 3(2z - 10)]]
        assert_eq!(m.get(0, 0).coeffs(), &[cn(-0.4), cn(1.0)]);
        assert_eq!(m.get(0, 1).coeffs(), &[cn(-0.4), cn(2.0)]);
        assert_eq!(m.get(1, 0).coeffs(), &[cn(-10.0), cn(1.0)]);
        assert_eq!(m.get(1, 1).coeffs(), &[cn(-30.0), cn(6.0)]);
        let d = det_poly(&m).unwrap();
        // 4z^2 - 12z + 8
        for (got, want) in d.coeffs().iter().zip([8.0, -12.0, 4.0]) {
            assert!((got - cn(want)).norm() < 1e-12);
        }
        // 1x1 minor: [s_i]
        let m1 = minor_matrix(&f, &[2], 1).unwrap();
        assert_eq!(det_poly(&m1).unwrap().coeffs(), &[cn(-10.0), cn(1.0)]);
        // out-of-range row
        assert!(minor_matrix(&f, &[3], 1).is_err());
    }

    #[test]
    fn minor_matrix_ratdiff() {
        // RatDiff, gamma = (0, 1), s = (z - p1, z - p2):
        // [[z-p1, 1], [z-p2, (z-p2)+1]]
        let f = Frame::canonical(
            Corner::RatDiff,
            vec![cn(0.0), cn(1.0)],
            &[cn(0.7), cn(-0.3)],
        )
        .unwrap();
        let m = minor_matrix(&f, &[1, 2], 2).unwrap();
        assert_eq!(m.get(0, 1).coeffs(), &[cn(1.0)]);
        assert_eq!(m.get(1, 1).coeffs(), &[cn(1.0 + 0.3), cn(1.0)]);
    }

    #[test]
    fn vandermonde_examples() {
        let f = worked_q_frame();
        let v = vandermonde(&f, &[1, 2]).unwrap();
        // [[1, 2], [1, 6]]
        assert!((v[(0, 1)] - cn(2.0)).norm() < 1e-14);
        assert!((v[(1, 1)] - cn(6.0)).norm() < 1e-14);
        let vi = vandermonde_inverse(&f, &[1, 2]).unwrap();
        // (1/4) [[6, -2], [-1, 1]]
        for (idx, want) in [((0, 0), 1.5), ((0, 1), -0.5), ((1, 0), -0.25), ((1, 1), 0.25)] {
            assert!((vi[idx] - cn(want)).norm() < 1e-13, "{idx:?}");
        }
        // EpsAdd xi = (1,3): [[1,1],[1,3]] with inverse (1/2)[[3,-1],[-1,1]]
        let fe = Frame::canonical(
            Corner::EpsAdd { eps: cn(1.0) },
            vec![cn(1.0), cn(3.0)],
            &[cn(0.0), cn(0.0)],
        )
        .unwrap();
        let v = vandermonde(&fe, &[1, 2]).unwrap();
        assert!((v[(1, 1)] - cn(3.0)).norm() < 1e-14);
        let vi = vandermonde_inverse(&fe, &[1, 2]).unwrap();
        for (idx, want) in [((0, 0), 1.5), ((0, 1), -0.5), ((1, 0), -0.5), ((1, 1), 0.5)] {
            assert!((vi[idx] - cn(want)).norm() < 1e-13);
        }
        // TrigDiff gamma = (0,1): bases (1, 2) -> [[1,1],[1,2]]
        let ft = Frame::canonical(Corner::TrigDiff, vec![cn(0.0), cn(1.0)], &[cn(0.0), cn(0.0)])
            .unwrap();
        let v = vandermonde(&ft, &[1, 2]).unwrap();
        assert!((v[(1, 1)] - cn(2.0)).norm() < 1e-14);
        // 1x1
        let v1 = vandermonde_inverse(&f, &[1]).unwrap();
        assert!((v1[(0, 0)] - cn(1.0)).norm() < 1e-14);
    }

    #[test]
    fn vandermonde_inverse_matches_numeric() {
        for corner in [
            Corner::QMult { q: cn(1.7) },
            Corner::EpsAdd { eps: cn(0.6) },
            Corner::RatDiff,
            Corner::TrigDiff,
        ] {
            let twist = vec![cn(0.5), cn(-1.2), cn(2.1), cn(0.9)];
            let f = Frame::canonical(corner, twist, &[cn(0.0); 4]).unwrap();
            let rows = [1, 2, 3, 4];
            let v = vandermonde(&f, &rows).unwrap();
            let vi = vandermonde_inverse(&f, &rows).unwrap();
            let prod = vi.matmul(&v);
            let id = Mat::<C64>::identity(4);
            assert!(prod.sub(&id).frobenius() < 1e-12, "{}", f.corner.name());
        }
        // exact mode: exactly the identity
        let f: Frame<CQ> = Frame::canonical(
            Corner::QMult {
                q: CQ::from_ratio(5, 2),
            },
            vec![CQ::from_ratio(1, 1), CQ::from_ratio(3, 1), CQ::from_ratio(-2, 3)],
            &[CQ::from_ratio(0, 1), CQ::from_ratio(0, 1), CQ::from_ratio(0, 1)],
        )
        .unwrap();
        let rows = [1, 2, 3];
        let v = vandermonde(&f, &rows).unwrap();
        let vi = vandermonde_inverse(&f, &rows).unwrap();
        assert_eq!(vi.matmul(&v), Mat::<CQ>::identity(3));
    }

    #[test]
    fn det_poly_examples() {
        // [[z, 1], [1, z]] -> z^2 - 1
        let m = PolyMatrix::<C64>::from_fn(2, 2, |i, j| {
            if i == j {
                Poly::var()
            } else {
                Poly::one()
            }
        });
        assert_eq!(det_poly(&m).unwrap().coeffs(), &[cn(-1.0), cn(0.0), cn(1.0)]);
        // identity -> 1
        let id = PolyMatrix::<C64>::identity(5);
        assert_eq!(det_poly(&id).unwrap().coeffs(), &[cn(1.0)]);
        // 5x5 Bareiss path vs cofactor on a shuffled polynomial matrix
        let m5 = PolyMatrix::from_fn(5, 5, |i, j| {
            Poly::new(vec![
                cn(((i * 3 + j * 7) % 5) as f64 - 2.0),
                cn(((i + 2 * j) % 3) as f64),
            ])
        });
        let cofactor = m5.det_cofactor(&[0, 1, 2, 3, 4], 0);
        let bareiss = m5.det_bareiss().unwrap();
        let diff = &cofactor - &bareiss;
        assert!(diff.max_abs() < 1e-9 * cofactor.max_abs().max(1.0));
    }

    #[test]
    fn column_scaling_consistency() {
        // multiplying section s_i by c multiplies every det containing row i by c
        let mut f = worked_q_frame();
        let before = det_poly(&minor_matrix(&f, &[1, 2], 2).unwrap()).unwrap();
        let c = C64::new(-1.5, 0.5);
        f.sections[0] = f.sections[0].scale(&c);
        let after = det_poly(&minor_matrix(&f, &[1, 2], 2).unwrap()).unwrap();
        let diff = &after - &before.scale(&c);
        assert!(diff.max_abs() < 1e-12);
    }

    #[test]
    fn wk_factorization_examples() {
        let corner = Corner::QMult { q: cn(2.0) };
        // canonical all-ones: residual 0
        let ones = vec![Poly::<C64>::one(); 2];
        assert!(
            wk_factorization_residual(&ones, &[Poly::one(), Poly::one()], &corner).unwrap()
                < 1e-15
        );
        // sl(2) canonical: W_2 = Lambda, residual 0
        let lam = Poly::new(vec![cn(2.0), cn(-3.0), cn(1.0)]);
        assert!(
            wk_factorization_residual(&[lam.clone()], &[lam.clone()], &corner).unwrap() < 1e-15
        );
        // perturb one coefficient by delta -> residual = |delta|
        let mut cs = lam.coeffs().to_vec();
        cs[1] += cn(1e-3);
        let lam_pert = Poly::new(cs);
        let res = wk_factorization_residual(&[lam.clone()], &[lam_pert], &corner).unwrap();
        assert!((res - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn rescaling_lemma() {
        // rational-differential: W(f s_i) = f^n W(s_i)
        let corner = Corner::RatDiff;
        let twists = vec![cn(0.3), cn(-0.7), cn(1.1)];
        let polys = vec![
            Poly::new(vec![cn(1.0), cn(2.0), cn(-0.5)]),
            Poly::new(vec![cn(-1.0), cn(0.0), cn(1.5), cn(0.25)]),
            Poly::new(vec![cn(0.5), cn(1.0)]),
        ];
        let f = Poly::new(vec![cn(2.0), cn(-1.0), cn(0.75)]);
        let lhs = twisted_wronskian(
            &corner,
            &twists,
            &polys.iter().map(|p| p * &f).collect::<Vec<_>>(),
        )
        .unwrap();
        let w = twisted_wronskian(&corner, &twists, &polys).unwrap();
        let fn_pow = &(&f * &f) * &f;
        let rhs = &fn_pow * &w;
        let diff = &lhs - &rhs;
        assert!(diff.max_abs() <= 1e-9 * rhs.max_abs());
    }

    #[test]
    fn twist_collision_rejected() {
        let r = Frame::canonical(
            Corner::<C64>::RatDiff,
            vec![cn(1.0), cn(1.0)],
            &[cn(0.0), cn(0.0)],
        );
        assert!(r.is_err());
    }
}

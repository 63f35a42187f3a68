//! Small dense matrices over a [`Scalar`]: elimination, characteristic
//! polynomials by Faddeev-LeVerrier, eigen decomposition at desk scale.

use crate::error::{Error, Result};
use crate::roots::roots_c64;
use crate::scalar::{Scalar, C64};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S: Scalar> {
    n: usize,
    m: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize, m: usize) -> Self {
        Mat {
            n,
            m,
            data: vec![S::zero(); n * m],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = S::one();
        }
        out
    }

    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut out = Mat::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                out[(i, j)] = f(i, j);
            }
        }
        out
    }

    pub fn diag(entries: &[S]) -> Self {
        let mut out = Mat::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            out[(i, i)] = e.clone();
        }
        out
    }

    pub fn outer(u: &[S], v: &[S]) -> Self {
        Mat::from_fn(u.len(), v.len(), |i, j| u[i].clone() * v[j].clone())
    }

    pub fn nrows(&self) -> usize {
        self.n
    }
    pub fn ncols(&self) -> usize {
        self.m
    }

    pub fn matmul(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.m, rhs.n);
        let mut out: Mat<S> = Mat::zeros(self.n, rhs.m);
        for i in 0..self.n {
            for k in 0..self.m {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.m {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.m, v.len());
        (0..self.n)
            .map(|i| {
                (0..self.m).fold(S::zero(), |acc, j| {
                    acc + self[(i, j)].clone() * v[j].clone()
                })
            })
            .collect()
    }

    pub fn add(&self, rhs: &Mat<S>) -> Mat<S> {
        Mat::from_fn(self.n, self.m, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn sub(&self, rhs: &Mat<S>) -> Mat<S> {
        Mat::from_fn(self.n, self.m, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    pub fn scale(&self, c: &S) -> Mat<S> {
        Mat::from_fn(self.n, self.m, |i, j| self[(i, j)].clone() * c.clone())
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.m, self.n, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> S {
        (0..self.n.min(self.m)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|c| {
                let a = c.abs();
                a * a
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_c64(&self) -> Mat<C64> {
        Mat::from_fn(self.n, self.m, |i, j| self[(i, j)].to_c64())
    }

    /// Determinant by elimination with partial pivoting (pivot chosen by
    /// modulus; arithmetic stays exact on the exact backend).
    pub fn det(&self) -> Result<S> {
        if self.n != self.m {
            return Err(Error::NonSquare {
                rows: self.n,
                cols: self.m,
            });
        }
        let mut a = self.clone();
        let n = self.n;
        let mut det = S::one();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
                .unwrap();
            if a[(piv, col)].is_zero() || a[(piv, col)].abs() == 0.0 {
                return Ok(S::zero());
            }
            if piv != col {
                for j in 0..n {
                    let tmp = a[(piv, j)].clone();
                    a[(piv, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for i in col + 1..n {
                let f = a[(i, col)].clone() / p.clone();
                for j in col..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(col, j)].clone();
                }
            }
        }
        Ok(det)
    }

    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        let cols = self.solve_multi(&Mat::from_fn(b.len(), 1, |i, _| b[i].clone()))?;
        Ok((0..b.len()).map(|i| cols[(i, 0)].clone()).collect())
    }

    pub fn solve_multi(&self, b: &Mat<S>) -> Result<Mat<S>> {
        if self.n != self.m {
            return Err(Error::NonSquare {
                rows: self.n,
                cols: self.m,
            });
        }
        let n = self.n;
        let mut a = self.clone();
        let mut rhs = b.clone();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
                .unwrap();
            if a[(piv, col)].abs() == 0.0 {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..n {
                    let t = a[(piv, j)].clone();
                    a[(piv, j)] = a[(col, j)].clone();
                    a[(col, j)] = t;
                }
                for j in 0..rhs.m {
                    let t = rhs[(piv, j)].clone();
                    rhs[(piv, j)] = rhs[(col, j)].clone();
                    rhs[(col, j)] = t;
                }
            }
            let p = a[(col, col)].clone();
            for i in col + 1..n {
                let f = a[(i, col)].clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(col, j)].clone();
                }
                for j in 0..rhs.m {
                    rhs[(i, j)] = rhs[(i, j)].clone() - f.clone() * rhs[(col, j)].clone();
                }
            }
        }
        // back substitution
        let mut x: Mat<S> = Mat::zeros(n, rhs.m);
        for j in 0..rhs.m {
            for i in (0..n).rev() {
                let mut acc = rhs[(i, j)].clone();
                for k in i + 1..n {
                    acc = acc - a[(i, k)].clone() * x[(k, j)].clone();
                }
                x[(i, j)] = acc / a[(i, i)].clone();
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat<S>> {
        self.solve_multi(&Mat::identity(self.n))
    }

    /// Characteristic polynomial det(z I - A), ascending coefficients,
    /// by Faddeev-LeVerrier (integer divisions only; exact-mode friendly).
    pub fn charpoly(&self) -> Result<Vec<S>> {
        if self.n != self.m {
            return Err(Error::NonSquare {
                rows: self.n,
                cols: self.m,
            });
        }
        let n = self.n;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        let mut mk = Mat::<S>::identity(n);
        for k in 1..=n {
            mk = self.matmul(&mk);
            let ck = -(mk.trace() / S::from_int(k as i64));
            coeffs[n - k] = ck.clone();
            for i in 0..n {
                mk[(i, i)] = mk[(i, i)].clone() + ck.clone();
            }
        }
        Ok(coeffs)
    }

    /// e_k(eigenvalues) for k = 1..=n, from the characteristic polynomial:
    /// det(zI - A) = sum_k (-1)^k e_k z^{n-k}.
    pub fn sym_of_spectrum(&self) -> Result<Vec<S>> {
        let cp = self.charpoly()?;
        let n = self.n;
        Ok((1..=n)
            .map(|k| {
                let c = cp[n - k].clone();
                if k % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect())
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.m + j]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.m + j]
    }
}

/// Eigenvalues of a complex matrix: characteristic polynomial roots with
/// Newton polish (desk scale, N <= 8).
pub fn eigenvalues(a: &Mat<C64>) -> Result<Vec<C64>> {
    let cp = a.charpoly()?;
    roots_c64(&cp)
}

/// Eigenvector for a given eigenvalue via elimination with column pivoting on
/// (A - lambda I); the free column yields the vector, then one inverse
/// iteration sharpens it.
pub fn eigenvector(a: &Mat<C64>, lambda: C64) -> Result<Vec<C64>> {
    let n = a.nrows();
    let shifted = a.sub(&Mat::identity(n).scale(&lambda));
    // elimination with full pivoting to find the (near-)null direction
    let mut m = shifted.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0usize;
    for step in 0..n {
        // find max pivot in remaining block
        let mut best = (step, step, -1.0f64);
        for i in step..n {
            for j in step..n {
                let v = m[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let scale = m.frobenius().max(1e-300);
        if best.2 <= 1e-12 * scale {
            break;
        }
        let (pi, pj, _) = best;
        // swap rows step<->pi, cols step<->pj
        for j in 0..n {
            let t = m[(pi, j)];
            m[(pi, j)] = m[(step, j)];
            m[(step, j)] = t;
        }
        for i in 0..n {
            let t = m[(i, pj)];
            m[(i, pj)] = m[(i, step)];
            m[(i, step)] = t;
        }
        col_perm.swap(step, pj);
        let p = m[(step, step)];
        for i in step + 1..n {
            let f = m[(i, step)] / p;
            for j in step..n {
                m[(i, j)] = m[(i, j)] - f * m[(step, j)];
            }
        }
        rank += 1;
    }
    if rank == n {
        // numerically full rank: fall back to inverse iteration from ones
        let mut v = vec![C64::new(1.0, 0.0); n];
        for _ in 0..3 {
            let jitter = C64::new(1e-13, 0.0);
            let m2 = a.sub(&Mat::identity(n).scale(&(lambda + jitter)));
            v = m2.solve(&v)?;
            normalize(&mut v);
        }
        return Ok(v);
    }
    // back-substitute with free variable at position `rank`
    let mut y = vec![C64::zero(); n];
    y[rank] = C64::new(1.0, 0.0);
    for i in (0..rank).rev() {
        let mut acc = -m[(i, rank)];
        for k in i + 1..rank {
            acc -= m[(i, k)] * y[k];
        }
        y[i] = acc / m[(i, i)];
    }
    let mut v = vec![C64::zero(); n];
    for (pos, &orig) in col_perm.iter().enumerate() {
        v[orig] = y[pos];
    }
    normalize(&mut v);
    // one inverse-iteration step to sharpen
    let m2 = a.sub(&Mat::identity(n).scale(&(lambda + C64::new(1e-14, 1e-14))));
    if let Ok(mut w) = m2.solve(&v) {
        normalize(&mut w);
        // keep orientation stable
        let phase: C64 = w
            .iter()
            .zip(v.iter())
            .map(|(a, b)| a * b.conj())
            .sum();
        if phase.norm() > 0.0 {
            let ph = phase / phase.norm();
            for x in &mut w {
                *x *= ph.conj();
            }
        }
        return Ok(w);
    }
    Ok(v)
}

fn normalize(v: &mut [C64]) {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v {
            *x /= n;
        }
    }
}

/// Diagonalizing similarity: columns are eigenvectors matched (greedily, by
/// nearest eigenvalue) to the requested target order. Errors when the matrix
/// has (numerically) repeated eigenvalues.
pub fn diagonalize_matched(a: &Mat<C64>, targets: &[C64]) -> Result<(Mat<C64>, Vec<C64>)> {
    let n = a.nrows();
    let eigs = eigenvalues(a)?;
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for t in targets {
        let mut best = None;
        let mut bestd = f64::INFINITY;
        for (k, e) in eigs.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (e - t).norm();
            if d < bestd {
                bestd = d;
                best = Some(k);
            }
        }
        let k = best.ok_or(Error::Singular)?;
        used[k] = true;
        order.push(eigs[k]);
    }
    // repeated-eigenvalue guard
    for i in 0..n {
        for j in i + 1..n {
            if (order[i] - order[j]).norm() < 1e-10 * (1.0 + order[i].norm()) {
                return Err(Error::Invalid(
                    "matrix has (numerically) repeated eigenvalues; not diagonalizable here"
                        .into(),
                ));
            }
        }
    }
    let mut p = Mat::zeros(n, n);
    for (j, lam) in order.iter().enumerate() {
        let v = eigenvector(a, *lam)?;
        for i in 0..n {
            p[(i, j)] = v[i];
        }
    }
    Ok((p, order))
}

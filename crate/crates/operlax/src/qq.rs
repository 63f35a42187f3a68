//! Q-polynomial extraction from minors, QQ- and dd-system residuals,
//! nondegeneracy tests and Bethe residuals in cleared-denominator form.
//!
//! Orientation conventions are pinned by requiring minor-extracted data to
//! solve the systems exactly (see `CONVENTIONS`): for the shift corners
//!   xi_{i+1} Q+_i(z) Q-_i(sz) - xi_i Q+_i(sz) Q-_i(z)
//!     = c_i Lambda_i(z) Q+_{i-1}(sz) Q+_{i+1}(z),
//! and for the differential corners
//!   q+ D q- - q- D q+ + (g_{i+1} - g_i) q+ q- = c_i Lambda_i q+_{i-1} q+_{i+1}
//! with D = d/dz resp. z d/dz. Prefactors c_i are read off leading
//! coefficients, never assumed.

use crate::corner::Corner;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::wronskian::{det_poly, minor_matrix, vandermonde, Frame};

/// Human-readable record of the realized conventions, exposed in reports.
pub const CONVENTIONS: &str = "qq: xi_{i+1} Q+ Q-^s - xi_i Q+^s Q-; neighbors prev^s*next; \
     diff corners +(g_{i+1}-g_i); bethe(shift): two-point cleared with neighbor shifts from the qq orientation; \
     bethe(trig): printed form, pipelines pass rho-shifted twists g_i - i";

#[derive(Clone, Debug)]
pub struct QQData<S: Scalar> {
    /// Monic Q_i^+ for nodes i = 1..r.
    pub q_plus: Vec<Poly<S>>,
    /// Monic Q_i^- for nodes i = 1..r.
    pub q_minus: Vec<Poly<S>>,
    /// Node singularity polynomials Lambda_i, i = 1..r.
    pub lambdas: Vec<Poly<S>>,
    /// Extracted leading scalars of the raw plus/minus minors.
    pub plus_scale: Vec<S>,
    pub minus_scale: Vec<S>,
}

impl<S: Scalar> QQData<S> {
    pub fn rank(&self) -> usize {
        self.q_plus.len()
    }

    fn plus_at(&self, i: usize) -> Poly<S> {
        // boundary Q_0 = Q_{r+1} = 1
        if i == 0 || i == self.rank() + 1 {
            Poly::one()
        } else {
            self.q_plus[i - 1].clone()
        }
    }
}

pub enum Sign {
    Plus,
    Minus,
}

/// Q-polynomial from minors: rows {1..j} (plus) or {1..j-1, j+1} (minus),
/// divided by det(V) and by the frame divisor F_j (canonical frames: 1).
/// Returns the monic polynomial and the extracted leading scalar.
pub fn extract_q<S: Scalar>(
    frame: &Frame<S>,
    j: usize,
    sign: Sign,
    f_divisor: Option<&Poly<S>>,
) -> Result<(Poly<S>, S)> {
    let n = frame.rank();
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange {
            what: "node",
            got: j,
            limit: n,
        });
    }
    let rows: Vec<usize> = match sign {
        Sign::Plus => (1..=j).collect(),
        Sign::Minus => {
            if j + 1 > n {
                return Err(Error::IndexOutOfRange {
                    what: "node (minus rows need j+1)",
                    got: j,
                    limit: n - 1,
                });
            }
            (1..j).chain([j + 1]).collect()
        }
    };
    let num = det_poly(&minor_matrix(frame, &rows, j)?)?;
    let vdet = vandermonde(frame, &rows)?.det()?;
    if vdet.abs() == 0.0 {
        return Err(Error::Singular);
    }
    let mut q = num.scale(&vdet.recip());
    if let Some(f) = f_divisor {
        q = q.div_exact(f)?;
    }
    if q.is_zero() {
        return Err(Error::Invalid(format!("vanishing minor at node {j}")));
    }
    Ok(q.monic())
}

/// The full determinant D_N / det V, monic, with the extracted scalar.
pub fn full_determinant<S: Scalar>(frame: &Frame<S>) -> Result<(Poly<S>, S)> {
    let n = frame.rank();
    let rows: Vec<usize> = (1..=n).collect();
    let num = det_poly(&minor_matrix(frame, &rows, n)?)?;
    let vdet = vandermonde(frame, &rows)?.det()?;
    if vdet.abs() == 0.0 {
        return Err(Error::Singular);
    }
    Ok(num.scale(&vdet.recip()).monic())
}

/// Canonical-frame extraction of all QQ data: Q_i^{+,-} for i = 1..r,
/// Lambda_i = 1 for i < r, Lambda_r = the monic full determinant.
pub fn extract_qq_data<S: Scalar>(frame: &Frame<S>) -> Result<QQData<S>> {
    let n = frame.rank();
    if n < 2 {
        return Err(Error::Invalid("rank N >= 2 required for QQ data".into()));
    }
    let r = n - 1;
    let mut q_plus = Vec::with_capacity(r);
    let mut q_minus = Vec::with_capacity(r);
    let mut plus_scale = Vec::with_capacity(r);
    let mut minus_scale = Vec::with_capacity(r);
    for j in 1..=r {
        let (qp, sp) = extract_q(frame, j, Sign::Plus, None)?;
        let (qm, sm) = extract_q(frame, j, Sign::Minus, None)?;
        q_plus.push(qp);
        q_minus.push(qm);
        plus_scale.push(sp);
        minus_scale.push(sm);
    }
    let mut lambdas = vec![Poly::one(); r];
    let (lam, _) = full_determinant(frame)?;
    lambdas[r - 1] = lam;
    Ok(QQData {
        q_plus,
        q_minus,
        lambdas,
        plus_scale,
        minus_scale,
    })
}

#[derive(Clone, Debug)]
pub struct QQResidual<S: Scalar> {
    /// Per-node residual polynomial LHS - c_i * RHS.
    pub residuals: Vec<Poly<S>>,
    /// The realized prefactors c_i (leading-coefficient quotients).
    pub prefactors: Vec<S>,
}

impl<S: Scalar> QQResidual<S> {
    pub fn max_abs(&self) -> f64 {
        self.residuals
            .iter()
            .map(|p| p.max_abs())
            .fold(0.0, f64::max)
    }
}

/// QQ-system residuals for all nodes under the pinned orientation.
pub fn qq_residual<S: Scalar>(
    data: &QQData<S>,
    twist: &[S],
    corner: &Corner<S>,
) -> Result<QQResidual<S>> {
    let r = data.rank();
    if twist.len() != r + 1 {
        return Err(Error::LengthMismatch {
            expected: r + 1,
            got: twist.len(),
        });
    }
    let mut residuals = Vec::with_capacity(r);
    let mut prefactors = Vec::with_capacity(r);
    for i in 1..=r {
        let qp = &data.q_plus[i - 1];
        let qm = &data.q_minus[i - 1];
        let lam = &data.lambdas[i - 1];
        let (lhs, rhs) = if corner.is_shift() {
            let qps = corner.shift(qp)?;
            let qms = corner.shift(qm)?;
            let lhs = &(&qp.scale(&twist[i]) * &qms) - &(&qps.scale(&twist[i - 1]) * qm);
            let prev_shift = corner.shift(&data.plus_at(i - 1))?;
            let rhs = &(lam * &prev_shift) * &data.plus_at(i + 1);
            (lhs, rhs)
        } else {
            let dqp = corner.twisted_derivative(qp, &S::zero())?;
            let dqm = corner.twisted_derivative(qm, &S::zero())?;
            let dg = twist[i].clone() - twist[i - 1].clone();
            let lhs = &(&(qp * &dqm) - &(qm * &dqp)) + &(qp * qm).scale(&dg);
            let rhs = &(lam * &data.plus_at(i - 1)) * &data.plus_at(i + 1);
            (lhs, rhs)
        };
        let (res, c) = scaled_difference(&lhs, &rhs);
        residuals.push(res);
        prefactors.push(c);
    }
    Ok(QQResidual {
        residuals,
        prefactors,
    })
}

/// LHS - c RHS with c read off the leading coefficients (when both sides are
/// nonzero and degrees agree); otherwise the raw difference.
fn scaled_difference<S: Scalar>(lhs: &Poly<S>, rhs: &Poly<S>) -> (Poly<S>, S) {
    if lhs.is_zero() || rhs.is_zero() || lhs.degree() != rhs.degree() {
        return (lhs - rhs, S::one());
    }
    let c = lhs.leading() / rhs.leading();
    (lhs - &rhs.scale(&c), c)
}

/// dd-system residuals (rational-differential corner):
/// W_2^{g_i, g_{i+1}}(d_i^+, d_i^-) - (g_{i+1} - g_i) d_{i-1}^+ d_{i+1}^+,
/// with d_0^+ = 1. `d_plus` holds d_1^+ .. d_{r+1}^+ (raw, unnormalized),
/// `d_minus` holds d_1^- .. d_r^-.
pub fn dd_residual<S: Scalar>(
    d_plus: &[Poly<S>],
    d_minus: &[Poly<S>],
    twist: &[S],
) -> Result<Vec<Poly<S>>> {
    let r = d_minus.len();
    if d_plus.len() != r + 1 {
        return Err(Error::LengthMismatch {
            expected: r + 1,
            got: d_plus.len(),
        });
    }
    if twist.len() != r + 1 {
        return Err(Error::LengthMismatch {
            expected: r + 1,
            got: twist.len(),
        });
    }
    let corner = Corner::RatDiff;
    let mut out = Vec::with_capacity(r);
    for i in 1..=r {
        let dp = &d_plus[i - 1];
        let dm = &d_minus[i - 1];
        let w2 = &(dp * &corner.twisted_derivative(dm, &twist[i])?)
            - &(dm * &corner.twisted_derivative(dp, &twist[i - 1])?);
        let prev = if i == 1 {
            Poly::one()
        } else {
            d_plus[i - 2].clone()
        };
        let dg = twist[i].clone() - twist[i - 1].clone();
        let rhs = (&prev * &d_plus[i]).scale(&dg);
        out.push(&w2 - &rhs);
    }
    Ok(out)
}

/// Raw dd data from a rational-differential frame per the twisted-Wronskian
/// minors: d_j^{+} = W(rows 1..j)/det V, d_j^- = W(rows 1..j-1, j+1)/det V.
/// Returns (d_plus with the full determinant appended, d_minus).
pub fn extract_dd_data<S: Scalar>(frame: &Frame<S>) -> Result<(Vec<Poly<S>>, Vec<Poly<S>>)> {
    if !matches!(frame.corner, Corner::RatDiff) {
        return Err(Error::NoDerivative(frame.corner.name()));
    }
    let n = frame.rank();
    let r = n - 1;
    let mut d_plus = Vec::with_capacity(r + 1);
    let mut d_minus = Vec::with_capacity(r);
    for j in 1..=n {
        let rows: Vec<usize> = (1..=j).collect();
        let num = det_poly(&minor_matrix(frame, &rows, j)?)?;
        let vdet = vandermonde(frame, &rows)?.det()?;
        d_plus.push(num.scale(&vdet.recip()));
        if j <= r {
            let rows_m: Vec<usize> = (1..j).chain([j + 1]).collect();
            let num_m = det_poly(&minor_matrix(frame, &rows_m, j)?)?;
            let vdet_m = vandermonde(frame, &rows_m)?.det()?;
            d_minus.push(num_m.scale(&vdet_m.recip()));
        }
    }
    Ok((d_plus, d_minus))
}

#[derive(Clone, Debug)]
pub struct NondegReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Nondegeneracy: roots of Q_i^+ pairwise distinct within the node,
/// corner-distinct from the neighbors' roots and from Lambda_i's roots, and
/// adjacent twist entries corner-distinct. `window` bounds the orbit scan
/// for the shift corners; `None` uses twice the largest degree in sight.
pub fn nondegenerate<S: Scalar>(
    data: &QQData<S>,
    twist: &[S],
    corner: &Corner<S>,
    window: Option<i64>,
) -> Result<NondegReport> {
    let r = data.rank();
    let maxdeg = data
        .q_plus
        .iter()
        .chain(data.lambdas.iter())
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(1);
    let window = window.unwrap_or(2 * maxdeg as i64).max(1);
    let tol = 1e-8;
    let mut violations = Vec::new();

    let mut roots: Vec<Vec<S>> = Vec::with_capacity(r);
    for (i, qp) in data.q_plus.iter().enumerate() {
        let rs = if qp.degree() == Some(0) {
            vec![]
        } else {
            qp.roots()?
        };
        for a in 0..rs.len() {
            for b in a + 1..rs.len() {
                if !corner.orbit_distinct(&rs[a], &rs[b], 0, tol) {
                    violations.push(format!(
                        "node {}: repeated Bethe root {:?}",
                        i + 1,
                        rs[a].to_c64()
                    ));
                }
            }
        }
        roots.push(rs);
    }
    for i in 0..r {
        // vs neighbor nodes
        for di in [1usize] {
            if i + di < r {
                for a in &roots[i] {
                    for b in &roots[i + di] {
                        if !corner.orbit_distinct(a, b, window, tol) {
                            violations.push(format!(
                                "nodes {}/{}: root orbit collision {:?} ~ {:?}",
                                i + 1,
                                i + 1 + di,
                                a.to_c64(),
                                b.to_c64()
                            ));
                        }
                    }
                }
            }
        }
        // vs Lambda_i roots
        let lam = &data.lambdas[i];
        if lam.degree().map(|d| d > 0).unwrap_or(false) {
            for a in &roots[i] {
                for b in lam.roots()? {
                    if !corner.orbit_distinct(a, &b, window, tol) {
                        violations.push(format!(
                            "node {}: Bethe root {:?} collides with singularity {:?}",
                            i + 1,
                            a.to_c64(),
                            b.to_c64()
                        ));
                    }
                }
            }
        }
    }
    for i in 0..twist.len() - 1 {
        let distinct = match corner {
            Corner::QMult { .. } => corner.orbit_distinct(&twist[i], &twist[i + 1], window, tol),
            _ => corner.orbit_distinct(&twist[i], &twist[i + 1], 0, tol),
        };
        if !distinct {
            violations.push(format!(
                "twist entries {} and {} are not corner-distinct",
                i + 1,
                i + 2
            ));
        }
    }
    Ok(NondegReport {
        ok: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Debug)]
pub struct BetheCheck<S: Scalar> {
    pub node: usize,
    pub root: S,
    /// Cleared-denominator residual; None when the root is degenerate.
    pub residual: Option<f64>,
    /// Residual relative to the largest cleared term.
    pub relative: Option<f64>,
    pub degenerate: bool,
}

/// Type-A Cartan matrix a_{ij} (r x r).
pub fn cartan_matrix(r: usize) -> Vec<Vec<i64>> {
    (1..=r)
        .map(|i| (1..=r).map(|j| cartan_entry(i, j)).collect())
        .collect()
}

fn cartan_entry(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// Bethe residuals per root of each Q_i^+, in cleared-denominator form.
///
/// Shift corners use the two-point evaluation of the realized QQ relation:
///   xi_i Q_i(ss) L_i(s/s) Q_{i-1}(s) Q_{i+1}(s/s)
/// + xi_{i+1} Q_i(s/s) L_i(s) Q_{i-1}(ss) Q_{i+1}(s).
/// Differential corners clear the printed Gaudin sums; the trig measure term
/// is the caller's responsibility via the twist it passes (pipelines use
/// rho-shifted twists, spot checks the raw ones).
pub fn bethe_residual<S: Scalar>(
    data: &QQData<S>,
    twist: &[S],
    corner: &Corner<S>,
) -> Result<Vec<BetheCheck<S>>> {
    let r = data.rank();
    if twist.len() != r + 1 {
        return Err(Error::LengthMismatch {
            expected: r + 1,
            got: twist.len(),
        });
    }
    let mut all_roots: Vec<Vec<S>> = Vec::with_capacity(r);
    for qp in &data.q_plus {
        all_roots.push(if qp.degree() == Some(0) {
            vec![]
        } else {
            qp.roots()?
        });
    }
    let lam_roots: Vec<Vec<S>> = data
        .lambdas
        .iter()
        .map(|l| {
            if l.degree().map(|d| d > 0).unwrap_or(false) {
                l.roots()
            } else {
                Ok(vec![])
            }
        })
        .collect::<Result<_>>()?;

    let tol = 1e-9;
    let mut out = Vec::new();
    for i in 1..=r {
        let roots = &all_roots[i - 1];
        // repeated roots within the node: degenerate, no residual
        let mut node_degenerate = vec![false; roots.len()];
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                if (roots[a].clone() - roots[b].clone()).abs()
                    <= tol * (1.0 + roots[a].abs())
                {
                    node_degenerate[a] = true;
                    node_degenerate[b] = true;
                }
            }
        }
        for (a_idx, s) in roots.iter().enumerate() {
            if node_degenerate[a_idx] {
                out.push(BetheCheck {
                    node: i,
                    root: s.clone(),
                    residual: None,
                    relative: None,
                    degenerate: true,
                });
                continue;
            }
            let (res, scale) = if corner.is_shift() {
                shift_bethe_terms(data, twist, corner, i, s)?
            } else {
                gaudin_cleared_terms(
                    data,
                    twist,
                    corner,
                    i,
                    a_idx,
                    s,
                    &all_roots,
                    &lam_roots[i - 1],
                )
            };
            out.push(BetheCheck {
                node: i,
                root: s.clone(),
                residual: Some(res),
                relative: Some(if scale > 0.0 { res / scale } else { res }),
                degenerate: false,
            });
        }
    }
    Ok(out)
}

fn shift_bethe_terms<S: Scalar>(
    data: &QQData<S>,
    twist: &[S],
    corner: &Corner<S>,
    i: usize,
    s: &S,
) -> Result<(f64, f64)> {
    let up = |p: &Poly<S>| -> Result<S> { Ok(corner.shift_pow(p, 1)?.eval(s)) };
    let dn = |p: &Poly<S>| -> Result<S> { Ok(corner.shift_pow(p, -1)?.eval(s)) };
    let at = |p: &Poly<S>| p.eval(s);
    let qp = &data.q_plus[i - 1];
    let lam = &data.lambdas[i - 1];
    let prev = data.plus_at(i - 1);
    let next = data.plus_at(i + 1);
    let t1 = twist[i - 1].clone() * up(qp)? * dn(lam)? * at(&prev) * dn(&next)?;
    let t2 = twist[i].clone() * dn(qp)? * at(lam) * up(&prev)? * at(&next);
    let res = (t1.clone() + t2.clone()).abs();
    Ok((res, t1.abs().max(t2.abs())))
}

#[allow(clippy::too_many_arguments)]
fn gaudin_cleared_terms<S: Scalar>(
    data: &QQData<S>,
    twist: &[S],
    corner: &Corner<S>,
    i: usize,
    a_idx: usize,
    s: &S,
    all_roots: &[Vec<S>],
    lam_roots_i: &[S],
) -> (f64, f64) {
    let r = data.rank();
    // other roots with their Cartan pairing, nodes i-1, i, i+1
    let mut others: Vec<(S, i64)> = Vec::new();
    for j in 1..=r {
        let aij = cartan_entry(i, j);
        if aij == 0 {
            continue;
        }
        for (b_idx, sb) in all_roots[j - 1].iter().enumerate() {
            if j == i && b_idx == a_idx {
                continue;
            }
            others.push((sb.clone(), aij));
        }
    }
    // products A = prod (s - s_jb), B = prod (s - a_ic)
    let prod_a = others
        .iter()
        .fold(S::one(), |acc, (sb, _)| acc * (s.clone() - sb.clone()));
    let prod_b = lam_roots_i
        .iter()
        .fold(S::one(), |acc, ac| acc * (s.clone() - ac.clone()));
    let dg = twist[i].clone() - twist[i - 1].clone();
    // Clearing factor: A B (rat) resp. s A B (trig, whose leading term is
    // dg / s). The dg term is therefore dg A B in both cases; the sum terms
    // pick up the s factor only on the trig side.
    let s_factor = match corner {
        Corner::TrigDiff => s.clone(),
        _ => S::one(),
    };
    let t1 = dg * prod_a.clone() * prod_b.clone();
    let mut total = t1.clone();
    let mut scale = t1.abs();
    for (k, (_, aij)) in others.iter().enumerate() {
        // -a_ij / (s - s_jb), cleared
        let mut a_wo = S::one();
        for (k2, (sb2, _)) in others.iter().enumerate() {
            if k2 != k {
                a_wo = a_wo * (s.clone() - sb2.clone());
            }
        }
        let term = S::from_int(-aij) * s_factor.clone() * a_wo * prod_b.clone();
        scale = scale.max(term.abs());
        total = total + term;
    }
    for (c, _) in lam_roots_i.iter().enumerate() {
        // +1/(s - a_ic), cleared
        let mut b_wo = S::one();
        for (c2, ac2) in lam_roots_i.iter().enumerate() {
            if c2 != c {
                b_wo = b_wo * (s.clone() - ac2.clone());
            }
        }
        let term = s_factor.clone() * prod_a.clone() * b_wo;
        scale = scale.max(term.abs());
        total = total + term;
    }
    (total.abs(), scale)
}

/// Twist vector to feed into `bethe_residual` when the data came from minors:
/// the trig corner needs the rho-shift gamma_i - i; other corners pass
/// through unchanged.
pub fn bethe_twist_for<S: Scalar>(corner: &Corner<S>, twist: &[S]) -> Vec<S> {
    match corner {
        Corner::TrigDiff => twist
            .iter()
            .enumerate()
            .map(|(k, g)| g.clone() - S::from_int((k + 1) as i64))
            .collect(),
        _ => twist.to_vec(),
    }
}

use super::dense::{dot, norm2, Cholesky, DenseMatrix, QrNormal};
use super::{DiagScaling, SparseMatrix};
use crate::error::{Error, Result};

/// Result of an approximate normal-equation solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// `||A^T D A x - rhs||_2` measured at exit.
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Factored `A^T D A`, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct NormalSolver {
    factor: Factor,
}

#[derive(Debug, Clone)]
enum Factor {
    Dense(Cholesky),
    Laplacian(LaplacianLdl),
    Qr(QrNormal),
}

/// Largest `m * n` for which a failed Cholesky is retried by QR.
const QR_FALLBACK_LIMIT: usize = 1 << 22;

/// `L D L^T` of a grounded weighted Laplacian.
///
/// Pivots are formed as `excess + sum of off-diagonal weights`, all nonnegative,
/// so no cancellation occurs even when edge weights span many orders of magnitude.
#[derive(Debug, Clone)]
struct LaplacianLdl {
    n: usize,
    l: Vec<f64>,
    d: Vec<f64>,
}

impl LaplacianLdl {
    /// `None` when `A^T D A` is not a grounded Laplacian (some row has two
    /// entries of equal sign, different magnitude, or more than two entries).
    fn factor(a: &SparseMatrix, dv: &[f64]) -> Option<Result<Self>> {
        let n = a.ncols();
        let mut w = vec![0.0; n * n];
        let mut excess = vec![0.0; n];
        for (i, &di) in dv.iter().enumerate() {
            let (c, v) = a.row(i);
            match v.len() {
                0 => {}
                1 => excess[c[0]] += di * v[0] * v[0],
                2 if v[0] == -v[1] && c[0] != c[1] => {
                    let x = di * v[0] * v[0];
                    w[c[0] * n + c[1]] += x;
                    w[c[1] * n + c[0]] += x;
                }
                _ => return None,
            }
        }
        if dv.iter().any(|&v| v < 0.0) {
            return None;
        }
        let mut l = vec![0.0; n * n];
        let mut d = vec![0.0; n];
        for k in 0..n {
            let p = excess[k] + (k + 1..n).map(|j| w[k * n + j]).sum::<f64>();
            if !(p > 0.0) || !p.is_finite() {
                return Some(Err(Error::SingularSystem { pivot: p, threshold: 0.0 }));
            }
            d[k] = p;
            for i in k + 1..n {
                let wik = w[i * n + k];
                if wik == 0.0 {
                    continue;
                }
                l[i * n + k] = -wik / p;
                excess[i] += wik * excess[k] / p;
                for j in k + 1..n {
                    if j != i {
                        w[i * n + j] += wik * w[k * n + j] / p;
                    }
                }
            }
        }
        Some(Ok(LaplacianLdl { n, l, d }))
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s;
        }
        for i in 0..n {
            y[i] /= self.d[i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s;
        }
        y
    }
}

impl NormalSolver {
    pub fn new(a: &SparseMatrix, d: &[f64]) -> Result<Self> {
        if d.len() != a.nrows() {
            return Err(Error::Dimension("normal solver scaling length".into()));
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput("normal solver scaling"));
        }
        if let Some(f) = LaplacianLdl::factor(a, d) {
            return Ok(NormalSolver { factor: Factor::Laplacian(f?) });
        }
        let h = a.normal_matrix(d);
        match Cholesky::factor(&h) {
            Ok(c) => Ok(NormalSolver { factor: Factor::Dense(c) }),
            // Forming A^T D A squares the condition number; QR of D^{1/2} A does not.
            Err(Error::SingularSystem { .. }) if a.nrows() * a.ncols() <= QR_FALLBACK_LIMIT => {
                let mut b = DenseMatrix::zeros(a.nrows(), a.ncols());
                for (i, j, v) in a.triplets() {
                    b[(i, j)] += d[i].sqrt() * v;
                }
                Ok(NormalSolver { factor: Factor::Qr(QrNormal::factor(&b)?) })
            }
            Err(e) => Err(e),
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match &self.factor {
            Factor::Dense(c) => c.solve(rhs),
            Factor::Laplacian(f) => f.solve(rhs),
            Factor::Qr(q) => q.solve(rhs),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.factor {
            Factor::Dense(c) => c.dim(),
            Factor::Laplacian(f) => f.n,
            Factor::Qr(q) => q.dim(),
        }
    }
}

/// `A^T D A x`.
pub fn normal_apply(a: &SparseMatrix, d: &[f64], x: &[f64]) -> Vec<f64> {
    let mut ax = a.mul_vec(x);
    for (v, di) in ax.iter_mut().zip(d) {
        *v *= di;
    }
    a.tmul_vec(&ax)
}

fn is_sdd_incidence(a: &SparseMatrix) -> bool {
    (0..a.nrows()).all(|i| {
        let (_, v) = a.row(i);
        match v.len() {
            0 | 1 => true,
            2 => v[0].abs() == v[1].abs(),
            _ => false,
        }
    })
}

fn pcg(a: &SparseMatrix, d: &[f64], rhs: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, usize, bool) {
    let n = a.ncols();
    let mut diag = vec![0.0; n];
    for (i, &di) in d.iter().enumerate() {
        let (c, v) = a.row(i);
        for (&j, &x) in c.iter().zip(v) {
            diag[j] += di * x * x;
        }
    }
    let inv: Vec<f64> = diag.iter().map(|&v| if v > 0.0 { 1.0 / v } else { 0.0 }).collect();
    let bnorm = norm2(rhs);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (x, 0, true);
    }
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 1..=max_iter {
        let hp = normal_apply(a, d, &p);
        let php = dot(&p, &hp);
        if php <= 0.0 || !php.is_finite() {
            return (x, it, false);
        }
        let alpha = rz / php;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * hp[k];
        }
        if norm2(&r) <= tol * bnorm {
            return (x, it, true);
        }
        for k in 0..n {
            z[k] = r[k] * inv[k];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    (x, max_iter, false)
}

/// Solves `A^T D A x = rhs`.
///
/// Incidence-like matrices with an SDD normal matrix go through Jacobi-preconditioned
/// conjugate gradients; everything else (and PCG failures) through Cholesky.
pub fn solve_normal_equations(
    a: &SparseMatrix,
    d: &DiagScaling,
    rhs: &[f64],
    rel_tol: f64,
) -> Result<SolveReport> {
    if d.len() != a.nrows() || rhs.len() != a.ncols() {
        return Err(Error::Dimension("solve_normal_equations".into()));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidArgument(format!("rel_tol {rel_tol} outside (0,1)")));
    }
    if rhs.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("normal equation right-hand side"));
    }
    let dv = d.values();
    let report = |x: Vec<f64>, iterations: usize| {
        let hx = normal_apply(a, dv, &x);
        let res: Vec<f64> = hx.iter().zip(rhs).map(|(p, q)| p - q).collect();
        SolveReport { residual_norm: norm2(&res), solution: x, iterations }
    };
    let n = a.ncols();
    let mut pcg_attempt = None;
    if is_sdd_incidence(a) {
        let (x, it, ok) = pcg(a, dv, rhs, rel_tol * 1e-3, 10 * n + 100);
        if ok {
            return Ok(report(x, it));
        }
        pcg_attempt = Some((x, it));
    }
    match NormalSolver::new(a, dv) {
        Ok(s) => Ok(report(s.solve(rhs), 1)),
        Err(e) => match pcg_attempt {
            Some((x, it)) => {
                let r = report(x, it);
                if r.residual_norm <= rel_tol * norm2(rhs) {
                    Ok(r)
                } else {
                    Err(Error::NoConvergence { residual: r.residual_norm, steps: it })
                }
            }
            None => Err(e),
        },
    }
}

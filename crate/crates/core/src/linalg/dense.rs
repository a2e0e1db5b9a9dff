use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} values for a {rows}x{cols} matrix", data.len())));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Relative pivot floor for the Cholesky factorization.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Cholesky factor of a symmetric positive definite matrix.
///
/// The matrix is first equilibrated to unit diagonal, so the pivot test is
/// relative to the trace scale of the equilibrated system.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
    scale: Vec<f64>,
}

impl Cholesky {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension("cholesky of a non-square matrix".into()));
        }
        if a.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput("cholesky input"));
        }
        let mut scale = vec![0.0; n];
        for i in 0..n {
            let d = a[(i, i)];
            if d <= 0.0 {
                return Err(Error::SingularSystem { pivot: d, threshold: PIVOT_THRESHOLD });
            }
            scale[i] = 1.0 / d.sqrt();
        }
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[(j, j)] * scale[j] * scale[j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d.is_nan() || d <= PIVOT_THRESHOLD {
                return Err(Error::SingularSystem { pivot: d, threshold: PIVOT_THRESHOLD });
            }
            let ljj = d.sqrt();
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let mut s = a[(i, j)] * scale[i] * scale[j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / ljj;
            }
        }
        Ok(Cholesky { n, l, scale })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y: Vec<f64> = b.iter().zip(&self.scale).map(|(v, s)| v * s).collect();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for (v, s) in y.iter_mut().zip(&self.scale) {
            *v *= s;
        }
        y
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}

/// Householder triangularization of `B` with rows sorted by decreasing norm,
/// which stays accurate under extreme row scaling. Returns the row order, the
/// reduced columns (upper `n x n` block is `R`) and the reflectors.
fn householder(b: &DenseMatrix) -> Result<(Vec<usize>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let (m, n) = (b.nrows(), b.ncols());
    if m < n {
        return Err(Error::Dimension(format!("need at least as many rows as columns, got {m} x {n}")));
    }
    let rn: Vec<f64> = (0..m).map(|i| norm2(b.row(i))).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| rn[y].total_cmp(&rn[x]).then(x.cmp(&y)));
    // Column-major working copy of the permuted matrix.
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| order.iter().map(|&i| b[(i, j)]).collect()).collect();
    let cn: Vec<f64> = w.iter().map(|c| norm2(c)).collect();
    let mut refl: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let x = &w[k][k..];
        let alpha = norm2(x);
        // Only dependence at round-off level is rejected; the row scaling may be extreme.
        let floor = 32.0 * f64::EPSILON * cn[k];
        if !(alpha > floor) {
            return Err(Error::SingularSystem { pivot: alpha, threshold: floor });
        }
        let mut v = x.to_vec();
        v[0] += if x[0] >= 0.0 { alpha } else { -alpha };
        let vn = norm2(&v);
        v.iter_mut().for_each(|t| *t /= vn);
        for col in w.iter_mut().skip(k) {
            let d: f64 = v.iter().zip(&col[k..]).map(|(a, b)| a * b).sum();
            for (t, vi) in col[k..].iter_mut().zip(&v) {
                *t -= 2.0 * d * vi;
            }
        }
        refl.push(v);
    }
    Ok((order, w, refl))
}

/// Squared row norms of the thin `Q` of `B = QR`, i.e. the leverage scores of
/// a full-column-rank `B`.
pub fn orthonormal_row_norms(b: &DenseMatrix) -> Result<Vec<f64>> {
    let (m, n) = (b.nrows(), b.ncols());
    let (order, _, refl) = householder(b)?;
    // Q = H_1 ... H_n [I; 0], built column by column.
    let mut sq = vec![0.0; m];
    for j in 0..n {
        let mut q = vec![0.0; m];
        q[j] = 1.0;
        for k in (0..n).rev() {
            let v = &refl[k];
            let d: f64 = v.iter().zip(&q[k..]).map(|(a, b)| a * b).sum();
            for (t, vi) in q[k..].iter_mut().zip(v) {
                *t -= 2.0 * d * vi;
            }
        }
        for (pos, &i) in order.iter().enumerate() {
            sq[i] += q[pos] * q[pos];
        }
    }
    Ok(sq)
}

/// `B^T B = R^T R` from a Householder QR of `B`. Slower than forming `B^T B`,
/// but the condition number is not squared.
#[derive(Debug, Clone)]
pub struct QrNormal {
    n: usize,
    /// Column-major upper triangle.
    r: Vec<Vec<f64>>,
}

impl QrNormal {
    pub fn factor(b: &DenseMatrix) -> Result<Self> {
        let n = b.ncols();
        let (_, w, _) = householder(b)?;
        let r = w.into_iter().enumerate().map(|(j, c)| c[..=j].to_vec()).collect();
        Ok(QrNormal { n, r })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `R^T R x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let r = |i: usize, j: usize| self.r[j][i];
        let mut y = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|k| r(k, i) * y[k]).sum();
            y[i] = (y[i] - s) / r(i, i);
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| r(i, k) * y[k]).sum();
            y[i] = (y[i] - s) / r(i, i);
        }
        y
    }
}

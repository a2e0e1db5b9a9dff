use crate::error::{Error, Result};

/// Row-compressed `m x n` real matrix.
///
/// Entries within a row are sorted by column and never duplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed
    /// and exact zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rows];
        for &(i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::Dimension(format!(
                    "entry ({i},{j}) outside a {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteInput("sparse matrix entry"));
            }
            per_row[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut r in per_row {
            r.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < r.len() {
                let j = r[k].0;
                let mut s = 0.0;
                while k < r.len() && r[k].0 == j {
                    s += r[k].1;
                    k += 1;
                }
                if s != 0.0 {
                    col_idx.push(j);
                    vals.push(s);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(SparseMatrix { rows, cols, row_ptr, col_idx, vals })
    }

    /// Builds a matrix from dense rows, skipping zeros.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut t = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension("ragged dense rows".into()));
            }
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m, n, &t)
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(n, n, &t).expect("identity is valid")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &self.vals[a..b])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn max_row_nnz(&self) -> usize {
        (0..self.rows).map(|i| self.row_nnz(i)).max().unwrap_or(0)
    }

    /// Iterates over all stored `(row, col, value)` entries in row order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    /// `A h`.
    pub fn mul_vec(&self, h: &[f64]) -> Vec<f64> {
        assert_eq!(h.len(), self.cols, "mul_vec dimension");
        (0..self.rows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &x)| x * h[j]).sum()
            })
            .collect()
    }

    /// `A^T v`.
    pub fn tmul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows, "tmul_vec dimension");
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            let (c, x) = self.row(i);
            for (&j, &a) in c.iter().zip(x) {
                out[j] += a * vi;
            }
        }
        out
    }

    /// Dot product of row `i` with `h`.
    pub fn row_dot(&self, i: usize, h: &[f64]) -> f64 {
        let (c, v) = self.row(i);
        c.iter().zip(v).map(|(&j, &x)| x * h[j]).sum()
    }

    /// Dense `A^T diag(d) A`.
    pub fn normal_matrix(&self, d: &[f64]) -> super::DenseMatrix {
        assert_eq!(d.len(), self.rows);
        let n = self.cols;
        let mut h = super::DenseMatrix::zeros(n, n);
        for (i, &di) in d.iter().enumerate() {
            if di == 0.0 {
                continue;
            }
            let (c, v) = self.row(i);
            for (a, (&ja, &va)) in c.iter().zip(v).enumerate() {
                let w = di * va;
                for (&jb, &vb) in c[a..].iter().zip(&v[a..]) {
                    h[(ja, jb)] += w * vb;
                }
            }
        }
        for r in 0..n {
            for c in 0..r {
                h[(r, c)] = h[(c, r)];
            }
        }
        h
    }

    /// `diag(g) A`.
    pub fn scale_rows(&self, g: &[f64]) -> SparseMatrix {
        assert_eq!(g.len(), self.rows);
        let mut out = self.clone();
        for (i, &gi) in g.iter().enumerate() {
            for k in out.row_ptr[i]..out.row_ptr[i + 1] {
                out.vals[k] *= gi;
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut t: Vec<_> = self.triplets().collect();
        t.extend(other.triplets().map(|(i, j, v)| (i + self.rows, j, v)));
        SparseMatrix::from_triplets(self.rows + other.rows, self.cols, &t)
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> SparseMatrix {
        let mut map = vec![usize::MAX; self.cols];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let t: Vec<_> = self
            .triplets()
            .filter(|&(_, j, _)| map[j] != usize::MAX)
            .map(|(i, j, v)| (i, map[j], v))
            .collect();
        SparseMatrix::from_triplets(self.rows, keep.len(), &t).expect("columns are in range")
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |a, &v| a.max(v.abs()))
    }
}

/// Non-negative diagonal scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagScaling {
    values: Vec<f64>,
}

impl DiagScaling {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput("diagonal scaling"));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidArgument("diagonal scaling must be non-negative".into()));
        }
        Ok(DiagScaling { values })
    }

    pub fn ones(m: usize) -> Self {
        DiagScaling { values: vec![1.0; m] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Computes `G A h` exactly.
pub fn apply_scaled(a: &SparseMatrix, g: &DiagScaling, h: &[f64]) -> Result<Vec<f64>> {
    if g.len() != a.nrows() || h.len() != a.ncols() {
        return Err(Error::Dimension("apply_scaled".into()));
    }
    Ok((0..a.nrows()).map(|i| g.values[i] * a.row_dot(i, h)).collect())
}

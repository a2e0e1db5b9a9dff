use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// Two-sided LP `min c^T x  s.t.  A^T x = b,  l <= x <= u`, with `A` of size `m x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    pub a: SparseMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
}

impl LpInstance {
    pub fn new(a: SparseMatrix, b: Vec<f64>, c: Vec<f64>, l: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let inst = LpInstance { a, b, c, l, u };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.a.nrows(), self.a.ncols());
        if self.b.len() != n || self.c.len() != m || self.l.len() != m || self.u.len() != m {
            return Err(Error::Dimension(format!(
                "A is {m}x{n} but |b|={}, |c|={}, |l|={}, |u|={}",
                self.b.len(),
                self.c.len(),
                self.l.len(),
                self.u.len()
            )));
        }
        if self.b.iter().chain(&self.c).chain(&self.l).chain(&self.u).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput("LP data"));
        }
        if let Some(i) = (0..m).find(|&i| !(self.l[i] < self.u[i])) {
            return Err(Error::InvalidArgument(format!("bounds must satisfy l < u (coordinate {i})")));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `A^T x - b`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut r = self.a.tmul_vec(x);
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }
}

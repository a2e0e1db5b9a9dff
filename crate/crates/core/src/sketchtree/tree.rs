use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{apply_scaled, gaussian_matrix, jl_rows, DenseMatrix, DiagScaling, SparseMatrix, DEFAULT_C_JL};

/// Binary segment tree of JL sketches over the rows of `G A`.
///
/// Node `id` (heap order, root = 1) on level `l` covers padded rows
/// `[j * M / 2^l, (j + 1) * M / 2^l)` with `id = 2^l + j`.
#[derive(Debug, Clone)]
pub struct SketchTree {
    a: SparseMatrix,
    g: Vec<f64>,
    padded: usize,
    depth: usize,
    k: usize,
    c: f64,
    j: Vec<DenseMatrix>,
    q: Vec<Vec<f64>>,
}

/// Node norms for a fixed `h`, reused across draws.
#[derive(Debug, Clone)]
pub struct PreparedQuery {
    norms: Vec<f64>,
    gah: Vec<f64>,
}

impl PreparedQuery {
    /// Exact `G A h`.
    pub fn product(&self) -> &[f64] {
        &self.gah
    }

    /// Sketched squared norm of node `id`.
    pub fn node_norm(&self, id: usize) -> f64 {
        self.norms[id]
    }
}

impl SketchTree {
    /// Initializes with sketch accuracy `c = 1/log2(4m)`.
    pub fn init(a: &SparseMatrix, g: &DiagScaling, seed: u64) -> Result<Self> {
        let c = 1.0 / (4.0 * a.nrows().max(1) as f64).log2();
        Self::init_with(a, g, seed, c, DEFAULT_C_JL)
    }

    pub fn init_with(a: &SparseMatrix, g: &DiagScaling, seed: u64, c: f64, c_jl: f64) -> Result<Self> {
        if g.len() != a.nrows() {
            return Err(Error::Dimension("sketch tree scaling length".into()));
        }
        let m = a.nrows().max(1);
        let padded = m.next_power_of_two();
        let depth = padded.trailing_zeros() as usize;
        let k = jl_rows(c_jl, c, padded);
        let n = a.ncols();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut j = Vec::with_capacity(2 * padded);
        j.push(DenseMatrix::zeros(0, 0));
        for id in 1..2 * padded {
            let level = usize::BITS as usize - 1 - id.leading_zeros() as usize;
            j.push(gaussian_matrix(k, padded >> level, &mut rng));
        }
        let mut t = SketchTree {
            a: a.clone(),
            g: g.values().to_vec(),
            padded,
            depth,
            k,
            c,
            j,
            q: vec![vec![0.0; k * n]; 2 * padded],
        };
        for i in 0..a.nrows() {
            let gi = t.g[i];
            t.add_row(i, gi);
        }
        Ok(t)
    }

    /// Adds `coef * J[:, i] a_i^T` to every node containing row `i`.
    fn add_row(&mut self, i: usize, coef: f64) {
        if coef == 0.0 {
            return;
        }
        let n = self.a.ncols();
        let k = self.k;
        let (cols, vals) = self.a.row(i);
        for level in 0..=self.depth {
            let seg = self.padded >> level;
            let id = (1 << level) + i / seg;
            let local = i % seg;
            let jm = &self.j[id];
            let q = &mut self.q[id];
            for r in 0..k {
                let jr = jm[(r, local)] * coef;
                for (&col, &v) in cols.iter().zip(vals) {
                    q[r * n + col] += jr * v;
                }
            }
        }
    }

    /// Sets `g_i <- s`.
    pub fn scale(&mut self, i: usize, s: f64) -> Result<()> {
        if i >= self.g.len() {
            return Err(Error::Dimension(format!("row {i} out of range")));
        }
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidArgument("scaling must be finite and non-negative".into()));
        }
        let d = s - self.g[i];
        self.add_row(i, d);
        self.g[i] = s;
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    pub fn accuracy(&self) -> f64 {
        self.c
    }

    pub fn sketch_rows(&self) -> usize {
        self.k
    }

    pub fn padded_rows(&self) -> usize {
        self.padded
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.a
    }

    pub fn scaling(&self) -> &[f64] {
        &self.g
    }

    /// Stored sketch product of node `id` (row-major `k x n`).
    pub fn stored_sketch(&self, id: usize) -> &[f64] {
        &self.q[id]
    }

    /// `J^{id} [G A]^{id}` recomputed from scratch.
    pub fn recompute_sketch(&self, id: usize) -> Vec<f64> {
        let level = usize::BITS as usize - 1 - id.leading_zeros() as usize;
        let seg = self.padded >> level;
        let start = (id - (1 << level)) * seg;
        let n = self.a.ncols();
        let mut out = vec![0.0; self.k * n];
        for i in start..(start + seg).min(self.a.nrows()) {
            let (cols, vals) = self.a.row(i);
            for r in 0..self.k {
                let jr = self.j[id][(r, i - start)] * self.g[i];
                for (&col, &v) in cols.iter().zip(vals) {
                    out[r * n + col] += jr * v;
                }
            }
        }
        out
    }

    /// Computes every node's sketched squared norm `||Q h||^2`.
    pub fn prepare(&self, h: &[f64]) -> Result<PreparedQuery> {
        let n = self.a.ncols();
        if h.len() != n {
            return Err(Error::Dimension("sketch query vector".into()));
        }
        let g = DiagScaling::new(self.g.clone())?;
        let gah = apply_scaled(&self.a, &g, h)?;
        let mut norms = vec![0.0; 2 * self.padded];
        for (id, q) in self.q.iter().enumerate().skip(1) {
            let mut s = 0.0;
            for r in 0..self.k {
                let v: f64 = q[r * n..(r + 1) * n].iter().zip(h).map(|(a, b)| a * b).sum();
                s += v * v;
            }
            norms[id] = s;
        }
        Ok(PreparedQuery { norms, gah })
    }

    /// Probability of descending from the root to each leaf (the `Z` values).
    pub fn leaf_reach_probabilities(&self, prep: &PreparedQuery) -> Vec<f64> {
        let mut reach = vec![0.0; 2 * self.padded];
        reach[1] = 1.0;
        for id in 1..self.padded {
            let (r1, r2) = (prep.norms[2 * id], prep.norms[2 * id + 1]);
            if r1 + r2 > 0.0 {
                reach[2 * id] = reach[id] * r1 / (r1 + r2);
                reach[2 * id + 1] = reach[id] * r2 / (r1 + r2);
            }
        }
        reach[self.padded..self.padded + self.a.nrows()].to_vec()
    }

    /// Returns row `j` with probability `(G A h)_j^2 / U`, or nothing.
    pub fn tree_sample<R: Rng + ?Sized>(&self, h: &[f64], u: f64, rng: &mut R) -> Result<Option<usize>> {
        let prep = self.prepare(h)?;
        self.sample_prepared(&prep, u, rng)
    }

    pub fn sample_prepared<R: Rng + ?Sized>(
        &self,
        prep: &PreparedQuery,
        u: f64,
        rng: &mut R,
    ) -> Result<Option<usize>> {
        if !(u > 0.0) {
            return Err(Error::InvalidArgument("sampling budget must be positive".into()));
        }
        let mut id = 1;
        let mut z = 1.0;
        while id < self.padded {
            let (r1, r2) = (prep.norms[2 * id], prep.norms[2 * id + 1]);
            if r1 + r2 <= 0.0 {
                return Ok(None);
            }
            if rng.random::<f64>() * (r1 + r2) < r1 {
                z *= r1 / (r1 + r2);
                id *= 2;
            } else {
                z *= r2 / (r1 + r2);
                id = 2 * id + 1;
            }
        }
        let row = id - self.padded;
        if row >= self.a.nrows() {
            return Ok(None);
        }
        let v = prep.gah[row];
        let ratio = v * v / (u * z);
        if ratio > 1.0 {
            return Err(Error::BudgetTooSmall { ratio });
        }
        Ok(if rng.random::<f64>() < ratio { Some(row) } else { None })
    }

    /// Exactly the rows with `|(G A h)_i| >= eps`; sketches only prune subtrees.
    pub fn heavy_query(&self, h: &[f64], eps: f64) -> Result<Vec<usize>> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument("heavy-hitter threshold must be positive".into()));
        }
        let prep = self.prepare(h)?;
        // A node is dropped only when even a factor-2 sketch error could not hide an entry >= eps.
        let slack = (2.0 * self.c).exp() * 4.0;
        let mut out = Vec::new();
        let mut stack = vec![1usize];
        while let Some(id) = stack.pop() {
            if prep.norms[id] * slack < eps * eps {
                continue;
            }
            if id >= self.padded {
                let row = id - self.padded;
                if row < self.a.nrows() && prep.gah[row].abs() >= eps {
                    out.push(row);
                }
            } else {
                stack.push(2 * id + 1);
                stack.push(2 * id);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

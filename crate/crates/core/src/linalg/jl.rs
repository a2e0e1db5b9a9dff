use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::DenseMatrix;
use crate::error::{Error, Result};

/// Default constant in the sketch dimension `k = ceil(C_jl eps^-2 log m)`.
pub const DEFAULT_C_JL: f64 = 8.0;

pub fn jl_rows(c_jl: f64, eps: f64, m: usize) -> usize {
    (c_jl * (m.max(2) as f64).ln() / (eps * eps)).ceil().max(1.0) as usize
}

/// Gaussian JL matrix with `k` rows scaled by `1/sqrt(k)`.
pub fn jl_sketch(eps: f64, m: usize, seed: u64) -> Result<DenseMatrix> {
    jl_sketch_with(DEFAULT_C_JL, eps, m, seed)
}

pub fn jl_sketch_with(c_jl: f64, eps: f64, m: usize, seed: u64) -> Result<DenseMatrix> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("jl eps {eps} outside (0,1)")));
    }
    if !(c_jl > 0.0) {
        return Err(Error::InvalidArgument("jl constant must be positive".into()));
    }
    let k = jl_rows(c_jl, eps, m);
    Ok(gaussian_matrix(k, m, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// `k x m` matrix of i.i.d. `N(0, 1/k)` entries drawn from `rng`.
pub fn gaussian_matrix<R: rand::Rng>(k: usize, m: usize, rng: &mut R) -> DenseMatrix {
    let s = 1.0 / (k as f64).sqrt();
    let data = (0..k * m)
        .map(|_| {
            let x: f64 = StandardNormal.sample(rng);
            x * s
        })
        .collect();
    DenseMatrix::from_row_major(k, m, data).expect("sizes agree")
}

//! Sparse and dense kernels, normal-equation solvers and JL sketches.

mod dense;
mod jl;
mod mm;
mod solve;
mod sparse;

pub use dense::{dot, norm1, norm2, norm_inf, orthonormal_row_norms, Cholesky, DenseMatrix, QrNormal, PIVOT_THRESHOLD};
pub use jl::{gaussian_matrix, jl_rows, jl_sketch, jl_sketch_with, DEFAULT_C_JL};
pub use mm::{read_matrix_market, write_matrix_market};
pub use solve::{normal_apply, solve_normal_equations, NormalSolver, SolveReport};
pub use sparse::{apply_scaled, DiagScaling, SparseMatrix};

use nalgebra::{DMatrix, DVector};

use super::{OracleMethod, OracleResult};
use crate::error::{Error, Result};
use crate::ipm::LpInstance;
use crate::linalg::SparseMatrix;

fn dense(a: &SparseMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplets() {
        d[(i, j)] += v;
    }
    d
}

/// Visits every `k`-subset of `0..m` in lexicographic order.
fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Optimal vertex of a two-sided LP by enumeration: `rank(A)` coordinates free,
/// the rest at a bound.
pub fn enumerate_lp(inst: &LpInstance) -> Result<OracleResult> {
    let (m, n) = (inst.m(), inst.n());
    if m > 14 {
        return Err(Error::OracleLimit(format!("enumerate_lp supports m <= 14, got {m}")));
    }
    let a = dense(&inst.a);
    let rank = a.clone().svd(false, false).rank(1e-9);
    let b = DVector::from_column_slice(&inst.b);
    let tol = 1e-9 * (1.0 + inst.b.iter().fold(0.0f64, |x, v| x.max(v.abs())));
    let mut best: Option<(f64, Vec<f64>)> = None;
    for_each_subset(m, rank, |free| {
        let fixed: Vec<usize> = (0..m).filter(|i| !free.contains(i)).collect();
        let af = DMatrix::from_fn(n, rank, |r, c| a[(free[c], r)]);
        let svd = af.clone().svd(true, true);
        if svd.rank(1e-9) < rank {
            return;
        }
        for pattern in 0u32..(1 << fixed.len()) {
            let mut x = vec![0.0; m];
            let mut rhs = b.clone();
            for (k, &i) in fixed.iter().enumerate() {
                x[i] = if pattern >> k & 1 == 1 { inst.u[i] } else { inst.l[i] };
                for r in 0..n {
                    rhs[r] -= a[(i, r)] * x[i];
                }
            }
            let Ok(xf) = svd.solve(&rhs, 1e-12) else { continue };
            if (&af * &xf - &rhs).amax() > tol {
                continue;
            }
            let mut ok = true;
            for (c, &i) in free.iter().enumerate() {
                let v = xf[c];
                if v < inst.l[i] - 1e-9 || v > inst.u[i] + 1e-9 {
                    ok = false;
                    break;
                }
                x[i] = v.clamp(inst.l[i], inst.u[i]);
            }
            if ok {
                let val: f64 = x.iter().zip(&inst.c).map(|(x, c)| x * c).sum();
                if best.as_ref().is_none_or(|(bv, _)| val < *bv) {
                    best = Some((val, x));
                }
            }
        }
    });
    let (value, witness) = best.ok_or_else(|| Error::Infeasible("no vertex satisfies the constraints".into()))?;
    Ok(OracleResult { value, witness, method: OracleMethod::VertexEnumeration })
}

/// `min_z ||A z + c||_1` by zeroing every `n`-subset of residuals.
pub fn enumerate_l1(a: &SparseMatrix, c: &[f64]) -> Result<OracleResult> {
    let (m, n) = (a.nrows(), a.ncols());
    if m > 20 || n > 4 {
        return Err(Error::OracleLimit(format!("enumerate_l1 supports m <= 20, n <= 4, got {m} x {n}")));
    }
    let ad = dense(a);
    let cv = DVector::from_column_slice(c);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for_each_subset(m, n, |rows| {
        let sub = DMatrix::from_fn(n, n, |r, k| ad[(rows[r], k)]);
        let rhs = DVector::from_fn(n, |r, _| -c[rows[r]]);
        let Some(z) = sub.lu().solve(&rhs) else { return };
        let val = (&ad * &z + &cv).lp_norm(1);
        if val.is_finite() && best.as_ref().is_none_or(|(bv, _)| val < *bv) {
            best = Some((val, z.iter().copied().collect()));
        }
    });
    let (value, witness) = best.ok_or_else(|| Error::InvalidArgument("A has no invertible n-row subset".into()))?;
    Ok(OracleResult { value, witness, method: OracleMethod::SubsetEnumeration })
}

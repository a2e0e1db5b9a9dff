use crate::error::{Error, Result};

/// Value and first four derivatives of `phi(x) = -log(x - l) - log(u - x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierDerivs {
    pub phi: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

pub fn barrier_derivs(x: f64, l: f64, u: f64) -> Result<BarrierDerivs> {
    let a = x - l;
    let b = u - x;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::OutOfDomain { index: 0 });
    }
    let (ia, ib) = (1.0 / a, 1.0 / b);
    Ok(BarrierDerivs {
        phi: -a.ln() - b.ln(),
        d1: ib - ia,
        d2: ia * ia + ib * ib,
        d3: 2.0 * (ib * ib * ib - ia * ia * ia),
        d4: 6.0 * (ia.powi(4) + ib.powi(4)),
    })
}

/// Componentwise `(phi', phi'')`, failing with the first offending index.
pub fn barrier_grad_hess(x: &[f64], l: &[f64], u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut d1 = Vec::with_capacity(x.len());
    let mut d2 = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let a = x[i] - l[i];
        let b = u[i] - x[i];
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::OutOfDomain { index: i });
        }
        d1.push(1.0 / b - 1.0 / a);
        d2.push(1.0 / (a * a) + 1.0 / (b * b));
    }
    Ok((d1, d2))
}

/// Whether `l < x < u` holds in every coordinate.
pub fn strictly_interior(x: &[f64], l: &[f64], u: &[f64]) -> bool {
    x.iter().zip(l.iter().zip(u)).all(|(xi, (li, ui))| xi > li && xi < ui)
}

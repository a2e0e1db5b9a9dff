use crate::error::{Error, Result};

/// `||h||_tau = sqrt(sum tau_i h_i^2)`.
pub fn tau_norm(h: &[f64], tau: &[f64]) -> f64 {
    h.iter().zip(tau).map(|(x, t)| t * x * x).sum::<f64>().sqrt()
}

/// `||h||_inf + c_norm ||h||_tau`.
pub fn tau_inf_norm(h: &[f64], tau: &[f64], c_norm: f64) -> f64 {
    h.iter().fold(0.0f64, |m, v| m.max(v.abs())) + c_norm * tau_norm(h, tau)
}

fn candidate(g: &[f64], ratio: &[f64], t: f64, kappa: f64, tau: &[f64], c_norm: f64) -> Option<(f64, Vec<f64>)> {
    if !(t.is_finite() && kappa.is_finite()) || t < 0.0 || kappa < 0.0 {
        return None;
    }
    let h: Vec<f64> = g
        .iter()
        .zip(ratio)
        .map(|(gi, ri)| gi.signum() * t.min(kappa * ri))
        .map(|v| if v == 0.0 { 0.0 } else { v })
        .collect();
    let nrm = tau_inf_norm(&h, tau, c_norm);
    if !(nrm > 0.0) {
        return None;
    }
    let h: Vec<f64> = h.iter().map(|v| v / nrm).collect();
    let val = g.iter().zip(&h).map(|(a, b)| a * b).sum();
    Some((val, h))
}

/// The maximizer `g^flat` of `<g, h>` over the unit ball of `||.||_inf + c_norm ||.||_tau`.
///
/// The maximizer has the form `h_i = sign(g_i) min(t, kappa |g_i| / tau_i)`. Coordinates
/// are sorted by `|g_i|/tau_i`; for each prefix of capped coordinates the stationary
/// point and the segment boundaries are solved in closed form and the best is kept.
/// Returns `h = 0` for `g = 0`.
pub fn flat_operator(g: &[f64], tau: &[f64], c_norm: f64) -> Result<Vec<f64>> {
    let m = g.len();
    if tau.len() != m {
        return Err(Error::Dimension("flat_operator".into()));
    }
    if g.iter().chain(tau).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("flat_operator"));
    }
    if tau.iter().any(|&t| t <= 0.0) || !(c_norm > 0.0) {
        return Err(Error::InvalidArgument("flat_operator needs tau > 0 and c_norm > 0".into()));
    }
    if g.iter().all(|&v| v == 0.0) {
        return Ok(vec![0.0; m]);
    }
    let ratio: Vec<f64> = g.iter().zip(tau).map(|(gi, ti)| gi.abs() / ti).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| ratio[b].partial_cmp(&ratio[a]).unwrap().then(a.cmp(&b)));

    let c2 = c_norm * c_norm;
    // Suffix sums of g_i^2 / tau_i over the uncapped coordinates.
    let mut q_suffix = vec![0.0; m + 1];
    for k in (0..m).rev() {
        let i = order[k];
        q_suffix[k] = q_suffix[k + 1] + g[i].abs() * ratio[i];
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |cand: Option<(f64, Vec<f64>)>| {
        if let Some((v, h)) = cand {
            if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                best = Some((v, h));
            }
        }
    };
    let (mut tsum, mut gsum) = (0.0, 0.0);
    for j in 0..=m {
        let q = q_suffix[j];
        if j < m {
            let rj = ratio[order[j]];
            // Boundary: coordinate j sits exactly at the cap.
            let kappa = 1.0 / (c_norm * (rj * rj * tsum + q).sqrt() + rj);
            consider(candidate(g, &ratio, kappa * rj, kappa, tau, c_norm));
        }
        if j > 0 {
            if q == 0.0 {
                let t = 1.0 / (1.0 + c_norm * tsum.sqrt());
                consider(candidate(g, &ratio, t, 0.0, tau, c_norm));
            } else {
                // Stationary point: kappa = a t + b and t^2 T + kappa^2 Q = (1-t)^2 / c^2.
                let a = (tsum - 1.0 / c2) / gsum;
                let b = 1.0 / (c2 * gsum);
                let qa = tsum + a * a * q - 1.0 / c2;
                let qb = 2.0 * a * b * q + 2.0 / c2;
                let qc = b * b * q - 1.0 / c2;
                let roots: Vec<f64> = if qa.abs() < 1e-300 {
                    vec![-qc / qb]
                } else {
                    let disc = qb * qb - 4.0 * qa * qc;
                    if disc < 0.0 {
                        vec![]
                    } else {
                        let s = disc.sqrt();
                        let r1 = (-qb - qb.signum() * s) / (2.0 * qa);
                        let r2 = if r1 != 0.0 { qc / (qa * r1) } else { -qb / qa };
                        vec![r1, r2]
                    }
                };
                for t in roots {
                    if t > 0.0 && t < 1.0 {
                        consider(candidate(g, &ratio, t, a * t + b, tau, c_norm));
                    }
                }
            }
        }
        if j < m {
            let i = order[j];
            tsum += tau[i];
            gsum += g[i].abs();
        }
    }
    Ok(best.map(|(_, h)| h).unwrap_or_else(|| vec![0.0; m]))
}

/// `||g||^*_{tau+inf} = <g, g^flat>`.
pub fn dual_norm(g: &[f64], tau: &[f64], c_norm: f64) -> Result<f64> {
    let h = flat_operator(g, tau, c_norm)?;
    Ok(g.iter().zip(&h).map(|(a, b)| a * b).sum())
}

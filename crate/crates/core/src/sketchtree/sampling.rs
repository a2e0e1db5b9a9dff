use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;

use super::tree::SketchTree;
use crate::error::{Error, Result};

/// Sparse random diagonal matrix `R`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleMatrix {
    entries: Vec<(usize, f64)>,
}

impl SampleMatrix {
    /// Builds from `(index, weight)` pairs; indices must be unique and weights positive.
    pub fn new(mut entries: Vec<(usize, f64)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("duplicate sample index".into()));
        }
        if entries.iter().any(|e| !(e.1.is_finite() && e.1 > 0.0)) {
            return Err(Error::InvalidArgument("sample weights must be finite and positive".into()));
        }
        Ok(SampleMatrix { entries })
    }

    pub fn identity(m: usize) -> Self {
        SampleMatrix { entries: (0..m).map(|i| (i, 1.0)).collect() }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_diagonal(&self, m: usize) -> Vec<f64> {
        let mut d = vec![0.0; m];
        for &(i, w) in &self.entries {
            d[i] = w;
        }
        d
    }

    /// `R v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for &(i, w) in &self.entries {
            out[i] = w * v[i];
        }
        out
    }
}

/// Independent coordinate sampling with `R_ii = 1/min(q_i,1)` w.p. `min(q_i,1)`, where
/// `q_i = C_valid^2 |delta_i| / gamma + C_sample sigma_i log(m) / gamma^2`.
pub fn sample_valid_independent(
    delta_r: &[f64],
    sigma: &[f64],
    gamma: f64,
    c_valid: f64,
    c_sample: f64,
    seed: u64,
) -> Result<SampleMatrix> {
    if delta_r.len() != sigma.len() {
        return Err(Error::Dimension("independent sampler inputs".into()));
    }
    if delta_r.iter().chain(sigma).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("independent sampler"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!("gamma {gamma} outside (0,1)")));
    }
    let m = delta_r.len();
    let logm = (m.max(2) as f64).ln();
    let q = independent_probabilities(delta_r, sigma, gamma, c_valid, c_sample, logm);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for (i, &qi) in q.iter().enumerate() {
        let p = qi.min(1.0);
        if p >= 1.0 {
            entries.push((i, 1.0));
        } else if p > 0.0 && rng.random::<f64>() < p {
            entries.push((i, 1.0 / p));
        }
    }
    Ok(SampleMatrix { entries })
}

/// Inclusion scores `q_i` for the independent sampler.
pub fn independent_probabilities(
    delta_r: &[f64],
    sigma: &[f64],
    gamma: f64,
    c_valid: f64,
    c_sample: f64,
    logm: f64,
) -> Vec<f64> {
    delta_r
        .iter()
        .zip(sigma)
        .map(|(d, s)| c_valid * c_valid * d.abs() / gamma + c_sample * s * logm / (gamma * gamma))
        .collect()
}

/// Constants of the mixture sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureConstants {
    pub c_valid: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Upper bound on the averaging factor `C_0`; `None` keeps the analytic value.
    pub c0_cap: Option<f64>,
}

impl MixtureConstants {
    pub fn practical() -> Self {
        MixtureConstants { c_valid: 4.0, c1: 1.0, c2: 1.0, c3: 4.0, c0_cap: Some(1e4) }
    }
}

/// Above this many draws the per-draw simulation is replaced by exact multinomial counts.
pub const DIRECT_DRAW_LIMIT: f64 = 2e6;

/// Derived quantities of one mixture sampling round.
#[derive(Debug, Clone, PartialEq)]
pub struct MixturePlan {
    pub u: f64,
    pub c: f64,
    pub s: f64,
    pub c0: f64,
    pub draws: u64,
    /// `q_i`; draw `i` carries weight `1/q_i`.
    pub q: Vec<f64>,
    /// Probability that a single draw returns `i`.
    pub prob: Vec<f64>,
    /// Tail distribution weights `v_i`.
    pub v: Vec<f64>,
}

/// Computes `U`, `C`, `S`, `C_0`, `q` and per-draw probabilities.
pub fn mixture_plan(gah: &[f64], tau: &[f64], n: usize, gamma: f64, k: &MixtureConstants) -> Result<MixturePlan> {
    let m = gah.len();
    if tau.len() != m {
        return Err(Error::Dimension("mixture sampler tau".into()));
    }
    if tau.iter().chain(gah).any(|v| !v.is_finite()) || tau.iter().any(|&t| t < 0.0) {
        return Err(Error::NonFiniteInput("mixture sampler"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!("gamma {gamma} outside (0,1)")));
    }
    let nf = n.max(1) as f64;
    let sn = nf.sqrt();
    let logm = (m.max(2) as f64).ln();
    let sq: f64 = gah.iter().map(|v| v * v).sum();
    let tau_sum: f64 = tau.iter().sum();
    let u = (m as f64 / nf + sn).max(4f64.exp() * sq).max(tau_sum / (2.0 * sn));
    let c = k.c1.max(4.0 * k.c2).max(8.0 / 3.0 * k.c3 * logm / (gamma * gamma));
    let s = 2.0 * c * u * sn;
    let mut c0 = 100.0 * k.c_valid.powi(4) * logm / (gamma * gamma);
    if let Some(cap) = k.c0_cap {
        c0 = c0.min(cap);
    }
    let draws = (c0 * s).ceil().min(2f64.powi(62)) as u64;
    let v: Vec<f64> = tau.iter().map(|t| 0.25 * (1.0 / (u * nf) + 1.5 * t / (u * sn))).collect();
    let q: Vec<f64> = gah
        .iter()
        .zip(tau)
        .map(|(x, t)| c * (sn * x * x + 1.0 / (4.0 * sn) + 1.5 * t / 4.0))
        .collect();
    let prob: Vec<f64> = gah.iter().zip(&v).map(|(x, vi)| 0.5 * (x * x / u + vi)).collect();
    Ok(MixturePlan { u, c, s, c0, draws, q, prob, v })
}

/// Mixture sampler: averages `C_0 S` draws of `e_i / q_i`, each drawn by a fair coin
/// between tree sampling proportional to `(G A h)_i^2` and the tail distribution `v`.
pub fn sample_valid_proportional(
    tree: &SketchTree,
    h: &[f64],
    tau: &[f64],
    gamma: f64,
    k: &MixtureConstants,
    seed: u64,
) -> Result<SampleMatrix> {
    let prep = tree.prepare(h)?;
    let plan = mixture_plan(prep.product(), tau, tree.ncols(), gamma, k)?;
    let m = tree.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; m];
    if (plan.draws as f64) <= DIRECT_DRAW_LIMIT {
        let vsum: f64 = plan.v.iter().sum();
        let mut weights = plan.v.clone();
        weights.push((1.0 - vsum).max(0.0));
        let tail = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidArgument(format!("tail distribution: {e}")))?;
        for _ in 0..plan.draws {
            let pick = if rng.random::<bool>() {
                tree.sample_prepared(&prep, plan.u, &mut rng)?
            } else {
                let i = tail.sample(&mut rng);
                (i < m).then_some(i)
            };
            if let Some(i) = pick {
                counts[i] += 1;
            }
        }
    } else {
        let mut remaining = plan.draws;
        let mut mass = 1.0f64;
        for i in 0..m {
            if remaining == 0 || mass <= 0.0 {
                break;
            }
            let p = (plan.prob[i] / mass).clamp(0.0, 1.0);
            let b = Binomial::new(remaining, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let c = b.sample(&mut rng);
            counts[i] = c;
            remaining -= c;
            mass -= plan.prob[i];
        }
    }
    let entries = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i, c as f64 * plan.s / (plan.draws as f64 * plan.q[i])))
        .collect();
    Ok(SampleMatrix { entries })
}

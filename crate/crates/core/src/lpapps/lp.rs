use super::checkpoint::{Checkpoint, LpOptions, RunStats};
use crate::error::{Error, Result};
use crate::ipm::{
    centering_mu, final_point, path_following, tau_weights, CenteredTriple, CenteringReport, IpmParams, LpInstance,
};
use crate::linalg::{norm1, norm_inf, DenseMatrix, QrNormal, SparseMatrix};

/// `[A; beta S]` with `S` the sign pattern of the initial residual on the
/// constraints it touches, plus the data of the auxiliary coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedLp {
    pub lp: LpInstance,
    /// Original coordinate count.
    pub m: usize,
    /// Constraint index and sign of each auxiliary coordinate.
    pub aux: Vec<(usize, f64)>,
    pub beta: f64,
    pub xi: f64,
    pub delta_prime: f64,
    pub penalty: f64,
    pub x_init: Vec<f64>,
}

/// `max(|A|, |b|, |c|, |l|, |u|, 1)`.
fn data_bound(inst: &LpInstance) -> f64 {
    [inst.a.max_abs(), norm_inf(&inst.b), norm_inf(&inst.c), norm_inf(&inst.l), norm_inf(&inst.u), 1.0]
        .into_iter()
        .fold(0.0, f64::max)
}

/// Adds one auxiliary coordinate per violated constraint so the midpoint of
/// the box becomes exactly feasible. Auxiliary coordinates live in `[0, 2 x~]`.
pub fn augment_lp(inst: &LpInstance, delta: f64) -> Result<AugmentedLp> {
    inst.validate()?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let (m, n) = (inst.m(), inst.n());
    let x0: Vec<f64> = inst.l.iter().zip(&inst.u).map(|(l, u)| (l + u) / 2.0).collect();
    let at = inst.a.tmul_vec(&x0);
    let res: Vec<f64> = inst.b.iter().zip(&at).map(|(b, v)| b - v).collect();
    let xi = inst.l.iter().zip(&inst.u).fold(0.0f64, |a, (l, u)| a.max(u - l));
    let beta = norm_inf(&res) / xi;
    let w = data_bound(inst);
    let delta_prime = delta / (10.0 * m as f64 * w * w);
    let penalty = 2.0 * norm1(&inst.c).max(1.0) / delta_prime;

    let aux: Vec<(usize, f64)> = (0..n).filter(|&j| res[j] != 0.0).map(|j| (j, res[j].signum())).collect();
    let mut trip: Vec<(usize, usize, f64)> = inst.a.triplets().collect();
    let (mut c, mut l, mut u, mut x) = (inst.c.clone(), inst.l.clone(), inst.u.clone(), x0);
    for (k, &(j, sg)) in aux.iter().enumerate() {
        trip.push((m + k, j, beta * sg));
        let xt = res[j].abs() / beta;
        c.push(penalty);
        l.push(0.0);
        u.push(2.0 * xt);
        x.push(xt);
    }
    let a = SparseMatrix::from_triplets(m + aux.len(), n, &trip)?;
    let lp = LpInstance::new(a, inst.b.clone(), c, l, u)?;
    Ok(AugmentedLp { lp, m, aux, beta, xi, delta_prime, penalty, x_init: x })
}

/// `(x_init, c, mu)` with `mu = 8 m ||c||_1 Xi / (eps delta')`, raised if needed
/// so the measured centrality meets `CenteringReport::start_target`.
pub fn lp_initial_point(aug: &AugmentedLp, params: &IpmParams) -> Result<CenteredTriple> {
    let lp = &aug.lp;
    let m = lp.m() as f64;
    let formula = 8.0 * m * norm1(&lp.c[..aug.m]).max(1.0) * aug.xi / (params.eps * aug.delta_prime);
    let tau = tau_weights(lp, &aug.x_init, params.p, None)?;
    let need = centering_mu(&lp.c, &tau, &aug.x_init, &lp.l, &lp.u, CenteringReport::start_target(params))?;
    CenteredTriple::new(lp, aug.x_init.clone(), vec![0.0; lp.n()], formula.max(need), params)
}

/// Double-double accumulator: `hi + lo` carries about 106 bits.
#[derive(Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn add(self, x: f64) -> Dd {
        let s = self.hi + x;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (x - bb);
        Dd::renorm(s, err + self.lo)
    }

    fn add_dd(self, o: Dd) -> Dd {
        self.add(o.hi).add(o.lo)
    }

    fn add_prod(self, a: f64, b: f64) -> Dd {
        let p = a * b;
        self.add(p).add(a.mul_add(b, -p))
    }

    fn scale(self, a: f64) -> Dd {
        Dd::default().add_prod(self.hi, a).add_prod(self.lo, a)
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Lower bound `sum_i min(s_i l_i, s_i u_i) - z^T b` on the optimum, with `s = c + A z`.
///
/// Near the end of the path `z` can be many orders of magnitude larger than the
/// bound itself, so the sum is accumulated in double-double arithmetic and a
/// bound on the remaining rounding error is subtracted.
pub(crate) fn dual_bound(lp: &LpInstance, z: &[f64]) -> f64 {
    let mut total = Dd::default();
    let mut mag = 0.0;
    for i in 0..lp.m() {
        let (cols, vals) = lp.a.row(i);
        let mut s = Dd::default().add(lp.c[i]);
        for (&j, &v) in cols.iter().zip(vals) {
            s = s.add_prod(v, z[j]);
        }
        let bound = if s.value() >= 0.0 { lp.l[i] } else { lp.u[i] };
        let term = s.scale(bound);
        mag += term.hi.abs() + (cols.len() as f64 + 1.0) * bound.abs() * (lp.c[i].abs() + vals.iter().zip(cols).map(|(v, &j)| (v * z[j]).abs()).sum::<f64>());
        total = total.add_dd(term);
    }
    for (zj, bj) in z.iter().zip(&lp.b) {
        total = total.add_prod(-zj, *bj);
        mag += (zj * bj).abs();
    }
    total.value() - 64.0 * (lp.m() + lp.n()) as f64 * f64::EPSILON * f64::EPSILON * mag - f64::EPSILON * total.value().abs()
}

/// Coordinates whose slack to both bounds exceeds this fraction of the range count as free.
const FREE_SLACK: f64 = 1e-7;

/// Work budget, in flops, for the basis enumeration of one crossover.
const CROSSOVER_FLOPS: usize = 1 << 26;

/// `z` with `A_B z = -c_B` in the least-squares sense; `None` if `A_B` is rank deficient.
fn basis_dual(inst: &LpInstance, rows: &[usize]) -> Option<Vec<f64>> {
    let n = inst.n();
    let mut b = DenseMatrix::zeros(rows.len(), n);
    let mut rhs = vec![0.0; n];
    for (r, &i) in rows.iter().enumerate() {
        let (cols, vals) = inst.a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            b[(r, j)] = v;
            rhs[j] -= v * inst.c[i];
        }
    }
    let z = QrNormal::factor(&b).ok()?.solve(&rhs);
    z.iter().all(|v| v.is_finite()).then_some(z)
}

/// Best weak-duality bound `(bound, ||z||_1)` over dual vectors of guessed optimal
/// bases. Free coordinates are always basic; the remaining basic coordinates are
/// drawn from the others ranked by `slack_i / |s_i|`, which grows for basic and
/// shrinks for nonbasic coordinates along the central path. Subsets are tried
/// in rank order until the bound reaches `stop` or the budget runs out.
fn crossover_bound(inst: &LpInstance, x: &[f64], s: &[f64], stop: f64) -> Option<(f64, f64)> {
    let (m, n) = (inst.m(), inst.n());
    if n > 2000 {
        return None;
    }
    let slack = |i: usize| (x[i] - inst.l[i]).min(inst.u[i] - x[i]);
    let (free, mut rest): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| slack(i) > FREE_SLACK * (inst.u[i] - inst.l[i]));
    let rank = |i: usize| slack(i) / s[i].abs().max(f64::MIN_POSITIVE);
    rest.sort_by(|&a, &b| rank(b).total_cmp(&rank(a)).then(a.cmp(&b)));
    let eval = |rows: &[usize]| basis_dual(inst, rows).map(|z| (dual_bound(inst, &z), norm1(&z)));
    if free.len() >= n {
        return eval(&free);
    }
    let k = n - free.len();
    if k > rest.len() {
        return None;
    }
    let mut budget = (CROSSOVER_FLOPS / (n * n * n + m * n)).max(1);
    let mut best: Option<(f64, f64)> = None;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut rows = free.clone();
    loop {
        rows.truncate(free.len());
        rows.extend(idx.iter().map(|&p| rest[p]));
        if let Some(cand) = eval(&rows) {
            if best.is_none_or(|b| cand.0 > b.0) {
                best = Some(cand);
            }
            if cand.0 >= stop {
                break;
            }
        }
        budget -= 1;
        // Next k-subset of 0..rest.len() in lexicographic order.
        let mut i = k;
        while i > 0 && idx[i - 1] == rest.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 || budget == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    best
}

/// Residual, as a fraction of `delta`, below which an early stop is taken even
/// when no small dual vector bounds the undershoot.
const RESIDUAL_MARGIN: f64 = 1e-3;

/// Rounded original point and its certificate at one iterate.
struct Extracted {
    x: Vec<f64>,
    residual: f64,
    gap: f64,
    /// `||z||_1` of the dual vector behind the lower bound.
    dual_mass: f64,
    aux_max: f64,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// `||A^T x - b||_inf`.
    pub residual: f64,
    /// `c^T x` minus a weak-duality lower bound on the optimum.
    pub gap: f64,
    pub stats: RunStats,
}

/// `delta`-approximate solution: `l <= x <= u`, `||A^T x - b||_inf <= delta`,
/// `c^T x <= OPT + delta`.
pub fn solve_lp(inst: &LpInstance, delta: f64, opts: &LpOptions) -> Result<LpSolution> {
    let aug = augment_lp(inst, delta)?;
    let lp = &aug.lp;
    let params = IpmParams::new(opts.c, lp.m(), lp.n(), opts.mode, opts.seed)?;
    let init = lp_initial_point(&aug, &params)?;
    let mu_target = aug.delta_prime * norm1(&inst.c).max(1.0) * aug.xi / (opts.c * inst.n() as f64);

    let extract = |lp: &LpInstance, st: &CenteredTriple| -> Result<Extracted> {
        let (xa, _) = final_point(lp, st)?;
        let x: Vec<f64> = (0..aug.m).map(|i| xa[i].clamp(inst.l[i], inst.u[i])).collect();
        let residual = norm_inf(&inst.residual(&x));
        // Weak duality for the original program holds for any z, so the clamped
        // point is certified directly; the penalty terms of the augmented
        // objective would otherwise dominate the gap.
        let objective = inst.objective(&x);
        let mut cert = (objective - dual_bound(inst, &st.z), norm1(&st.z));
        if let Some((bound, mass)) = crossover_bound(inst, &st.x[..aug.m], &st.s[..aug.m], objective - delta / 4.0) {
            let cand = (objective - bound, mass);
            if cand.0 < cert.0 {
                cert = cand;
            }
        }
        Ok(Extracted {
            gap: cert.0,
            dual_mass: cert.1,
            aux_max: xa[aug.m..].iter().fold(0.0f64, |a, v| a.max(*v)),
            x,
            residual,
        })
    };
    let mut best: Option<Extracted> = None;
    let early = opts.early_stop;
    let mut obs = Checkpoint::new(
        |lp: &LpInstance, st: &CenteredTriple| {
            if !early {
                return Ok(false);
            }
            let e = extract(lp, st)?;
            // c^T x can also undershoot OPT, by up to ||z*||_1 times the residual.
            let small = e.residual * e.dual_mass <= delta / 2.0 || e.residual <= RESIDUAL_MARGIN * delta;
            let ok = e.residual <= delta && e.gap <= delta / 2.0 && small;
            if ok {
                best = Some(e);
            }
            Ok(ok)
        },
        opts.keep_records,
    );
    let fin = path_following(lp, init, mu_target, &params, &mut obs)?;
    let stats = RunStats { steps: obs.steps, invariant_failures: obs.failures, records: std::mem::take(&mut obs.records) };
    drop(obs);
    let e = match best {
        Some(b) => b,
        None => {
            let e = extract(lp, &fin)?;
            if e.residual > delta && e.aux_max > aug.delta_prime * aug.xi {
                return Err(Error::Infeasible(format!("auxiliary coordinates stay at {:.3e}", e.aux_max)));
            }
            e
        }
    };
    let Extracted { x, residual, gap, .. } = e;
    Ok(LpSolution { objective: inst.objective(&x), x, residual, gap, stats })
}

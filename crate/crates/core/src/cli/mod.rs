//! Command implementations behind the `rlp` binary. Each command returns its
//! exit status and the text for stdout and stderr, so runs are reproducible.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{
    read_dimacs, solve_maxflow, solve_mincost_flow_with, write_solution, Dimacs, FlowOptions,
};
use crate::ipm::{Mode, StepRecord, TraceWriter};
use crate::lpapps::{parse_l1, parse_lp, parse_mdp, sidecar_path, solve_l1_regression, solve_lp, solve_mdp, LpOptions};
use crate::oracles;

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub c: f64,
    pub seed: u64,
    pub delta: f64,
    pub trace: Option<PathBuf>,
    pub retries: usize,
    pub oracle_check: bool,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Practical,
            c: 4.0,
            seed: 0,
            delta: 1e-6,
            trace: None,
            retries: 64,
            oracle_check: false,
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(Error::InvalidArgument("--delta must be positive".into()));
        }
        if !(self.c >= 2.0) {
            return Err(Error::InvalidArgument("--C must be at least 2".into()));
        }
        if self.retries == 0 || self.jobs == 0 {
            return Err(Error::InvalidArgument("--retries and --jobs must be positive".into()));
        }
        Ok(())
    }

    fn flow_options(&self) -> FlowOptions {
        FlowOptions {
            mode: self.mode,
            c: self.c,
            seed: self.seed,
            retries: self.retries,
            jobs: self.jobs,
            early_stop: true,
            keep_records: self.trace.is_some(),
        }
    }

    fn lp_options(&self) -> LpOptions {
        LpOptions { mode: self.mode, c: self.c, seed: self.seed, keep_records: self.trace.is_some(), early_stop: true }
    }
}

/// Exit status and captured output of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        CmdOutput { code, stdout, stderr }
    }
}

fn from_error(e: Error) -> CmdOutput {
    match e {
        Error::Infeasible(msg) => CmdOutput::fail(2, "c infeasible\n".into(), format!("infeasible: {msg}\n")),
        other => CmdOutput::fail(1, String::new(), format!("error: {other}\n")),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_trace(cfg: &RunConfig, records: &[StepRecord]) -> Result<()> {
    if let Some(p) = &cfg.trace {
        let f = std::fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        let mut w = TraceWriter::new(std::io::BufWriter::new(f));
        for r in records {
            w.write(r)?;
        }
    }
    Ok(())
}

fn summary(steps: usize, failures: usize) -> String {
    format!("{steps} steps, {failures} invariant violations")
}

/// Min-cost flow from a DIMACS `p min` file. Exit 0 on a verified optimum,
/// 2 when infeasible, 1 on any other error.
pub fn cmd_mincost(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let run = || -> Result<CmdOutput> {
        cfg.validate()?;
        let Dimacs::Min(inst) = read_dimacs(&read(path)?)? else {
            return Err(Error::InvalidArgument("expected a `p min` file".into()));
        };
        let sol = solve_mincost_flow_with(&inst, &cfg.flow_options())?;
        write_trace(cfg, &sol.records)?;
        let mut out = format!(
            "c verified optimal: feasible, no negative residual cycle (perturbation {}, {})\n",
            sol.attempts,
            summary(sol.steps, sol.invariant_failures)
        );
        if cfg.oracle_check {
            let o = oracles::ssp_mincost(&inst)?;
            let agree = o.value as i64 == sol.cost;
            writeln!(out, "c oracle ssp cost {}: {}", o.value as i64, if agree { "agree" } else { "DISAGREE" }).unwrap();
            if !agree {
                return Ok(CmdOutput::fail(1, out, "oracle disagreement\n".into()));
            }
        }
        out.push_str(&write_solution(sol.cost, inst.edges.iter().map(|e| (e.tail, e.head)), &sol.flow));
        Ok(CmdOutput::ok(out))
    };
    run().unwrap_or_else(from_error)
}

/// Max flow from a DIMACS `p max` file.
pub fn cmd_maxflow(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let run = || -> Result<CmdOutput> {
        cfg.validate()?;
        let Dimacs::Max(inst) = read_dimacs(&read(path)?)? else {
            return Err(Error::InvalidArgument("expected a `p max` file".into()));
        };
        let sol = solve_maxflow(&inst, &cfg.flow_options())?;
        let mut out = format!("c max flow by capacity scaling ({} phases)\n", sol.phases);
        if cfg.oracle_check {
            let o = oracles::dinic_maxflow(&inst)?;
            let agree = o.value as i64 == sol.value;
            writeln!(out, "c oracle dinic value {}: {}", o.value as i64, if agree { "agree" } else { "DISAGREE" }).unwrap();
            if !agree {
                return Ok(CmdOutput::fail(1, out, "oracle disagreement\n".into()));
            }
        }
        out.push_str(&write_solution(sol.value, inst.arcs.iter().map(|a| (a.0, a.1)), &sol.flow));
        Ok(CmdOutput::ok(out))
    };
    run().unwrap_or_else(from_error)
}

#[derive(Serialize)]
struct OracleReport {
    method: String,
    value: f64,
    agree: bool,
}

fn oracle_report(r: Result<oracles::OracleResult>, ours: f64, tol: f64) -> Option<OracleReport> {
    match r {
        Ok(o) => Some(OracleReport {
            method: format!("{:?}", o.method),
            value: o.value,
            agree: (o.value - ours).abs() <= tol * o.value.abs().max(1.0),
        }),
        Err(Error::OracleLimit(_)) => None,
        Err(e) => Some(OracleReport { method: format!("error: {e}"), value: f64::NAN, agree: false }),
    }
}

fn json_out<T: Serialize>(v: &T, oracle: Option<&OracleReport>) -> CmdOutput {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    if oracle.is_some_and(|o| !o.agree) {
        return CmdOutput::fail(1, s, "oracle disagreement\n".into());
    }
    CmdOutput::ok(s)
}

#[derive(Serialize)]
struct LpReport {
    objective: f64,
    residual: f64,
    steps: usize,
    invariant_violations: usize,
    x: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

/// General LP from `<file>.mtx` and its `<file>.json` sidecar.
pub fn cmd_lp(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let run = || -> Result<CmdOutput> {
        cfg.validate()?;
        let inst = parse_lp(&read(path)?, &read(&sidecar_path(path))?)?;
        let sol = solve_lp(&inst, cfg.delta, &cfg.lp_options())?;
        write_trace(cfg, &sol.stats.records)?;
        let oracle = if cfg.oracle_check {
            oracle_report(oracles::enumerate_lp(&inst), sol.objective, 10.0 * cfg.delta)
        } else {
            None
        };
        let rep = LpReport {
            objective: sol.objective,
            residual: sol.residual,
            steps: sol.stats.steps,
            invariant_violations: sol.stats.invariant_failures,
            x: sol.x,
            oracle,
        };
        Ok(json_out(&rep, rep.oracle.as_ref()))
    };
    run().unwrap_or_else(from_error)
}

#[derive(Serialize)]
struct L1Report {
    value: f64,
    lower_bound: f64,
    steps: usize,
    invariant_violations: usize,
    z: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

/// l1 regression `min ||A z + c||_1` from `<file>.mtx` and `<file>.json` holding `c`.
pub fn cmd_l1(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let run = || -> Result<CmdOutput> {
        cfg.validate()?;
        let (a, c) = parse_l1(&read(path)?, &read(&sidecar_path(path))?)?;
        let sol = solve_l1_regression(&a, &c, cfg.delta, &cfg.lp_options())?;
        write_trace(cfg, &sol.stats.records)?;
        let oracle = if cfg.oracle_check {
            oracle_report(oracles::enumerate_l1(&a, &c), sol.value, 10.0 * cfg.delta)
        } else {
            None
        };
        let rep = L1Report {
            value: sol.value,
            lower_bound: sol.lower_bound,
            steps: sol.stats.steps,
            invariant_violations: sol.stats.invariant_failures,
            z: sol.z,
            oracle,
        };
        Ok(json_out(&rep, rep.oracle.as_ref()))
    };
    run().unwrap_or_else(from_error)
}

#[derive(Serialize)]
struct MdpReport {
    /// 1-based action per state.
    policy: Vec<usize>,
    /// Exact value of the returned policy.
    value: Vec<f64>,
    steps: usize,
    invariant_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

/// Discounted MDP from JSON; `--delta` is the policy accuracy.
pub fn cmd_mdp(path: &Path, cfg: &RunConfig) -> CmdOutput {
    let run = || -> Result<CmdOutput> {
        cfg.validate()?;
        let mdp = parse_mdp(&read(path)?)?;
        let sol = solve_mdp(&mdp, cfg.delta, &cfg.lp_options())?;
        write_trace(cfg, &sol.regression.stats.records)?;
        let value = mdp.policy_values(&sol.policy)?;
        let oracle = if cfg.oracle_check {
            let worst = value.iter().copied().fold(f64::INFINITY, f64::min);
            oracles::value_iteration(&mdp, 10_000).ok().map(|o| {
                let gap = o.witness.iter().zip(&value).fold(0.0f64, |m, (a, b)| m.max(a - b));
                OracleReport { method: format!("{:?}", o.method), value: o.value, agree: gap <= cfg.delta && worst.is_finite() }
            })
        } else {
            None
        };
        let rep = MdpReport {
            policy: sol.policy.iter().map(|a| a + 1).collect(),
            value,
            steps: sol.regression.stats.steps,
            invariant_violations: sol.regression.stats.invariant_failures,
            oracle,
        };
        Ok(json_out(&rep, rep.oracle.as_ref()))
    };
    run().unwrap_or_else(from_error)
}

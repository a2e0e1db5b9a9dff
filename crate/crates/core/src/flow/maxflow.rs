use std::collections::VecDeque;

use super::graph::{Edge, FlowInstance, MaxFlowInstance};
use super::mincost::{solve_mincost_flow_with, FlowOptions};
use crate::error::Result;

/// Integral maximum flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlowSolution {
    pub value: i64,
    pub flow: Vec<i64>,
    /// Inner min-cost circulations solved.
    pub phases: usize,
    /// Interior point steps over all phases.
    pub steps: usize,
    /// Recorded steps, over all phases, where a centering check failed.
    pub invariant_failures: usize,
}

/// Residual arc of `G_f`: `(tail, head, residual capacity, arc index, forward)`.
type ResArc = (usize, usize, i64, usize, bool);

fn residual_arcs(inst: &MaxFlowInstance, flow: &[i64], delta: i64) -> Vec<ResArc> {
    let mut out = Vec::new();
    for (k, &(a, b, c)) in inst.arcs.iter().enumerate() {
        if a == b {
            continue;
        }
        if c - flow[k] >= delta {
            out.push((a, b, c - flow[k], k, true));
        }
        if flow[k] >= delta {
            out.push((b, a, flow[k], k, false));
        }
    }
    out
}

fn reachable(n: usize, s: usize, t: usize, arcs: &[ResArc]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, ..) in arcs {
        adj[a].push(b);
    }
    let mut seen = vec![false; n];
    let mut q = VecDeque::from([s]);
    seen[s] = true;
    while let Some(v) = q.pop_front() {
        if v == t {
            return true;
        }
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                q.push_back(w);
            }
        }
    }
    false
}

/// Capacity scaling: for `Delta = 2^floor(log2 ||u||_inf), ..., 1`, augment by a
/// maximum flow of `G_f(Delta)` (residual arcs of capacity at least `Delta`,
/// capped at `2 m Delta`). Each phase is a min-cost circulation with a `t -> s`
/// return arc of cost `-1` and zero costs elsewhere.
pub fn solve_maxflow(inst: &MaxFlowInstance, opts: &FlowOptions) -> Result<MaxFlowSolution> {
    let mut flow = vec![0i64; inst.arcs.len()];
    let umax = inst.arcs.iter().map(|a| a.2).max().unwrap_or(0);
    let mut phases = 0;
    let (mut steps, mut invariant_failures) = (0, 0);
    if umax > 0 {
        let mut delta = 1i64 << (63 - umax.leading_zeros());
        let m = inst.arcs.len() as i64;
        while delta >= 1 {
            let res = residual_arcs(inst, &flow, delta);
            if reachable(inst.n, inst.s, inst.t, &res) {
                let cap_limit = 2 * m * delta;
                let mut edges: Vec<Edge> = res.iter().map(|&(a, b, c, ..)| Edge::new(a, b, c.min(cap_limit), 0)).collect();
                let out_s: i64 = edges.iter().filter(|e| e.tail == inst.s).map(|e| e.cap).sum();
                edges.push(Edge::new(inst.t, inst.s, out_s, -1));
                let circ = FlowInstance::new(inst.n, edges, vec![0; inst.n])?;
                let sol = solve_mincost_flow_with(&circ, &FlowOptions { seed: opts.seed ^ phases as u64, ..opts.clone() })?;
                for (&(_, _, _, k, fwd), &f) in res.iter().zip(&sol.flow) {
                    flow[k] += if fwd { f } else { -f };
                }
                phases += 1;
                steps += sol.steps;
                invariant_failures += sol.invariant_failures;
            }
            delta /= 2;
        }
    }
    let value = inst
        .arcs
        .iter()
        .zip(&flow)
        .map(|(&(a, b, _), &f)| if a == b { 0 } else if a == inst.s { f } else if b == inst.s { -f } else { 0 })
        .sum();
    Ok(MaxFlowSolution { value, flow, phases, steps, invariant_failures })
}

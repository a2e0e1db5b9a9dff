use std::collections::VecDeque;

use super::{OracleMethod, OracleResult};
use crate::error::{Error, Result};
use crate::flow::{FlowInstance, MaxFlowInstance};

/// Residual network with paired arcs `2k`, `2k + 1`.
struct Net {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Net {
    fn new(n: usize) -> Self {
        Net { head: vec![], cap: vec![], cost: vec![], adj: vec![vec![]; n] }
    }

    fn add(&mut self, a: usize, b: usize, cap: i64, cost: i64) -> usize {
        let id = self.head.len();
        self.head.extend([b, a]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[a].push(id);
        self.adj[b].push(id + 1);
        id
    }
}

/// Successive shortest paths with Bellman-Ford. Lower bounds are shifted out and
/// negative-cost arcs saturated first, so every residual cycle is non-negative.
pub fn ssp_mincost(inst: &FlowInstance) -> Result<OracleResult> {
    let n = inst.n;
    if n > 50 {
        return Err(Error::OracleLimit(format!("ssp_mincost supports n <= 50, got {n}")));
    }
    let mut excess: Vec<i64> = inst.supply.clone();
    let mut base = vec![0i64; inst.edges.len()];
    let mut net = Net::new(n + 2);
    let mut ids = Vec::new();
    for (k, e) in inst.edges.iter().enumerate() {
        let width = e.cap - e.low;
        if e.tail == e.head {
            base[k] = if e.cost < 0 { e.cap } else { e.low };
            ids.push(None);
            continue;
        }
        base[k] = e.low;
        if e.cost < 0 {
            base[k] = e.cap;
            ids.push(Some((net.add(e.head, e.tail, width, -e.cost), true)));
        } else {
            ids.push(Some((net.add(e.tail, e.head, width, e.cost), false)));
        }
        excess[e.tail] -= base[k];
        excess[e.head] += base[k];
    }
    let (src, snk) = (n, n + 1);
    let mut need = 0;
    for v in 0..n {
        if excess[v] > 0 {
            net.add(src, v, excess[v], 0);
            need += excess[v];
        } else if excess[v] < 0 {
            net.add(v, snk, -excess[v], 0);
        }
    }
    let mut sent = 0;
    while sent < need {
        let mut dist = vec![i64::MAX; n + 2];
        let mut prev = vec![usize::MAX; n + 2];
        dist[src] = 0;
        for _ in 0..n + 2 {
            let mut changed = false;
            for v in 0..n + 2 {
                if dist[v] == i64::MAX {
                    continue;
                }
                for &id in &net.adj[v] {
                    let w = net.head[id];
                    if net.cap[id] > 0 && dist[v] + net.cost[id] < dist[w] {
                        dist[w] = dist[v] + net.cost[id];
                        prev[w] = id;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[snk] == i64::MAX {
            return Err(Error::Infeasible("supplies cannot be routed".into()));
        }
        let mut push = need - sent;
        let mut v = snk;
        while v != src {
            let id = prev[v];
            push = push.min(net.cap[id]);
            v = net.head[id ^ 1];
        }
        let mut v = snk;
        while v != src {
            let id = prev[v];
            net.cap[id] -= push;
            net.cap[id ^ 1] += push;
            v = net.head[id ^ 1];
        }
        sent += push;
    }
    let mut flow = base;
    for (k, id) in ids.iter().enumerate() {
        if let Some((id, reversed)) = *id {
            let moved = net.cap[id ^ 1];
            flow[k] += if reversed { -moved } else { moved };
        }
    }
    let value: i64 = inst.edges.iter().zip(&flow).map(|(e, f)| e.cost * f).sum();
    Ok(OracleResult {
        value: value as f64,
        witness: flow.iter().map(|&f| f as f64).collect(),
        method: OracleMethod::SuccessiveShortestPaths,
    })
}

/// Dinic's blocking-flow algorithm.
pub fn dinic_maxflow(inst: &MaxFlowInstance) -> Result<OracleResult> {
    let n = inst.n;
    if n > 200 {
        return Err(Error::OracleLimit(format!("dinic_maxflow supports n <= 200, got {n}")));
    }
    let mut net = Net::new(n);
    let ids: Vec<usize> = inst.arcs.iter().map(|&(a, b, c)| net.add(a, b, c, 0)).collect();
    let (s, t) = (inst.s, inst.t);
    let mut total = 0i64;
    loop {
        let mut level = vec![usize::MAX; n];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &id in &net.adj[v] {
                let w = net.head[id];
                if net.cap[id] > 0 && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    q.push_back(w);
                }
            }
        }
        if level[t] == usize::MAX {
            break;
        }
        let mut it = vec![0usize; n];
        loop {
            let f = dfs(&mut net, &level, &mut it, s, t, i64::MAX);
            if f == 0 {
                break;
            }
            total += f;
        }
    }
    Ok(OracleResult {
        value: total as f64,
        witness: ids.iter().map(|&id| net.cap[id ^ 1] as f64).collect(),
        method: OracleMethod::Dinic,
    })
}

fn dfs(net: &mut Net, level: &[usize], it: &mut [usize], v: usize, t: usize, lim: i64) -> i64 {
    if v == t {
        return lim;
    }
    while it[v] < net.adj[v].len() {
        let id = net.adj[v][it[v]];
        let w = net.head[id];
        if net.cap[id] > 0 && level[w] == level[v] + 1 {
            let f = dfs(net, level, it, w, t, lim.min(net.cap[id]));
            if f > 0 {
                net.cap[id] -= f;
                net.cap[id ^ 1] += f;
                return f;
            }
        }
        it[v] += 1;
    }
    0
}

/// Minimum `s`-`t` cut by enumerating every vertex subset containing `s` but not `t`.
pub fn min_cut_enumeration(inst: &MaxFlowInstance) -> Result<OracleResult> {
    let n = inst.n;
    if n > 8 {
        return Err(Error::OracleLimit(format!("min_cut_enumeration supports n <= 8, got {n}")));
    }
    let mut best = (i64::MAX, 0u32);
    for mask in 0u32..(1 << n) {
        if mask & (1 << inst.s) == 0 || mask & (1 << inst.t) != 0 {
            continue;
        }
        let cut: i64 = inst
            .arcs
            .iter()
            .filter(|&&(a, b, _)| mask & (1 << a) != 0 && mask & (1 << b) == 0)
            .map(|a| a.2)
            .sum();
        if cut < best.0 {
            best = (cut, mask);
        }
    }
    Ok(OracleResult {
        value: best.0 as f64,
        witness: (0..n).map(|v| ((best.1 >> v) & 1) as f64).collect(),
        method: OracleMethod::CutEnumeration,
    })
}

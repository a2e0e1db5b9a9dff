use super::graph::FlowInstance;

/// Whether `flow` respects bounds and conservation exactly.
pub fn is_feasible(inst: &FlowInstance, flow: &[i64]) -> bool {
    if flow.len() != inst.m() {
        return false;
    }
    let mut net = vec![0i64; inst.n];
    for (e, &f) in inst.edges.iter().zip(flow) {
        if f < e.low || f > e.cap {
            return false;
        }
        net[e.tail] += f;
        net[e.head] -= f;
    }
    net == inst.supply
}

/// Optimality certificate: no negative-cost cycle in the residual graph.
pub fn is_optimal(inst: &FlowInstance, flow: &[i64]) -> bool {
    let mut arcs = Vec::new();
    for (e, &f) in inst.edges.iter().zip(flow) {
        if e.tail == e.head {
            // A self-loop is optimal iff it sits at the bound its cost prefers.
            if (e.cost < 0 && f < e.cap) || (e.cost > 0 && f > e.low) {
                return false;
            }
            continue;
        }
        if f < e.cap {
            arcs.push((e.tail, e.head, e.cost));
        }
        if f > e.low {
            arcs.push((e.head, e.tail, -e.cost));
        }
    }
    // Bellman-Ford from a virtual root connected to every vertex.
    let mut dist = vec![0i64; inst.n];
    for _ in 0..inst.n {
        let mut changed = false;
        for &(a, b, c) in &arcs {
            if dist[a] + c < dist[b] {
                dist[b] = dist[a] + c;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    !arcs.iter().any(|&(a, b, c)| dist[a] + c < dist[b])
}

use std::fmt::Write as _;

use super::graph::{Edge, FlowInstance, MaxFlowInstance};
use crate::error::{Error, Result};

/// A parsed DIMACS file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dimacs {
    Min(FlowInstance),
    Max(MaxFlowInstance),
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn nums<T: std::str::FromStr>(toks: &[&str], line: usize, what: &str) -> Result<Vec<T>> {
    toks.iter()
        .map(|t| t.parse::<T>().map_err(|_| perr(line, format!("{what}: cannot parse `{t}`"))))
        .collect()
}

fn vertex(v: i64, n: usize, line: usize) -> Result<usize> {
    if v < 1 || v as usize > n {
        return Err(perr(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v as usize - 1)
}

/// Reads `p min` or `p max` DIMACS text. Vertices are 1-based in the file.
pub fn read_dimacs(text: &str) -> Result<Dimacs> {
    let mut kind: Option<(bool, usize, usize)> = None;
    let mut supply = Vec::new();
    let mut edges = Vec::new();
    let (mut s, mut t) = (None, None);
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&head) = toks.first() else { continue };
        match head {
            "c" => {}
            "p" => {
                if kind.is_some() {
                    return Err(perr(ln, "duplicate problem line"));
                }
                if toks.len() != 4 {
                    return Err(perr(ln, "expected `p min|max n m`"));
                }
                let is_min = match toks[1] {
                    "min" => true,
                    "max" => false,
                    other => return Err(perr(ln, format!("unknown problem type `{other}`"))),
                };
                let v: Vec<usize> = nums(&toks[2..], ln, "problem line")?;
                supply = vec![0i64; v[0]];
                kind = Some((is_min, v[0], v[1]));
            }
            "n" => {
                let Some((is_min, n, _)) = kind else { return Err(perr(ln, "node line before problem line")) };
                if toks.len() != 3 {
                    return Err(perr(ln, "expected `n id value`"));
                }
                let id: Vec<i64> = nums(&toks[1..2], ln, "node line")?;
                let v = vertex(id[0], n, ln)?;
                if is_min {
                    let f: Vec<i64> = nums(&toks[2..], ln, "node line")?;
                    supply[v] += f[0];
                } else {
                    match toks[2] {
                        "s" => s = Some(v),
                        "t" => t = Some(v),
                        o => return Err(perr(ln, format!("node designator `{o}` is not s or t"))),
                    }
                }
            }
            "a" => {
                let Some((is_min, n, _)) = kind else { return Err(perr(ln, "arc line before problem line")) };
                let want = if is_min { 6 } else { 4 };
                if toks.len() != want {
                    let form = if is_min { "`a u v low cap cost`" } else { "`a u v cap`" };
                    return Err(perr(ln, format!("malformed arc line, expected {form}")));
                }
                let v: Vec<i64> = nums(&toks[1..], ln, "arc line")?;
                let (a, b) = (vertex(v[0], n, ln)?, vertex(v[1], n, ln)?);
                let e = if is_min {
                    Edge { tail: a, head: b, low: v[2], cap: v[3], cost: v[4] }
                } else {
                    Edge::new(a, b, v[2], 0)
                };
                if e.low < 0 || e.cap < e.low {
                    return Err(perr(ln, "arc bounds must satisfy 0 <= low <= cap"));
                }
                edges.push(e);
            }
            other => return Err(perr(ln, format!("unknown line type `{other}`"))),
        }
    }
    let Some((is_min, n, m)) = kind else { return Err(perr(0, "missing problem line")) };
    if edges.len() != m {
        return Err(perr(0, format!("problem line declares {m} arcs, found {}", edges.len())));
    }
    if is_min {
        Ok(Dimacs::Min(FlowInstance::new(n, edges, supply)?))
    } else {
        let (Some(s), Some(t)) = (s, t) else { return Err(perr(0, "max flow file needs `n id s` and `n id t`")) };
        let arcs = edges.iter().map(|e| (e.tail, e.head, e.cap)).collect();
        Ok(Dimacs::Max(MaxFlowInstance::new(n, s, t, arcs)?))
    }
}

/// Canonical DIMACS text; `read_dimacs` followed by this is a fixed point.
pub fn write_dimacs(d: &Dimacs) -> String {
    let mut out = String::new();
    match d {
        Dimacs::Min(inst) => {
            writeln!(out, "p min {} {}", inst.n, inst.m()).unwrap();
            for (v, &b) in inst.supply.iter().enumerate() {
                if b != 0 {
                    writeln!(out, "n {} {}", v + 1, b).unwrap();
                }
            }
            for e in &inst.edges {
                writeln!(out, "a {} {} {} {} {}", e.tail + 1, e.head + 1, e.low, e.cap, e.cost).unwrap();
            }
        }
        Dimacs::Max(inst) => {
            writeln!(out, "p max {} {}", inst.n, inst.arcs.len()).unwrap();
            writeln!(out, "n {} s", inst.s + 1).unwrap();
            writeln!(out, "n {} t", inst.t + 1).unwrap();
            for &(a, b, c) in &inst.arcs {
                writeln!(out, "a {} {} {}", a + 1, b + 1, c).unwrap();
            }
        }
    }
    out
}

/// Solution lines: `s <objective>` then `f u v x` per arc.
pub fn write_solution(objective: i64, arcs: impl Iterator<Item = (usize, usize)>, flow: &[i64]) -> String {
    let mut out = format!("s {objective}\n");
    for ((a, b), f) in arcs.zip(flow) {
        writeln!(out, "f {} {} {}", a + 1, b + 1, f).unwrap();
    }
    out
}

/// Parses solution lines back into `(objective, flows)`.
pub fn read_solution(text: &str) -> Result<(i64, Vec<(usize, usize, i64)>)> {
    let mut obj = None;
    let mut flows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => {}
            Some(&"s") if toks.len() == 2 => obj = Some(nums::<i64>(&toks[1..], ln, "objective")?[0]),
            Some(&"f") if toks.len() == 4 => {
                let v: Vec<i64> = nums(&toks[1..], ln, "flow line")?;
                if v[0] < 1 || v[1] < 1 {
                    return Err(perr(ln, "vertices are 1-based"));
                }
                flows.push((v[0] as usize - 1, v[1] as usize - 1, v[2]));
            }
            _ => return Err(perr(ln, format!("unexpected solution line `{raw}`"))),
        }
    }
    Ok((obj.ok_or_else(|| perr(0, "missing `s` line"))?, flows))
}

use std::fmt::Write as _;

use super::SparseMatrix;
use crate::error::{Error, Result};

const HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// Parses a Matrix Market coordinate file (1-based, real, general).
pub fn read_matrix_market(text: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let banner: Vec<String> = first.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if banner.len() < 5 || banner[0] != "%%matrixmarket" || banner[1] != "matrix" || banner[2] != "coordinate" {
        return Err(Error::Parse { line: 1, msg: "expected a coordinate MatrixMarket banner".into() });
    }
    if banner[3] != "real" && banner[3] != "integer" {
        return Err(Error::Parse { line: 1, msg: format!("unsupported field {}", banner[3]) });
    }
    if banner[4] != "general" {
        return Err(Error::Parse { line: 1, msg: format!("unsupported symmetry {}", banner[4]) });
    }
    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        match size {
            None => {
                if toks.len() != 3 {
                    return Err(bad("size line needs rows, cols and nnz"));
                }
                let p = |s: &str| s.parse::<usize>().map_err(|_| bad("invalid size entry"));
                size = Some((p(toks[0])?, p(toks[1])?, p(toks[2])?));
            }
            Some((r, c, _)) => {
                if toks.len() != 3 {
                    return Err(bad("entry line needs row, col and value"));
                }
                let i: usize = toks[0].parse().map_err(|_| bad("invalid row index"))?;
                let j: usize = toks[1].parse().map_err(|_| bad("invalid column index"))?;
                let v: f64 = toks[2].parse().map_err(|_| bad("invalid value"))?;
                if i == 0 || j == 0 || i > r || j > c {
                    return Err(bad("index out of range"));
                }
                if !v.is_finite() {
                    return Err(bad("non-finite value"));
                }
                triplets.push((i - 1, j - 1, v));
            }
        }
    }
    let (r, c, nnz) = size.ok_or(Error::Parse { line: 1, msg: "missing size line".into() })?;
    if triplets.len() != nnz {
        return Err(Error::Parse {
            line: 1,
            msg: format!("declared {nnz} entries, found {}", triplets.len()),
        });
    }
    SparseMatrix::from_triplets(r, c, &triplets)
}

/// Writes `a` in Matrix Market coordinate form; output is deterministic.
pub fn write_matrix_market(a: &SparseMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "{} {} {}", a.nrows(), a.ncols(), a.nnz()).unwrap();
    for (i, j, v) in a.triplets() {
        writeln!(out, "{} {} {}", i + 1, j + 1, v).unwrap();
    }
    out
}

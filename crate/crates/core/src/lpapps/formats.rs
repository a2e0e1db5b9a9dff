use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mdp_types::MdpInstance;
use crate::error::{Error, Result};
use crate::ipm::LpInstance;
use crate::linalg::{read_matrix_market, SparseMatrix};

/// JSON sidecar holding the vectors of an LP whose matrix is in Matrix Market form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSidecar {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub l: Vec<f64>,
    pub u: Vec<f64>,
}

/// JSON sidecar for l1 regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L1Sidecar {
    pub c: Vec<f64>,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), msg: e.to_string() }
}

pub fn parse_lp(matrix: &str, sidecar: &str) -> Result<LpInstance> {
    let a = read_matrix_market(matrix)?;
    let s: LpSidecar = serde_json::from_str(sidecar).map_err(json_err)?;
    LpInstance::new(a, s.b, s.c, s.l, s.u)
}

pub fn parse_l1(matrix: &str, sidecar: &str) -> Result<(SparseMatrix, Vec<f64>)> {
    let a = read_matrix_market(matrix)?;
    let s: L1Sidecar = serde_json::from_str(sidecar).map_err(json_err)?;
    if s.c.len() != a.nrows() {
        return Err(Error::Dimension(format!("c has {} entries, matrix has {} rows", s.c.len(), a.nrows())));
    }
    Ok((a, s.c))
}

pub fn parse_mdp(text: &str) -> Result<MdpInstance> {
    let m: MdpInstance = serde_json::from_str(text).map_err(json_err)?;
    m.validate()?;
    Ok(m)
}

/// `foo.mtx` pairs with `foo.json`.
pub fn sidecar_path(matrix: &Path) -> std::path::PathBuf {
    matrix.with_extension("json")
}

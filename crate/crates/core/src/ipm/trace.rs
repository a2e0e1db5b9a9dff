use std::io::Write;

use super::instance::LpInstance;
use super::path::{StepObserver, StepRecord};
use super::state::CenteredTriple;
use crate::error::Result;

/// Writes one JSON object per step: `{"t","mu","psi","yinf","feas"}`.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        TraceWriter { out }
    }

    pub fn write(&mut self, rec: &StepRecord) -> Result<()> {
        let line = serde_json::to_string(rec).map_err(|e| crate::Error::Io(e.to_string()))?;
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> StepObserver for TraceWriter<W> {
    fn on_step(&mut self, _: &LpInstance, rec: &StepRecord, _: &CenteredTriple) -> Result<bool> {
        self.write(rec)?;
        Ok(true)
    }
}

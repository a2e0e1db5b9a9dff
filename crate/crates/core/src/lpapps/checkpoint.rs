use crate::error::Result;
use crate::ipm::{CenteredTriple, LpInstance, StepObserver, StepRecord};

/// Counts steps and, each time `mu` halves, runs `check`; `check` returning
/// `true` stops the path.
pub(crate) struct Checkpoint<F> {
    pub check: F,
    pub next_mu: f64,
    pub steps: usize,
    pub failures: usize,
    pub keep: bool,
    pub records: Vec<StepRecord>,
    pub done: bool,
}

impl<F: FnMut(&LpInstance, &CenteredTriple) -> Result<bool>> Checkpoint<F> {
    pub fn new(check: F, keep: bool) -> Self {
        Checkpoint { check, next_mu: f64::INFINITY, steps: 0, failures: 0, keep, records: Vec::new(), done: false }
    }
}

impl<F: FnMut(&LpInstance, &CenteredTriple) -> Result<bool>> StepObserver for Checkpoint<F> {
    fn on_step(&mut self, inst: &LpInstance, rec: &StepRecord, st: &CenteredTriple) -> Result<bool> {
        self.steps += 1;
        if !rec.invariants_ok {
            self.failures += 1;
        }
        if self.keep {
            self.records.push(rec.clone());
        }
        if rec.mu <= self.next_mu {
            self.next_mu = rec.mu / 2.0;
            if (self.check)(inst, st)? {
                self.done = true;
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Options shared by the LP frontends.
#[derive(Debug, Clone)]
pub struct LpOptions {
    pub mode: crate::ipm::Mode,
    pub c: f64,
    pub seed: u64,
    pub keep_records: bool,
    /// Stop as soon as a checkpoint certifies the target accuracy.
    pub early_stop: bool,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { mode: crate::ipm::Mode::Practical, c: 4.0, seed: 0, keep_records: false, early_stop: true }
    }
}

/// Statistics of one interior point run.
#[derive(Debug, Clone, Default)]
pub struct RunStats {
    pub steps: usize,
    pub invariant_failures: usize,
    pub records: Vec<StepRecord>,
}

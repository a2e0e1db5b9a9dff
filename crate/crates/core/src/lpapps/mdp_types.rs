use crate::error::{Error, Result};

/// Discounted MDP maximizing expected discounted reward.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MdpInstance {
    pub gamma: f64,
    /// `rewards[i][a]`.
    pub rewards: Vec<Vec<f64>>,
    /// `transitions[i][a][j]` is the probability of moving from `i` to `j` under `a`.
    pub transitions: Vec<Vec<Vec<f64>>>,
}

impl MdpInstance {
    pub fn new(gamma: f64, rewards: Vec<Vec<f64>>, transitions: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let mdp = MdpInstance { gamma, rewards, transitions };
        mdp.validate()?;
        Ok(mdp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidArgument("discount must lie in (0, 1)".into()));
        }
        let s = self.rewards.len();
        if s == 0 || self.transitions.len() != s {
            return Err(Error::Dimension("rewards and transitions need one entry per state".into()));
        }
        for i in 0..s {
            if self.rewards[i].is_empty() || self.transitions[i].len() != self.rewards[i].len() {
                return Err(Error::Dimension(format!("state {i} needs matching, non-empty action lists")));
            }
            for (a, p) in self.transitions[i].iter().enumerate() {
                if p.len() != s || p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                    return Err(Error::InvalidArgument(format!("transition ({i}, {a}) is not a distribution")));
                }
                if (p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!("transition ({i}, {a}) does not sum to 1")));
                }
            }
            if self.rewards[i].iter().any(|r| !r.is_finite()) {
                return Err(Error::NonFiniteInput("rewards"));
            }
        }
        Ok(())
    }

    pub fn states(&self) -> usize {
        self.rewards.len()
    }

    /// `max |r|`, at least a tiny positive number.
    pub fn max_reward(&self) -> f64 {
        self.rewards.iter().flatten().fold(f64::MIN_POSITIVE, |m, r| m.max(r.abs()))
    }

    /// `r_a(i) + gamma p_a(i)^T v`.
    pub fn q_value(&self, i: usize, a: usize, v: &[f64]) -> f64 {
        self.rewards[i][a] + self.gamma * self.transitions[i][a].iter().zip(v).map(|(p, x)| p * x).sum::<f64>()
    }

    /// Greedy policy with ties going to the lowest action index.
    pub fn greedy_policy(&self, v: &[f64]) -> Vec<usize> {
        (0..self.states())
            .map(|i| {
                let mut best = 0;
                for a in 1..self.rewards[i].len() {
                    if self.q_value(i, a, v) > self.q_value(i, best, v) {
                        best = a;
                    }
                }
                best
            })
            .collect()
    }
}

impl MdpInstance {
    /// `v_pi` by iterating `v <- r_pi + gamma P_pi v` to a `1e-13` fixed point.
    pub fn policy_values(&self, policy: &[usize]) -> Result<Vec<f64>> {
        let s = self.states();
        if policy.len() != s || policy.iter().enumerate().any(|(i, &a)| a >= self.rewards[i].len()) {
            return Err(Error::InvalidArgument("policy does not match the MDP".into()));
        }
        let mut v = vec![0.0; s];
        let scale = self.max_reward() / (1.0 - self.gamma);
        loop {
            let next: Vec<f64> = (0..s).map(|i| self.q_value(i, policy[i], &v)).collect();
            let diff = next.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            v = next;
            if diff <= 1e-13 * scale.max(1.0) * (1.0 - self.gamma) {
                return Ok(v);
            }
        }
    }
}

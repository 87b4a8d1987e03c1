//! Exact default probability of a single independent firm.
//!
//! The firm's rating is a Markov chain on `0..=r_max`: up with `p_up`, down
//! with `q_down`, unchanged otherwise, absorbed at 0 and reflected at `r_max`.
//! Starting uniform over `1..=r_max`, the mass at 0 after `steps` steps is the
//! expected default fraction. This is the ground truth that the closed-form
//! polynomial and the Monte-Carlo engine are checked against.

use crate::error::{Error, Result};

const SIMPLEX_SLACK: f64 = 1e-12;

fn check_probs(p_up: f64, q_down: f64) -> Result<()> {
    if !(p_up.is_finite() && q_down.is_finite())
        || p_up < 0.0
        || q_down < 0.0
        || p_up + q_down > 1.0 + SIMPLEX_SLACK
    {
        return Err(Error::Precondition(format!(
            "need p_up, q_down >= 0 and p_up + q_down <= 1, got ({p_up}, {q_down})"
        )));
    }
    Ok(())
}

/// Row-stochastic transition matrix of the single-firm rating chain.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingChain {
    r_max: u32,
    rows: Vec<Vec<f64>>,
}

impl RatingChain {
    pub fn new(p_up: f64, q_down: f64, r_max: u32) -> Result<Self> {
        check_probs(p_up, q_down)?;
        if r_max == 0 {
            return Err(Error::param("r_max", "must be >= 1"));
        }
        let k = r_max as usize;
        let stay = (1.0 - p_up - q_down).max(0.0);
        let mut rows = vec![vec![0.0; k + 1]; k + 1];
        rows[0][0] = 1.0;
        for r in 1..=k {
            rows[r][r - 1] += q_down;
            rows[r][r] += stay;
            rows[r][(r + 1).min(k)] += p_up;
        }
        Ok(RatingChain { r_max, rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn r_max(&self) -> u32 {
        self.r_max
    }

    /// `v · P`.
    pub fn step(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (mass, row) in v.iter().zip(&self.rows) {
            if *mass == 0.0 {
                continue;
            }
            for (o, t) in out.iter_mut().zip(row) {
                *o += mass * t;
            }
        }
        out
    }

    /// Distribution over ratings after `steps` steps from a uniform start on
    /// `1..=r_max`.
    pub fn evolve_uniform(&self, steps: u32) -> Vec<f64> {
        // one unit of mass per class keeps the corner cases exact; normalized at the end
        let mut v = vec![1.0; self.rows.len()];
        v[0] = 0.0;
        for _ in 0..steps {
            v = self.step(&v);
        }
        let k = self.r_max as f64;
        v.iter().map(|x| x / k).collect()
    }
}

/// Expected default fraction after `steps` steps.
pub fn nd_oracle(p_up: f64, q_down: f64, steps: u32, r_max: u32) -> Result<f64> {
    Ok(RatingChain::new(p_up, q_down, r_max)?.evolve_uniform(steps)[0])
}

/// Average of the oracle over the three ordered states `(0,0)`, `(1,0)`, `(0,1)`.
pub fn nd_ferromagnetic_average(steps: u32, r_max: u32) -> Result<f64> {
    let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)];
    let mut sum = 0.0;
    for (p, q) in corners {
        sum += nd_oracle(p, q, steps, r_max)?;
    }
    Ok(sum / 3.0)
}

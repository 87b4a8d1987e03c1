//! Statistics of the default count over an ensemble of realizations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(1/K) Σ ND_k`.
pub fn mean_nd(nd_values: &[usize]) -> Result<f64> {
    if nd_values.is_empty() {
        return Err(Error::Precondition("mean of an empty sample".into()));
    }
    let sum: u128 = nd_values.iter().map(|&x| x as u128).sum();
    Ok(sum as f64 / nd_values.len() as f64)
}

/// Upper semivariance `1/(K-1) Σ_k (ND_k - <ND>)²` over the `ND_k` above the mean.
pub fn upper_semivariance(nd_values: &[usize]) -> Result<f64> {
    if nd_values.len() < 2 {
        return Err(Error::Precondition(format!(
            "upper semivariance needs at least 2 values, got {}",
            nd_values.len()
        )));
    }
    let mean = mean_nd(nd_values)?;
    // sorted so the sum does not depend on input order
    let mut above: Vec<f64> = nd_values
        .iter()
        .map(|&x| x as f64 - mean)
        .filter(|d| *d > 0.0)
        .collect();
    above.sort_by(f64::total_cmp);
    let sum: f64 = above.iter().map(|d| d * d).sum();
    Ok(sum / (nd_values.len() - 1) as f64)
}

/// Counts per bin `[b·w, (b+1)·w)`, keyed by the bin's lower edge `b·w`.
pub fn histogram(nd_values: &[usize], bin_width: usize) -> Result<BTreeMap<usize, usize>> {
    if bin_width == 0 {
        return Err(Error::param("bin_width", "must be >= 1"));
    }
    let mut h = BTreeMap::new();
    for &x in nd_values {
        *h.entry(x / bin_width * bin_width).or_insert(0) += 1;
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    /// `ND_k` in realization order.
    pub nd_values: Vec<usize>,
    pub mean_nd: f64,
    /// `None` for a single realization.
    pub semivariance_plus: Option<f64>,
    pub bin_width: usize,
    pub histogram: BTreeMap<usize, usize>,
}

impl EnsembleStats {
    pub fn from_values(nd_values: Vec<usize>, bin_width: usize) -> Result<Self> {
        let mean_nd = mean_nd(&nd_values)?;
        let semivariance_plus = if nd_values.len() >= 2 {
            Some(upper_semivariance(&nd_values)?)
        } else {
            None
        };
        let histogram = histogram(&nd_values, bin_width)?;
        Ok(EnsembleStats {
            nd_values,
            mean_nd,
            semivariance_plus,
            bin_width,
            histogram,
        })
    }

    pub fn k(&self) -> usize {
        self.nd_values.len()
    }

    /// Fraction of realizations with `lo <= ND <= hi`.
    pub fn fraction_in(&self, lo: usize, hi: usize) -> f64 {
        let c = self.nd_values.iter().filter(|&&x| (lo..=hi).contains(&x)).count();
        c as f64 / self.k() as f64
    }
}

use rand::Rng;

use super::coupling::CouplingMatrix;
use super::params::{FTable, ModelParams, Spin};
use crate::error::{Error, Result};

/// Heat-bath distribution of one firm's next spin.
///
/// `z_norm` is the normalizer after the exponents were shifted by `shift`
/// (their maximum), so it always lies in `[1, 3]`; the unshifted normalizer is
/// `z_norm * exp(shift)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDistribution {
    pub probs: [f64; 3],
    pub z_norm: f64,
    pub shift: f64,
}

impl LocalDistribution {
    /// Softmax of the three exponents `h(v) + f(v)`. Exponents may be `-inf`
    /// (forbidden moves) as long as one of them is finite.
    pub fn from_exponents(exponents: [f64; 3]) -> Self {
        let shift = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w = exponents.map(|x| (x - shift).exp());
        let z_norm = w[0] + w[1] + w[2];
        LocalDistribution {
            probs: w.map(|x| x / z_norm),
            z_norm,
            shift,
        }
    }

    pub fn prob(&self, s: Spin) -> f64 {
        self.probs[s.index()]
    }

    /// Inverse-CDF draw from one uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Spin {
        let u: f64 = rng.random();
        if u < self.probs[0] {
            Spin::Down
        } else if u < self.probs[0] + self.probs[1] {
            Spin::Stay
        } else {
            Spin::Up
        }
    }
}

/// Ratings, spins and the cached local fields of one realization.
///
/// `fields[i][v] = Σ_j J_ij δ(v, s_j)`; the zero diagonal of the coupling
/// matrix keeps firm `i` out of its own sum.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    r_max: u32,
    ratings: Vec<u32>,
    spins: Vec<Spin>,
    fields: Vec<[f64; 3]>,
}

impl EnsembleState {
    /// Builds a state and computes the field cache from scratch.
    pub fn new(couplings: &CouplingMatrix, r_max: u32, ratings: Vec<u32>, spins: Vec<Spin>) -> Result<Self> {
        let n = couplings.n();
        if ratings.len() != n || spins.len() != n {
            return Err(Error::Precondition(format!(
                "state of {} ratings / {} spins does not match {n} firms",
                ratings.len(),
                spins.len()
            )));
        }
        if let Some(r) = ratings.iter().find(|&&r| r > r_max) {
            return Err(Error::Precondition(format!("rating {r} above r_max={r_max}")));
        }
        let fields = compute_fields(couplings, &spins);
        Ok(EnsembleState {
            r_max,
            ratings,
            spins,
            fields,
        })
    }

    pub fn n(&self) -> usize {
        self.ratings.len()
    }

    pub fn r_max(&self) -> u32 {
        self.r_max
    }

    pub fn ratings(&self) -> &[u32] {
        &self.ratings
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn local_fields(&self) -> &[[f64; 3]] {
        &self.fields
    }

    pub fn field(&self, firm: usize, v: Spin) -> f64 {
        self.fields[firm][v.index()]
    }

    /// Number of firms at rating 0.
    pub fn defaults(&self) -> usize {
        self.ratings.iter().filter(|&&r| r == 0).count()
    }

    /// Largest absolute difference between the cache and a full recomputation.
    pub fn field_cache_error(&self, couplings: &CouplingMatrix) -> f64 {
        let fresh = compute_fields(couplings, &self.spins);
        self.fields
            .iter()
            .zip(&fresh)
            .flat_map(|(a, b)| (0..3).map(move |v| (a[v] - b[v]).abs()))
            .fold(0.0, f64::max)
    }

    pub fn recompute_fields(&mut self, couplings: &CouplingMatrix) {
        self.fields = compute_fields(couplings, &self.spins);
    }

    /// Sets the spin of `firm`, moving its couplings between the old and new
    /// field columns of every other firm in one pass.
    pub(crate) fn set_spin(&mut self, couplings: &CouplingMatrix, firm: usize, new: Spin) {
        let old = self.spins[firm];
        if old == new {
            return;
        }
        self.spins[firm] = new;
        let (o, w) = (old.index(), new.index());
        for (h, &j) in self.fields.iter_mut().zip(couplings.row(firm)) {
            h[o] -= j;
            h[w] += j;
        }
    }

    pub(crate) fn set_rating(&mut self, firm: usize, r: u32) {
        debug_assert!(r <= self.r_max);
        self.ratings[firm] = r;
    }
}

fn compute_fields(couplings: &CouplingMatrix, spins: &[Spin]) -> Vec<[f64; 3]> {
    (0..spins.len())
        .map(|i| {
            let mut h = [0.0; 3];
            for (&j, s) in couplings.row(i).iter().zip(spins) {
                h[s.index()] += j;
            }
            h
        })
        .collect()
}

/// Uniform initial state: ratings in `1..=r_max`, spins in {-1, 0, +1}.
pub fn init_state<R: Rng + ?Sized>(
    params: &ModelParams,
    couplings: &CouplingMatrix,
    rng: &mut R,
) -> Result<EnsembleState> {
    params.validate()?;
    if couplings.n() != params.n_firms {
        return Err(Error::Precondition(format!(
            "coupling matrix has {} firms, params say {}",
            couplings.n(),
            params.n_firms
        )));
    }
    let n = params.n_firms;
    let mut ratings = Vec::with_capacity(n);
    let mut spins = Vec::with_capacity(n);
    for _ in 0..n {
        ratings.push(rng.random_range(1..=params.r_max));
        spins.push(Spin::from_index(rng.random_range(0..3)));
    }
    EnsembleState::new(couplings, params.r_max, ratings, spins)
}

/// Heat-bath distribution of `firm`'s spin given the current spins of all others.
pub fn conditional_distribution(state: &EnsembleState, firm: usize, f_table: &FTable) -> LocalDistribution {
    let h = &state.fields[firm];
    let lf = f_table.log_weights();
    LocalDistribution::from_exponents([h[0] + lf[0], h[1] + lf[1], h[2] + lf[2]])
}

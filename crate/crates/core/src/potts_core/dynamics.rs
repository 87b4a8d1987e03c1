use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::coupling::{sample_couplings, CouplingMatrix};
use super::params::{ModelParams, Selection, Spin};
use super::state::{conditional_distribution, init_state, EnsembleState};
use crate::error::Result;

/// Rating after a move by `s`, absorbing at 0 and reflecting at `r_max`.
#[inline]
pub fn apply_barrier(r_prev: u32, s: Spin, r_max: u32) -> u32 {
    debug_assert!(r_prev <= r_max);
    match (r_prev, s) {
        (0, _) => 0,
        (r, Spin::Up) if r == r_max => r_max,
        (r, Spin::Up) => r + 1,
        (r, Spin::Down) => r - 1,
        (r, Spin::Stay) => r,
    }
}

/// Heat-bath update of one firm's spin followed by its rating move.
///
/// Defaulted firms keep resampling their spin (and keep influencing others);
/// only their rating is pinned.
pub fn micro_update<R: Rng + ?Sized>(
    state: &mut EnsembleState,
    couplings: &CouplingMatrix,
    firm: usize,
    params: &ModelParams,
    rng: &mut R,
) {
    let dist = conditional_distribution(state, firm, &params.f_table);
    let s = dist.sample(rng);
    state.set_spin(couplings, firm, s);
    let r = apply_barrier(state.ratings()[firm], s, state.r_max());
    state.set_rating(firm, r);
}

/// One time step: `N` micro-updates on firms chosen per `params.selection`.
pub fn time_step<R: Rng + ?Sized>(
    state: &mut EnsembleState,
    couplings: &CouplingMatrix,
    params: &ModelParams,
    rng: &mut R,
) {
    let n = state.n();
    match params.selection {
        Selection::WithReplacement => {
            for _ in 0..n {
                let firm = rng.random_range(0..n);
                micro_update(state, couplings, firm, params, rng);
            }
        }
        Selection::Permutation => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            for firm in order {
                micro_update(state, couplings, firm, params, rng);
            }
        }
    }
}

/// Seed of one realization: stream `stream` of the ChaCha generator keyed by `master`.
///
/// Distinct streams of the same key are independent, so realization `k` of an
/// ensemble can be run on any thread in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealizationSeed {
    pub master: u64,
    pub stream: u64,
}

impl RealizationSeed {
    pub fn new(master: u64, stream: u64) -> Self {
        RealizationSeed { master, stream }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for RealizationSeed {
    fn from(master: u64) -> Self {
        RealizationSeed::new(master, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationOutcome {
    /// Firms at rating 0 after the last step.
    pub nd: usize,
    /// Default count before the first step and after each step (`steps + 1` entries).
    pub nd_trajectory: Vec<usize>,
    pub final_state: EnsembleState,
}

/// Samples couplings, draws the initial state and advances `params.steps` steps.
pub fn run_realization(params: &ModelParams, seed: impl Into<RealizationSeed>) -> Result<RealizationOutcome> {
    params.validate()?;
    let mut rng = seed.into().rng();
    let couplings = sample_couplings(params, &mut rng)?;
    let mut state = init_state(params, &couplings, &mut rng)?;
    let mut nd_trajectory = Vec::with_capacity(params.steps as usize + 1);
    nd_trajectory.push(state.defaults());
    for _ in 0..params.steps {
        time_step(&mut state, &couplings, params, &mut rng);
        nd_trajectory.push(state.defaults());
    }
    Ok(RealizationOutcome {
        nd: state.defaults(),
        nd_trajectory,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potts_core::FTable;

    #[test]
    fn barrier_cases() {
        assert_eq!(apply_barrier(0, Spin::Up, 7), 0);
        assert_eq!(apply_barrier(0, Spin::Down, 7), 0);
        assert_eq!(apply_barrier(7, Spin::Up, 7), 7);
        assert_eq!(apply_barrier(7, Spin::Down, 7), 6);
        assert_eq!(apply_barrier(3, Spin::Down, 7), 2);
        assert_eq!(apply_barrier(3, Spin::Stay, 7), 3);
        assert_eq!(apply_barrier(1, Spin::Down, 7), 0);
    }

    fn always_up() -> FTable {
        FTable::from_weights(0.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn deterministic_up_move_increments_then_reflects() {
        let params = ModelParams {
            n_firms: 1,
            f_table: always_up(),
            ..Default::default()
        };
        let m = CouplingMatrix::zeros(1).unwrap();
        let mut s = EnsembleState::new(&m, 7, vec![6], vec![Spin::Down]).unwrap();
        let mut rng = RealizationSeed::from(1).rng();
        micro_update(&mut s, &m, 0, &params, &mut rng);
        assert_eq!((s.spins()[0], s.ratings()[0]), (Spin::Up, 7));
        micro_update(&mut s, &m, 0, &params, &mut rng);
        assert_eq!(s.ratings()[0], 7);
    }

    #[test]
    fn defaulted_firm_stays_defaulted_but_spins() {
        let params = ModelParams {
            n_firms: 1,
            f_table: always_up(),
            ..Default::default()
        };
        let m = CouplingMatrix::zeros(1).unwrap();
        let mut s = EnsembleState::new(&m, 7, vec![0], vec![Spin::Down]).unwrap();
        let mut rng = RealizationSeed::from(2).rng();
        for _ in 0..20 {
            micro_update(&mut s, &m, 0, &params, &mut rng);
            assert_eq!(s.ratings()[0], 0);
        }
        assert_eq!(s.spins()[0], Spin::Up);
    }

    #[test]
    fn field_cache_survives_many_updates() {
        let params = ModelParams {
            n_firms: 50,
            j0: 0.05,
            sigma_j: 0.4,
            ..Default::default()
        };
        let mut rng = RealizationSeed::from(11).rng();
        let m = sample_couplings(&params, &mut rng).unwrap();
        let mut s = init_state(&params, &m, &mut rng).unwrap();
        for _ in 0..10_000 {
            let firm = rng.random_range(0..50);
            micro_update(&mut s, &m, firm, &params, &mut rng);
        }
        assert!(s.field_cache_error(&m) < 1e-9);
    }

    #[test]
    fn single_firm_step_is_one_update() {
        let params = ModelParams {
            n_firms: 1,
            f_table: always_up(),
            steps: 1,
            ..Default::default()
        };
        let m = CouplingMatrix::zeros(1).unwrap();
        let mut s = EnsembleState::new(&m, 7, vec![2], vec![Spin::Stay]).unwrap();
        time_step(&mut s, &m, &params, &mut RealizationSeed::from(0).rng());
        assert_eq!(s.ratings()[0], 3);
    }

    #[test]
    fn permutation_touches_every_firm_once() {
        let n = 200;
        let params = ModelParams {
            n_firms: n,
            f_table: always_up(),
            selection: Selection::Permutation,
            ..Default::default()
        };
        let m = CouplingMatrix::zeros(n).unwrap();
        let mut s = EnsembleState::new(&m, 7, vec![1; n], vec![Spin::Stay; n]).unwrap();
        time_step(&mut s, &m, &params, &mut RealizationSeed::from(4).rng());
        assert!(s.ratings().iter().all(|&r| r == 2));
    }

    #[test]
    fn with_replacement_occupancy() {
        // with f forcing +1 from rating 1 and r_max large, a firm ends at
        // 1 + (times selected); count firms never selected.
        let n = 20_000;
        let params = ModelParams {
            n_firms: n,
            r_max: 100,
            f_table: always_up(),
            ..Default::default()
        };
        let m = CouplingMatrix::zeros(n).unwrap();
        let mut s = EnsembleState::new(&m, 100, vec![1; n], vec![Spin::Stay; n]).unwrap();
        time_step(&mut s, &m, &params, &mut RealizationSeed::from(8).rng());
        let touched = s.ratings().iter().filter(|&&r| r > 1).count() as f64 / n as f64;
        let expect = 1.0 - (1.0 - 1.0 / n as f64).powi(n as i32);
        // binomial standard error
        let se = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!((touched - expect).abs() < 4.0 * se, "{touched} vs {expect}");
        assert!((expect - (1.0 - (-1f64).exp())).abs() < 1e-4);
        let total: u32 = s.ratings().iter().map(|r| r - 1).sum();
        assert_eq!(total as usize, n);
    }

    #[test]
    fn always_up_never_defaults() {
        let params = ModelParams {
            n_firms: 100,
            f_table: always_up(),
            ..Default::default()
        };
        let out = run_realization(&params, 3).unwrap();
        assert_eq!(out.nd, 0);
        assert_eq!(out.nd_trajectory, vec![0; 9]);
    }

    #[test]
    fn realization_is_deterministic() {
        let params = ModelParams {
            n_firms: 80,
            j0: 0.02,
            sigma_j: 0.1,
            ..Default::default()
        };
        let a = run_realization(&params, RealizationSeed::new(5, 17)).unwrap();
        let b = run_realization(&params, RealizationSeed::new(5, 17)).unwrap();
        assert_eq!(a, b);
        let c = run_realization(&params, RealizationSeed::new(5, 18)).unwrap();
        assert_ne!(a.final_state, c.final_state);
    }
}

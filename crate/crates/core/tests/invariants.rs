use potts_credit::mean_field::{nd_oracle, RatingChain};
use potts_credit::potts_core::{
    apply_barrier, conditional_distribution, init_state, micro_update, run_realization, sample_couplings,
    time_step, CouplingMatrix, EnsembleState, FTable, LocalDistribution, ModelParams, RealizationSeed,
    Selection, Spin,
};
use proptest::prelude::*;
use rand::Rng;

const CASES: u32 = 10_000;

fn spin() -> impl Strategy<Value = Spin> {
    prop_oneof![Just(Spin::Down), Just(Spin::Stay), Just(Spin::Up)]
}

fn selection() -> impl Strategy<Value = Selection> {
    prop_oneof![Just(Selection::WithReplacement), Just(Selection::Permutation)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn barrier_keeps_range_absorbs_and_reflects(r_max in 1u32..20, r in 0u32..20, s in spin()) {
        let r = r.min(r_max);
        let next = apply_barrier(r, s, r_max);
        prop_assert!(next <= r_max);
        if r == 0 {
            prop_assert_eq!(next, 0);
        } else if r == r_max && s == Spin::Up {
            prop_assert_eq!(next, r_max);
        } else {
            prop_assert_eq!(next as i64, r as i64 + s.value() as i64);
        }
    }

    #[test]
    fn distribution_normalized(h in prop::array::uniform3(-1e6f64..1e6)) {
        let d = LocalDistribution::from_exponents(h);
        prop_assert!(d.z_norm.is_finite() && d.z_norm >= 1.0 && d.z_norm <= 3.0);
        prop_assert!((d.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for p in d.probs {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn field_cache_coherent(
        n in 1usize..12,
        j0 in -2.0f64..2.0,
        sigma in 0.0f64..3.0,
        updates in 1usize..60,
        seed in any::<u64>(),
    ) {
        let params = ModelParams { n_firms: n, j0, sigma_j: sigma, ..Default::default() };
        let mut rng = RealizationSeed::from(seed).rng();
        let m = sample_couplings(&params, &mut rng).unwrap();
        let mut s = init_state(&params, &m, &mut rng).unwrap();
        for _ in 0..updates {
            let firm = rng.random_range(0..n);
            micro_update(&mut s, &m, firm, &params, &mut rng);
        }
        prop_assert!(s.field_cache_error(&m) < 1e-9);
    }

    #[test]
    fn couplings_symmetric_zero_diagonal(
        n in 1usize..16,
        j0 in -5.0f64..5.0,
        sigma in 0.0f64..5.0,
        seed in any::<u64>(),
    ) {
        let params = ModelParams { n_firms: n, j0, sigma_j: sigma, ..Default::default() };
        let m = sample_couplings(&params, &mut RealizationSeed::from(seed).rng()).unwrap();
        prop_assert!(m.is_symmetric());
        prop_assert!(m.has_zero_diagonal());
    }

    #[test]
    fn defaults_are_permanent_and_ratings_in_range(
        n in 1usize..10,
        r_max in 1u32..8,
        j0 in -1.0f64..1.0,
        sigma in 0.0f64..1.0,
        sel in selection(),
        seed in any::<u64>(),
    ) {
        let params = ModelParams { n_firms: n, r_max, j0, sigma_j: sigma, selection: sel, ..Default::default() };
        let mut rng = RealizationSeed::from(seed).rng();
        let m = sample_couplings(&params, &mut rng).unwrap();
        let mut s = init_state(&params, &m, &mut rng).unwrap();
        let mut defaulted = vec![false; n];
        for _ in 0..8 {
            time_step(&mut s, &m, &params, &mut rng);
            for (i, &r) in s.ratings().iter().enumerate() {
                prop_assert!(r <= r_max);
                if defaulted[i] {
                    prop_assert_eq!(r, 0);
                }
                defaulted[i] |= r == 0;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn chain_rows_stochastic_and_mass_conserved(
        p in 0.0f64..1.0,
        frac in 0.0f64..1.0,
        steps in 0u32..20,
        r_max in 1u32..12,
    ) {
        let q = (1.0 - p) * frac;
        let chain = RatingChain::new(p, q, r_max).unwrap();
        for row in chain.rows() {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let dist = chain.evolve_uniform(steps);
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn realization_is_pure_in_seed(n in 1usize..30, j0 in -0.5f64..0.5, master in any::<u64>(), stream in any::<u64>()) {
        let params = ModelParams { n_firms: n, j0, sigma_j: 0.1, ..Default::default() };
        let seed = RealizationSeed::new(master, stream);
        prop_assert_eq!(run_realization(&params, seed).unwrap(), run_realization(&params, seed).unwrap());
    }
}

#[test]
fn oracle_monotone_in_down_probability() {
    for i in 0..=20 {
        let p = i as f64 * 0.05;
        let mut last = -1.0;
        for j in 0..=(20 - i) {
            let q = j as f64 * 0.05;
            let v = nd_oracle(p, q.min(1.0 - p), 8, 7).unwrap();
            assert!(v >= last - 1e-15, "p={p} q={q}: {v} < {last}");
            last = v;
        }
    }
}

#[test]
fn zero_coupling_spins_are_uniform() {
    // chi-square with 2 degrees of freedom; 13.82 is the 0.999 quantile
    let n = 10;
    let params = ModelParams {
        n_firms: n,
        ..Default::default()
    };
    let m = CouplingMatrix::zeros(n).unwrap();
    let mut s = EnsembleState::new(&m, 7, vec![7; n], vec![Spin::Stay; n]).unwrap();
    let mut rng = RealizationSeed::from(99).rng();
    let mut counts = [0usize; 3];
    let draws = 30_000;
    for _ in 0..draws {
        let firm = rng.random_range(0..n);
        micro_update(&mut s, &m, firm, &params, &mut rng);
        counts[s.spins()[firm].index()] += 1;
    }
    let e = draws as f64 / 3.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    assert!(chi2 < 13.82, "{counts:?} chi2={chi2}");
}

#[test]
fn single_firm_matches_markov_oracle() {
    // one isolated firm moves exactly once per step, so its default frequency
    // is the independent-chain value at p = q = 1/3
    let params = ModelParams {
        n_firms: 1,
        ..Default::default()
    };
    let runs = 100_000u64;
    let defaults = (0..runs)
        .filter(|&k| {
            run_realization(&params, RealizationSeed::new(2024, k))
                .unwrap()
                .nd
                == 1
        })
        .count();
    let freq = defaults as f64 / runs as f64;
    let expect = nd_oracle(1.0 / 3.0, 1.0 / 3.0, 8, 7).unwrap();
    let se = (expect * (1.0 - expect) / runs as f64).sqrt();
    assert!(
        (freq - expect).abs() < 3.0 * se,
        "freq={freq} oracle={expect} se={se}"
    );
}

#[test]
fn damped_table_isolated_firm_matches_oracle() {
    let params = ModelParams {
        n_firms: 1,
        f_table: FTable::damped(),
        ..Default::default()
    };
    let runs = 50_000u64;
    let defaults = (0..runs)
        .filter(|&k| run_realization(&params, RealizationSeed::new(77, k)).unwrap().nd == 1)
        .count();
    let freq = defaults as f64 / runs as f64;
    let expect = nd_oracle(0.10, 0.15, 8, 7).unwrap();
    let se = (expect * (1.0 - expect) / runs as f64).sqrt();
    assert!((freq - expect).abs() < 3.0 * se, "freq={freq} oracle={expect}");
}

#[test]
fn heat_bath_matches_softmax_with_neighbours() {
    let mut m = CouplingMatrix::zeros(3).unwrap();
    m.set_pair(0, 1, 1.0);
    m.set_pair(0, 2, 1.0);
    let s = EnsembleState::new(&m, 7, vec![3; 3], vec![Spin::Stay, Spin::Up, Spin::Up]).unwrap();
    let d = conditional_distribution(&s, 0, &FTable::zero());
    let mut rng = RealizationSeed::from(5).rng();
    let draws = 200_000;
    let ups = (0..draws).filter(|_| d.sample(&mut rng) == Spin::Up).count() as f64 / draws as f64;
    let p = d.prob(Spin::Up);
    assert!((ups - p).abs() < 4.0 * (p * (1.0 - p) / draws as f64).sqrt());
}

use setwise_kemeny::experiments::{
    generate_uniform_profile, instance_rng, run_simulation, to_csv, SimulationConfig, CSV_HEADER,
    DEFAULT_SEED,
};
use setwise_kemeny::preflib::{self, PreflibKind};
use setwise_kemeny::reduction::Method;
use setwise_kemeny::OrderStatistics;

/// Pearson statistic of observed counts against expected probabilities.
fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn single_votes_are_uniform_over_permutations() {
    let mut rng = instance_rng(DEFAULT_SEED, 0);
    let mut counts = [0u64; 6];
    for _ in 0..60_000 {
        let p = generate_uniform_profile(&mut rng, 3, 1).unwrap();
        let order = p.entries()[0].0.ranked().to_vec();
        let index = match order.as_slice() {
            [0, 1, 2] => 0,
            [0, 2, 1] => 1,
            [1, 0, 2] => 2,
            [1, 2, 0] => 3,
            [2, 0, 1] => 4,
            [2, 1, 0] => 5,
            other => panic!("not a permutation: {other:?}"),
        };
        counts[index] += 1;
    }
    // 99% quantile of chi-square with 5 degrees of freedom.
    assert!(chi_square(&counts, &[1.0 / 6.0; 6]) < 15.086, "{counts:?}");
}

#[test]
fn two_alternative_margins_are_binomial() {
    let m = 6u64;
    let binom = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0].map(|c| c / 64.0);
    let mut counts = [0u64; 7];
    for i in 0..20_000 {
        let p = generate_uniform_profile(&mut instance_rng(7, i), 2, m as usize).unwrap();
        let delta = OrderStatistics::compute(&p).delta(0, 1);
        counts[((delta + m as i64) / 2) as usize] += 1;
    }
    // 99% quantile of chi-square with 6 degrees of freedom.
    assert!(chi_square(&counts, &binom) < 16.812, "{counts:?}");
}

#[test]
fn fixed_seed_gives_identical_serialized_profiles() {
    let render = || {
        (0..20)
            .map(|i| {
                let p = generate_uniform_profile(&mut instance_rng(42, i), 7, 9).unwrap();
                preflib::serialize(&p, PreflibKind::Soc).unwrap()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(render(), render());
    let other = generate_uniform_profile(&mut instance_rng(43, 0), 7, 9).unwrap();
    assert_ne!(
        preflib::serialize(&other, PreflibKind::Soc).unwrap(),
        render()[0]
    );
}

fn mean_of(n: usize, m: usize, instances: usize, method: Method) -> (f64, f64) {
    let cfg = SimulationConfig::new(n, m, instances, DEFAULT_SEED, vec![method]);
    let s = &run_simulation(&cfg).unwrap().methods[0];
    (s.mean_solved_fraction, s.stderr)
}

#[test]
fn odd_vote_counts_solve_more_pairs() {
    let (even, _) = mean_of(5, 4, 20_000, Method::Mot3);
    let (odd, _) = mean_of(5, 5, 20_000, Method::Mot3);
    assert!(even < odd, "m=4 {even} vs m=5 {odd}");
}

#[test]
fn standard_error_scales_with_inverse_square_root() {
    let (_, small) = mean_of(5, 5, 1_000, Method::Iterated3Mot);
    let (_, large) = mean_of(5, 5, 16_000, Method::Iterated3Mot);
    let ratio = small / large;
    assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
}

#[test]
fn summaries_are_fractions_and_iteration_dominates() {
    let methods = vec![
        Method::At3,
        Method::Mot3,
        Method::Mot3e,
        Method::Iterated3Mot,
    ];
    let cfg = SimulationConfig::new(6, 7, 2_000, DEFAULT_SEED, methods);
    let result = run_simulation(&cfg).unwrap();
    for s in &result.methods {
        assert!(
            (0.0..=1.0).contains(&s.mean_solved_fraction),
            "{}",
            s.method
        );
        assert!(s.stderr >= 0.0);
    }
    let mean = |m: Method| {
        result
            .methods
            .iter()
            .find(|s| s.method == m)
            .unwrap()
            .mean_solved_fraction
    };
    assert!(mean(Method::Iterated3Mot) >= mean(Method::Mot3));
    assert!(mean(Method::Mot3e) >= mean(Method::Mot3));
    let csv = to_csv(&result);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 4);
}

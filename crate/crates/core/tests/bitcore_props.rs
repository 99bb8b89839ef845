use std::collections::HashMap;

use proptest::prelude::*;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use moea_lab::bitcore::{
    biased_crossover, flip_exact, hamming_distance, random_bitstring, sample_binomial,
};
use moea_lab::{BitString, RandomSource};

const ALPHA: f64 = 1e-6;

fn bits(max_len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 1..max_len)
        .prop_map(|v| BitString::from_bools(&v).unwrap())
}

/// Pearson statistic after pooling cells with expected count below 5 into
/// their neighbour. Returns `(statistic, degrees of freedom)`.
fn pearson(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob as f64;
        e += ex;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if let Some(last) = cells.last_mut() {
        last.0 += o;
        last.1 += e;
    }
    let stat = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    (stat, cells.len() - 1)
}

fn accept(stat: f64, dof: usize) -> bool {
    stat <= ChiSquared::new(dof as f64)
        .unwrap()
        .inverse_cdf(1.0 - ALPHA)
}

proptest! {
    #[test]
    fn flip_exact_moves_exactly_ell(x in bits(200), frac in 0.0f64..=1.0, seed: u64) {
        let ell = (frac * x.len() as f64).floor() as usize;
        let mut rng = RandomSource::new(seed);
        let y = flip_exact(&x, ell, &mut rng).unwrap();
        prop_assert_eq!(hamming_distance(&x, &y).unwrap(), ell);
        prop_assert_eq!(y.len(), x.len());
    }

    #[test]
    fn crossover_stays_between_parents(x in bits(120), seed: u64, c in 0.0f64..=1.0) {
        let mut rng = RandomSource::new(seed);
        let w = random_bitstring(x.len(), &mut rng).unwrap();
        let diff = x.diff_positions(&w).unwrap();
        for y in biased_crossover(&x, &w, c, 8, &mut rng).unwrap() {
            let moved = x.diff_positions(&y).unwrap();
            prop_assert!(moved.iter().all(|i| diff.contains(i)));
            prop_assert_eq!(
                hamming_distance(&x, &y).unwrap() + hamming_distance(&y, &w).unwrap(),
                diff.len()
            );
        }
    }

    #[test]
    fn text_round_trip(x in bits(150)) {
        let parsed: BitString = x.to_string().parse().unwrap();
        prop_assert_eq!(parsed, x);
    }

    #[test]
    fn counts_partition_length(x in bits(300)) {
        prop_assert_eq!(x.count_ones() + x.count_zeros(), x.len());
        prop_assert_eq!(x.iter().filter(|&b| b).count(), x.count_ones());
    }
}

#[test]
fn binomial_goodness_of_fit() {
    let samples = 200_000;
    for n in [1usize, 2, 5, 10, 20] {
        for p in [1.0 / n as f64, 0.1, 0.35, 0.5, 0.9] {
            let mut rng = RandomSource::new((n as u64) << 32 | (p * 1000.0) as u64);
            let mut observed = vec![0u64; n + 1];
            for _ in 0..samples {
                observed[sample_binomial(n, p, &mut rng).unwrap()] += 1;
            }
            let law = Binomial::new(p, n as u64).unwrap();
            let expected: Vec<f64> = (0..=n as u64)
                .map(|i| law.pmf(i) * samples as f64)
                .collect();
            let (stat, dof) = pearson(&observed, &expected);
            if dof > 0 {
                assert!(accept(stat, dof), "n={n} p={p}: chi2={stat:.2} dof={dof}");
            }
        }
    }
}

#[test]
fn flip_exact_subsets_are_uniform() {
    let samples = 120_000;
    for (n, ell) in [(4usize, 2usize), (6, 3), (7, 1), (8, 6)] {
        let x = BitString::zeros(n).unwrap();
        let mut rng = RandomSource::new(n as u64 * 31 + ell as u64);
        let mut counts: HashMap<String, u64> = HashMap::new();
        for _ in 0..samples {
            *counts
                .entry(flip_exact(&x, ell, &mut rng).unwrap().to_string())
                .or_default() += 1;
        }
        let subsets = (0..ell).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
        assert_eq!(counts.len(), subsets);
        let observed: Vec<u64> = counts.values().copied().collect();
        let expected = vec![samples as f64 / subsets as f64; subsets];
        let (stat, dof) = pearson(&observed, &expected);
        assert!(accept(stat, dof), "n={n} ell={ell}: chi2={stat:.2}");
    }
}

#[test]
fn per_bit_one_rate_matches_bias() {
    let n = 16;
    let samples = 50_000;
    let x = BitString::zeros(n).unwrap();
    let w = BitString::ones(n).unwrap();
    let mut rng = RandomSource::new(4);
    for c in [0.05, 0.25, 0.5] {
        let mut ones = vec![0u64; n];
        for y in biased_crossover(&x, &w, c, samples, &mut rng).unwrap() {
            for (i, b) in y.iter().enumerate() {
                ones[i] += b as u64;
            }
        }
        let sd = (samples as f64 * c * (1.0 - c)).sqrt();
        for count in ones {
            assert!((count as f64 - c * samples as f64).abs() < 6.0 * sd);
        }
    }
}

#[test]
fn derived_streams_are_reproducible_and_distinct() {
    let base = RandomSource::new(99);
    let draw = |mut r: RandomSource| -> Vec<usize> { (0..32).map(|_| r.below(1000)).collect() };
    assert_eq!(draw(base.derive("init")), draw(base.derive("init")));
    assert_ne!(draw(base.derive("init")), draw(base.derive("search")));
}

//! Seeded generator of variant log pairs with planted behavioural
//! differences, for benchmarks and scaling tests.
//!
//! Both variants draw traces from a Markov chain over a shared alphabet.
//! Variant B reroutes the successors of a few activities, so some rules
//! hold with different strength in the two logs. Each variant has a fixed
//! pool of distinct traces with Zipf-like frequencies; the number of traces
//! drawn from it only changes multiplicities.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::log_io::{Activity, EventLog, Trace};

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub activities: usize,
    /// Target number of distinct traces per variant.
    pub distinct: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub mean_len: f64,
    /// Activities whose successors differ in variant B.
    pub rerouted: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            activities: 8,
            distinct: 60,
            min_len: 2,
            max_len: 12,
            mean_len: 5.0,
            rerouted: 2,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    /// Shape of the road-fines variants: 11 activities, about 150 distinct
    /// traces of 2 to 20 events averaging 4.
    pub fn road_fines(seed: u64) -> Self {
        SyntheticSpec {
            activities: 11,
            distinct: 150,
            min_len: 2,
            max_len: 20,
            mean_len: 4.0,
            rerouted: 3,
            seed,
        }
    }
}

/// Draws `traces_a` and `traces_b` traces for the two variants.
pub fn generate(spec: &SyntheticSpec, traces_a: u64, traces_b: u64) -> (EventLog, EventLog) {
    assert!(spec.activities >= 2 && spec.min_len >= 1 && spec.min_len <= spec.max_len);
    let names: Vec<Activity> = (0..spec.activities)
        .map(|i| Activity::from(format!("activity {i:02}")))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let chain_a = Chain::random(spec.activities, &mut rng);
    let chain_b = chain_a.rerouted(spec.rerouted, &mut rng);
    let pool_a = chain_a.pool(spec, &mut rng);
    let pool_b = chain_b.pool(spec, &mut rng);
    (
        sample("synthetic-A", &pool_a, traces_a, &names, &mut rng),
        sample("synthetic-B", &pool_b, traces_b, &names, &mut rng),
    )
}

fn sample(
    id: &str,
    pool: &[Vec<usize>],
    n: u64,
    names: &[Activity],
    rng: &mut ChaCha8Rng,
) -> EventLog {
    let weights: Vec<f64> = (0..pool.len())
        .map(|i| 1.0 / (i as f64 + 1.0).powf(1.1))
        .collect();
    let dist = WeightedIndex::new(&weights).expect("non-empty pool");
    let mut counts = vec![0u64; pool.len()];
    for _ in 0..n {
        counts[dist.sample(rng)] += 1;
    }
    EventLog::from_counts(
        id,
        pool.iter()
            .zip(counts)
            .map(|(t, c)| (Trace::new(t.iter().map(|&i| names[i].clone()).collect()), c)),
    )
}

/// Sparse first-order transitions; traces always start at activity 0.
#[derive(Clone)]
struct Chain {
    successors: Vec<Vec<(usize, f64)>>,
}

impl Chain {
    fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let successors = (0..n)
            .map(|from| {
                let mut targets: Vec<usize> = (0..n).filter(|&t| t != from).collect();
                targets.shuffle(rng);
                targets.truncate(3.min(n - 1));
                targets
                    .into_iter()
                    .map(|t| (t, rng.random_range(0.2..1.0)))
                    .collect()
            })
            .collect();
        Chain { successors }
    }

    fn rerouted(&self, k: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut out = self.clone();
        let n = self.successors.len();
        for from in 0..k.min(n) {
            for (target, weight) in &mut out.successors[from] {
                *target = (*target + 1 + rng.random_range(0..n - 1)) % n;
                if *target == from {
                    *target = (from + 1) % n;
                }
                *weight = rng.random_range(0.2..1.0);
            }
        }
        out
    }

    fn walk(&self, spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let stop = 1.0 / (spec.mean_len - spec.min_len as f64 + 1.0).max(1.0);
        let mut trace = vec![0usize];
        while trace.len() < spec.max_len {
            if trace.len() >= spec.min_len && rng.random_bool(stop) {
                break;
            }
            let succ = &self.successors[*trace.last().expect("non-empty")];
            let dist = WeightedIndex::new(succ.iter().map(|s| s.1)).expect("positive weights");
            trace.push(succ[dist.sample(rng)].0);
        }
        trace
    }

    /// Distinct walks in order of first appearance, so frequent ones come
    /// first.
    fn pool(&self, spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
        let mut seen = HashSet::new();
        let mut pool = Vec::new();
        let mut attempts = 0;
        while pool.len() < spec.distinct && attempts < 200 * spec.distinct {
            attempts += 1;
            let t = self.walk(spec, rng);
            if seen.insert(t.clone()) {
                pool.push(t);
            }
        }
        pool
    }
}

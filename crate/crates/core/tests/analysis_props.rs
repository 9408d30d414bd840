use std::collections::HashSet;

use proptest::prelude::*;
use vitriq::analysis::{
    classical_sample, count_ground_states, entropy_rank, exact_order_parameter, order_parameter,
    pool_solutions, subsample,
};
use vitriq::compiler::compile_prefix;
use vitriq::ensemble::{generate_instance, InstanceSpec};
use vitriq::rng::seeded;
use vitriq::simulator::{run_shots, NoiseModel};
use vitriq::{BitMatrix, BitVector};

fn vectors(len: usize) -> impl Strategy<Value = Vec<BitVector>> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), len), 1..30)
        .prop_map(|vs| vs.iter().map(|v| BitVector::from_bits(v.iter().copied())).collect())
}

/// q over the whole solution set, by enumerating all 2^L assignments.
fn brute_force_q(b: &BitMatrix) -> f64 {
    let sols: Vec<BitVector> = (0..1u64 << b.cols())
        .map(|v| BitVector::from_u64_msb(v, b.cols()))
        .filter(|x| b.matvec(x).unwrap().is_zero())
        .collect();
    order_parameter(&sols, b.cols()).unwrap()
}

fn instance(size: usize, rows: usize, seed: u64) -> BitMatrix {
    let inst = generate_instance(InstanceSpec::new(size, 1.5, seed), &mut seeded(seed)).unwrap();
    inst.prefix(rows.clamp(1, inst.matrix.rows())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn q_is_shift_invariant(sample in vectors(12), z in prop::collection::vec(any::<bool>(), 12)) {
        let z = BitVector::from_bits(z);
        let shifted: Vec<_> = sample.iter().map(|x| x.xor(&z)).collect();
        let a = order_parameter(&sample, 12).unwrap();
        let b = order_parameter(&shifted, 12).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn q_in_unit_interval(sample in vectors(9)) {
        let q = order_parameter(&sample, 9).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&q));
        let distinct: HashSet<_> = sample.iter().collect();
        prop_assert_eq!((q - 1.0).abs() < 1e-12, distinct.len() == 1);
    }

    #[test]
    fn exact_q_matches_enumeration(size in 5usize..11, rows in 1usize..16, seed in any::<u64>()) {
        let b = instance(size, rows, seed);
        prop_assert!((exact_order_parameter(&b) - brute_force_q(&b)).abs() < 1e-12);
        let n_gs = count_ground_states(&b) as usize;
        let sample = classical_sample(&b, n_gs, &mut seeded(seed));
        prop_assert_eq!(sample.len(), n_gs);
        prop_assert!((order_parameter(&sample, size).unwrap() - brute_force_q(&b)).abs() < 1e-12);
    }

    #[test]
    fn classical_sample_is_distinct_and_capped(size in 5usize..16, rows in 1usize..20, seed in any::<u64>()) {
        let b = instance(size, rows, seed);
        let sample = classical_sample(&b, 24, &mut seeded(seed));
        let n_gs = count_ground_states(&b);
        prop_assert_eq!(sample.len() as u128, n_gs.min(24));
        prop_assert_eq!(sample.iter().collect::<HashSet<_>>().len(), sample.len());
        for x in &sample {
            prop_assert!(b.matvec(x).unwrap().is_zero());
        }
    }

    #[test]
    fn pool_members_are_null_vectors(size in 5usize..11, rows in 1usize..14, seed in any::<u64>()) {
        let b = instance(size, rows, seed);
        let c = compile_prefix(&b).unwrap();
        let b_mp = c.checks.clone().unwrap();
        let shots = run_shots(&c, 200, &NoiseModel::NOISELESS, &mut seeded(seed));
        let pool = pool_solutions(&b_mp, &shots).unwrap();
        for x in pool.members() {
            prop_assert!(b_mp.matvec(x).unwrap().is_zero());
            prop_assert!(b.matvec(x).unwrap().is_zero());
        }
        let total: usize = pool.source_counts.iter().map(|(_, n)| n).sum();
        prop_assert_eq!(total, 200);
    }

    #[test]
    fn entropy_rank_is_monotone(size in 5usize..14, seed in any::<u64>()) {
        let b = instance(size, usize::MAX, seed);
        let mut prev = f64::INFINITY;
        for m in 0..=b.rows() {
            let s = entropy_rank(&b, &b.prefix(m).unwrap());
            prop_assert!(s <= prev + 1e-12 && s >= 0.0);
            prev = s;
        }
        prop_assert_eq!(prev, 0.0);
    }
}

/// Enough shots to see every solution, then a cap at least as large as the
/// pool: the shot pipeline must reproduce the exact q.
#[test]
fn shot_pipeline_reproduces_exact_q() {
    for seed in 0..40u64 {
        let size = 6 + (seed as usize % 5);
        let b = instance(size, 2 + (seed as usize % 9), seed);
        let c = compile_prefix(&b).unwrap();
        let b_mp = c.checks.clone().unwrap();
        let n_gs = count_ground_states(&b) as usize;
        let shots = run_shots(&c, 40 * n_gs + 200, &NoiseModel::NOISELESS, &mut seeded(seed));
        let pool = pool_solutions(&b_mp, &shots).unwrap();
        assert_eq!(pool.len(), n_gs, "seed {seed}");
        let sample = subsample(&pool, n_gs, &mut seeded(seed)).unwrap();
        let q = order_parameter(&sample, size).unwrap();
        assert!((q - brute_force_q(&b)).abs() < 1e-12, "seed {seed}");
    }
}

#[test]
fn empty_prefix_floor_at_large_size() {
    // 24 distinct draws from 2^40 solutions: E[q] = 1/24 up to (N - 24)/(N - 1).
    let b = BitMatrix::zeros(0, 40);
    let n = 2000;
    let qs: Vec<f64> = (0..n)
        .map(|s| order_parameter(&classical_sample(&b, 24, &mut seeded(s)), 40).unwrap())
        .collect();
    let p = vitriq::analysis::aggregate(&qs, 0.0, 40).unwrap();
    assert!((p.q_mean - 1.0 / 24.0).abs() < 4.0 * p.stderr, "{p:?}");
}

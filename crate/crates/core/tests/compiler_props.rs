use proptest::prelude::*;
use vitriq::compiler::{
    cnot_bound, compile_naive, compile_optimized, compile_prefix, export_circuit,
    global_cnot_bound, lower_to_cnot, naive_cnot_count, parse_circuit, Gate,
};
use vitriq::ensemble::{generate_instance, InstanceSpec};
use vitriq::rng::seeded;
use vitriq::simulator::{run_shots, NoiseModel};
use vitriq::BitMatrix;

fn prefix(size: usize, rows: usize, seed: u64) -> BitMatrix {
    let alpha = 1.5;
    let inst = generate_instance(InstanceSpec::new(size, alpha, seed), &mut seeded(seed)).unwrap();
    inst.prefix(rows.min(inst.matrix.rows())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn naive_count_is_exact(size in 5usize..20, rows in 1usize..30, seed in any::<u64>()) {
        let b = prefix(size, rows, seed);
        let c = lower_to_cnot(&compile_naive(&b).unwrap());
        prop_assert_eq!(c.stats().n_cnot as u64, naive_cnot_count(b.rows() as u64, size as u64));
        prop_assert_eq!(c.stats().n_qubits, size + b.rows());
    }

    #[test]
    fn optimized_within_bounds(size in 5usize..24, rows in 1usize..36, seed in any::<u64>()) {
        let b = prefix(size, rows, seed);
        let c = compile_prefix(&b).unwrap();
        let n = c.stats().n_cnot as u64;
        prop_assert!(n <= cnot_bound(b.rank() as u64, size as u64));
        prop_assert!(n <= global_cnot_bound(size as u64));
        prop_assert_eq!(c.stats().n_h, size);
        prop_assert_eq!(c.stats().n_measure, size + b.rank());
        prop_assert!(c.is_lowered());
        c.validate().unwrap();
    }

    #[test]
    fn lowering_never_adds_cnots(size in 5usize..16, rows in 1usize..20, seed in any::<u64>()) {
        let b = prefix(size, rows, seed).backfill_optimize();
        let raw = compile_optimized(&b).unwrap();
        raw.check_hadamards().unwrap();
        let swaps = raw.stats().n_swap;
        let cnots = raw.stats().n_cnot;
        let lowered = lower_to_cnot(&raw);
        prop_assert!(lowered.stats().n_cnot <= cnots + 3 * swaps);
        prop_assert_eq!(lowered.stats().n_swap, 0);
    }

    #[test]
    fn qasm_round_trip(size in 5usize..12, rows in 1usize..12, seed in any::<u64>()) {
        let c = compile_prefix(&prefix(size, rows, seed)).unwrap();
        let text = export_circuit(&c).unwrap();
        let back = parse_circuit(&text).unwrap();
        prop_assert_eq!(&back.gates, &c.gates);
        prop_assert_eq!(export_circuit(&back).unwrap(), text);
    }

    #[test]
    fn compiled_shots_satisfy_checks(size in 5usize..10, rows in 1usize..15, seed in any::<u64>()) {
        let b = prefix(size, rows, seed);
        for c in [compile_prefix(&b).unwrap(), lower_to_cnot(&compile_naive(&b).unwrap())] {
            let shots = run_shots(&c, 64, &NoiseModel::NOISELESS, &mut seeded(seed));
            prop_assert!(shots.iter().all(|s| s.passed));
        }
    }
}

#[test]
fn unlowered_swap_cannot_be_exported() {
    let b = prefix(6, 4, 1).backfill_optimize();
    let raw = compile_optimized(&b).unwrap();
    assert!(raw.gates.iter().any(|g| matches!(g, Gate::Swap(..))));
    assert!(export_circuit(&raw).is_err());
}

#[test]
fn non_echelon_input_rejected() {
    let b = BitMatrix::from_rows(4, &[[0, 1, 1, 0], [1, 0, 1, 1]]);
    assert!(compile_optimized(&b).is_err());
    assert!(compile_prefix(&b).is_ok());
}

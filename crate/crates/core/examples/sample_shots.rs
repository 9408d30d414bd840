//! Stabilizer simulation of a compiled circuit, with and without noise, and
//! post-selection on the parity checks.

use vitriq::compiler::compile_prefix;
use vitriq::ensemble::{generate_instance, InstanceSpec};
use vitriq::rng::seeded;
use vitriq::simulator::{filter_shots, run_shots, write_shots_csv, NoiseModel, ShotRow};

fn main() {
    let size = 16;
    let inst = generate_instance(InstanceSpec::new(size, 1.5, 7), &mut seeded(7)).unwrap();
    let b = inst.prefix(16).unwrap();
    let c = compile_prefix(&b).unwrap();
    let checks = c.checks.clone().unwrap();
    println!("{} qubits, {} CNOTs", c.n_qubits, c.stats().n_cnot);

    for (p2, p_ro) in [(0.0, 0.0), (0.001, 0.01), (0.005, 0.02), (0.02, 0.05)] {
        let noise = NoiseModel::new(p2, p_ro).unwrap();
        let shots = run_shots(&c, 2000, &noise, &mut seeded(1));
        let (kept, ratio) = filter_shots(&checks, &shots).unwrap();
        println!("p2 = {p2:<6} p_ro = {p_ro:<5} pass ratio {ratio:.4} ({} kept)", kept.len());
    }

    let shots = run_shots(&c, 5, &NoiseModel::NOISELESS, &mut seeded(2));
    let rows: Vec<_> = shots
        .iter()
        .enumerate()
        .map(|(i, s)| ShotRow::new(0, 1.0, i as u64, s))
        .collect();
    let path = std::env::temp_dir().join("vitriq_shots.csv");
    write_shots_csv(&path, &rows).unwrap();
    print!("{}", std::fs::read_to_string(&path).unwrap());
}

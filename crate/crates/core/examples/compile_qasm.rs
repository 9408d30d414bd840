//! Naive versus interleaved compilation of a measurement prefix, with the
//! CNOT counts and bounds, then the OpenQASM export of the optimized circuit.

use vitriq::compiler::{
    cnot_bound, compile_naive, compile_prefix, export_circuit, global_cnot_bound, lower_to_cnot,
    naive_cnot_count, parse_circuit,
};
use vitriq::ensemble::{generate_instance, InstanceSpec};
use vitriq::rng::seeded;

fn main() {
    let size = 24;
    let inst = generate_instance(InstanceSpec::new(size, 1.5, 3), &mut seeded(3)).unwrap();
    println!("{:>4} {:>5} {:>7} {:>7} {:>7}", "|M|", "rank", "naive", "opt", "bound");
    for rows in (6..=inst.matrix.rows()).step_by(6) {
        let b = inst.prefix(rows).unwrap();
        let naive = lower_to_cnot(&compile_naive(&b).unwrap()).stats().n_cnot;
        assert_eq!(naive as u64, naive_cnot_count(rows as u64, size as u64));
        let opt = compile_prefix(&b).unwrap().stats().n_cnot;
        let bound = cnot_bound(b.rank() as u64, size as u64);
        println!("{rows:>4} {:>5} {naive:>7} {opt:>7} {bound:>7}", b.rank());
    }
    println!("global bound for L = {size}: {}\n", global_cnot_bound(size as u64));

    let small = inst.prefix(4).unwrap();
    let c = compile_prefix(&small).unwrap();
    let qasm = export_circuit(&c).unwrap();
    print!("{qasm}");
    let back = parse_circuit(&qasm).unwrap();
    assert_eq!(export_circuit(&back).unwrap(), qasm);
}

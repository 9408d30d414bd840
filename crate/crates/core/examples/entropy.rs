//! Entanglement entropy between variables and parities after measuring a
//! prefix of the checks: exact state vector against the rank formula.

use std::f64::consts::LN_2;

use vitriq::analysis::{entropy_density_asymptotic, entropy_rank};
use vitriq::compiler::{compile_naive, lower_to_cnot};
use vitriq::ensemble::{generate_instance, InstanceSpec};
use vitriq::rng::seeded;
use vitriq::simulator::dense_entropy_oracle;
use vitriq::BitVector;

fn main() {
    let size = 7;
    let inst = generate_instance(InstanceSpec::new(size, 1.43, 5), &mut seeded(5)).unwrap();
    let b = &inst.matrix;
    let c = lower_to_cnot(&compile_naive(b).unwrap());
    let y = b.matvec(&BitVector::from_u64_msb(0b1011001, size)).unwrap();
    let y: Vec<bool> = y.iter().collect();

    println!("{:>4} {:>12} {:>12}", "|M|", "state (bits)", "rank (bits)");
    for m in 0..=b.rows() {
        let dense = dense_entropy_oracle(&c, &y[..m]).unwrap();
        let formula = entropy_rank(b, &b.prefix(m).unwrap());
        println!("{m:>4} {:>12.6} {:>12.6}", dense / LN_2, formula / LN_2);
    }

    println!("\nlarge-size entropy density (bits per variable) at q = 0 and q = 0.8:");
    for alpha in [0.5, 0.9, 1.2] {
        println!(
            "alpha {alpha}: {:.4} {:.4}",
            entropy_density_asymptotic(0.0, alpha) / LN_2,
            entropy_density_asymptotic(0.8, alpha) / LN_2
        );
    }
}

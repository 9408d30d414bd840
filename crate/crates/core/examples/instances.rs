//! Random 3-XORSAT instances: how the rank of the measured prefix falls
//! behind |M| as the measurement ratio grows.

use vitriq::ensemble::{generate_instance, InstanceSpec};
use vitriq::rng::{stream, Purpose};

fn main() {
    let size = 24;
    let samples = 200;
    let spec = InstanceSpec::new(size, 1.5, 0);
    let instances: Vec<_> = (0..samples)
        .map(|s| generate_instance(spec, &mut stream(1, Purpose::Instance, &[s])).unwrap())
        .collect();

    println!("{}", instances[0].to_text());
    println!("{:>6} {:>10} {:>12}", "alpha", "rank/|M|", "full rank");
    for rows in (4..=spec.rows()).step_by(4) {
        let mut ratio = 0.0;
        let mut full = 0;
        for inst in &instances {
            let r = inst.prefix(rows).unwrap().rank();
            ratio += r as f64 / rows as f64;
            full += (r == rows) as usize;
        }
        println!(
            "{:>6.3} {:>10.4} {:>12.3}",
            rows as f64 / size as f64,
            ratio / samples as f64,
            full as f64 / samples as f64
        );
    }
}

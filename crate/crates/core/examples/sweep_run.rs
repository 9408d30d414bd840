//! A small simulated-shot sweep written to a run directory, optionally with
//! noise: `cargo run --release --example sweep_run -- 0.002`.

use vitriq::simulator::NoiseModel;
use vitriq::sweep::{emit_outputs, run_sweep, SweepConfig};

fn main() {
    env_logger::init();
    let p2: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
    let cfg = SweepConfig {
        sizes: vec![8, 12],
        matrices: 40,
        size_overrides: vec![],
        shots: 200,
        noise: NoiseModel::new(p2, p2 * 5.0).unwrap(),
        seed: 42,
        ..Default::default()
    };
    let res = run_sweep(&cfg).unwrap();
    let dir = std::env::temp_dir().join(cfg.run_dir_name());
    for path in emit_outputs(&res, &dir).unwrap() {
        println!("wrote {}", path.display());
    }
    println!("{:>3} {:>6} {:>8} {:>10} {:>8}", "L", "alpha", "q", "pass", "cnot");
    for d in &res.diagnostics {
        let Some(p) = res.points.iter().find(|p| p.size == d.size && p.alpha == d.alpha) else {
            continue;
        };
        println!(
            "{:>3} {:>6.3} {:>8.4} {:>10.4} {:>8.1}",
            p.size, p.alpha, p.q_mean, d.pass_ratio, d.mean_cnot
        );
    }
    println!("{} tasks missing", res.missing.len());
}

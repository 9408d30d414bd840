//! Order parameter against measurement ratio for several sizes, from direct
//! null-space sampling. The rise sharpens as L grows.
//!
//! `cargo run --release --example transition_curve -- 400`

use vitriq::sweep::{run_sweep, Mode, SweepConfig};

fn main() {
    let matrices = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let cfg = SweepConfig {
        sizes: vec![8, 16, 24],
        matrices,
        size_overrides: vec![],
        mode: Mode::ClassicalExact,
        seed: 1,
        ..Default::default()
    };
    let res = run_sweep(&cfg).unwrap();
    for &size in &cfg.sizes {
        println!("L = {size}");
        for p in res.points.iter().filter(|p| p.size == size) {
            let bar = "#".repeat((p.q_mean * 50.0).round() as usize);
            println!("  {:.3} {:.4} ± {:.4} {bar}", p.alpha, p.q_mean, p.stderr);
        }
    }
}

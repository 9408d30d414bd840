//! Fast self-checks against independent oracles: brute-force enumeration,
//! the dense state vector, closed-form gate counts and a planted collapse.
//! Each suite runs in well under a second.

use std::time::Instant;

use rand::Rng;

use crate::analysis::{aggregate, count_ground_states, hamiltonian_energy, SpinConfig};
use crate::compiler::{
    cnot_bound, compile_naive, compile_prefix, global_cnot_bound, lower_to_cnot, naive_cnot_count,
};
use crate::ensemble::{generate_instance, InstanceSpec};
use crate::error::Result;
use crate::fss::{grid_search, Axis, ScalingGrid};
use crate::gf2::{BitMatrix, BitVector};
use crate::rng::seeded;
use crate::simulator::{dense_entropy_oracle, run_shots, NoiseModel};

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Suite = fn() -> Result<std::result::Result<String, String>>;

const SUITES: [(&str, Suite); 6] = [
    ("backfill-worked-example", backfill_worked_example),
    ("entropy-rank-identity", entropy_rank_identity),
    ("shots-satisfy-checks", shots_satisfy_checks),
    ("gate-counts", gate_counts),
    ("ground-state-enumeration", ground_state_enumeration),
    ("planted-collapse", planted_collapse),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs every suite, or only those whose name contains `filter`.
pub fn run_all(filter: Option<&str>) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .filter(|(n, _)| filter.is_none_or(|f| n.contains(f)))
        .map(|&(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f() {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, format!("error: {e}")),
            };
            SuiteOutcome {
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn instance(size: usize, alpha_max: f64, seed: u64) -> Result<BitMatrix> {
    Ok(generate_instance(InstanceSpec::new(size, alpha_max, seed), &mut seeded(seed))?.matrix)
}

fn backfill_worked_example() -> Result<std::result::Result<String, String>> {
    let b = BitMatrix::from_rows(
        6,
        &[
            [1, 0, 1, 0, 0, 1],
            [0, 1, 0, 1, 0, 1],
            [0, 1, 1, 1, 0, 0],
            [0, 1, 1, 0, 1, 0],
            [1, 1, 0, 0, 0, 1],
        ],
    );
    let expected = BitMatrix::from_rows(
        6,
        &[
            [1, 1, 1, 1, 1, 0],
            [0, 1, 1, 1, 1, 0],
            [0, 0, 1, 1, 1, 1],
            [0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 1, 0],
        ],
    );
    let got = b.backfill_optimize();
    Ok(if got == expected {
        Ok("5x6 matrix matches".into())
    } else {
        Err(format!("got\n{got}"))
    })
}

fn entropy_rank_identity() -> Result<std::result::Result<String, String>> {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for seed in 0..20 {
        let b = instance(6, 1.0, seed)?;
        let c = lower_to_cnot(&compile_naive(&b)?);
        let x = BitVector::from_u64_msb(seeded(seed).random_range(0..64), 6);
        let y = b.matvec(&x)?;
        let y_bits: Vec<bool> = y.iter().collect();
        for m in 0..=b.rows() {
            let dense = dense_entropy_oracle(&c, &y_bits[..m])?;
            let formula = (b.rank() as f64 - b.prefix(m)?.rank() as f64) * std::f64::consts::LN_2;
            worst = worst.max((dense - formula).abs());
            checks += 1;
        }
    }
    let detail = format!("{checks} prefixes, max deviation {worst:.2e}");
    Ok(if worst < 1e-9 { Ok(detail) } else { Err(detail) })
}

fn shots_satisfy_checks() -> Result<std::result::Result<String, String>> {
    let mut total = 0;
    let mut failed = 0;
    for seed in 0..20 {
        let b = instance(8, 1.25, seed)?;
        for m in [3, 6, 10] {
            let c = compile_prefix(&b.prefix(m)?)?;
            let shots = run_shots(&c, 100, &NoiseModel::NOISELESS, &mut seeded(seed ^ m as u64));
            total += shots.len();
            failed += shots.iter().filter(|s| !s.passed).count();
        }
    }
    let detail = format!("{failed} of {total} shots violate the checks");
    Ok(if failed == 0 { Ok(detail) } else { Err(detail) })
}

fn gate_counts() -> Result<std::result::Result<String, String>> {
    for seed in 0..200 {
        let size = 6 + (seed as usize % 10);
        let b = instance(size, 1.5, seed)?;
        let naive = lower_to_cnot(&compile_naive(&b)?).stats().n_cnot as u64;
        let expected = naive_cnot_count(b.rows() as u64, size as u64);
        if naive != expected {
            return Ok(Err(format!("seed {seed}: naive {naive} != {expected}")));
        }
        let opt = compile_prefix(&b)?.stats().n_cnot as u64;
        let rank = b.rank() as u64;
        if opt > cnot_bound(rank, size as u64) || opt > global_cnot_bound(size as u64) {
            return Ok(Err(format!("seed {seed}: optimized {opt} exceeds bound")));
        }
    }
    Ok(Ok("200 instances within bounds".into()))
}

fn ground_state_enumeration() -> Result<std::result::Result<String, String>> {
    for seed in 0..20 {
        let size = 6 + (seed as usize % 5);
        let b = instance(size, 1.2, seed)?;
        let y = BitVector::zeros(b.rows());
        let mut zero_energy = 0u128;
        for v in 0..(1u64 << size) {
            let x = BitVector::from_u64_msb(v, size);
            let energy = hamiltonian_energy(&b, &SpinConfig::from_bits(&x, &y))?;
            let satisfied = b.matvec(&x)?.is_zero();
            if (energy == 0) != satisfied {
                return Ok(Err(format!("seed {seed}: energy {energy} at x={x}")));
            }
            zero_energy += satisfied as u128;
        }
        if zero_energy != count_ground_states(&b) {
            return Ok(Err(format!("seed {seed}: {zero_energy} ground states counted")));
        }
    }
    Ok(Ok("20 instances enumerated".into()))
}

fn planted_collapse() -> Result<std::result::Result<String, String>> {
    let f = |t: f64| 0.5 * (1.0 + (1.2 * t).tanh());
    let mut points = Vec::new();
    for size in [8usize, 16, 32] {
        for m in 1..=(3 * size / 2) {
            let alpha = m as f64 / size as f64;
            let q = f((alpha - 0.918) * (size as f64).powf(1.0 / 2.5));
            let mut p = aggregate(&[q - 0.01, q + 0.01], alpha, size)?;
            p.q_mean = q;
            points.push(p);
        }
    }
    let grid = ScalingGrid {
        alpha_c: Axis { min: 0.85, max: 1.0, step: 0.005 },
        nu: Axis { min: 1.5, max: 4.0, step: 0.05 },
        ..Default::default()
    };
    let res = grid_search(&points, &grid)?;
    let detail = format!("alpha_c = {:.3}, nu = {:.2}", res.alpha_c_exp, res.nu_exp);
    let ok = (res.alpha_c_exp - 0.918).abs() <= 0.0101 && (res.nu_exp - 2.5).abs() <= 0.101;
    Ok(if ok { Ok(detail) } else { Err(detail) })
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_suites_pass() {
        for o in super::run_all(None) {
            assert!(o.passed, "{}: {}", o.name, o.detail);
        }
    }
}

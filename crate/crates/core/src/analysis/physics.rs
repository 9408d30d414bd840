use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Entanglement entropy (nats) between variables and parities once the
/// parity checks in `b_m` (rows in the row space of `b`) are measured:
/// `[rank(b) − rank(b_m)] ln 2`.
pub fn entropy_rank(b: &BitMatrix, b_m: &BitMatrix) -> f64 {
    debug_assert_eq!(b.cols(), b_m.cols());
    let (rb, rm) = (b.rank(), b_m.rank());
    debug_assert!(rm <= rb, "measured rows are not in the row space of b");
    (rb as f64 - rm as f64) * LN_2
}

/// Large-size entropy density in nats per variable as a function of the
/// order parameter:
/// `[(1 − q)(1 − ln(1 − q)) − α(1 − q³)] ln 2`, extended continuously at
/// `q = 1`.
pub fn entropy_density_asymptotic(q: f64, alpha: f64) -> f64 {
    let u = 1.0 - q;
    let entropic = if u <= 0.0 { 0.0 } else { u * (1.0 - u.ln()) };
    (entropic - alpha * (1.0 - q * q * q)) * LN_2
}

/// Spins `σ_i = (−1)^{x_i}` and couplings `J_a = (−1)^{y_a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfig {
    pub sigma: Vec<i8>,
    pub couplings: Vec<i8>,
}

impl SpinConfig {
    pub fn from_bits(x: &BitVector, y: &BitVector) -> Self {
        let sign = |b: bool| if b { -1 } else { 1 };
        Self {
            sigma: x.iter().map(sign).collect(),
            couplings: y.iter().map(sign).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma.iter().chain(&self.couplings).any(|&s| s != 1 && s != -1) {
            return Err(Error::Config("spin and coupling entries must be ±1".into()));
        }
        Ok(())
    }
}

/// `H = Σ_a (1 − J_a σ_{a1} σ_{a2} σ_{a3}) / 2`: the number of violated
/// three-spin interactions.
pub fn hamiltonian_energy(b: &BitMatrix, cfg: &SpinConfig) -> Result<u64> {
    cfg.validate()?;
    if cfg.sigma.len() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: b.cols(),
            found: cfg.sigma.len(),
        });
    }
    if cfg.couplings.len() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: b.rows(),
            found: cfg.couplings.len(),
        });
    }
    let mut energy = 0;
    for a in 0..b.rows() {
        let row = b.row(a);
        let weight = row.weight();
        if weight != 3 {
            return Err(Error::RowWeight { row: a, weight });
        }
        let product: i32 = row.ones().map(|i| cfg.sigma[i] as i32).product();
        if cfg.couplings[a] as i32 * product != 1 {
            energy += 1;
        }
    }
    Ok(energy)
}

/// `2^{L − rank(b)}` ground states (per satisfiable coupling vector).
///
/// Panics if the count does not fit in a `u128`.
pub fn count_ground_states(b: &BitMatrix) -> u128 {
    let free = b.cols() - b.rank();
    assert!(free < 128, "2^{free} ground states overflow u128");
    1u128 << free
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig_matrix() -> BitMatrix {
        BitMatrix::from_rows(
            6,
            &[
                [1, 0, 1, 0, 0, 1],
                [0, 1, 0, 1, 0, 1],
                [0, 1, 1, 1, 0, 0],
                [0, 1, 1, 0, 1, 0],
            ],
        )
    }

    #[test]
    fn entropy_rank_examples() {
        let b = fig_matrix();
        assert!((entropy_rank(&b, &b.prefix(0).unwrap()) - 4.0 * LN_2).abs() < 1e-15);
        assert_eq!(entropy_rank(&b, &b), 0.0);
    }

    #[test]
    fn asymptotic_density_limits() {
        for alpha in [0.0, 0.3, 0.9, 1.4] {
            assert!((entropy_density_asymptotic(0.0, alpha) - (1.0 - alpha) * LN_2).abs() < 1e-15);
            assert_eq!(entropy_density_asymptotic(1.0, alpha), 0.0);
        }
        assert!((entropy_density_asymptotic(0.0, 0.0) - LN_2).abs() < 1e-15);
        // Continuity near q = 1.
        assert!(entropy_density_asymptotic(1.0 - 1e-12, 1.0).abs() < 1e-9);
    }

    #[test]
    fn ground_state_has_zero_energy() {
        let b = fig_matrix();
        let x: BitVector = "110100".parse().unwrap();
        let y = b.matvec(&x).unwrap();
        let mut cfg = SpinConfig::from_bits(&x, &y);
        assert_eq!(hamiltonian_energy(&b, &cfg).unwrap(), 0);
        cfg.couplings[2] = -cfg.couplings[2];
        assert_eq!(hamiltonian_energy(&b, &cfg).unwrap(), 1);
        for j in cfg.couplings.iter_mut() {
            *j = -*j;
        }
        cfg.couplings[2] = -cfg.couplings[2];
        assert_eq!(hamiltonian_energy(&b, &cfg).unwrap(), 4);
    }

    #[test]
    fn energy_rejects_wrong_weight() {
        let b = BitMatrix::from_rows(4, &[[1, 1, 0, 0]]);
        let cfg = SpinConfig {
            sigma: vec![1; 4],
            couplings: vec![1],
        };
        assert!(matches!(hamiltonian_energy(&b, &cfg), Err(Error::RowWeight { row: 0, weight: 2 })));
    }

    #[test]
    fn ground_state_counts() {
        assert_eq!(count_ground_states(&BitMatrix::zeros(0, 10)), 1024);
        assert_eq!(count_ground_states(&BitMatrix::identity(7)), 1);
        assert_eq!(count_ground_states(&fig_matrix()), 1 << (6 - fig_matrix().rank()));
    }
}

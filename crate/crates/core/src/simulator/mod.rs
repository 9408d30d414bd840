//! Shot sampling for compiled circuits.
//!
//! Shots are exact stabilizer simulations from |0…0⟩ with Born-rule
//! outcomes. The optional noise model adds a two-qubit depolarizing channel
//! after every CNOT and independent readout flips, enough to exercise the
//! post-selection filter.

mod dense;
mod tableau;

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use dense::{dense_entropy_oracle, StateVector, MAX_DENSE_QUBITS};
pub use tableau::Tableau;

use crate::compiler::{CircuitIR, ClBit, Gate};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Determinism {
    Deterministic,
    Random,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Depolarizing probability applied to both qubits after each CNOT.
    pub p2: f64,
    /// Probability of flipping each recorded measurement bit.
    pub p_ro: f64,
}

impl NoiseModel {
    pub const NOISELESS: NoiseModel = NoiseModel { p2: 0.0, p_ro: 0.0 };

    pub fn new(p2: f64, p_ro: f64) -> Result<Self> {
        let m = Self { p2, p_ro };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p2", self.p2), ("p_ro", self.p_ro)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p2 == 0.0 && self.p_ro == 0.0
    }
}

/// One execution: variable bits `x`, parity bits `y`, and whether they
/// satisfy the compiled checks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShotRecord {
    pub x: BitVector,
    pub y: BitVector,
    pub passed: bool,
}

fn run_one<R: Rng + ?Sized>(c: &CircuitIR, noise: &NoiseModel, rng: &mut R) -> ShotRecord {
    let mut t = Tableau::new(c.n_qubits);
    let mut x = BitVector::zeros(c.n_vars);
    let mut y = BitVector::zeros(c.n_parity);
    for g in &c.gates {
        match *g {
            Gate::H(q) => t.h(q),
            Gate::Cnot { control, target } => {
                t.cnot(control, target);
                if noise.p2 > 0.0 && rng.random::<f64>() < noise.p2 {
                    // Uniform over the 15 non-identity two-qubit Paulis.
                    let k = rng.random_range(1..16u8);
                    t.pauli(control, k & 3);
                    t.pauli(target, k >> 2);
                }
            }
            Gate::Swap(a, b) => t.swap(a, b),
            Gate::Measure { qubit, clbit } => {
                let (mut bit, _) = t.measure(qubit, rng);
                if noise.p_ro > 0.0 && rng.random::<f64>() < noise.p_ro {
                    bit = !bit;
                }
                match clbit {
                    ClBit::Parity(k) => y.set(k, bit),
                    ClBit::Variable(j) => x.set(j, bit),
                }
            }
        }
    }
    let passed = c
        .checks
        .as_ref()
        .is_some_and(|b| b.matvec(&x).map(|bx| bx == y).unwrap_or(false));
    ShotRecord { x, y, passed }
}

/// Runs `n_shots` independent executions. `passed` is evaluated against the
/// circuit's recorded check matrix; circuits without one report `false` and
/// should go through [`filter_shots`].
pub fn run_shots<R: Rng + ?Sized>(
    c: &CircuitIR,
    n_shots: usize,
    noise: &NoiseModel,
    rng: &mut R,
) -> Vec<ShotRecord> {
    (0..n_shots).map(|_| run_one(c, noise, rng)).collect()
}

/// Keeps the shots with `b_mp · x = y`. Returns them with the pass ratio.
pub fn filter_shots(b_mp: &BitMatrix, shots: &[ShotRecord]) -> Result<(Vec<ShotRecord>, f64)> {
    if shots.is_empty() {
        return Err(Error::Empty("no shots to filter"));
    }
    let mut kept = Vec::with_capacity(shots.len());
    for s in shots {
        if s.y.len() != b_mp.rows() {
            return Err(Error::DimensionMismatch {
                expected: b_mp.rows(),
                found: s.y.len(),
            });
        }
        let ok = b_mp.matvec(&s.x)? == s.y;
        if ok {
            kept.push(ShotRecord {
                passed: true,
                ..s.clone()
            });
        }
    }
    let ratio = kept.len() as f64 / shots.len() as f64;
    Ok((kept, ratio))
}

/// Determinism of every measurement in program order. Whether an outcome is
/// fixed does not depend on earlier outcomes, so one pass with arbitrary
/// random outcomes suffices.
pub fn determinism_profile(c: &CircuitIR) -> Vec<(ClBit, Determinism)> {
    let mut rng = crate::rng::seeded(0);
    let mut t = Tableau::new(c.n_qubits);
    let mut out = Vec::new();
    for g in &c.gates {
        match *g {
            Gate::H(q) => t.h(q),
            Gate::Cnot { control, target } => t.cnot(control, target),
            Gate::Swap(a, b) => t.swap(a, b),
            Gate::Measure { qubit, clbit } => {
                let (_, d) = t.measure(qubit, &mut rng);
                out.push((clbit, d));
            }
        }
    }
    out
}

/// Whether the measurement of parity check `row` is already fixed by the
/// measurements before it.
pub fn measurement_determinism(c: &CircuitIR, row: usize) -> Result<Determinism> {
    determinism_profile(c)
        .into_iter()
        .find_map(|(b, d)| (b == ClBit::Parity(row)).then_some(d))
        .ok_or(Error::OutOfRange {
            what: "parity row",
            value: row,
            limit: c.n_parity,
        })
}

/// One line of a shot dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotRow {
    pub sample_id: u64,
    pub alpha: f64,
    pub shot_id: u64,
    pub x_bits: String,
    pub y_bits: String,
    pub passed: bool,
}

impl ShotRow {
    pub fn new(sample_id: u64, alpha: f64, shot_id: u64, shot: &ShotRecord) -> Self {
        Self {
            sample_id,
            alpha,
            shot_id,
            x_bits: shot.x.to_bit_string(),
            y_bits: shot.y.to_bit_string(),
            passed: shot.passed,
        }
    }
}

pub fn write_shots_csv(path: &Path, rows: &[ShotRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    if rows.is_empty() {
        w.write_record(["sample_id", "alpha", "shot_id", "x_bits", "y_bits", "passed"])
            .map_err(|e| Error::csv(path, e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_shots_csv(path: &Path) -> Result<Vec<ShotRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<ShotRow>, _>>()
        .map_err(|e| Error::csv(path, e))
}

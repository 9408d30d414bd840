//! Random 3-XORSAT instances and their measurement prefixes.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{parse_matrix_lines, BitMatrix, BitVector};

/// Variables per parity check.
pub const CHECK_WEIGHT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// Number of variables.
    pub size: usize,
    /// Largest measurement ratio the instance must support.
    pub alpha_max: f64,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(size: usize, alpha_max: f64, seed: u64) -> Self {
        Self {
            size,
            alpha_max,
            seed,
        }
    }

    /// `floor(size * alpha_max)`, with a small tolerance so that ratios such
    /// as 2/3 written in decimal still land on the intended integer.
    pub fn rows(&self) -> usize {
        rows_for(self.size, self.alpha_max)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_weight(CHECK_WEIGHT)
    }

    fn validate_weight(&self, weight: usize) -> Result<()> {
        if self.size < 4 {
            return Err(Error::Infeasible(format!(
                "need at least 4 variables, got {}",
                self.size
            )));
        }
        if !self.alpha_max.is_finite() || self.alpha_max <= 0.0 {
            return Err(Error::Infeasible(format!(
                "alpha_max must be positive, got {}",
                self.alpha_max
            )));
        }
        let distinct = binomial(self.size, weight);
        if (self.rows() as u128) > distinct {
            return Err(Error::Infeasible(format!(
                "{} distinct rows of weight {weight} requested but only {distinct} exist for {} variables",
                self.rows(),
                self.size
            )));
        }
        Ok(())
    }
}

pub(crate) fn rows_for(size: usize, alpha: f64) -> usize {
    (size as f64 * alpha + 1e-9).floor() as usize
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub matrix: BitMatrix,
    pub spec: InstanceSpec,
    pub rank: usize,
}

impl Instance {
    pub fn prefix(&self, rows: usize) -> Result<BitMatrix> {
        prefix_submatrix(self, rows)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.spec.size
    }

    /// Matrix text format preceded by a `# instance` line carrying the spec.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# instance size={} alpha_max={} seed={} rank={}",
            self.spec.size, self.spec.alpha_max, self.spec.seed, self.rank
        );
        s.push_str(&self.matrix.to_text());
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing instance header"))?;
        let fields = header
            .trim()
            .strip_prefix("# instance")
            .ok_or_else(|| Error::parse(1, "expected `# instance` header"))?;
        let mut size = None;
        let mut alpha_max = None;
        let mut seed = None;
        for kv in fields.split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("bad field {kv:?}")))?;
            let bad = |e: &dyn std::fmt::Display| Error::parse(1, format!("bad value for {k}: {e}"));
            match k {
                "size" => size = Some(v.parse::<usize>().map_err(|e| bad(&e))?),
                "alpha_max" => alpha_max = Some(v.parse::<f64>().map_err(|e| bad(&e))?),
                "seed" => seed = Some(v.parse::<u64>().map_err(|e| bad(&e))?),
                "rank" => {}
                _ => return Err(Error::parse(1, format!("unknown field {k:?}"))),
            }
        }
        let spec = InstanceSpec {
            size: size.ok_or_else(|| Error::parse(1, "missing size"))?,
            alpha_max: alpha_max.ok_or_else(|| Error::parse(1, "missing alpha_max"))?,
            seed: seed.ok_or_else(|| Error::parse(1, "missing seed"))?,
        };
        let matrix = parse_matrix_lines(lines)?;
        if matrix.cols() != spec.size {
            return Err(Error::DimensionMismatch {
                expected: spec.size,
                found: matrix.cols(),
            });
        }
        let rank = matrix.rank();
        Ok(Self { matrix, spec, rank })
    }
}

/// Draws `spec.rows()` distinct rows, each a uniform 3-subset of the
/// variables, rejecting repeats.
pub fn generate_instance<R: Rng + ?Sized>(spec: InstanceSpec, rng: &mut R) -> Result<Instance> {
    generate_with_weight(spec, CHECK_WEIGHT, rng)
}

/// Same as [`generate_instance`] with a caller-chosen row weight. Only weight
/// 3 is exercised by the rest of the crate.
pub fn generate_with_weight<R: Rng + ?Sized>(
    spec: InstanceSpec,
    weight: usize,
    rng: &mut R,
) -> Result<Instance> {
    spec.validate_weight(weight)?;
    if weight == 0 || weight > spec.size {
        return Err(Error::Infeasible(format!("row weight {weight} for {} variables", spec.size)));
    }
    let rows = spec.rows();
    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(rows);
    let mut out = Vec::with_capacity(rows);
    while out.len() < rows {
        let mut vars = rand::seq::index::sample(rng, spec.size, weight).into_vec();
        vars.sort_unstable();
        if seen.insert(vars.clone()) {
            let mut row = BitVector::zeros(spec.size);
            for v in vars {
                row.set(v, true);
            }
            out.push(row);
        }
    }
    let matrix = BitMatrix::from_bit_rows(spec.size, &out);
    let rank = matrix.rank();
    Ok(Instance { matrix, spec, rank })
}

pub fn prefix_submatrix(inst: &Instance, rows: usize) -> Result<BitMatrix> {
    inst.matrix.prefix(rows)
}

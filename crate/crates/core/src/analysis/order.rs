use std::collections::{HashMap, HashSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::simulator::ShotRecord;

/// Default number of solutions entering one order-parameter estimate.
pub const DEFAULT_CAP: usize = 24;

/// Distinct null-space vectors obtained by shifting observed solutions by
/// their parity vector's reference solution.
#[derive(Debug, Clone, Default)]
pub struct SolutionPool {
    members: Vec<BitVector>,
    seen: HashSet<BitVector>,
    /// Shot count per observed parity vector, in first-seen order.
    pub source_counts: Vec<(BitVector, usize)>,
}

impl SolutionPool {
    pub fn members(&self) -> &[BitVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn insert(&mut self, v: BitVector) {
        if self.seen.insert(v.clone()) {
            self.members.push(v);
        }
    }

    fn merge(&mut self, other: SolutionPool) {
        for v in other.members {
            self.insert(v);
        }
        self.source_counts.extend(other.source_counts);
    }
}

/// Groups shots by parity vector, preserving first-seen order.
fn group_by_parity(shots: &[ShotRecord]) -> Vec<(BitVector, Vec<&BitVector>)> {
    let mut index: HashMap<&BitVector, usize> = HashMap::new();
    let mut groups: Vec<(BitVector, Vec<&BitVector>)> = Vec::new();
    for s in shots {
        let k = *index.entry(&s.y).or_insert_with(|| {
            groups.push((s.y.clone(), Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push(&s.x);
    }
    groups
}

fn pool_group(b_mp: &BitMatrix, y: &BitVector, xs: &[&BitVector]) -> Result<SolutionPool> {
    let z = b_mp.min_integer_solution(y)?;
    let mut pool = SolutionPool::default();
    for &x in xs {
        let shifted = x.xor(&z);
        if !b_mp.matvec(&shifted)?.is_zero() {
            return Err(Error::Structure(format!(
                "shot x={x} does not satisfy the checks for y={y}"
            )));
        }
        pool.insert(shifted);
    }
    pool.source_counts.push((y.clone(), xs.len()));
    Ok(pool)
}

/// Maps every passing shot `(x, y)` to `x + z(y)`, where `z(y)` is the
/// smallest-integer solution of `b_mp z = y`, and pools the distinct images
/// across all parity vectors.
pub fn pool_solutions(b_mp: &BitMatrix, shots: &[ShotRecord]) -> Result<SolutionPool> {
    let mut pool = SolutionPool::default();
    for (y, xs) in group_by_parity(shots) {
        pool.merge(pool_group(b_mp, &y, &xs)?);
    }
    Ok(pool)
}

/// One pool per observed parity vector instead of a single union.
pub fn pool_per_parity(b_mp: &BitMatrix, shots: &[ShotRecord]) -> Result<Vec<SolutionPool>> {
    group_by_parity(shots)
        .into_iter()
        .map(|(y, xs)| pool_group(b_mp, &y, &xs))
        .collect()
}

/// `min(cap, |pool|)` distinct members, uniformly without replacement.
pub fn subsample<R: Rng + ?Sized>(
    pool: &SolutionPool,
    cap: usize,
    rng: &mut R,
) -> Result<Vec<BitVector>> {
    if pool.is_empty() {
        return Err(Error::Empty("solution pool"));
    }
    let k = cap.min(pool.len());
    Ok(rand::seq::index::sample(rng, pool.len(), k)
        .into_iter()
        .map(|i| pool.members[i].clone())
        .collect())
}

/// `q = (1/L) Σ_i ⟨(−1)^{x_i}⟩²` over the sample.
pub fn order_parameter(sample: &[BitVector], vars: usize) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Empty("order parameter sample"));
    }
    if vars == 0 {
        return Err(Error::Empty("zero variables"));
    }
    let mut ones = vec![0usize; vars];
    for v in sample {
        if v.len() != vars {
            return Err(Error::DimensionMismatch {
                expected: vars,
                found: v.len(),
            });
        }
        for i in v.ones() {
            ones[i] += 1;
        }
    }
    let n = sample.len() as f64;
    let total: f64 = ones
        .iter()
        .map(|&c| {
            let m = (n - 2.0 * c as f64) / n;
            m * m
        })
        .sum();
    Ok(total / vars as f64)
}

/// Every element of the span of `basis`, for small dimensions.
pub(crate) fn enumerate_span(basis: &[BitVector], vars: usize) -> Vec<BitVector> {
    assert!(basis.len() < 31, "span too large to enumerate");
    let mut out = Vec::with_capacity(1 << basis.len());
    out.push(BitVector::zeros(vars));
    for b in basis {
        let shifted: Vec<BitVector> = out.iter().map(|v| v.xor(b)).collect();
        out.extend(shifted);
    }
    out
}

/// Samples `min(cap, N_GS)` distinct solutions of `b_m x = 0` as random
/// combinations of a null-space basis (rejecting repeats) and returns their
/// order parameter.
pub fn classical_order_parameter<R: Rng + ?Sized>(b_m: &BitMatrix, cap: usize, rng: &mut R) -> f64 {
    let sample = classical_sample(b_m, cap, rng);
    order_parameter(&sample, b_m.cols()).expect("null space is never empty")
}

pub fn classical_sample<R: Rng + ?Sized>(b_m: &BitMatrix, cap: usize, rng: &mut R) -> Vec<BitVector> {
    assert!(cap >= 1, "cap must be positive");
    let vars = b_m.cols();
    let basis = b_m.null_space_basis();
    let dim = basis.len();
    // N_GS = 2^dim; when it does not exceed the cap the sample is the span.
    if dim < usize::BITS as usize - 1 && (1usize << dim) <= cap {
        return enumerate_span(&basis, vars);
    }
    let mut seen = HashSet::with_capacity(cap);
    let mut out = Vec::with_capacity(cap);
    while out.len() < cap {
        let mut v = BitVector::zeros(vars);
        for b in &basis {
            if rng.random::<bool>() {
                v.xor_assign(b);
            }
        }
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

/// Order parameter over the whole null space: the fraction of variables
/// that are zero in every solution.
pub fn exact_order_parameter(b_m: &BitMatrix) -> f64 {
    let vars = b_m.cols();
    let mut free = BitVector::zeros(vars);
    for b in b_m.null_space_basis() {
        for i in b.ones() {
            free.set(i, true);
        }
    }
    (vars - free.weight()) as f64 / vars as f64
}

//! Closed-form CNOT counts.

use crate::ensemble::CHECK_WEIGHT;

/// Entries on or right of the leading ones of a `p × q` echelon matrix whose
/// leading ones sit on the main diagonal: `p (q - (p - 1) / 2)`.
pub fn entries_right_of_diagonal(p: u64, q: u64) -> u64 {
    assert!(p <= q, "more rows than columns");
    p * q - p * p.saturating_sub(1) / 2
}

/// Worst case for the interleaved construction: one per row, everything else
/// a three-CNOT zero. Equals `ceil(3/2 · rank · (2L − rank + 1/3))`.
pub fn cnot_bound(rank: u64, vars: u64) -> u64 {
    assert!(rank <= vars, "rank exceeds variable count");
    let zeros = entries_right_of_diagonal(rank, vars) - rank;
    3 * zeros + 2 * rank
}

/// Maximum of [`cnot_bound`] over the rank: `L (3L + 1) / 2`.
pub fn global_cnot_bound(vars: u64) -> u64 {
    vars * (3 * vars + 1) / 2
}

/// Lowered CNOT count of the separate-register construction: every row has
/// `p` two-CNOT ones and `L − p` three-CNOT zeros.
pub fn naive_cnot_count(rows: u64, vars: u64) -> u64 {
    naive_cnot_count_with_weight(rows, vars, CHECK_WEIGHT as u64)
}

pub fn naive_cnot_count_with_weight(rows: u64, vars: u64, weight: u64) -> u64 {
    rows * (2 * weight + 3 * (vars - weight))
}

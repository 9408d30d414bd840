//! Parity-check matrix → Clifford circuit.
//!
//! [`compile_naive`] follows the separate-register construction, one gate
//! per matrix entry. [`compile_optimized`] takes a backfill-optimized echelon
//! matrix and interleaves parity and variable qubits so that entries left of
//! each leading one cost nothing. [`lower_to_cnot`] turns SWAPs into CNOTs
//! for counting, simulation and export.

mod bounds;
mod build;
mod ir;
mod lower;
mod qasm;

pub use bounds::{
    cnot_bound, entries_right_of_diagonal, global_cnot_bound, naive_cnot_count,
    naive_cnot_count_with_weight,
};
pub use build::{compile_naive, compile_optimized};
pub use ir::{gate_stats, CircuitIR, ClBit, Gate, GateStats, Occupant, Operands};
pub use lower::lower_to_cnot;
pub use qasm::{export_circuit, parse_circuit};

use crate::error::Result;
use crate::gf2::BitMatrix;

/// Backfill-optimizes `b_m`, compiles the interleaved circuit and lowers it.
pub fn compile_prefix(b_m: &BitMatrix) -> Result<CircuitIR> {
    Ok(lower_to_cnot(&compile_optimized(&b_m.backfill_optimize())?))
}

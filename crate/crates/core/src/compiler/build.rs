//! Lowering parity-check matrices onto a line of qubits.
//!
//! Both constructions move each parity qubit past variable qubits with
//! nearest-neighbour gates. A one in the matrix becomes a CNOT from the
//! variable into the parity qubit followed by a SWAP; a zero is a bare SWAP.

use super::ir::{CircuitIR, ClBit, Gate, Occupant};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Tracks where every logical qubit currently sits while gates are emitted.
struct Placement {
    occupant: Vec<Occupant>,
    var_pos: Vec<usize>,
    par_pos: Vec<usize>,
    hadamard_done: Vec<bool>,
    circuit: CircuitIR,
}

impl Placement {
    fn new(layout: Vec<Occupant>, n_vars: usize, n_parity: usize) -> Self {
        let mut var_pos = vec![0; n_vars];
        let mut par_pos = vec![0; n_parity];
        for (q, occ) in layout.iter().enumerate() {
            match *occ {
                Occupant::Variable(j) => var_pos[j] = q,
                Occupant::Parity(r) => par_pos[r] = q,
            }
        }
        let mut circuit = CircuitIR::new(layout.len(), n_vars, n_parity);
        circuit.layout = Some(layout.clone());
        Self {
            occupant: layout,
            var_pos,
            par_pos,
            hadamard_done: vec![false; n_vars],
            circuit,
        }
    }

    fn hadamard(&mut self, var: usize) {
        if !self.hadamard_done[var] {
            self.hadamard_done[var] = true;
            self.circuit.push(Gate::H(self.var_pos[var]));
        }
    }

    /// One matrix entry: parity `row` meets variable `var`, which must be
    /// its neighbour, and the two trade places.
    fn entry(&mut self, row: usize, var: usize, one: bool) {
        let p = self.par_pos[row];
        let v = self.var_pos[var];
        debug_assert_eq!(p.abs_diff(v), 1, "parity {row} is not adjacent to variable {var}");
        if one {
            self.hadamard(var);
            self.circuit.push(Gate::cnot(v, p));
        }
        self.circuit.push(Gate::Swap(v, p));
        self.occupant.swap(v, p);
        self.var_pos[var] = p;
        self.par_pos[row] = v;
    }

    fn measure_parity(&mut self, row: usize) {
        self.circuit.push(Gate::Measure {
            qubit: self.par_pos[row],
            clbit: ClBit::Parity(row),
        });
    }

    /// Hadamards for variables that never met a one, then the final
    /// variable readout.
    fn finish(mut self, checks: &BitMatrix) -> CircuitIR {
        for j in 0..self.var_pos.len() {
            self.hadamard(j);
        }
        for j in 0..self.var_pos.len() {
            self.circuit.push(Gate::Measure {
                qubit: self.var_pos[j],
                clbit: ClBit::Variable(j),
            });
        }
        self.circuit.checks = Some(checks.clone());
        self.circuit
    }
}

/// Separate registers: variables on qubits `0..L`, parity `r` on `L + r`.
/// Each parity qubit walks up past every variable (last column first) and
/// is measured where it stops. All variables get their H up front.
pub fn compile_naive(b_m: &BitMatrix) -> Result<CircuitIR> {
    if b_m.rows() == 0 {
        return Err(Error::Empty("matrix has no rows"));
    }
    let (rows, vars) = (b_m.rows(), b_m.cols());
    let layout: Vec<Occupant> = (0..vars)
        .map(Occupant::Variable)
        .chain((0..rows).map(Occupant::Parity))
        .collect();
    let mut pl = Placement::new(layout, vars, rows);
    for j in 0..vars {
        pl.hadamard(j);
    }
    for r in 0..rows {
        for j in (0..vars).rev() {
            pl.entry(r, j, b_m.get(r, j));
        }
        pl.measure_parity(r);
    }
    Ok(pl.finish(b_m))
}

/// Interleaved construction for an echelon matrix.
///
/// Parity qubits are stacked above the variables (row 0 nearest), and the
/// variables sit in reverse order. Parity `r` walks down past variables
/// `L-1, L-2, ..., c_r` where `c_r` is its leading-one column, and is
/// measured there, so no gates are spent on the zeros left of the leading
/// one. A variable receives its H just before its first one.
pub fn compile_optimized(b_mp: &BitMatrix) -> Result<CircuitIR> {
    let pivots = b_mp.echelon_pivots()?;
    let (rows, vars) = (b_mp.rows(), b_mp.cols());
    let layout: Vec<Occupant> = (0..rows)
        .rev()
        .map(Occupant::Parity)
        .chain((0..vars).rev().map(Occupant::Variable))
        .collect();
    let mut pl = Placement::new(layout, vars, rows);
    for (r, &lead) in pivots.iter().enumerate() {
        for j in (lead..vars).rev() {
            pl.entry(r, j, b_mp.get(r, j));
        }
        pl.measure_parity(r);
    }
    Ok(pl.finish(b_mp))
}

//! SWAP lowering with cancellation and the |0⟩-variable shortcut.

use super::ir::{CircuitIR, Gate, Occupant};

/// Per-qubit facts propagated through the circuit.
#[derive(Debug, Clone, Copy)]
struct QubitFacts {
    /// Provably |0⟩. Sound under-approximation: cleared by H or by a CNOT
    /// whose control is not provably |0⟩.
    zero: bool,
    /// Currently holds a variable's state.
    variable: bool,
}

/// Replaces every SWAP with CNOTs.
///
/// * A SWAP touching a variable still in |0⟩ becomes two CNOTs,
///   `CNOT(i, j) CNOT(j, i)` with `j` the |0⟩ variable.
/// * Otherwise it becomes three CNOTs, oriented so that the first one
///   matches a directly preceding CNOT on the same pair when there is one.
/// * Adjacent identical CNOTs are removed.
///
/// Without a layout no qubit is known to hold a variable, so only the
/// three-CNOT form is used.
pub fn lower_to_cnot(c: &CircuitIR) -> CircuitIR {
    let mut facts: Vec<QubitFacts> = (0..c.n_qubits)
        .map(|q| QubitFacts {
            zero: true,
            variable: matches!(
                c.layout.as_ref().map(|l| l[q]),
                Some(Occupant::Variable(_))
            ),
        })
        .collect();
    let mut out = Vec::with_capacity(c.gates.len() * 2);

    fn push_cnot(out: &mut Vec<Gate>, control: usize, target: usize) {
        let g = Gate::cnot(control, target);
        if out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }

    for g in &c.gates {
        match *g {
            Gate::H(q) => {
                facts[q].zero = false;
                out.push(*g);
            }
            Gate::Cnot { control, target } => {
                if !facts[control].zero {
                    facts[target].zero = false;
                }
                push_cnot(&mut out, control, target);
            }
            Gate::Swap(a, b) => {
                let zero_var = |q: usize| facts[q].zero && facts[q].variable;
                if zero_var(b) {
                    push_cnot(&mut out, a, b);
                    push_cnot(&mut out, b, a);
                } else if zero_var(a) {
                    push_cnot(&mut out, b, a);
                    push_cnot(&mut out, a, b);
                } else {
                    let (i, j) = match out.last() {
                        Some(&Gate::Cnot { control, target })
                            if (control, target) == (b, a) =>
                        {
                            (b, a)
                        }
                        _ => (a, b),
                    };
                    push_cnot(&mut out, i, j);
                    push_cnot(&mut out, j, i);
                    push_cnot(&mut out, i, j);
                }
                facts.swap(a, b);
            }
            Gate::Measure { .. } => out.push(*g),
        }
    }

    CircuitIR {
        gates: out,
        ..c.clone()
    }
}

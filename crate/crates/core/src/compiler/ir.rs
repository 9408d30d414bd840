use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Classical destination of a measurement: `y[row]` for parity checks,
/// `x[var]` for variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClBit {
    Parity(usize),
    Variable(usize),
}

/// Logical role of the state that starts on a physical qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Occupant {
    Variable(usize),
    Parity(usize),
}

impl fmt::Display for Occupant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Occupant::Variable(j) => write!(f, "v{j}"),
            Occupant::Parity(r) => write!(f, "p{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    Measure { qubit: usize, clbit: ClBit },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn qubits(&self) -> Operands {
        match *self {
            Gate::H(q) | Gate::Measure { qubit: q, .. } => Operands::One(q),
            Gate::Cnot { control, target } => Operands::Two(control, target),
            Gate::Swap(a, b) => Operands::Two(a, b),
        }
    }
}

/// One or two qubit operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operands {
    One(usize),
    Two(usize, usize),
}

impl Operands {
    pub fn contains(&self, q: usize) -> bool {
        match *self {
            Operands::One(a) => a == q,
            Operands::Two(a, b) => a == q || b == q,
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let (a, b) = match self {
            Operands::One(a) => (a, None),
            Operands::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }
}

/// A compiled circuit over `n_qubits` physical qubits in a line.
///
/// Classical bit `y[k]` holds the parity of row `k` of the compiled matrix and
/// `x[j]` holds variable `j`. `layout` records which logical state each
/// physical qubit starts with; it is `None` for circuits parsed from text
/// without a layout comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitIR {
    pub n_qubits: usize,
    pub n_vars: usize,
    pub n_parity: usize,
    pub gates: Vec<Gate>,
    pub layout: Option<Vec<Occupant>>,
    /// The parity-check matrix the circuit was compiled from, when known.
    pub checks: Option<BitMatrix>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateStats {
    pub n_cnot: usize,
    pub n_h: usize,
    pub n_measure: usize,
    pub n_swap: usize,
    pub n_qubits: usize,
}

impl CircuitIR {
    pub fn new(n_qubits: usize, n_vars: usize, n_parity: usize) -> Self {
        Self {
            n_qubits,
            n_vars,
            n_parity,
            gates: Vec::new(),
            layout: None,
            checks: None,
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn is_lowered(&self) -> bool {
        !self.gates.iter().any(|g| matches!(g, Gate::Swap(..)))
    }

    pub fn stats(&self) -> GateStats {
        gate_stats(self)
    }

    /// Checks operand ranges, distinct two-qubit operands, and that every
    /// classical bit is written exactly once.
    pub fn validate(&self) -> Result<()> {
        let mut parity_seen = vec![false; self.n_parity];
        let mut var_seen = vec![false; self.n_vars];
        for (i, g) in self.gates.iter().enumerate() {
            for q in g.qubits().iter() {
                if q >= self.n_qubits {
                    return Err(Error::OutOfRange {
                        what: "qubit index",
                        value: q,
                        limit: self.n_qubits,
                    });
                }
            }
            if let Operands::Two(a, b) = g.qubits() {
                if a == b {
                    return Err(Error::Structure(format!("gate {i} acts twice on qubit {a}")));
                }
            }
            if let Gate::Measure { clbit, .. } = *g {
                let (seen, idx, what) = match clbit {
                    ClBit::Parity(k) => (&mut parity_seen, k, "parity bit"),
                    ClBit::Variable(j) => (&mut var_seen, j, "variable bit"),
                };
                let limit = seen.len();
                let slot = seen.get_mut(idx).ok_or(Error::OutOfRange {
                    what,
                    value: idx,
                    limit,
                })?;
                if *slot {
                    return Err(Error::Structure(format!("{what} {idx} measured twice")));
                }
                *slot = true;
            }
        }
        if let Some(k) = parity_seen.iter().position(|s| !s) {
            return Err(Error::Structure(format!("parity bit {k} never measured")));
        }
        if let Some(j) = var_seen.iter().position(|s| !s) {
            return Err(Error::Structure(format!("variable bit {j} never measured")));
        }
        Ok(())
    }

    /// For circuits that still carry SWAPs and a layout: every variable gets
    /// exactly one H, and it comes before the variable's first CNOT.
    pub fn check_hadamards(&self) -> Result<()> {
        let layout = self
            .layout
            .as_ref()
            .ok_or_else(|| Error::Structure("no layout recorded".into()))?;
        let mut occ = layout.clone();
        let mut h_count = vec![0usize; self.n_vars];
        for (i, g) in self.gates.iter().enumerate() {
            match *g {
                Gate::H(q) => match occ[q] {
                    Occupant::Variable(j) => h_count[j] += 1,
                    Occupant::Parity(r) => {
                        return Err(Error::Structure(format!("gate {i}: H on parity qubit {r}")))
                    }
                },
                Gate::Cnot { control, target } => {
                    for q in [control, target] {
                        if let Occupant::Variable(j) = occ[q] {
                            if h_count[j] == 0 {
                                return Err(Error::Structure(format!(
                                    "gate {i}: variable {j} entangled before its H"
                                )));
                            }
                        }
                    }
                }
                Gate::Swap(a, b) => occ.swap(a, b),
                Gate::Measure { .. } => {}
            }
        }
        if let Some(j) = h_count.iter().position(|&c| c != 1) {
            return Err(Error::Structure(format!(
                "variable {j} received {} Hadamards",
                h_count[j]
            )));
        }
        Ok(())
    }
}

pub fn gate_stats(c: &CircuitIR) -> GateStats {
    let mut s = GateStats {
        n_qubits: c.n_qubits,
        ..GateStats::default()
    };
    for g in &c.gates {
        match g {
            Gate::H(_) => s.n_h += 1,
            Gate::Cnot { .. } => s.n_cnot += 1,
            Gate::Swap(..) => s.n_swap += 1,
            Gate::Measure { .. } => s.n_measure += 1,
        }
    }
    s
}

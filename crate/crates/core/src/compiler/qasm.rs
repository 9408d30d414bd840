//! OpenQASM 2.0 export and a parser for the subset we emit.
//!
//! Output layout:
//!
//! ```text
//! OPENQASM 2.0;
//! include "qelib1.inc";
//! // layout p1 p0 v5 v4 ...      (only when the circuit records one)
//! qreg q[N];
//! creg y[P];                     (omitted when P = 0)
//! creg x[L];                     (omitted when L = 0)
//! h q[0];
//! cx q[0],q[1];
//! measure q[0] -> x[0];
//! ```

use std::fmt::Write as _;

use super::ir::{CircuitIR, ClBit, Gate, Occupant};
use crate::error::{Error, Result};

const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
const LAYOUT_PREFIX: &str = "// layout";

pub fn export_circuit(c: &CircuitIR) -> Result<String> {
    let mut s = String::from(HEADER);
    if let Some(layout) = &c.layout {
        s.push_str(LAYOUT_PREFIX);
        for occ in layout {
            let _ = write!(s, " {occ}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "qreg q[{}];", c.n_qubits);
    if c.n_parity > 0 {
        let _ = writeln!(s, "creg y[{}];", c.n_parity);
    }
    if c.n_vars > 0 {
        let _ = writeln!(s, "creg x[{}];", c.n_vars);
    }
    for (i, g) in c.gates.iter().enumerate() {
        match *g {
            Gate::H(q) => writeln!(s, "h q[{q}];"),
            Gate::Cnot { control, target } => writeln!(s, "cx q[{control}],q[{target}];"),
            Gate::Swap(..) => return Err(Error::UnloweredGate(i)),
            Gate::Measure { qubit, clbit } => match clbit {
                ClBit::Parity(k) => writeln!(s, "measure q[{qubit}] -> y[{k}];"),
                ClBit::Variable(j) => writeln!(s, "measure q[{qubit}] -> x[{j}];"),
            },
        }
        .expect("writing to a String cannot fail");
    }
    Ok(s)
}

/// Parses text produced by [`export_circuit`]. Also accepts `swap`, other
/// `//` comments and blank lines. The compiled-from matrix is not recoverable
/// and is left unset.
pub fn parse_circuit(text: &str) -> Result<CircuitIR> {
    let mut n_qubits = None;
    let mut n_parity = 0;
    let mut n_vars = 0;
    let mut layout = None;
    let mut gates = Vec::new();
    let mut saw_version = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(LAYOUT_PREFIX) {
            layout = Some(parse_layout(rest, line_no)?);
            continue;
        }
        if line.starts_with("//") {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| Error::parse(line_no, "missing `;`"))?
            .trim();
        let (head, args) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
        let args = args.trim();
        match head {
            "OPENQASM" => {
                if args != "2.0" {
                    return Err(Error::parse(line_no, format!("unsupported version {args}")));
                }
                saw_version = true;
            }
            "include" => {}
            "qreg" => {
                let (name, size) = parse_indexed(args, line_no)?;
                if name != "q" || n_qubits.is_some() {
                    return Err(Error::parse(line_no, "expected a single register `q`"));
                }
                n_qubits = Some(size);
            }
            "creg" => match parse_indexed(args, line_no)? {
                ("y", size) => n_parity = size,
                ("x", size) => n_vars = size,
                (other, _) => {
                    return Err(Error::parse(line_no, format!("unknown classical register {other}")))
                }
            },
            "h" => gates.push(Gate::H(parse_qubit(args, line_no)?)),
            "cx" | "swap" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::parse(line_no, "expected two operands"))?;
                let a = parse_qubit(a.trim(), line_no)?;
                let b = parse_qubit(b.trim(), line_no)?;
                gates.push(if head == "cx" {
                    Gate::cnot(a, b)
                } else {
                    Gate::Swap(a, b)
                });
            }
            "measure" => {
                let (q, c) = args
                    .split_once("->")
                    .ok_or_else(|| Error::parse(line_no, "expected `->`"))?;
                let qubit = parse_qubit(q.trim(), line_no)?;
                let clbit = match parse_indexed(c.trim(), line_no)? {
                    ("y", k) => ClBit::Parity(k),
                    ("x", j) => ClBit::Variable(j),
                    (other, _) => {
                        return Err(Error::parse(line_no, format!("unknown classical register {other}")))
                    }
                };
                gates.push(Gate::Measure { qubit, clbit });
            }
            other => return Err(Error::parse(line_no, format!("unsupported statement {other:?}"))),
        }
    }
    if !saw_version {
        return Err(Error::parse(1, "missing OPENQASM header"));
    }
    let n_qubits = n_qubits.ok_or_else(|| Error::parse(1, "missing qreg declaration"))?;
    if let Some(l) = &layout {
        if l.len() != n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: l.len(),
            });
        }
    }
    let c = CircuitIR {
        n_qubits,
        n_vars,
        n_parity,
        gates,
        layout,
        checks: None,
    };
    c.validate()?;
    Ok(c)
}

fn parse_layout(rest: &str, line_no: usize) -> Result<Vec<Occupant>> {
    rest.split_whitespace()
        .map(|tok| {
            let (kind, idx) = tok.split_at(1);
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad layout entry {tok:?}")))?;
            match kind {
                "v" => Ok(Occupant::Variable(idx)),
                "p" => Ok(Occupant::Parity(idx)),
                _ => Err(Error::parse(line_no, format!("bad layout entry {tok:?}"))),
            }
        })
        .collect()
}

fn parse_indexed(s: &str, line_no: usize) -> Result<(&str, usize)> {
    let open = s
        .find('[')
        .ok_or_else(|| Error::parse(line_no, format!("expected name[index], got {s:?}")))?;
    let close = s
        .strip_suffix(']')
        .ok_or_else(|| Error::parse(line_no, format!("expected name[index], got {s:?}")))?;
    let idx = close[open + 1..]
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad index in {s:?}")))?;
    Ok((&s[..open], idx))
}

fn parse_qubit(s: &str, line_no: usize) -> Result<usize> {
    match parse_indexed(s, line_no)? {
        ("q", i) => Ok(i),
        (other, _) => Err(Error::parse(line_no, format!("unknown quantum register {other}"))),
    }
}

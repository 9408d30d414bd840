//! Dense state vector for small circuits, used as an independent check on
//! the tableau and on the rank formula for the entanglement entropy.
//!
//! Only H, CNOT, SWAP and Paulis appear in compiled circuits, so amplitudes
//! stay real.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::compiler::{CircuitIR, ClBit, Gate};
use crate::error::{Error, Result};

pub const MAX_DENSE_QUBITS: usize = 20;

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<f64>,
}

impl StateVector {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::SizeLimit {
                limit: MAX_DENSE_QUBITS,
                found: n,
            });
        }
        let mut amps = vec![0.0; 1 << n];
        amps[0] = 1.0;
        Ok(Self { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn h(&mut self, q: usize) {
        let m = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a, b) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = s * (a + b);
                self.amps[i | m] = s * (a - b);
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let (mc, mt) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, (i & !ma) | mb);
            }
        }
    }

    pub fn x(&mut self, q: usize) {
        let m = 1usize << q;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                self.amps.swap(i, i | m);
            }
        }
    }

    pub fn z(&mut self, q: usize) {
        let m = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *a = -*a;
            }
        }
    }

    pub fn prob_one(&self, q: usize) -> f64 {
        let m = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a * a)
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes. Returns the
    /// probability of that outcome before projection.
    pub fn collapse(&mut self, q: usize, outcome: bool) -> Result<f64> {
        let m = 1usize << q;
        let mut p = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & m != 0) == outcome {
                p += *a * *a;
            } else {
                *a = 0.0;
            }
        }
        if p < 1e-12 {
            return Err(Error::ImpossibleOutcome);
        }
        let norm = p.sqrt();
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(p)
    }

    pub fn apply(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => self.h(q),
            Gate::Cnot { control, target } => self.cnot(control, target),
            Gate::Swap(a, b) => self.swap(a, b),
            Gate::Measure { .. } => {}
        }
    }

    /// Von Neumann entropy (nats) between `part` and the remaining qubits.
    pub fn entanglement_entropy(&self, part: &[usize]) -> f64 {
        let in_part: Vec<bool> = (0..self.n).map(|q| part.contains(&q)).collect();
        let rest: Vec<usize> = (0..self.n).filter(|&q| !in_part[q]).collect();
        // Reduce onto the smaller side.
        let (a, b) = if part.len() <= rest.len() {
            (part.to_vec(), rest)
        } else {
            (rest, part.to_vec())
        };
        let (da, db) = (1usize << a.len(), 1usize << b.len());
        let mut coeffs = DMatrix::<f64>::zeros(da, db);
        for (i, &amp) in self.amps.iter().enumerate() {
            if amp == 0.0 {
                continue;
            }
            let ia = a
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
            let ib = b
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> q) & 1) << k));
            coeffs[(ia, ib)] = amp;
        }
        let rho = &coeffs * coeffs.transpose();
        let eig = SymmetricEigen::new(rho);
        eig.eigenvalues
            .iter()
            .filter(|&&l| l > 1e-13)
            .map(|&l| -l * l.ln())
            .sum::<f64>()
            .max(0.0)
    }
}

/// Physical qubits read into `y[k]` and `x[j]`, from the measurement
/// instructions. Errors if a measured qubit is acted on afterwards, since the
/// oracle defers all measurements to the end.
fn register_qubits(c: &CircuitIR) -> Result<(Vec<usize>, Vec<usize>)> {
    c.validate()?;
    let mut parity = vec![0; c.n_parity];
    let mut vars = vec![0; c.n_vars];
    let mut measured = vec![false; c.n_qubits];
    for (i, g) in c.gates.iter().enumerate() {
        for q in g.qubits().iter() {
            if measured[q] {
                return Err(Error::Structure(format!(
                    "gate {i} acts on qubit {q} after it was measured"
                )));
            }
        }
        if let Gate::Measure { qubit, clbit } = *g {
            measured[qubit] = true;
            match clbit {
                ClBit::Parity(k) => parity[k] = qubit,
                ClBit::Variable(j) => vars[j] = qubit,
            }
        }
    }
    Ok((parity, vars))
}

/// Entanglement entropy (nats) between the variable and parity registers
/// after the first `measured_prefix.len()` parity checks were observed with
/// the given outcomes.
pub fn dense_entropy_oracle(c: &CircuitIR, measured_prefix: &[bool]) -> Result<f64> {
    if c.n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::SizeLimit {
            limit: MAX_DENSE_QUBITS,
            found: c.n_qubits,
        });
    }
    if measured_prefix.len() > c.n_parity {
        return Err(Error::OutOfRange {
            what: "measured prefix length",
            value: measured_prefix.len(),
            limit: c.n_parity,
        });
    }
    let (parity, vars) = register_qubits(c)?;
    let mut psi = StateVector::new(c.n_qubits)?;
    for g in &c.gates {
        psi.apply(g);
    }
    for (k, &y) in measured_prefix.iter().enumerate() {
        psi.collapse(parity[k], y)?;
    }
    Ok(psi.entanglement_entropy(&vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_entropy_is_ln2() {
        let mut s = StateVector::new(2).unwrap();
        s.h(0);
        s.cnot(0, 1);
        assert!((s.entanglement_entropy(&[0]) - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((s.prob_one(1) - 0.5).abs() < 1e-12);
        s.collapse(0, true).unwrap();
        assert!(s.entanglement_entropy(&[0]).abs() < 1e-12);
        assert!((s.prob_one(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_and_paulis() {
        let mut s = StateVector::new(2).unwrap();
        s.x(0);
        s.swap(0, 1);
        assert_eq!(s.prob_one(1), 1.0);
        assert_eq!(s.prob_one(0), 0.0);
        s.z(1);
        assert_eq!(s.amplitudes()[2], -1.0);
        assert!(s.collapse(1, false).is_err());
    }

    #[test]
    fn size_limit() {
        assert!(StateVector::new(21).is_err());
    }
}

//! Stabilizer tableau with qubit-major bit slicing.
//!
//! The tableau holds `2n` Pauli rows: destabilizers `0..n` and stabilizers
//! `n..2n`. Instead of storing rows, every qubit owns an X column and a Z
//! column, each a bitset over the rows. Gates then touch two columns with
//! word-wide operations, and the row products needed for a random
//! measurement are done for all affected rows at once, with the phase of each
//! product carried in a two-bit counter per row.

use rand::Rng;

use super::Determinism;

#[derive(Clone, Debug)]
pub struct Tableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<u64>,
}

#[inline]
fn bit(col: &[u64], row: usize) -> bool {
    (col[row / 64] >> (row % 64)) & 1 == 1
}

#[inline]
fn set_bit(col: &mut [u64], row: usize, v: bool) {
    let m = 1u64 << (row % 64);
    if v {
        col[row / 64] |= m;
    } else {
        col[row / 64] &= !m;
    }
}

/// Phase exponent contribution `g` of multiplying Pauli (x1, z1) into
/// Pauli (x2, z2): the i^g in (x1,z1)·(x2,z2).
#[inline]
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl Tableau {
    /// |0…0⟩: destabilizer `i` is `X_i`, stabilizer `n + i` is `Z_i`.
    pub fn new(n: usize) -> Self {
        let words = (2 * n).div_ceil(64).max(1);
        let mut t = Self {
            n,
            words,
            xs: vec![0; n * words],
            zs: vec![0; n * words],
            signs: vec![0; words],
        };
        for q in 0..n {
            set_bit(t.x_col_mut(q), q, true);
            set_bit(t.z_col_mut(q), n + q, true);
        }
        t
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn x_col(&self, q: usize) -> &[u64] {
        &self.xs[q * self.words..(q + 1) * self.words]
    }

    #[inline]
    fn z_col(&self, q: usize) -> &[u64] {
        &self.zs[q * self.words..(q + 1) * self.words]
    }

    #[inline]
    fn x_col_mut(&mut self, q: usize) -> &mut [u64] {
        &mut self.xs[q * self.words..(q + 1) * self.words]
    }

    #[inline]
    fn z_col_mut(&mut self, q: usize) -> &mut [u64] {
        &mut self.zs[q * self.words..(q + 1) * self.words]
    }

    pub fn h(&mut self, q: usize) {
        let w = self.words;
        for k in 0..w {
            let (x, z) = (self.xs[q * w + k], self.zs[q * w + k]);
            self.signs[k] ^= x & z;
            self.xs[q * w + k] = z;
            self.zs[q * w + k] = x;
        }
    }

    pub fn s(&mut self, q: usize) {
        let w = self.words;
        for k in 0..w {
            let (x, z) = (self.xs[q * w + k], self.zs[q * w + k]);
            self.signs[k] ^= x & z;
            self.zs[q * w + k] = z ^ x;
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        assert_ne!(c, t, "CNOT needs distinct qubits");
        let w = self.words;
        for k in 0..w {
            let (xc, zc) = (self.xs[c * w + k], self.zs[c * w + k]);
            let (xt, zt) = (self.xs[t * w + k], self.zs[t * w + k]);
            self.signs[k] ^= xc & zt & !(xt ^ zc);
            self.xs[t * w + k] = xt ^ xc;
            self.zs[c * w + k] = zc ^ zt;
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for k in 0..w {
            self.xs.swap(a * w + k, b * w + k);
            self.zs.swap(a * w + k, b * w + k);
        }
    }

    pub fn x(&mut self, q: usize) {
        let w = self.words;
        for k in 0..w {
            self.signs[k] ^= self.zs[q * w + k];
        }
    }

    pub fn z(&mut self, q: usize) {
        let w = self.words;
        for k in 0..w {
            self.signs[k] ^= self.xs[q * w + k];
        }
    }

    pub fn y(&mut self, q: usize) {
        let w = self.words;
        for k in 0..w {
            self.signs[k] ^= self.xs[q * w + k] ^ self.zs[q * w + k];
        }
    }

    /// Pauli by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
    pub fn pauli(&mut self, q: usize, which: u8) {
        match which & 3 {
            0 => {}
            1 => self.x(q),
            2 => self.y(q),
            _ => self.z(q),
        }
    }

    /// Mask of stabilizer rows `n..2n` within word `k`.
    #[inline]
    fn stab_mask(&self, k: usize) -> u64 {
        let lo = k * 64;
        let hi = lo + 64;
        let (a, b) = (self.n.max(lo), (2 * self.n).min(hi));
        if a >= b {
            return 0;
        }
        let width = b - a;
        let ones = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        ones << (a - lo)
    }

    fn first_stabilizer_with_x(&self, q: usize) -> Option<usize> {
        let col = self.x_col(q);
        (0..self.words).find_map(|k| {
            let m = col[k] & self.stab_mask(k);
            (m != 0).then(|| k * 64 + m.trailing_zeros() as usize)
        })
    }

    /// Whether a Z measurement of `q` has a fixed outcome.
    pub fn determinism(&self, q: usize) -> Determinism {
        if self.first_stabilizer_with_x(q).is_some() {
            Determinism::Random
        } else {
            Determinism::Deterministic
        }
    }

    /// Measures Z on `q`. The RNG is only consulted for random outcomes.
    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> (bool, Determinism) {
        match self.first_stabilizer_with_x(q) {
            Some(p) => {
                let outcome = rng.random::<bool>();
                self.collapse(q, p, outcome);
                (outcome, Determinism::Random)
            }
            None => (self.deterministic_outcome(q), Determinism::Deterministic),
        }
    }

    /// Measures with a chosen outcome for the random case. Returns `None`
    /// when the outcome is deterministic and differs from `outcome`.
    pub fn measure_forced(&mut self, q: usize, outcome: bool) -> Option<Determinism> {
        match self.first_stabilizer_with_x(q) {
            Some(p) => {
                self.collapse(q, p, outcome);
                Some(Determinism::Random)
            }
            None => (self.deterministic_outcome(q) == outcome).then_some(Determinism::Deterministic),
        }
    }

    /// Random-outcome update: every other row anticommuting with Z_q is
    /// multiplied by stabilizer `p`, the destabilizer partner of `p` takes
    /// the old row `p`, and row `p` becomes ±Z_q.
    fn collapse(&mut self, q: usize, p: usize, outcome: bool) {
        let w = self.words;
        let mut targets = self.x_col(q).to_vec();
        set_bit(&mut targets, p, false);

        let mut lo = vec![0u64; w];
        let mut hi = vec![0u64; w];
        for j in 0..self.n {
            let sx = bit(self.x_col(j), p);
            let sz = bit(self.z_col(j), p);
            if !sx && !sz {
                continue;
            }
            for k in 0..w {
                let t = targets[k];
                if t == 0 {
                    continue;
                }
                let x = self.xs[j * w + k];
                let z = self.zs[j * w + k];
                let (plus, minus) = match (sx, sz) {
                    (true, false) => (x & z, !x & z),
                    (true, true) => (!x & z, x & !z),
                    _ => (x & !z, x & z),
                };
                let (plus, minus) = (plus & t, minus & t);
                let carry = lo[k] & plus;
                lo[k] ^= plus;
                hi[k] ^= carry;
                let borrow = !lo[k] & minus;
                lo[k] ^= minus;
                hi[k] ^= borrow;
                if sx {
                    self.xs[j * w + k] ^= t;
                }
                if sz {
                    self.zs[j * w + k] ^= t;
                }
            }
        }
        let sp = bit(&self.signs, p);
        for k in 0..w {
            let t = targets[k];
            let src = if sp { t } else { 0 };
            self.signs[k] ^= (hi[k] & t) ^ src;
        }

        let d = p - self.n;
        for j in 0..self.n {
            let xb = bit(self.x_col(j), p);
            let zb = bit(self.z_col(j), p);
            set_bit(self.x_col_mut(j), d, xb);
            set_bit(self.z_col_mut(j), d, zb);
            set_bit(self.x_col_mut(j), p, false);
            set_bit(self.z_col_mut(j), p, j == q);
        }
        set_bit(&mut self.signs, d, sp);
        set_bit(&mut self.signs, p, outcome);
    }

    /// Sign of the product of stabilizers paired with destabilizers that
    /// anticommute with Z_q.
    fn deterministic_outcome(&self, q: usize) -> bool {
        let n = self.n;
        let mut acc_x = vec![false; n];
        let mut acc_z = vec![false; n];
        let mut phase: i32 = 0;
        let col = self.x_col(q);
        for i in 0..n {
            if !bit(col, i) {
                continue;
            }
            let row = n + i;
            phase += 2 * bit(&self.signs, row) as i32;
            for j in 0..n {
                let sx = bit(self.x_col(j), row);
                let sz = bit(self.z_col(j), row);
                phase += g(sx, sz, acc_x[j], acc_z[j]);
                acc_x[j] ^= sx;
                acc_z[j] ^= sz;
            }
        }
        phase.rem_euclid(4) == 2
    }

    /// Stabilizer generators as strings like `+XZ_` (for debugging and tests).
    pub fn stabilizers(&self) -> Vec<String> {
        (self.n..2 * self.n)
            .map(|row| {
                let mut s = String::with_capacity(self.n + 1);
                s.push(if bit(&self.signs, row) { '-' } else { '+' });
                for j in 0..self.n {
                    s.push(match (bit(self.x_col(j), row), bit(self.z_col(j), row)) {
                        (false, false) => '_',
                        (true, false) => 'X',
                        (true, true) => 'Y',
                        (false, true) => 'Z',
                    });
                }
                s
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn fresh_state_measures_zero() {
        let mut t = Tableau::new(3);
        let mut rng = seeded(0);
        for q in 0..3 {
            assert_eq!(t.measure(q, &mut rng), (false, Determinism::Deterministic));
        }
    }

    #[test]
    fn x_flips_outcome() {
        let mut t = Tableau::new(2);
        t.x(1);
        let mut rng = seeded(0);
        assert!(t.measure(1, &mut rng).0);
        assert!(!t.measure(0, &mut rng).0);
    }

    #[test]
    fn bell_pair_correlates() {
        let mut rng = seeded(42);
        for _ in 0..50 {
            let mut t = Tableau::new(2);
            t.h(0);
            t.cnot(0, 1);
            let (a, da) = t.measure(0, &mut rng);
            let (b, db) = t.measure(1, &mut rng);
            assert_eq!(da, Determinism::Random);
            assert_eq!(db, Determinism::Deterministic);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn ghz_parity_is_deterministic() {
        // Parity of a 3-qubit GHZ state computed onto an ancilla.
        let mut rng = seeded(9);
        for _ in 0..30 {
            let mut t = Tableau::new(4);
            t.h(0);
            t.cnot(0, 1);
            t.cnot(1, 2);
            t.cnot(0, 3);
            t.cnot(1, 3);
            assert_eq!(t.determinism(3), Determinism::Deterministic);
            assert!(!t.measure(3, &mut rng).0);
        }
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let mut t = Tableau::new(1);
        t.h(0);
        t.h(0);
        assert_eq!(t.stabilizers(), vec!["+Z"]);
        t.h(0);
        t.z(0);
        assert_eq!(t.stabilizers(), vec!["-X"]);
    }

    #[test]
    fn swap_moves_state() {
        let mut t = Tableau::new(2);
        t.x(0);
        t.swap(0, 1);
        let mut rng = seeded(1);
        assert!(!t.measure(0, &mut rng).0);
        assert!(t.measure(1, &mut rng).0);
    }

    #[test]
    fn many_qubits_cross_word_boundary() {
        // 40 qubits → 80 rows, two words per column.
        let n = 40;
        let mut rng = seeded(5);
        let mut t = Tableau::new(n);
        t.h(0);
        for q in 1..n {
            t.cnot(q - 1, q);
        }
        let (first, d) = t.measure(n - 1, &mut rng);
        assert_eq!(d, Determinism::Random);
        for q in 0..n - 1 {
            assert_eq!(t.measure(q, &mut rng), (first, Determinism::Deterministic));
        }
    }

    #[test]
    fn forced_measurement_respects_determinism() {
        let mut t = Tableau::new(2);
        t.h(0);
        t.cnot(0, 1);
        assert_eq!(t.measure_forced(0, true), Some(Determinism::Random));
        assert_eq!(t.measure_forced(1, false), None);
        assert_eq!(t.measure_forced(1, true), Some(Determinism::Deterministic));
    }

    #[test]
    fn y_sign_via_s_gate() {
        // S H |0> = |+i>, stabilized by +Y.
        let mut t = Tableau::new(1);
        t.h(0);
        t.s(0);
        assert_eq!(t.stabilizers(), vec!["+Y"]);
    }
}

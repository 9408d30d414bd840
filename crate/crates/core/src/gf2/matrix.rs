use std::fmt;
use std::str::FromStr;

use super::vector::{words_for, BitVector, WORD_BITS};
use crate::error::{Error, Result};

/// Row-major packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows given as 0/1 slices. All rows must share a
    /// length; `cols` is needed for the zero-row case.
    pub fn from_rows<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_bit_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn leading_one(&self, r: usize) -> Option<usize> {
        self.row_words(r)
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// row[dst] ^= row[src], touching words from `from_word` on.
    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize, from_word: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (d0, s0) = (dst * s, src * s);
        for k in from_word..s {
            let v = self.data[s0 + k];
            self.data[d0 + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    /// First `m` rows, order preserved.
    pub fn prefix(&self, m: usize) -> Result<BitMatrix> {
        if m > self.rows {
            return Err(Error::OutOfRange {
                what: "prefix row count",
                value: m,
                limit: self.rows,
            });
        }
        Ok(Self {
            rows: m,
            cols: self.cols,
            stride: self.stride,
            data: self.data[..m * self.stride].to_vec(),
        })
    }

    pub fn matvec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut y = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                y.set(r, true);
            }
        }
        Ok(y)
    }

    /// Forward elimination in place. Returns the pivot columns; rows past
    /// `pivots.len()` are zero afterwards. When `rhs` is given, the same row
    /// operations are applied to it. With `reduce`, entries above each pivot
    /// are cleared too (reduced row echelon form).
    fn eliminate(&mut self, mut rhs: Option<&mut BitVector>, reduce: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            if let Some(y) = rhs.as_deref_mut() {
                let (a, b) = (y.get(r), y.get(p));
                y.set(r, b);
                y.set(p, a);
            }
            let word = c / WORD_BITS;
            let start = if reduce { 0 } else { r + 1 };
            for i in start..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r, word);
                    if let Some(y) = rhs.as_deref_mut() {
                        if y.get(r) {
                            y.flip(i);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(None, false).len()
    }

    /// Row echelon form by Gaussian elimination with row swaps. Zero rows
    /// end up at the bottom; the row count is unchanged.
    pub fn row_echelon(&self) -> BitMatrix {
        let mut m = self.clone();
        m.eliminate(None, false);
        m
    }

    pub fn reduced_row_echelon(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(None, true);
        (m, pivots)
    }

    /// Echelonizes, drops zero rows, then walks the rows from the second
    /// down: each row's leading one is propagated upward by adding the row to
    /// every earlier row that has a zero in that column.
    ///
    /// The result has `rank` rows, the same null space, and a column of ones
    /// above every leading one.
    pub fn backfill_optimize(&self) -> BitMatrix {
        let mut m = self.clone();
        let rank = m.eliminate(None, false).len();
        m.rows = rank;
        m.data.truncate(rank * m.stride);
        for r in 1..rank {
            let c = m.leading_one(r).expect("echelon rows are nonzero");
            let word = c / WORD_BITS;
            for above in 0..r {
                if !m.get(above, c) {
                    m.xor_rows(above, r, word);
                }
            }
        }
        m
    }

    /// Leading-one columns of an echelon matrix, or a structure error when
    /// a row is zero or the leading ones do not move strictly right.
    pub fn echelon_pivots(&self) -> Result<Vec<usize>> {
        let mut pivots = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let c = self
                .leading_one(r)
                .ok_or_else(|| Error::Structure(format!("row {r} is zero")))?;
            if let Some(&prev) = pivots.last() {
                if c <= prev {
                    return Err(Error::Structure(format!(
                        "leading one of row {r} at column {c} is not right of column {prev}"
                    )));
                }
            }
            pivots.push(c);
        }
        Ok(pivots)
    }

    /// Basis of `{x : m x = 0}` in reduced form: sorted by leading bit, with
    /// each leading bit absent from every other basis vector.
    pub fn null_space_basis(&self) -> Vec<BitVector> {
        let (rref, pivots) = self.reduced_row_echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let raw: Vec<BitVector> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (k, &p) in pivots.iter().enumerate() {
                    if rref.get(k, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        if raw.is_empty() {
            return raw;
        }
        let (basis, _) = BitMatrix::from_bit_rows(self.cols, &raw).reduced_row_echelon();
        (0..raw.len()).map(|r| basis.row(r)).collect()
    }

    /// Some `x` with `m x = y`, or [`Error::Unsat`].
    pub fn solve_particular(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: y.len(),
            });
        }
        let mut m = self.clone();
        let mut rhs = y.clone();
        let pivots = m.eliminate(Some(&mut rhs), true);
        if (pivots.len()..self.rows).any(|r| rhs.get(r)) {
            return Err(Error::Unsat);
        }
        let mut x = BitVector::zeros(self.cols);
        for (k, &p) in pivots.iter().enumerate() {
            if rhs.get(k) {
                x.set(p, true);
            }
        }
        Ok(x)
    }

    /// The solution of `m x = y` with the smallest integer reading
    /// (bit 0 most significant).
    pub fn min_integer_solution(&self, y: &BitVector) -> Result<BitVector> {
        let mut x = self.solve_particular(y)?;
        for b in self.null_space_basis() {
            let lead = b.leading_one().expect("basis vectors are nonzero");
            if x.get(lead) {
                x.xor_assign(&b);
            }
        }
        Ok(x)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BitMatrix {
    /// `R L` header followed by one `0`/`1` line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  {}", self.row(r))?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix_lines(s.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}

/// Parses the matrix text format from numbered lines, skipping blank lines
/// and `#` comments.
pub(crate) fn parse_matrix_lines<'a, I>(lines: I) -> Result<BitMatrix>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut lines = lines
        .map(|(n, l)| (n, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::parse(hline, format!("bad header: {e}")))?;
    let [rows, cols] = dims[..] else {
        return Err(Error::parse(hline, "header must be `R L`"));
    };
    if cols == 0 {
        return Err(Error::parse(hline, "column count must be positive"));
    }
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        let (n, line) = lines
            .next()
            .ok_or_else(|| Error::parse(hline + r + 1, format!("expected {rows} rows")))?;
        if line.len() != cols {
            return Err(Error::parse(n, format!("expected {cols} columns, got {}", line.len())));
        }
        for (c, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => m.set(r, c, true),
                other => return Err(Error::parse(n, format!("unexpected character {other:?}"))),
            }
        }
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(n, "trailing content after matrix rows"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn worked() -> BitMatrix {
        BitMatrix::from_rows(
            6,
            &[
                [1, 0, 1, 0, 0, 1],
                [0, 1, 0, 1, 0, 1],
                [0, 1, 1, 1, 0, 0],
                [0, 1, 1, 0, 1, 0],
                [1, 1, 0, 0, 0, 1],
            ],
        )
    }

    fn worked_backfilled() -> BitMatrix {
        BitMatrix::from_rows(
            6,
            &[
                [1, 1, 1, 1, 1, 0],
                [0, 1, 1, 1, 1, 0],
                [0, 0, 1, 1, 1, 1],
                [0, 0, 0, 1, 1, 0],
                [0, 0, 0, 0, 1, 0],
            ],
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(worked().rank(), 5);
        assert_eq!(BitMatrix::zeros(4, 6).rank(), 0);
        assert_eq!(BitMatrix::identity(9).rank(), 9);
    }

    #[test]
    fn echelon_examples() {
        assert_eq!(BitMatrix::identity(5).row_echelon(), BitMatrix::identity(5));
        let single = BitMatrix::from_rows(4, &[[0, 1, 1, 0]]);
        assert_eq!(single.row_echelon(), single);
        let e = worked().row_echelon();
        assert_eq!(e.echelon_pivots().unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn backfill_worked_example_is_bit_exact() {
        assert_eq!(worked().backfill_optimize(), worked_backfilled());
    }

    #[test]
    fn backfill_identity_fills_upper_triangle() {
        let expected = BitMatrix::from_rows(3, &[[1, 1, 1], [0, 1, 1], [0, 0, 1]]);
        assert_eq!(BitMatrix::identity(3).backfill_optimize(), expected);
        let single = BitMatrix::from_rows(4, &[[0, 1, 1, 0]]);
        assert_eq!(single.backfill_optimize(), single);
    }

    #[test]
    fn backfill_drops_zero_rows() {
        let m = BitMatrix::from_rows(3, &[[1, 1, 0], [1, 1, 0], [0, 0, 0]]);
        let b = m.backfill_optimize();
        assert_eq!(b.rows(), 1);
        assert_eq!(b.row(0).to_bit_string(), "110");
    }

    #[test]
    fn null_space_examples() {
        let basis = worked().null_space_basis();
        assert_eq!(basis.len(), 1);
        assert!(worked().matvec(&basis[0]).unwrap().is_zero());
        assert_eq!(BitMatrix::zeros(0, 6).null_space_basis().len(), 6);
        assert!(BitMatrix::identity(4).null_space_basis().is_empty());
    }

    #[test]
    fn solve_examples() {
        let id = BitMatrix::identity(5);
        let y: BitVector = "10110".parse().unwrap();
        assert_eq!(id.solve_particular(&y).unwrap(), y);
        assert!(worked().solve_particular(&BitVector::zeros(5)).unwrap().is_zero());
        let m = BitMatrix::from_rows(2, &[[1, 1]]);
        let x = m.solve_particular(&"1".parse().unwrap()).unwrap();
        assert!(x == "10".parse().unwrap() || x == "01".parse().unwrap());
        assert_eq!(
            m.min_integer_solution(&"1".parse().unwrap()).unwrap().to_bit_string(),
            "01"
        );
    }

    #[test]
    fn unsat_detected() {
        let m = BitMatrix::from_rows(2, &[[1, 1], [1, 1]]);
        assert!(matches!(
            m.solve_particular(&"10".parse().unwrap()),
            Err(Error::Unsat)
        ));
        assert!(matches!(
            m.solve_particular(&"1".parse().unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matvec_examples() {
        let row = BitMatrix::from_rows(6, &[[1, 0, 1, 0, 0, 1]]);
        let x: BitVector = "101000".parse().unwrap();
        assert!(!row.matvec(&x).unwrap().get(0));
        assert!(worked().matvec(&BitVector::zeros(6)).unwrap().is_zero());
        assert_eq!(BitMatrix::identity(6).matvec(&x).unwrap(), x);
        assert!(row.matvec(&BitVector::zeros(5)).is_err());
    }

    #[test]
    fn non_echelon_rejected() {
        assert!(worked().echelon_pivots().is_err());
        assert!(BitMatrix::from_rows(2, &[[0, 0]]).echelon_pivots().is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let text = worked().to_text();
        assert!(text.starts_with("5 6\n101001\n"));
        assert_eq!(text.parse::<BitMatrix>().unwrap(), worked());
        assert!("2 3\n101\n".parse::<BitMatrix>().is_err());
        assert!("1 3\n1012\n".parse::<BitMatrix>().is_err());
        let empty: BitMatrix = "0 4\n".parse().unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 4));
    }

    #[test]
    fn prefix_out_of_range() {
        assert!(worked().prefix(6).is_err());
        assert_eq!(worked().prefix(0).unwrap().rows(), 0);
        assert_eq!(worked().prefix(5).unwrap(), worked());
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 65, true);
        m.set(1, 129, true);
        m.set(2, 0, true);
        m.set(2, 65, true);
        assert_eq!(m.rank(), 2);
        let basis = m.null_space_basis();
        assert_eq!(basis.len(), 128);
        for b in &basis {
            assert!(m.matvec(b).unwrap().is_zero());
        }
    }
}

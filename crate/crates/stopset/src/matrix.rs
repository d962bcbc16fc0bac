//! Dense bit matrices over GF(2), stored row-major in 64-bit words.
//!
//! This is the substrate for everything else in the crate: parity-check
//! matrices are parsed from text (one row per line, characters `0`/`1`),
//! constructed for Hamming codes, sliced into submatrices, and queried for
//! rank.  Matrices here are small in rows and possibly wide in columns, so
//! rows are bit-packed and all row-level operations work on whole words.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest accepted Hamming parameter `m`; the matrix has `2^m - 1` columns.
pub const MAX_HAMMING_M: u32 = 31;

/// A dense binary matrix, bit-packed row-major into `u64` words.
///
/// Rows and columns are indexed 0-based by the accessors; the index *sets*
/// taken by [`BitMatrix::submatrix`] are 1-based, matching the convention
/// used for stopping sets and erasure patterns throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix of the given shape.  Zero-sized shapes are allowed;
    /// they arise from submatrix extraction with empty index sets.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0u64; rows * words_per_row],
        }
    }

    /// Parses a matrix from text: one row per line, entries `0`/`1`.
    ///
    /// Whitespace is insignificant and may appear anywhere within a line;
    /// lines that are empty after discarding whitespace are skipped.  All
    /// remaining lines must have the same number of entries, and at least
    /// one row must be present.
    pub fn parse(text: &str) -> Result<Self> {
        let mut row_bits: Vec<Vec<bool>> = Vec::new();
        let mut first_row_line = 0usize;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let mut entries = Vec::new();
            for ch in line.chars() {
                match ch {
                    '0' => entries.push(false),
                    '1' => entries.push(true),
                    c if c.is_whitespace() => {}
                    c => {
                        return Err(Error::format(
                            lineno,
                            format!("invalid character {c:?}; expected '0', '1', or whitespace"),
                        ));
                    }
                }
            }
            if entries.is_empty() {
                continue;
            }
            if let Some(first) = row_bits.first() {
                if entries.len() != first.len() {
                    return Err(Error::format(
                        lineno,
                        format!(
                            "row has {} entries but line {} has {}",
                            entries.len(),
                            first_row_line,
                            first.len()
                        ),
                    ));
                }
            } else {
                first_row_line = lineno;
            }
            row_bits.push(entries);
        }
        if row_bits.is_empty() {
            return Err(Error::format(1, "no matrix rows found"));
        }
        let rows = row_bits.len();
        let cols = row_bits[0].len();
        let mut m = BitMatrix::zeros(rows, cols);
        for (i, row) in row_bits.iter().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                if bit {
                    m.set_bit(i, j);
                }
            }
        }
        Ok(m)
    }

    /// Parity-check matrix of the binary Hamming code with parameter `m`:
    /// `m` rows and `n = 2^m - 1` columns, where column `j` (1-based) is the
    /// binary expansion of `j` and row `i` (1-based) carries the bit of
    /// weight `2^(i-1)`.  Requires `2 <= m <= 31`.
    pub fn hamming(m: u32) -> Result<Self> {
        if !(2..=MAX_HAMMING_M).contains(&m) {
            return Err(Error::domain(format!(
                "Hamming parameter m must satisfy 2 <= m <= {MAX_HAMMING_M}, got {m}"
            )));
        }
        let n = (1usize << m) - 1;
        let mut h = BitMatrix::zeros(m as usize, n);
        for j in 1..=n {
            for i in 0..m as usize {
                if (j >> i) & 1 == 1 {
                    h.set_bit(i, j - 1);
                }
            }
        }
        Ok(h)
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(row, col)`.
    pub fn bit(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.rows && col < self.cols);
        (self.bits[row * self.words_per_row + col / 64] >> (col % 64)) & 1 == 1
    }

    fn set_bit(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1u64 << (col % 64);
    }

    /// The packed words of one row; bit `c % 64` of word `c / 64` is the
    /// entry in column `c` (0-based).  Bits at positions `>= cols` are zero.
    pub fn row_words(&self, row: usize) -> &[u64] {
        debug_assert!(row < self.rows);
        &self.bits[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    /// One row as a single `u32` mask; only valid when `cols <= 32`.
    /// Used by the subset-enumeration paths, which cap `n` accordingly.
    pub fn row_mask32(&self, row: usize) -> u32 {
        debug_assert!(self.cols <= 32);
        if self.words_per_row == 0 {
            0
        } else {
            self.row_words(row)[0] as u32
        }
    }

    /// Number of ones in the given row.
    pub fn row_weight(&self, row: usize) -> usize {
        self.row_words(row)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Rank over GF(2), computed by elimination on bit-packed rows.
    pub fn rank(&self) -> usize {
        // (leading column, reduced row) pairs accumulated so far.
        let mut pivots: Vec<(usize, Vec<u64>)> = Vec::new();
        for i in 0..self.rows {
            let mut row = self.row_words(i).to_vec();
            for (lead, prow) in &pivots {
                if (row[lead / 64] >> (lead % 64)) & 1 == 1 {
                    for (w, p) in row.iter_mut().zip(prow) {
                        *w ^= p;
                    }
                }
            }
            if let Some(widx) = row.iter().position(|&w| w != 0) {
                let lead = widx * 64 + row[widx].trailing_zeros() as usize;
                pivots.push((lead, row));
            }
        }
        pivots.len()
    }

    /// Submatrix with columns restricted to the 1-based set `col_set` and
    /// rows to the 1-based set `row_set`.  The sets may be given in any
    /// order and may contain duplicates; the result uses each index once,
    /// in ascending order.  Either set may be empty.
    pub fn submatrix(&self, col_set: &[usize], row_set: &[usize]) -> Result<Self> {
        let cols = normalize_index_set(col_set, self.cols, "column")?;
        let rows = normalize_index_set(row_set, self.rows, "row")?;
        let mut sub = BitMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                if self.bit(r - 1, c - 1) {
                    sub.set_bit(a, b);
                }
            }
        }
        Ok(sub)
    }

    /// Text form: one row per line, entries `0`/`1`, no trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            if i > 0 {
                out.push('\n');
            }
            for j in 0..self.cols {
                out.push(if self.bit(i, j) { '1' } else { '0' });
            }
        }
        out
    }
}

/// Validates a 1-based index set against `limit`, returning it sorted with
/// duplicates removed.
pub(crate) fn normalize_index_set(set: &[usize], limit: usize, what: &str) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(set.len());
    for &idx in set {
        if idx == 0 || idx > limit {
            return Err(Error::domain(format!(
                "{what} index {idx} out of range 1..={limit}"
            )));
        }
        out.push(idx);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitMatrix::parse(s)
    }
}

/// The 3 x 7 running example used throughout the crate's tests: a
/// full-rank parity-check matrix of the [7,4] Hamming code with columns in
/// a non-systematic order.
#[cfg(test)]
pub(crate) const EXAMPLE_3X7: &str = "1010101\n1100110\n1111000";
